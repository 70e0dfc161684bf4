#pragma once

#include <limits>
#include <optional>
#include <string>
#include <utility>

#include "wavestab/model.hpp"
#include "wavestab/profile.hpp"

namespace wavestab {

// Zero-amplitude (harmonic) limit of the wavetrain family through a constant
// mass rho0 with phase wavenumber k_phi0, moving at speed c_x. The remaining
// parameters are pinned by the stationarity of the effective potential at
// rho0, which yields closed-form expressions for (mu_phi0, omega_phi0,
// mu_x0) and for the limiting period X0. The three indices attached to the
// point decide the small-amplitude verdicts:
//   delta_hyp  hyperbolicity discriminant of the endstate (constant state is
//              exponentially unstable when negative),
//   delta_BF   side-band index (Benjamin-Feir style; negative means the
//              small-amplitude waves are side-band unstable),
//   a0         curvature coefficient of the action along the family
//              (controls the co-periodic count near the limit).
struct HarmonicPoint {
  double c_x = 0.0;
  double rho0 = 0.0;
  double k_phi0 = 0.0;
  double omega_phi0 = 0.0;
  double mu_phi0 = 0.0;
  double mu_x0 = 0.0;
  double X0 = 0.0;
  double delta_hyp = 0.0;
  double delta_BF = 0.0;
  double a0 = 0.0;
};

// Fills every field from the explicit formulas. Requires the effective
// potential to have a strict minimum at rho0 once (omega_phi0, mu_phi0) are
// substituted; throws NotAMinimumError (carrying the offending second
// derivative) on the saddle side, where the same parameters instead bound a
// large-period family.
HarmonicPoint harmonic_point(const ModelSpec& model, double c_x, double rho0,
                             double k_phi0);

// Side-band index alone; same preconditions as harmonic_point. Needs W up to
// the 4th and kappa up to the 2nd derivative.
double delta_BF(const ModelSpec& model, double c_x, double rho0,
                double k_phi0);

// Solitary (infinite-period) wave with endstate mass rho_endstate and phase
// wavenumber k_phi at the endstate, moving at speed c_x. rho_s is the simple
// root of mu_x0 - W_rho closest to the endstate with a positive well in
// between; theta_s the excess action over the endstate. d2_theta_s is left
// NaN by solitary_action and filled by callers that also run vk_index.
struct SolitaryData {
  double c_x = 0.0;
  double rho_endstate = 0.0;
  double k_phi = 0.0;
  double rho_s = 0.0;
  double theta_s = 0.0;
  double d2_theta_s = std::numeric_limits<double>::quiet_NaN();
};

// Locates rho_s (bracketing to the right of the endstate first, then to the
// left) and evaluates theta_s by Gauss-Legendre quadrature under a
// substitution that removes both the double root at the endstate and the
// square-root turning point at rho_s. Throws NoSolitaryWave when the
// endstate is not a saddle of the effective potential or no admissible
// extremum mass exists.
SolitaryData solitary_action(const ModelSpec& model, double c_x,
                             double rho_endstate, double k_phi);

// Second derivative of theta_s in the speed at fixed (rho_endstate, k_phi),
// by Richardson-extrapolated central differences; (omega_phi0, mu_phi0) are
// re-solved at every probed speed. Negative values flag co-periodic
// instability of nearby large-period waves; any nonzero value flags
// transverse instability.
double vk_index(const ModelSpec& model, double c_x, double rho_endstate,
                double k_phi, double step = 0.02);

// Spectral verdict for the constant state of mass rho0 under an isotropic
// dispersion matrix: exponentially unstable exactly when rho0 > 0 and
// delta_hyp < 0; the zero state is always stable.
struct ConstantStateReport {
  double rho0 = 0.0;
  double delta_hyp = 0.0;
  bool stable = true;
  std::string verdict() const { return stable ? "STABLE" : "UNSTABLE"; }
};

ConstantStateReport constant_state_check(const ModelSpec& model, double rho0,
                                         double k_phi_norm = 0.0);

// Parameters of the infinite-period boundary through (c_x, rho_endstate,
// k_phi): mu_x equals the saddle value of the effective potential, so
// lowering mu_x slightly produces the adjacent large-period waves.
WaveParams saddle_params(const ModelSpec& model, double c_x,
                         double rho_endstate, double k_phi);

// Distance of a periodic wave from the infinite-period boundary: the gap
// between the near-double pair formed by one turning point and the dual
// root, normalised by the well width. Orientation-aware (the dual root may
// sit on either side of the well). The seed selects the well branch when
// several coexist.
double large_period_epsilon(
    const ModelSpec& model, const WaveParams& params,
    std::optional<std::pair<double, double>> seed = std::nullopt);

// Inverts large_period_epsilon along the mu_x ray below the boundary
// parameters: returns mu_x with epsilon(mu_x) = target to a relative
// tolerance, exploiting the square-root leading order of epsilon in
// (boundary.mu_x - mu_x).
double mu_x_for_epsilon(
    const ModelSpec& model, const WaveParams& boundary, double target,
    double tol = 1e-8,
    std::optional<std::pair<double, double>> seed = std::nullopt);

}  // namespace wavestab
