#pragma once

#include <Eigen/Core>
#include <array>
#include <complex>
#include <map>
#include <vector>

#include "wavestab/profile.hpp"

namespace wavestab {

using Complex = std::complex<double>;

// Verdict vocabulary shared by every criterion. A criterion that can only
// certify instability reports StableCandidate when its necessary condition
// for stability holds.
enum class Verdict { Unstable, StableCandidate, Inconclusive, NotApplicable };
const char* to_string(Verdict v);

// Roots of the dispersion polynomial with real part above this (relative)
// threshold count as growing modes.
inline constexpr double kTransverseRealTol = 1e-7;

// Key (m, n, p) of the monomial lambda^(m-p) z^n zeta^(2p), m + n + p = 4,
// p <= m.
using DeltaKey = std::array<int, 3>;
using DeltaMap = std::map<DeltaKey, double>;

// First-order modulation data: the constant matrices of the averaged
// system, the two equivalent pencil forms, the coefficients of the
// dispersion polynomial Delta0 and the characteristic pencil eigenvalues.
struct ModulationData {
  Eigen::Matrix4d A0;       // diag(I2, -I2)
  Eigen::Matrix4d B0;       // pair swap (1 2)(3 4), det = 1
  Eigen::Matrix4d C0;       // transverse coupling built from sigma1..3
  Eigen::Matrix4d Sigma_t;  // permutation-conjugated A0 * hess
  Eigen::Matrix4d Sigma_y;  // same conjugation applied to C0
  DeltaMap delta;           // the nine surviving coefficients
  std::array<Complex, 4> char_speeds;  // pencil eigenvalues a, sorted

  double delta_at(int m, int n, int p) const;  // 0 when absent
  // Reconstructed Delta0(lambda, z, zeta); at lambda = 0 only the p = m
  // monomials contribute (the division below is exact).
  Complex delta0(Complex lambda, Complex z, Complex zeta) const;
};

// Coefficients of det(lambda T - z E + (zeta^2/lambda) Y) for arbitrary
// real 4x4 matrices. The degree-8 numerator det(lambda^2 T - lambda z E +
// zeta^2 Y) is sampled on the integer grid lambda = 1, z in {-2..2},
// zeta in {0, 1, 2} and the two exact Vandermonde systems are solved; the
// homogeneity pins the lambda exponent of every (z, zeta) monomial. Any
// coefficient below the lambda^4 divisor larger than 1e-9 * max|coeff|
// raises SingularityNotSpurious: the division would not be exact, which
// signals corrupted inputs rather than roundoff.
DeltaMap delta_from_pencil(const Eigen::Matrix4d& T, const Eigen::Matrix4d& E,
                           const Eigen::Matrix4d& Y);

// Builds every field from the action Hessian (parameter order mu_x, c_x,
// omega_phi, mu_phi), the per-period averages (sigma1..3 over the unscaled
// period) and the wavenumber k_x. The Hessian must be symmetric; a singular
// Hessian leaves char_speeds as NaN without failing.
ModulationData assemble(const Eigen::Matrix4d& hess, const Averages& averages,
                        double k_x);

// Eigenvalues a of B0 v = a * k_x * A0 * hess * v, shifted to rest-frame
// characteristic speeds a - c_x. Weak hyperbolicity (all speeds real up to
// 1e-8 relative) is necessary for side-band stability; a non-real speed is
// decisive instability.
struct SidebandReport {
  std::array<Complex, 4> char_speeds{};  // a - c_x, sorted by (Re, Im)
  bool weakly_hyperbolic = false;
  Verdict verdict = Verdict::Inconclusive;
};
SidebandReport characteristic_speeds(const Eigen::Matrix4d& hess, double k_x,
                                     double c_x);

// Orientation index of the co-periodic Evans function: an odd number of
// real unstable eigenvalues exists when det(hess) < 0. Negative signature 2
// together with a nonzero (mu_x, mu_x) entry is the stable-candidate
// configuration.
struct CoperiodicReport {
  double det = 0.0;
  int det_sign = 0;
  int negative_signature = 0;
  Verdict verdict = Verdict::Inconclusive;
};
CoperiodicReport coperiodic_criterion(const Eigen::Matrix4d& hess);

struct TransverseWitness {
  double xi = 0.0;
  double zeta = 0.0;
  Complex lambda{0.0, 0.0};
};

// Necessary conditions at xi = 0: delta(4,0,0) >= 0,
// delta(3,0,1) >= 2 sqrt|delta(4,0,0) delta(2,0,2)|, delta(2,0,2) >= 0.
struct TransverseXi0Report {
  double delta400 = 0.0;
  double delta301 = 0.0;
  double delta202 = 0.0;
  bool inequalities_hold = false;
  Verdict verdict = Verdict::Inconclusive;
};

// Full directional criterion: on the half circle (xi, zeta) =
// (cos t, sin t) the quartic Delta0(., i xi, zeta) must have purely
// imaginary roots. Homogeneity makes the unit circle exhaustive.
struct TransverseFullReport {
  std::vector<TransverseWitness> unstable_directions;
  TransverseWitness worst;  // direction of largest Re lambda, always set
  double max_re = 0.0;
  Verdict verdict = Verdict::Inconclusive;
};

struct TransverseReport {
  TransverseXi0Report xi0;
  TransverseFullReport full;
};

// Roots of the quartic lambda -> Delta0(lambda, i xi, zeta) by companion
// matrix (leading near-zeros trimmed).
std::vector<Complex> direction_roots(const ModulationData& data, double xi,
                                     double zeta);

// Scans `directions` points of the half circle and refines by 4 around
// every stability flag change before reporting witnesses.
TransverseReport transverse_criteria(const ModulationData& data,
                                     int directions = 720);

// Breaking of a multiple root near eta = 0: at a real eigenvalue omega0 of
// Sigma_t^{-1} of algebraic multiplicity r0 >= 2 the quantity
// delta(1,2,1) + delta(2,1,1) omega0 + delta(3,0,1) omega0^2 decides the
// splitting (nonzero for r0 >= 3; negative ratio against the r0-th Taylor
// coefficient for r0 = 2).
struct SplittingEta0Report {
  Verdict verdict = Verdict::NotApplicable;
  double omega0 = 0.0;
  int multiplicity = 1;
  double numerator = 0.0;
  double denominator = 0.0;
};

// Breaking of a multiple root near xi = 0: when delta(3,0,1)^2 =
// 4 delta(4,0,0) delta(2,0,2), a nonzero value of
// delta(2,1,1) delta(4,0,0) - delta(3,1,0) delta(3,0,1) / 2 is decisive.
struct SplittingXi0Report {
  Verdict verdict = Verdict::NotApplicable;
  double discriminant_gap = 0.0;
  double quantity = 0.0;
};

struct SplittingReport {
  SplittingEta0Report eta0;
  SplittingXi0Report xi0;
};

// `hess` backs the nonsingularity precondition (det Sigma_t = det hess);
// eigenvalues within cluster_tol relative are treated as one multiple root.
SplittingReport splitting_criteria(const ModulationData& data,
                                   const Eigen::Matrix4d& hess, double k_x,
                                   double cluster_tol = 1e-6);

// Everything above in one pass over shared data.
struct StabilityReport {
  CoperiodicReport coperiodic;
  SidebandReport sideband;
  TransverseXi0Report transverse_xi0;
  TransverseFullReport transverse_full;
  SplittingReport splitting;
};

StabilityReport stability_report(const ModulationData& data,
                                 const Eigen::Matrix4d& hess, double k_x,
                                 double c_x);
StabilityReport stability_report(const Eigen::Matrix4d& hess,
                                 const Averages& averages, double k_x,
                                 double c_x);

}  // namespace wavestab
