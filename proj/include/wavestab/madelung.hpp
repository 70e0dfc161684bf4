#pragma once

#include <Eigen/Dense>

#include "wavestab/model.hpp"
#include "wavestab/profile.hpp"

namespace wavestab {

// Discrete 2-vector field with its x-derivative on a shared grid.
struct VectorField {
  Eigen::Matrix2Xd U;
  Eigen::Matrix2Xd Ux;
  Eigen::VectorXd x_grid;
};

// Hydrodynamic pair (rho, v) on a grid; rho must stay away from zero.
struct HydroState {
  Eigen::VectorXd rho;
  Eigen::VectorXd v;
  Eigen::VectorXd x_grid;
};

// rho = ||U||^2 / 2, v = (J U . U_x) / (2 rho).
// Throws VanishingModulus if ||U||^2 < floor anywhere.
HydroState to_hydro(const VectorField& field, double floor = 1e-12);

// U = sqrt(2 rho) e^{theta J} e1 with theta(x) = theta0 + int_{x0}^x v,
// integrated with a degree-4 interpolatory rule on the (possibly
// nonuniform) grid. Ux combines the exact angular part v J U with an
// interpolatory radial derivative. to_hydro . from_hydro recovers
// (rho, v) to rounding.
VectorField from_hydro(const HydroState& state, double theta0);

// Pointwise hydrodynamic Hamiltonian density
// H0 = kappa(2 rho) rho v^2 + kappa(2 rho) rho_x^2 / (4 rho) + W(2 rho).
double hydro_hamiltonian(const ModelSpec& model, double rho, double rho_x,
                         double v);

// Pointwise residuals of the two conserved first integrals, evaluated on
// the Schrodinger side (from the stored V array, differentiated
// spectrally in the underlying uniform parameter) and on the
// hydrodynamic side (from the stored rho, v arrays). Clean profiles keep
// every array below ~1e-10; corrupted arrays show up at the size of the
// corruption.
struct FirstIntegralResiduals {
  Eigen::VectorXd mu_phi_u;
  Eigen::VectorXd mu_x_u;
  Eigen::VectorXd mu_phi_hydro;
  Eigen::VectorXd mu_x_hydro;
  double max_abs() const;
};

FirstIntegralResiduals first_integral_residuals(const ModelSpec& model,
                                                const WaveProfile& profile);

// Linearized first-integral densities along a perturbation (psi, psi_x)
// of the wave at a point. s_phi_cx and s_x_omega are the linearizations
// of the densities whose values on the wave are mu_phi and mu_x; along
// kernel perturbations of the linearized flow they are constant in x.
struct LinearizedDensities {
  double mass;       // V . psi
  double momentum;   // (J psi . Vx + J V . psi_x) / 2
  double s_phi_cx;   // L(S_phi + c_x M) psi
  double s_x_omega;  // L(S_x + omega_phi M) psi
};

LinearizedDensities linearized_densities(const ModelSpec& model,
                                         const WaveParams& params,
                                         const ProfilePoint& pt,
                                         const Eigen::Vector2d& psi,
                                         const Eigen::Vector2d& psi_x);

// Max variation over one period of the linearized conserved densities
// along the two kernel perturbations (J V, J Vx) and (Vx, Vxx); zero in
// exact arithmetic.
double noether_residual(const ModelSpec& model, const WaveParams& params,
                        int n_samples = 257);

}  // namespace wavestab
