#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>

#include "wavestab/model.hpp"
#include "wavestab/profile.hpp"

namespace wavestab {

// Abbreviated action of the profile flow and the derived objects. The
// parameter order of every 4-vector and matrix axis is
// (mu_x, c_x, omega_phi, mu_phi).
struct ActionData {
  double theta = 0.0;                         // action value
  Eigen::Vector4d grad;                       // exact-quadrature gradient
  Eigen::Matrix4d hess;                       // symmetrized FD Hessian
  double fd_step = 0.0;                       // largest absolute step used
  Eigen::Matrix4d est_error;                  // max(Richardson, asymmetry)
};

struct HessianOptions {
  double fd_step = 1e-4;  // relative step, scaled by max(1, |param|)
  // per-component absolute step overrides; entries <= 0 use fd_step.
  // Overridden components are never shrunk adaptively.
  Eigen::Vector4d component_steps = Eigen::Vector4d::Zero();
  // selects the well branch when several coexist; stencil points inherit it
  std::optional<std::pair<double, double>> seed;
};

// Theta = 2 int sqrt(mu_x - W_rho) sqrt(kappa(2 rho)/rho) drho over the
// well, by trapezoid under the rho = a + (b-a) sin^2(u) substitution
// (spectrally convergent; endpoint square roots become smooth).
double action_value(const ModelSpec& model, const WaveParams& params,
                    std::optional<std::pair<double, double>> seed = {});

// Each component by the same substitution with the exact parameter
// derivative of the effective potential under the integral sign.
Eigen::Vector4d action_gradient(const ModelSpec& model,
                                const WaveParams& params,
                                std::optional<std::pair<double, double>> seed = {});

// Central differences of action_gradient at steps h and h/2, Richardson
// extrapolated, then symmetrized. est_error holds the entrywise maximum
// of the Richardson estimate and the pre-symmetrization asymmetry; any
// entry above 1% of the entry scale raises NoiseFloor. Steps shrink
// automatically when a stencil point leaves the existence region;
// BoundaryTooClose when no workable step remains.
ActionData action_hessian(const ModelSpec& model, const WaveParams& params,
                          const HessianOptions& options = {});

// Wavenumber/average coordinates (k_x, k_phi, q_bar, m_bar) read off
// grad Theta, with their Jacobian with respect to the parameters
// assembled from Hess Theta. Jacobian rows follow the output order.
struct ModulationCoordinates {
  double k_x = 0.0;
  double k_phi = 0.0;
  double q_bar = 0.0;
  double m_bar = 0.0;
  Eigen::Matrix4d jacobian;
};

ModulationCoordinates modulation_coordinates(const ModelSpec& model,
                                             const WaveParams& params);
ModulationCoordinates modulation_coordinates(const ModelSpec& model,
                                             const WaveParams& params,
                                             const ActionData& data);

}  // namespace wavestab
