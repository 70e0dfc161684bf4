#pragma once

#include <Eigen/Core>
#include <cmath>
#include <memory>
#include <optional>
#include <utility>

#include "wavestab/model.hpp"

namespace wavestab {

// Phase-portrait parameters, ordered (mu_x, c_x, omega_phi, mu_phi)
// everywhere a 4-vector or derivative index appears.
struct WaveParams {
  double mu_x = 0.0;
  double c_x = 0.0;
  double omega_phi = 0.0;
  double mu_phi = 0.0;

  double operator[](int i) const {
    switch (i) {
      case 0: return mu_x;
      case 1: return c_x;
      case 2: return omega_phi;
      default: return mu_phi;
    }
  }
  double& operator[](int i) {
    switch (i) {
      case 0: return mu_x;
      case 1: return c_x;
      case 2: return omega_phi;
      default: return mu_phi;
    }
  }
};

// Sampled periodic wave over one period [0, X_x].  The grid is uniform in
// the desingularizing angle u (rho = rho_min + (rho_max - rho_min) sin^2 u,
// u in [0, pi]), hence nonuniform in x; rho(0) = rho_min by convention.
struct WaveProfile {
  WaveParams params;
  Eigen::VectorXd x_grid;
  Eigen::VectorXd rho;
  Eigen::VectorXd v;
  Eigen::VectorXd theta;
  Eigen::Matrix2Xd V;
  double X_x = 0.0;
  double xi_phi = 0.0;
  double k_x = 0.0;
  double k_phi = 0.0;
  double omega_x = 0.0;
  double rho_min = 0.0;
  double rho_max = 0.0;
};

// Per-period averages and the rescaled-profile integrals.
struct Averages {
  double m_bar = 0.0;
  double q_bar = 0.0;
  double sigma1 = 0.0, sigma2 = 0.0, sigma3 = 0.0;
  double tau0 = 0.0, tau1 = 0.0, tau2 = 0.0, tau3 = 0.0;
};

// Phase derivative v = nu(rho) = (mu_phi - c_x rho) / (2 rho kappa(2 rho)).
double nu(const ModelSpec& model, double rho, double c_x, double mu_phi);

// d^order/drho^order of the effective potential
//   -W(2 rho) + omega_phi rho + (mu_phi - c_x rho)^2 / (4 rho kappa(2 rho)),
// differentiated exactly through the rational composition.
double effective_potential(const ModelSpec& model, double rho,
                           const WaveParams& params, int order = 0);

// Bracketing simple roots (rho_min, rho_max) of mu_x - effective potential;
// optional seed interval selects the branch when several wells coexist.
std::pair<double, double> turning_points(
    const ModelSpec& model, const WaveParams& params,
    std::optional<std::pair<double, double>> seed = std::nullopt);

// Nearest cancellation point of mu_x - effective potential outside the well
// (the pinching root of the large-period regime).
double rho_dual(const ModelSpec& model, const WaveParams& params,
                std::optional<std::pair<double, double>> seed = std::nullopt);

WaveProfile solve_profile(
    const ModelSpec& model, const WaveParams& params, int n_points = 256,
    std::optional<std::pair<double, double>> seed = std::nullopt);

Averages wave_averages(const ModelSpec& model, const WaveProfile& profile);

// Pointwise wave data for ODE integrators; all entries are closed-form in
// (rho, rho_x, theta), no interpolation of sampled arrays.
struct ProfilePoint {
  Eigen::Vector2d V;
  Eigen::Vector2d Vx;
  Eigen::Vector2d Vxx;
  double rho = 0.0;
  double rho_x = 0.0;
  double v = 0.0;
  double theta = 0.0;
};

class ProfileEvaluator {
 public:
  ProfileEvaluator(const ModelSpec& model, const WaveParams& params,
                   std::optional<std::pair<double, double>> seed = std::nullopt);
  ~ProfileEvaluator();
  ProfileEvaluator(ProfileEvaluator&&) noexcept;
  ProfileEvaluator& operator=(ProfileEvaluator&&) noexcept;

  // Valid for every real x; outside [0, X_x) the profile continues by
  // V(x + k X_x) = e^{k xi_phi J} V(x).
  ProfilePoint at(double x) const;

  double period() const;
  double xi_phi() const;
  double rho_min() const;
  double rho_max() const;
  const WaveParams& params() const;
  const ModelSpec& model() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Closed-form rotation e^{theta J} with J = [[0, 1], [-1, 0]].
inline Eigen::Matrix2d rotJ(double theta) {
  Eigen::Matrix2d r;
  const double c = std::cos(theta), s = std::sin(theta);
  r << c, s, -s, c;
  return r;
}

inline Eigen::Matrix2d Jmat() {
  Eigen::Matrix2d j;
  j << 0.0, 1.0, -1.0, 0.0;
  return j;
}

}  // namespace wavestab
