#include "wavestab/madelung.hpp"

#include <cmath>
#include <complex>
#include <vector>

#include "wavestab/errors.hpp"

namespace wavestab {

namespace {

// Degree-(m-1) polynomial fit through m grid nodes around a cell, in a
// centered and scaled local coordinate. Used for interpolatory
// integration and differentiation on nonuniform grids.
struct LocalFit {
  Eigen::VectorXd coeff;  // coeff[k] multiplies t^k
  double center, scale;

  double integral(double x0, double x1) const {
    double t0 = (x0 - center) / scale, t1 = (x1 - center) / scale;
    double acc = 0, p0 = t0, p1 = t1;
    for (int k = 0; k < coeff.size(); ++k) {
      acc += coeff[k] * (p1 - p0) / (k + 1);
      p0 *= t0;
      p1 *= t1;
    }
    return acc * scale;
  }

  double derivative(double x) const {
    double t = (x - center) / scale;
    double acc = 0, p = 1;
    for (int k = 1; k < coeff.size(); ++k) {
      acc += k * coeff[k] * p;
      p *= t;
    }
    return acc / scale;
  }
};

LocalFit fit_stencil(const Eigen::VectorXd& x, const Eigen::VectorXd& f,
                     int j0, int m) {
  LocalFit out;
  out.center = x[j0 + m / 2];
  out.scale = std::max(x[j0 + m - 1] - x[j0], 1e-300);
  Eigen::MatrixXd V(m, m);
  Eigen::VectorXd rhs(m);
  for (int r = 0; r < m; ++r) {
    double t = (x[j0 + r] - out.center) / out.scale;
    double p = 1;
    for (int c = 0; c < m; ++c) {
      V(r, c) = p;
      p *= t;
    }
    rhs[r] = f[j0 + r];
  }
  out.coeff = V.fullPivLu().solve(rhs);
  return out;
}

// df/du at the nodes u_j = j pi / M of a pi-periodic sampled function,
// by direct Fourier series. O(M^2), exact for band-limited data.
Eigen::VectorXd spectral_derivative_pi(const Eigen::VectorXd& f) {
  const int M = static_cast<int>(f.size());
  std::vector<std::complex<double>> hat(M);
  const std::complex<double> I(0.0, 1.0);
  for (int k = 0; k < M; ++k) {
    std::complex<double> acc = 0;
    for (int j = 0; j < M; ++j)
      acc += f[j] * std::exp(-2.0 * M_PI * I * double(j * k) / double(M));
    hat[k] = acc / double(M);
  }
  Eigen::VectorXd df(M);
  for (int j = 0; j < M; ++j) {
    std::complex<double> acc = 0;
    for (int k = 0; k < M; ++k) {
      int kk = (k <= M / 2) ? k : k - M;  // signed wavenumber index
      if (2 * k == M) continue;           // Nyquist mode has zero slope here
      // period pi means the mode kk carries spatial frequency 2 kk
      acc += 2.0 * I * double(kk) * hat[k] *
             std::exp(2.0 * M_PI * I * double(j * k) / double(M));
    }
    df[j] = acc.real();
  }
  return df;
}

}  // namespace

HydroState to_hydro(const VectorField& field, double floor) {
  const int n = static_cast<int>(field.x_grid.size());
  if (field.U.cols() != n || field.Ux.cols() != n)
    fail(ErrorCode::ConfigError, "field arrays and grid sizes disagree");
  HydroState out;
  out.x_grid = field.x_grid;
  out.rho.resize(n);
  out.v.resize(n);
  for (int i = 0; i < n; ++i) {
    Eigen::Vector2d u = field.U.col(i);
    double nsq = u.squaredNorm();
    if (nsq < floor)
      fail(ErrorCode::VanishingModulus,
           "||U||^2 below floor at grid index " + std::to_string(i));
    out.rho[i] = 0.5 * nsq;
    out.v[i] = (Jmat() * u).dot(field.Ux.col(i)) / nsq;
  }
  return out;
}

VectorField from_hydro(const HydroState& state, double theta0) {
  const int n = static_cast<int>(state.x_grid.size());
  if (state.rho.size() != n || state.v.size() != n || n < 2)
    fail(ErrorCode::ConfigError, "hydro state arrays and grid disagree");
  const int m = std::min(5, n);

  // theta by cumulative interpolatory integration of v
  Eigen::VectorXd theta(n);
  theta[0] = theta0;
  for (int i = 0; i + 1 < n; ++i) {
    int j0 = std::clamp(i - m / 2 + 1, 0, n - m);
    LocalFit fit = fit_stencil(state.x_grid, state.v, j0, m);
    theta[i + 1] = theta[i] + fit.integral(state.x_grid[i], state.x_grid[i + 1]);
  }

  // radial amplitude and its interpolatory derivative
  Eigen::VectorXd amp(n), damp(n);
  for (int i = 0; i < n; ++i) amp[i] = std::sqrt(2.0 * state.rho[i]);
  for (int i = 0; i < n; ++i) {
    int j0 = std::clamp(i - m / 2, 0, n - m);
    LocalFit fit = fit_stencil(state.x_grid, amp, j0, m);
    damp[i] = fit.derivative(state.x_grid[i]);
  }

  VectorField out;
  out.x_grid = state.x_grid;
  out.U.resize(2, n);
  out.Ux.resize(2, n);
  for (int i = 0; i < n; ++i) {
    Eigen::Vector2d e = rotJ(theta[i]).col(0);
    out.U.col(i) = amp[i] * e;
    out.Ux.col(i) = damp[i] * e + state.v[i] * amp[i] * (Jmat() * e);
  }
  return out;
}

double hydro_hamiltonian(const ModelSpec& model, double rho, double rho_x,
                         double v) {
  if (!(rho > 0.0))
    fail(ErrorCode::NonpositiveRho, "hydro hamiltonian requires rho > 0");
  double k = poly_eval(model.kappa, 2.0 * rho);
  return k * rho * v * v + k * rho_x * rho_x / (4.0 * rho) +
         poly_eval(model.W, 2.0 * rho);
}

double FirstIntegralResiduals::max_abs() const {
  return std::max(
      std::max(mu_phi_u.cwiseAbs().maxCoeff(), mu_x_u.cwiseAbs().maxCoeff()),
      std::max(mu_phi_hydro.cwiseAbs().maxCoeff(),
               mu_x_hydro.cwiseAbs().maxCoeff()));
}

FirstIntegralResiduals first_integral_residuals(const ModelSpec& model,
                                                const WaveProfile& profile) {
  const int n = static_cast<int>(profile.x_grid.size());
  const int M = n - 1;  // grid is uniform in u over [0, pi], both ends stored
  if (M < 8 || profile.rho.size() != n || profile.v.size() != n ||
      profile.V.cols() != n)
    fail(ErrorCode::ConfigError, "profile arrays and grid sizes disagree");
  const WaveParams& p = profile.params;
  const double X = profile.X_x;

  // x'(u) from the stored grid: subtract the linear ramp, differentiate
  // the periodic remainder spectrally, put the ramp slope back.
  Eigen::VectorXd xper(M);
  for (int j = 0; j < M; ++j)
    xper[j] = profile.x_grid[j] - X / M * j;
  Eigen::VectorXd x_u = spectral_derivative_pi(xper).array() + X / M_PI;

  // detwist V so that it is pi-periodic in u, differentiate per component
  const double slope = profile.xi_phi / M_PI;  // d theta_twist / du
  Eigen::VectorXd w1(M), w2(M), u_nodes(M);
  for (int j = 0; j < M; ++j) {
    u_nodes[j] = M_PI * j / M;
    Eigen::Vector2d w = rotJ(-slope * u_nodes[j]) * profile.V.col(j);
    w1[j] = w[0];
    w2[j] = w[1];
  }
  Eigen::VectorXd dw1 = spectral_derivative_pi(w1);
  Eigen::VectorXd dw2 = spectral_derivative_pi(w2);

  FirstIntegralResiduals out;
  out.mu_phi_u.resize(n);
  out.mu_x_u.resize(n);
  out.mu_phi_hydro.resize(n);
  out.mu_x_hydro.resize(n);

  for (int j = 0; j < M; ++j) {
    Eigen::Vector2d V = profile.V.col(j);
    Eigen::Vector2d Wu(dw1[j], dw2[j]);
    Eigen::Vector2d Vu = slope * (Jmat() * V) + rotJ(slope * u_nodes[j]) * Wu;
    Eigen::Vector2d Vx = Vu / x_u[j];

    double nsq = V.squaredNorm();
    double kap = poly_eval(model.kappa, nsq);
    out.mu_phi_u[j] =
        kap * (Jmat() * V).dot(Vx) + 0.5 * p.c_x * nsq - p.mu_phi;
    out.mu_x_u[j] = 0.5 * kap * Vx.squaredNorm() - poly_eval(model.W, nsq) +
                    0.5 * p.omega_phi * nsq - p.mu_x;

    double rho = profile.rho[j], v = profile.v[j];
    double k2 = poly_eval(model.kappa, 2.0 * rho);
    out.mu_phi_hydro[j] = 2.0 * rho * k2 * v + p.c_x * rho - p.mu_phi;
  }

  // hydro-side mu_x needs rho_x: spectral derivative of the rho array
  Eigen::VectorXd rho_per(M);
  for (int j = 0; j < M; ++j) rho_per[j] = profile.rho[j];
  Eigen::VectorXd drho = spectral_derivative_pi(rho_per);
  for (int j = 0; j < M; ++j) {
    double rho = profile.rho[j], v = profile.v[j];
    double rho_x = drho[j] / x_u[j];
    double k2 = poly_eval(model.kappa, 2.0 * rho);
    out.mu_x_hydro[j] = k2 * rho_x * rho_x / (4.0 * rho) - k2 * rho * v * v -
                        poly_eval(model.W, 2.0 * rho) + p.omega_phi * rho +
                        p.mu_phi * v - p.c_x * rho * v - p.mu_x;
  }

  // endpoint duplicates the start up to an exact rotation
  out.mu_phi_u[M] = out.mu_phi_u[0];
  out.mu_x_u[M] = out.mu_x_u[0];
  {
    double rho = profile.rho[M], v = profile.v[M];
    double k2 = poly_eval(model.kappa, 2.0 * rho);
    out.mu_phi_hydro[M] = 2.0 * rho * k2 * v + p.c_x * rho - p.mu_phi;
    double rho_x = drho[0] / x_u[0];
    out.mu_x_hydro[M] = k2 * rho_x * rho_x / (4.0 * rho) - k2 * rho * v * v -
                        poly_eval(model.W, 2.0 * rho) + p.omega_phi * rho +
                        p.mu_phi * v - p.c_x * rho * v - p.mu_x;
  }
  return out;
}

LinearizedDensities linearized_densities(const ModelSpec& model,
                                         const WaveParams& params,
                                         const ProfilePoint& pt,
                                         const Eigen::Vector2d& psi,
                                         const Eigen::Vector2d& psi_x) {
  const Eigen::Vector2d& V = pt.V;
  const Eigen::Vector2d& Vx = pt.Vx;
  double nsq = V.squaredNorm();
  double kap = eval(model, Component::kappa, nsq, 0);
  double kap1 = eval(model, Component::kappa, nsq, 1);
  double W1 = eval(model, Component::W, nsq, 1);

  LinearizedDensities out;
  out.mass = V.dot(psi);
  out.momentum = 0.5 * ((Jmat() * psi).dot(Vx) + (Jmat() * V).dot(psi_x));
  out.s_phi_cx = 2.0 * kap1 * V.dot(psi) * (Jmat() * V).dot(Vx) +
                 kap * ((Jmat() * psi).dot(Vx) + (Jmat() * V).dot(psi_x)) +
                 params.c_x * V.dot(psi);
  out.s_x_omega = kap1 * V.dot(psi) * Vx.squaredNorm() + kap * Vx.dot(psi_x) -
                  2.0 * W1 * V.dot(psi) + params.omega_phi * V.dot(psi);
  return out;
}

double noether_residual(const ModelSpec& model, const WaveParams& params,
                        int n_samples) {
  ProfileEvaluator ev(model, params);
  const double X = ev.period();
  double worst = 0.0;
  for (int mode = 0; mode < 2; ++mode) {
    double lo1 = 0, hi1 = 0, lo2 = 0, hi2 = 0;
    for (int i = 0; i < n_samples; ++i) {
      ProfilePoint pt = ev.at(X * i / n_samples);
      Eigen::Vector2d psi, psi_x;
      if (mode == 0) {
        psi = Jmat() * pt.V;
        psi_x = Jmat() * pt.Vx;
      } else {
        psi = pt.Vx;
        psi_x = pt.Vxx;
      }
      LinearizedDensities d = linearized_densities(model, params, pt, psi, psi_x);
      if (i == 0) {
        lo1 = hi1 = d.s_phi_cx;
        lo2 = hi2 = d.s_x_omega;
      } else {
        lo1 = std::min(lo1, d.s_phi_cx);
        hi1 = std::max(hi1, d.s_phi_cx);
        lo2 = std::min(lo2, d.s_x_omega);
        hi2 = std::max(hi2, d.s_x_omega);
      }
    }
    worst = std::max(worst, std::max(hi1 - lo1, hi2 - lo2));
  }
  return worst;
}

}  // namespace wavestab
