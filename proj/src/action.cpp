#include "wavestab/action.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <vector>

#include "detail.hpp"
#include "wavestab/errors.hpp"

namespace wavestab {

using namespace detail;

namespace {

// Trapezoid over u in [0, pi/2]; the integrands below extend to smooth
// even pi-periodic functions of u, so doubling the node count converges
// spectrally. Doubles until two refinements agree.
template <class F>
double converged_trapezoid(F&& f) {
  double prev = 0.0;
  for (int n = 64; n <= 8192; n *= 2) {
    double h = 0.5 * M_PI / n;
    double acc = 0.5 * (f(0.0) + f(0.5 * M_PI));
    for (int j = 1; j < n; ++j) acc += f(h * j);
    acc *= h;
    if (n > 64 && std::abs(acc - prev) <= 1e-12 * std::max(1.0, std::abs(acc)))
      return acc;
    prev = acc;
  }
  fail(ErrorCode::QuadratureNotConverged, "action quadrature did not settle");
}

Eigen::Vector4d gradient_from_geometry(const Geometry& geo) {
  Eigen::Vector4d out;
  for (int comp = 0; comp < 4; ++comp) {
    out[comp] = 2.0 * converged_trapezoid(
                          [&](double u) {
                            double rho = geo.rho_of_u(u);
                            double nu = geo.nu_of(rho);
                            double df = 0.0;
                            switch (comp) {
                              case 0: df = 1.0; break;          // d/d mu_x
                              case 1: df = rho * nu; break;     // d/d c_x
                              case 2: df = -rho; break;         // d/d omega_phi
                              case 3: df = -nu; break;          // d/d mu_phi
                            }
                            return df * geo.g(u);
                          });
  }
  return out;
}

bool is_boundary_error(const Error& e) {
  switch (e.code()) {
    case ErrorCode::DegenerateWell:
    case ErrorCode::NoWellFound:
    case ErrorCode::ModelRangeExceeded:
      return true;
    default:
      return false;
  }
}

}  // namespace

double action_value(const ModelSpec& model, const WaveParams& params,
                    std::optional<std::pair<double, double>> seed) {
  Geometry geo = make_geometry(model, params, seed);
  double d2 = geo.delta * geo.delta;
  return 4.0 * d2 *
         converged_trapezoid(
             [&](double u) {
               double s = std::sin(u), c = std::cos(u);
               double rho = geo.rho_of_u(u);
               return s * s * c * c *
                      std::sqrt(geo.htilde(rho) * geo.kap(rho) / rho);
             });
}

Eigen::Vector4d action_gradient(const ModelSpec& model,
                                const WaveParams& params,
                                std::optional<std::pair<double, double>> seed) {
  return gradient_from_geometry(make_geometry(model, params, seed));
}

ActionData action_hessian(const ModelSpec& model, const WaveParams& params,
                          const HessianOptions& options) {
  Geometry base = make_geometry(model, params, options.seed);
  // keep all stencil evaluations on the same well branch
  std::pair<double, double> seed{base.a, base.b};

  ActionData out;
  out.theta = action_value(model, params, seed);
  out.grad = gradient_from_geometry(base);

  auto grad_at = [&](int comp, double step) {
    WaveParams p = params;
    p[comp] += step;
    return action_gradient(model, p, seed);
  };

  Eigen::Matrix4d Dh, Dh2;
  double max_step = 0.0;
  for (int comp = 0; comp < 4; ++comp) {
    double scale = std::max(1.0, std::abs(params[comp]));
    bool pinned = options.component_steps[comp] > 0.0;
    double h = pinned ? options.component_steps[comp]
                      : options.fd_step * scale;
    const double h_floor = 1e-8 * scale;
    for (;;) {
      std::vector<std::future<Eigen::Vector4d>> futs;
      const double offs[4] = {h, -h, 0.5 * h, -0.5 * h};
      for (double o : offs)
        futs.push_back(std::async(std::launch::async, grad_at, comp, o));
      Eigen::Vector4d g[4];
      bool boundary = false;
      std::exception_ptr other;
      for (int i = 0; i < 4; ++i) {
        try {
          g[i] = futs[i].get();
        } catch (const Error& e) {
          if (is_boundary_error(e)) boundary = true;
          else if (!other) other = std::current_exception();
        } catch (...) {
          if (!other) other = std::current_exception();
        }
      }
      if (other) std::rethrow_exception(other);
      if (boundary) {
        if (pinned)
          fail(ErrorCode::BoundaryTooClose,
               "pinned step leaves the existence region");
        h *= 0.5;
        if (h < h_floor)
          fail(ErrorCode::BoundaryTooClose,
               "no workable finite-difference step in component " +
                   std::to_string(comp));
        continue;
      }
      Dh.col(comp) = (g[0] - g[1]) / (2.0 * h);
      Dh2.col(comp) = (g[2] - g[3]) / h;
      max_step = std::max(max_step, h);
      break;
    }
  }

  Eigen::Matrix4d H = (4.0 * Dh2 - Dh) / 3.0;
  Eigen::Matrix4d rich = (Dh2 - Dh).cwiseAbs() / 3.0;
  Eigen::Matrix4d asym = 0.5 * (H - H.transpose()).cwiseAbs();
  out.est_error = rich.cwiseMax(asym);
  out.hess = 0.5 * (H + H.transpose());
  out.fd_step = max_step;

  double hmax = out.hess.cwiseAbs().maxCoeff();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double entry_scale = std::max(std::abs(out.hess(i, j)), 1e-8 * hmax);
      if (out.est_error(i, j) > 0.01 * entry_scale)
        fail(ErrorCode::NoiseFloor,
             "finite-difference error estimate exceeds 1% of Hessian entry (" +
                 std::to_string(i) + "," + std::to_string(j) + ")");
    }
  return out;
}

ModulationCoordinates modulation_coordinates(const ModelSpec& model,
                                             const WaveParams& params) {
  return modulation_coordinates(model, params,
                                action_hessian(model, params));
}

ModulationCoordinates modulation_coordinates(const ModelSpec& model,
                                             const WaveParams& params,
                                             const ActionData& data) {
  (void)model;
  (void)params;
  const Eigen::Vector4d& g = data.grad;
  const Eigen::Matrix4d& H = data.hess;
  double g1 = g[0];
  if (std::abs(g1) < 1e-12 * (1.0 + g.cwiseAbs().maxCoeff()))
    fail(ErrorCode::ZeroPeriodDerivative,
         "period derivative of the action vanishes");

  ModulationCoordinates out;
  out.k_x = 1.0 / g1;
  out.q_bar = g[1] / g1;
  out.m_bar = -g[2] / g1;
  out.k_phi = -g[3] / g1;
  for (int j = 0; j < 4; ++j) {
    out.jacobian(0, j) = -H(0, j) / (g1 * g1);
    out.jacobian(1, j) = (g[3] * H(0, j) - H(3, j) * g1) / (g1 * g1);
    out.jacobian(2, j) = (H(1, j) * g1 - g[1] * H(0, j)) / (g1 * g1);
    out.jacobian(3, j) = (g[2] * H(0, j) - H(2, j) * g1) / (g1 * g1);
  }
  return out;
}

}  // namespace wavestab
