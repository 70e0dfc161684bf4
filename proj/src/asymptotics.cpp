#include "wavestab/asymptotics.hpp"

#include "detail.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>
#include <vector>

#include "wavestab/errors.hpp"
#include "wavestab/quadrature.hpp"

namespace wavestab {

namespace {

struct PinnedParameters {
  double mu_phi0 = 0.0;
  double omega_phi0 = 0.0;
  double mu_x0 = 0.0;
};

// Parameters that make rho0 a critical point of the effective potential
// with local wavenumber nu(rho0) = k_phi0, and the critical value mu_x0.
PinnedParameters pin_parameters(const ModelSpec& model, double c_x,
                                double rho0, double k_phi0) {
  if (!(rho0 > 0.0)) {
    std::ostringstream msg;
    msg << "limiting mass must be positive, got " << rho0;
    fail(ErrorCode::NonpositiveRho, msg.str());
  }
  const double a = 2.0 * rho0;
  const double kap = eval(model, Component::kappa, a);
  const double kap1 = eval(model, Component::kappa, a, 1);
  const double W0 = eval(model, Component::W, a);
  const double W1 = eval(model, Component::W, a, 1);

  PinnedParameters pin;
  pin.mu_phi0 = c_x * rho0 + kap * a * k_phi0;
  pin.omega_phi0 =
      c_x * k_phi0 + (kap1 * a + kap) * k_phi0 * k_phi0 + 2.0 * W1;
  pin.mu_x0 = -0.5 * kap * a * k_phi0 * k_phi0 - W0 - c_x * rho0 * k_phi0 +
              pin.omega_phi0 * rho0 + pin.mu_phi0 * k_phi0;
  return pin;
}

// Hyperbolicity discriminant of the constant state (rho0, k_phi0).
double hyperbolicity_index(const ModelSpec& model, double rho0,
                           double k_phi0) {
  const double a = 2.0 * rho0;
  return eval(model, Component::W, a, 2) +
         (eval(model, Component::kappa, a, 2) * rho0 +
          eval(model, Component::kappa, a, 1)) *
             k_phi0 * k_phi0;
}

// Side-band index as a cubic in the squared harmonic wavenumber factor
// pref = (1/2) (kappa(2 rho0) / (2 rho0)) (2 pi / X0)^2, grouped by powers.
double sideband_index(const ModelSpec& model, double rho0, double pref) {
  const double a = 2.0 * rho0;
  const double kap = eval(model, Component::kappa, a);
  const double g = eval(model, Component::kappa, a, 1) / kap;
  const double gg = eval(model, Component::kappa, a, 2) / kap;
  const double h = 1.0 / a;
  const double W2 = eval(model, Component::W, a, 2);
  const double W3 = eval(model, Component::W, a, 3);
  const double W4 = eval(model, Component::W, a, 4);

  const double g3 = -3.0 * g * g - 2.0 * g * h + gg;
  const double g2 = W2 * (-12.0 * g * g - 6.0 * g * h + 4.0 * h * h +
                          3.0 * gg) +
                    4.0 * W3 * (g + 2.0 * h) + 2.0 * W4;
  const double g1 = 12.0 * W2 * W2 * (g * g + 4.0 * g * h + 3.0 * h * h) +
                    8.0 * W2 * W3 * (4.0 * g + 5.0 * h) +
                    (4.0 / 3.0) * W3 * W3 + 6.0 * W2 * W4;
  const double sum = W3 + 3.0 * W2 * (g + h);
  const double g0 = 8.0 * W2 * sum * sum;
  return ((g3 * pref + g2) * pref + g1) * pref + g0;
}

}  // namespace

HarmonicPoint harmonic_point(const ModelSpec& model, double c_x, double rho0,
                             double k_phi0) {
  const PinnedParameters pin = pin_parameters(model, c_x, rho0, k_phi0);
  const WaveParams params{pin.mu_x0, c_x, pin.omega_phi0, pin.mu_phi0};
  const double d2 = effective_potential(model, rho0, params, 2);
  if (!(d2 > 0.0)) {
    std::ostringstream msg;
    msg << "effective potential has no strict minimum at rho = " << rho0
        << " (second derivative " << d2
        << "); the parameters bound a large-period family instead";
    throw NotAMinimumError(d2, msg.str());
  }
  const double d3 = effective_potential(model, rho0, params, 3);
  const double d4 = effective_potential(model, rho0, params, 4);

  const double a = 2.0 * rho0;
  const double kap = eval(model, Component::kappa, a);
  const double g = eval(model, Component::kappa, a, 1) / kap;
  const double gg = eval(model, Component::kappa, a, 2) / kap;

  HarmonicPoint h;
  h.c_x = c_x;
  h.rho0 = rho0;
  h.k_phi0 = k_phi0;
  h.omega_phi0 = pin.omega_phi0;
  h.mu_phi0 = pin.mu_phi0;
  h.mu_x0 = pin.mu_x0;
  h.X0 = 2.0 * M_PI * std::sqrt(kap / (a * d2));
  h.delta_hyp = hyperbolicity_index(model, rho0, k_phi0);

  const double wavenumber_sq = std::pow(2.0 * M_PI / h.X0, 2);
  h.delta_BF = sideband_index(model, rho0, 0.5 * (kap / a) * wavenumber_sq);

  h.a0 = ((5.0 / 3.0) * d3 * d3 - d2 * d4 -
          4.0 * d2 * d3 * (g - 0.5 / rho0) +
          16.0 * d2 * d2 * (gg - 0.5 * g / rho0 + 0.5 / (rho0 * rho0))) /
         (8.0 * d2 * d2 * d2);
  return h;
}

double delta_BF(const ModelSpec& model, double c_x, double rho0,
                double k_phi0) {
  return harmonic_point(model, c_x, rho0, k_phi0).delta_BF;
}

WaveParams saddle_params(const ModelSpec& model, double c_x,
                         double rho_endstate, double k_phi) {
  const PinnedParameters pin = pin_parameters(model, c_x, rho_endstate, k_phi);
  return WaveParams{pin.mu_x0, c_x, pin.omega_phi0, pin.mu_phi0};
}

SolitaryData solitary_action(const ModelSpec& model, double c_x,
                             double rho_endstate, double k_phi) {
  const WaveParams params = saddle_params(model, c_x, rho_endstate, k_phi);
  const double rho_e = rho_endstate;
  const double d2 = effective_potential(model, rho_e, params, 2);
  if (!(d2 < 0.0)) {
    std::ostringstream msg;
    msg << "endstate rho = " << rho_e
        << " is not a saddle of the effective potential (second derivative "
        << d2 << "); no homoclinic orbit";
    fail(ErrorCode::NoSolitaryWave, msg.str());
  }

  // The parameters pin a double root of f = mu_x0 - effective potential at
  // the endstate; deflate it and look for the nearest simple root bounding a
  // positive well, right of the endstate first.
  const detail::RationalF f = detail::make_f(model, params);
  const auto [q1, rem1] = detail::poly_deflate(f.Nf, rho_e);
  const auto [q, rem2] = detail::poly_deflate(q1, rho_e);
  (void)rem1;
  (void)rem2;

  const double hi_cap = 0.5 * model.alpha_max;
  std::vector<double> roots = detail::real_roots(q, 1e-12, hi_cap);
  std::sort(roots.begin(), roots.end());
  const double sep = 1e-7 * std::max(1.0, std::abs(rho_e));

  double rho_s = 0.0;
  bool found = false;
  auto accept = [&](double r) {
    const double mid = 0.5 * (r + rho_e);
    if (poly_eval(q, mid) <= 0.0) return;
    rho_s = r;
    found = true;
  };
  for (double r : roots) {
    if (r > rho_e + sep) {
      accept(r);
      break;
    }
  }
  if (!found) {
    for (auto it = roots.rbegin(); it != roots.rend(); ++it) {
      if (*it < rho_e - sep) {
        accept(*it);
        break;
      }
    }
  }
  if (!found)
    fail(ErrorCode::NoSolitaryWave,
         "no extremum mass bounding a positive well adjacent to the endstate");

  // theta_s = 2 int sqrt(f) sqrt(kappa(2 rho)/rho) d rho over the well.
  // Under rho(t) = rho_s + (rho_e - rho_s) t^2 both endpoint factors come
  // out analytically: with q = (rho - rho_s) m,
  //   theta_s = 4 delta^2 int_0^1 t^2 (1 - t^2)
  //             sqrt(delta m(rho) / Df(rho)) sqrt(kappa(2 rho)/rho) dt.
  const auto [m_poly, rem3] = detail::poly_deflate(q, rho_s);
  (void)rem3;
  const double delta = rho_e - rho_s;
  const Eigen::VectorXd kappa2 = detail::poly_scale_arg(model.kappa, 2.0);

  auto integrand = [&](double t) {
    const double rho = rho_s + delta * t * t;
    const double radicand =
        delta * poly_eval(m_poly, rho) / poly_eval(f.Df, rho);
    return t * t * (1.0 - t * t) * std::sqrt(std::max(0.0, radicand)) *
           std::sqrt(poly_eval(kappa2, rho) / rho);
  };

  SolitaryData out;
  out.c_x = c_x;
  out.rho_endstate = rho_endstate;
  out.k_phi = k_phi;
  out.rho_s = rho_s;

  double prev = 0.0;
  bool settled = false;
  for (int n = 48; n <= 768; n *= 2) {
    const double value =
        4.0 * delta * delta * gl_integrate(integrand, 0.0, 1.0, n);
    if (n > 48 && std::abs(value - prev) <= 1e-12 * (1.0 + std::abs(value))) {
      settled = true;
      out.theta_s = value;
      break;
    }
    prev = value;
  }
  if (!settled)
    fail(ErrorCode::QuadratureNotConverged,
         "solitary action quadrature did not settle");
  return out;
}

double vk_index(const ModelSpec& model, double c_x, double rho_endstate,
                double k_phi, double step) {
  if (!(step > 0.0))
    fail(ErrorCode::ConfigError, "vk_index step must be positive");
  const double center =
      solitary_action(model, c_x, rho_endstate, k_phi).theta_s;
  auto curvature = [&](double h) {
    const double plus =
        solitary_action(model, c_x + h, rho_endstate, k_phi).theta_s;
    const double minus =
        solitary_action(model, c_x - h, rho_endstate, k_phi).theta_s;
    return (plus - 2.0 * center + minus) / (h * h);
  };
  const double coarse = curvature(step);
  const double fine = curvature(0.5 * step);
  return (4.0 * fine - coarse) / 3.0;
}

ConstantStateReport constant_state_check(const ModelSpec& model, double rho0,
                                         double k_phi_norm) {
  if (rho0 < 0.0) {
    std::ostringstream msg;
    msg << "constant-state mass must be nonnegative, got " << rho0;
    fail(ErrorCode::NonpositiveRho, msg.str());
  }
  ConstantStateReport rep;
  rep.rho0 = rho0;
  rep.delta_hyp = hyperbolicity_index(model, rho0, k_phi_norm);
  rep.stable = rho0 == 0.0 || rep.delta_hyp >= 0.0;
  return rep;
}

double large_period_epsilon(const ModelSpec& model, const WaveParams& params,
                            std::optional<std::pair<double, double>> seed) {
  const auto [lo, hi] = turning_points(model, params, seed);
  const double dual = rho_dual(model, params, seed);
  const double width = hi - lo;
  if (!(width > 0.0))
    fail(ErrorCode::DegenerateWell, "turning points coincide");
  return dual > hi ? (dual - hi) / width : (lo - dual) / width;
}

double mu_x_for_epsilon(const ModelSpec& model, const WaveParams& boundary,
                        double target, double tol,
                        std::optional<std::pair<double, double>> seed) {
  if (!(target > 0.0) || !(target < 1.0))
    fail(ErrorCode::ConfigError, "epsilon target must lie in (0, 1)");
  if (!(tol > 0.0)) fail(ErrorCode::ConfigError, "tolerance must be positive");

  // epsilon ~ C sqrt(boundary.mu_x - mu_x), so in s = log(gap) the residual
  // log(epsilon/target) is affine with slope 1/2; correct by twice the
  // residual each round. Shrink the gap whenever no well exists there.
  double s = std::log(1e-6 * std::max(1.0, std::abs(boundary.mu_x)));
  int shrink = 0;
  for (int it = 0; it < 120; ++it) {
    WaveParams probe = boundary;
    probe.mu_x = boundary.mu_x - std::exp(s);
    double eps = 0.0;
    try {
      eps = large_period_epsilon(model, probe, seed);
    } catch (const Error&) {
      s -= M_LN2;
      if (++shrink > 60)
        fail(ErrorCode::NoWellFound,
             "no periodic well adjacent to the boundary parameters");
      continue;
    }
    if (std::abs(eps / target - 1.0) <= tol) return probe.mu_x;
    s += std::clamp(-2.0 * std::log(eps / target), -4.0, 4.0);
  }
  fail(ErrorCode::QuadratureNotConverged, "epsilon inversion stalled");
}

}  // namespace wavestab
