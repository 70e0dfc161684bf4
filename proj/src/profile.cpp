#include "wavestab/profile.hpp"

#include "detail.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>
#include <unordered_map>
#include <vector>

#include "wavestab/jet.hpp"
#include "wavestab/ode.hpp"
#include "wavestab/quadrature.hpp"

namespace wavestab {

using namespace detail;

// ---------------------------------------------------------------------------
// Gauss-Legendre nodes by Newton iteration on the Legendre recurrence.

const GaussLegendre& gauss_legendre(int n) {
  static std::mutex mu;
  static std::unordered_map<int, GaussLegendre> cache;
  std::scoped_lock lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  GaussLegendre rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;  // ascending
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return cache.emplace(n, std::move(rule)).first->second;
}

namespace {

struct Well {
  double a, b;
};

// Locate all bounded positivity wells of f between consecutive roots.
std::vector<Well> find_wells(const RationalF& f, double lo, double hi) {
  std::vector<double> roots = real_roots(f.Nf, lo, hi);
  std::vector<Well> wells;
  for (std::size_t i = 0; i + 1 < roots.size(); ++i) {
    double mid = 0.5 * (roots[i] + roots[i + 1]);
    if (poly_eval(f.Nf, mid) > 0.0) wells.push_back({roots[i], roots[i + 1]});
  }
  return wells;
}

// Detect a pinched (double-root) well: a local maximum of f at height ~ 0.
bool has_degenerate_well(const RationalF& f, double lo, double hi,
                         double ftol) {
  Vec dNum = poly_add(poly_mul(f.dNf, f.Df),
                      -poly_mul(f.Nf, poly_derivative(f.Df)));
  for (double c : real_roots(dNum, lo, hi)) {
    if (std::abs(f(c)) <= ftol) return true;
  }
  return false;
}

}  // namespace

// ---------------------------------------------------------------------------
// Public scalar operations.

double nu(const ModelSpec& model, double rho, double c_x, double mu_phi) {
  if (!(rho > 0.0)) fail(ErrorCode::NonpositiveRho, "nu requires rho > 0");
  double k = poly_eval(model.kappa, 2.0 * rho);
  return (mu_phi - c_x * rho) / (2.0 * rho * k);
}

double effective_potential(const ModelSpec& model, double rho,
                           const WaveParams& params, int order) {
  if (!(rho > 0.0))
    fail(ErrorCode::NonpositiveRho, "effective potential requires rho > 0");
  if (order < 0 || order > 4)
    fail(ErrorCode::OrderTooHigh, "effective potential order " +
                                      std::to_string(order));
  auto r = Jet4::variable(rho);
  auto W2 = poly_eval(model.W, 2.0 * r);
  auto kappa2 = poly_eval(model.kappa, 2.0 * r);
  auto flux = params.mu_phi - params.c_x * r;
  auto w = -W2 + params.omega_phi * r + flux * flux / (4.0 * r * kappa2);
  return w.derivative(order);
}

std::pair<double, double> turning_points(
    const ModelSpec& model, const WaveParams& params,
    std::optional<std::pair<double, double>> seed) {
  RationalF f = make_f(model, params);
  const double lo = 1e-12 * std::max(1.0, model.alpha_max);
  const double hi = 0.5 * model.alpha_max;
  const double ftol_deg = 1e-9 * (1.0 + std::abs(params.mu_x));

  std::vector<Well> wells = find_wells(f, lo, hi);
  if (seed) {
    std::vector<Well> kept;
    for (const Well& w : wells)
      if (std::max(w.a, seed->first) <= std::min(w.b, seed->second))
        kept.push_back(w);
    wells = kept;
  }
  if (wells.empty()) {
    if (has_degenerate_well(f, lo, hi, ftol_deg))
      fail(ErrorCode::DegenerateWell, "well amplitude vanishes (double root)");
    // A positivity interval that runs into the upper range boundary means the
    // wave would sample the model beyond alpha_max rather than that no wave
    // exists.
    std::vector<double> roots = real_roots(f.Nf, lo, hi);
    if (!roots.empty() && poly_eval(f.Nf, 0.5 * (roots.back() + hi)) > 0.0 &&
        poly_eval(f.Nf, hi) > 0.0)
      fail(ErrorCode::ModelRangeExceeded,
           "positivity interval extends past alpha_max / 2");
    fail(ErrorCode::NoWellFound, "no bounded positivity interval of mu_x - "
                                 "effective potential in range");
  }
  if (wells.size() > 1)
    fail(ErrorCode::NoWellFound,
         "several wells coexist; pass a seed interval to select a branch");

  Well w = wells.front();
  // Newton refinement of both endpoints on the polynomial numerator.
  for (double* r : {&w.a, &w.b}) {
    for (int it = 0; it < 60; ++it) {
      double fx = poly_eval(f.Nf, *r), dfx = poly_eval(f.dNf, *r);
      if (dfx == 0.0) break;
      double step = fx / dfx;
      *r -= step;
      if (std::abs(step) < 1e-16 * (1.0 + std::abs(*r))) break;
    }
  }
  const double ftol = 1e-12 * (1.0 + std::abs(params.mu_x));
  if (std::abs(f(w.a)) > ftol || std::abs(f(w.b)) > ftol)
    fail(ErrorCode::NoWellFound, "turning point refinement failed");
  // Simple-root (nondegenerate amplitude) requirement.
  WaveParams p = params;
  for (double r : {w.a, w.b}) {
    double slope = effective_potential(model, r, p, 1);
    if (std::abs(slope) <= 1e-8 * (1.0 + std::abs(params.mu_x)))
      fail(ErrorCode::DegenerateWell, "turning point is a near-double root");
  }
  return {w.a, w.b};
}

double rho_dual(const ModelSpec& model, const WaveParams& params,
                std::optional<std::pair<double, double>> seed) {
  std::pair<double, double> tp;
  try {
    tp = turning_points(model, params, seed);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::DegenerateWell)
      fail(ErrorCode::NoDualPoint, "degenerate well has no dual point");
    throw;
  }
  RationalF f = make_f(model, params);
  const double lo = 1e-12 * std::max(1.0, model.alpha_max);
  const double hi = 0.5 * model.alpha_max;
  std::vector<double> roots = real_roots(f.Nf, lo, hi);
  double below = -1.0, above = -1.0;
  for (double r : roots) {
    if (r < tp.first - 1e-10 * (1.0 + tp.first)) below = r;  // ascending scan
    if (r > tp.second + 1e-10 * (1.0 + tp.second) && above < 0.0) above = r;
  }
  if (below < 0.0 && above < 0.0)
    fail(ErrorCode::NoDualPoint, "no cancellation point outside the well");
  if (below >= 0.0 && above >= 0.0) {
    // Both sides have one; the pinching side is the closer one.
    return (tp.first - below <= above - tp.second) ? below : above;
  }
  return below >= 0.0 ? below : above;
}

// ---------------------------------------------------------------------------
// Well geometry shared by the profile solver, the averages, and the
// pointwise evaluator.  rho(u) = a + (b-a) sin^2 u maps u in [0, pi] onto a
// full period; dx/du = sqrt(kappa(2 rho) / (rho * htilde(rho))) where
// htilde is f with the turning-point factors deflated away, so every
// integrand below is smooth.

namespace {

constexpr int kGlOrder = 12;

struct Tables {
  Vec u, x, theta;
};

// Accumulate x(u) and theta(u) over a uniform u-grid with per-cell GL.
Tables build_tables(const Geometry& geo, int intervals, int gl_order) {
  Tables t;
  t.u.resize(intervals + 1);
  t.x.resize(intervals + 1);
  t.theta.resize(intervals + 1);
  t.u[0] = t.x[0] = t.theta[0] = 0.0;
  for (int i = 0; i < intervals; ++i) {
    double u0 = M_PI * i / intervals;
    double u1 = M_PI * (i + 1) / intervals;
    t.u[i + 1] = u1;
    t.x[i + 1] = t.x[i] + gl_integrate([&](double u) { return geo.g(u); },
                                       u0, u1, gl_order);
    t.theta[i + 1] =
        t.theta[i] + gl_integrate(
                         [&](double u) {
                           double rho = geo.rho_of_u(u);
                           return geo.nu_of(rho) * geo.g(u);
                         },
                         u0, u1, gl_order);
  }
  return t;
}

// Right-hand side of the second-order radius equation, used only as an
// independent cross-check of the quadrature construction:
//   rho'' = -(F'(rho) rho'^2 + dWrho(rho)) / (2 F(rho)),  F = kappa(2rho)/(4rho).
double rho_xx_ode(const Geometry& geo, double rho, double rho_x) {
  auto r = Jet<double, 1>::variable(rho);
  auto F = poly_eval(geo.kappa2, r) / (4.0 * r);
  double dW = effective_potential(geo.model, rho, geo.params, 1);
  return -(F.derivative(1) * rho_x * rho_x + dW) / (2.0 * F.value());
}

void rk_cross_check(const Geometry& geo, const Tables& t) {
  const int half = static_cast<int>(t.u.size()) / 2;  // nodes up to u = pi/2
  Eigen::Vector2d y(geo.a, 0.0);
  OdeOptions opt;
  opt.rtol = 1e-10;
  opt.atol = 1e-13;
  double x_here = 0.0;
  double worst = 0.0;
  for (int i = 1; i <= half; ++i) {
    y = dopri5(
        [&](double, const Eigen::Vector2d& s) {
          return Eigen::Vector2d(s[1], rho_xx_ode(geo, s[0], s[1]));
        },
        x_here, t.x[i], y, opt);
    x_here = t.x[i];
    double rho_u = geo.rho_of_u(t.u[i]);
    worst = std::max(worst, std::abs(y[0] - rho_u));
  }
  if (worst > 1e-8 * geo.b)
    fail(ErrorCode::QuadratureNotConverged,
         "independent ODE integration disagrees with the quadrature profile");
}

}  // namespace

WaveProfile solve_profile(const ModelSpec& model, const WaveParams& params,
                          int n_points,
                          std::optional<std::pair<double, double>> seed) {
  if (n_points < 64)
    fail(ErrorCode::ConfigError, "n_points must be at least 64");
  Geometry geo = make_geometry(model, params, seed);
  const int M = 2 * n_points;  // intervals across the full period
  Tables t = build_tables(geo, M, kGlOrder);

  // Convergence guard: a higher-order rule must agree.
  Tables t2 = build_tables(geo, M, kGlOrder + 8);
  if (std::abs(t2.x[M] - t.x[M]) > 1e-10 * std::max(1.0, t.x[M]) ||
      std::abs(t2.theta[M] - t.theta[M]) > 1e-10 * (1.0 + std::abs(t.theta[M])))
    fail(ErrorCode::QuadratureNotConverged,
         "period quadrature failed to converge");

  rk_cross_check(geo, t);

  WaveProfile prof;
  prof.params = params;
  prof.X_x = t.x[M];
  prof.xi_phi = t.theta[M];
  prof.k_x = 1.0 / prof.X_x;
  prof.k_phi = prof.xi_phi / prof.X_x;
  prof.omega_x = -prof.k_x * params.c_x;
  prof.rho_min = geo.a;
  prof.rho_max = geo.b;
  prof.x_grid = t.x;
  prof.rho.resize(M + 1);
  prof.v.resize(M + 1);
  prof.theta = t.theta;
  prof.V.resize(2, M + 1);
  for (int i = 0; i <= M; ++i) {
    double rho = geo.rho_of_u(t.u[i]);
    prof.rho[i] = rho;
    prof.v[i] = geo.nu_of(rho);
    prof.V.col(i) = std::sqrt(2.0 * rho) * rotJ(t.theta[i]).col(0);
  }
  return prof;
}

Averages wave_averages(const ModelSpec& model, const WaveProfile& prof) {
  Geometry geo = make_geometry(model, prof.params,
                               std::make_pair(prof.rho_min, prof.rho_max));
  const int M = static_cast<int>(prof.x_grid.size()) - 1;

  // Uniform-in-u trapezoid over the full period; the integrands are smooth
  // and periodic in u, so this rule is spectrally accurate.
  const double du = M_PI / M;
  Eigen::VectorXd w = Eigen::VectorXd::Constant(M + 1, du);
  w[0] *= 0.5;
  w[M] *= 0.5;

  Averages av;
  Eigen::Matrix2d J = Jmat();
  double t0 = 0, t1 = 0, t2 = 0, t3 = 0;
  for (int i = 0; i <= M; ++i) {
    double u = M_PI * i / M;
    double rho = prof.rho[i];
    double g = geo.g(u);
    double wt = w[i] * g;  // dx weight
    double fval = geo.f_stable(rho);
    double rho_x = (u <= 0.5 * M_PI ? 1.0 : -1.0) *
                   std::sqrt(std::max(0.0, 4.0 * rho * fval / geo.kap(rho)));
    Eigen::Vector2d V = prof.V.col(i);
    Eigen::Vector2d Vx = (rho_x / (2.0 * rho)) * V + prof.v[i] * (J * V);
    double kap = geo.kap(rho);

    av.m_bar += wt * rho;
    av.q_bar += wt * rho * prof.v[i];
    av.sigma1 += wt * kap * V.squaredNorm();
    av.sigma2 += wt * kap * (J * V).dot(Vx);
    av.sigma3 += wt * kap * Vx.squaredNorm();

    // Rescaled profile (zeta = k_x x): U0 = e^{-k_phi x J} V and
    // (k_phi J + k_x d/dzeta) U0 = e^{-k_phi x J} V_x.
    Eigen::Matrix2d R = rotJ(-prof.k_phi * prof.x_grid[i]);
    Eigen::Vector2d U0 = R * V;
    Eigen::Vector2d DU0 = R * Vx;
    double nsq = U0.squaredNorm();
    double kap_u = poly_eval(model.kappa, nsq);
    double kap_pu = poly_eval(poly_derivative(model.kappa), nsq);
    t0 += wt * kap_pu * nsq;
    t1 += wt * kap_u * nsq;
    t2 += wt * kap_u * (J * U0).dot(DU0);
    t3 += wt * kap_u * DU0.squaredNorm();
  }
  av.m_bar /= prof.X_x;
  av.q_bar /= prof.X_x;
  av.tau0 = prof.k_x * t0;
  av.tau1 = prof.k_x * t1;
  av.tau2 = prof.k_x * t2;
  av.tau3 = prof.k_x * t3;

  // sigma_j = tau_j / k_x must hold up to rounding; a violation signals an
  // internally inconsistent profile.
  double scale = std::abs(av.sigma1) + std::abs(av.sigma2) +
                 std::abs(av.sigma3) + 1.0;
  if (std::abs(av.sigma1 - av.tau1 / prof.k_x) > 1e-8 * scale ||
      std::abs(av.sigma2 - av.tau2 / prof.k_x) > 1e-8 * scale ||
      std::abs(av.sigma3 - av.tau3 / prof.k_x) > 1e-8 * scale)
    fail(ErrorCode::QuadratureNotConverged,
         "sigma/tau consistency check failed");
  return av;
}

// ---------------------------------------------------------------------------
// Pointwise evaluator.

struct ProfileEvaluator::Impl {
  Geometry geo;
  Tables t;
  double X = 0.0, xi = 0.0;
  int M = 0;

  double x_of_u(double u) const {
    int i = std::clamp(static_cast<int>(u / M_PI * M), 0, M - 1);
    double u0 = M_PI * i / M;
    if (u < u0) { --i; u0 = M_PI * i / M; }
    return t.x[i] + gl_integrate([&](double s) { return geo.g(s); }, u0, u, 8);
  }
  double theta_of_u(double u) const {
    int i = std::clamp(static_cast<int>(u / M_PI * M), 0, M - 1);
    double u0 = M_PI * i / M;
    if (u < u0) { --i; u0 = M_PI * i / M; }
    return t.theta[i] + gl_integrate(
                            [&](double s) {
                              return geo.nu_of(geo.rho_of_u(s)) * geo.g(s);
                            },
                            u0, u, 8);
  }
  double u_of_x(double x) const {
    // Bracket with the table, then Newton on x(u) - x.
    const double* begin = t.x.data();
    const double* end = begin + t.x.size();
    int i = static_cast<int>(std::upper_bound(begin, end, x) - begin) - 1;
    i = std::clamp(i, 0, M - 1);
    double frac = (x - t.x[i]) / (t.x[i + 1] - t.x[i]);
    double u = M_PI * (i + std::clamp(frac, 0.0, 1.0)) / M;
    for (int it = 0; it < 50; ++it) {
      double r = x_of_u(u) - x;
      if (std::abs(r) <= 1e-13 * std::max(1.0, X)) break;
      u -= r / geo.g(u);
      u = std::clamp(u, 0.0, M_PI);
    }
    return u;
  }
};

ProfileEvaluator::ProfileEvaluator(
    const ModelSpec& model, const WaveParams& params,
    std::optional<std::pair<double, double>> seed)
    : impl_(std::make_unique<Impl>()) {
  impl_->geo = make_geometry(model, params, seed);
  impl_->M = 2048;
  impl_->t = build_tables(impl_->geo, impl_->M, kGlOrder);
  impl_->X = impl_->t.x[impl_->M];
  impl_->xi = impl_->t.theta[impl_->M];
}

ProfileEvaluator::~ProfileEvaluator() = default;
ProfileEvaluator::ProfileEvaluator(ProfileEvaluator&&) noexcept = default;
ProfileEvaluator& ProfileEvaluator::operator=(ProfileEvaluator&&) noexcept =
    default;

double ProfileEvaluator::period() const { return impl_->X; }
double ProfileEvaluator::xi_phi() const { return impl_->xi; }
double ProfileEvaluator::rho_min() const { return impl_->geo.a; }
double ProfileEvaluator::rho_max() const { return impl_->geo.b; }
const WaveParams& ProfileEvaluator::params() const { return impl_->geo.params; }
const ModelSpec& ProfileEvaluator::model() const { return impl_->geo.model; }

ProfilePoint ProfileEvaluator::at(double x) const {
  const Impl& im = *impl_;
  const Geometry& geo = im.geo;
  double k = std::floor(x / im.X);
  double xr = x - k * im.X;
  if (xr < 0.0) { xr += im.X; k -= 1.0; }  // guard rounding at negative x

  double u = im.u_of_x(xr);
  double rho = geo.rho_of_u(u);
  double fval = std::max(0.0, geo.f_stable(rho));
  double kap = geo.kap(rho);
  double rho_x =
      (u <= 0.5 * M_PI ? 1.0 : -1.0) * std::sqrt(4.0 * rho * fval / kap);
  double theta = im.theta_of_u(u) + k * im.xi;

  ProfilePoint p;
  p.rho = rho;
  p.rho_x = rho_x;
  p.theta = theta;
  auto rj = Jet4::variable(rho);
  auto nuj = poly_eval(geo.nu_num, rj) / poly_eval(geo.nu_den, rj);
  p.v = nuj.value();
  double nu_prime = nuj.derivative(1);

  double rho_xx = rho_xx_ode(geo, rho, rho_x);
  double s = rho_x / (2.0 * rho);
  Eigen::Vector2d e1 = rotJ(theta).col(0);
  Eigen::Vector2d Je1 = Jmat() * e1;
  double amp = std::sqrt(2.0 * rho);
  p.V = amp * e1;
  p.Vx = s * p.V + p.v * (amp * Je1);
  p.Vxx = (rho_xx / (2.0 * rho) - s * s - p.v * p.v) * p.V +
          (nu_prime * rho_x + 2.0 * s * p.v) * (amp * Je1);
  return p;
}

}  // namespace wavestab
