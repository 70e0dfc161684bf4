#include "wavestab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "wavestab/errors.hpp"
#include "wavestab/ode.hpp"

namespace wavestab {

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::Matrix4cd block_twist(double xi_phi) {
  Eigen::Matrix4d t = Eigen::Matrix4d::Zero();
  t.topLeftCorner<2, 2>() = rotJ(xi_phi);
  t.bottomRightCorner<2, 2>() = rotJ(xi_phi);
  return t.cast<Complex>();
}

}  // namespace

Eigen::Matrix4cd system_matrix(const ModelSpec& model, const WaveParams& params,
                               const ProfilePoint& pt, Complex lambda,
                               double eta_sq) {
  if (eta_sq < 0.0)
    fail(ErrorCode::ConfigError, "eta_sq must be nonnegative");
  const Eigen::Vector2d& V = pt.V;
  const Eigen::Vector2d& Vx = pt.Vx;
  const Eigen::Vector2d& Vxx = pt.Vxx;
  const double nsq = V.squaredNorm();
  if (nsq > model.alpha_max)
    fail(ErrorCode::ModelRangeExceeded, "|V|^2 beyond alpha_max");

  const double kap = eval(model, Component::kappa, nsq, 0);
  const double k1 = eval(model, Component::kappa, nsq, 1);
  const double k2 = eval(model, Component::kappa, nsq, 2);
  const double w1 = eval(model, Component::W, nsq, 1);
  const double w2 = eval(model, Component::W, nsq, 2);
  const double kt = model.has_transverse()
                        ? eval(model, Component::kappa_transverse, nsq, 0)
                        : kap;

  const double gsq = Vx.squaredNorm();
  const double vdvx = V.dot(Vx);
  const double a = k1 * gsq + 2.0 * w1 - params.omega_phi;
  const double b = 2.0 * k2 * gsq + 4.0 * w2;
  const Eigen::Matrix2d J = Jmat();

  // psi coefficient of kappa psi'' = A psi + B psi', from the second
  // variation of the wave Hamiltonian plus the spectral and transverse
  // shifts
  Eigen::Matrix2d A_re =
      (a + eta_sq * kt) * Eigen::Matrix2d::Identity() + b * V * V.transpose() -
      4.0 * k2 * vdvx * Vx * V.transpose() - 2.0 * k1 * Vx * Vx.transpose() -
      2.0 * k1 * Vxx * V.transpose();
  Eigen::Matrix2d B =
      2.0 * k1 * V * Vx.transpose() - params.c_x * J -
      2.0 * k1 * vdvx * Eigen::Matrix2d::Identity() -
      2.0 * k1 * Vx * V.transpose();

  Eigen::Matrix4cd M = Eigen::Matrix4cd::Zero();
  M.topRightCorner<2, 2>() = Eigen::Matrix2cd::Identity();
  M.bottomLeftCorner<2, 2>() =
      (A_re / kap).cast<Complex>() + (lambda / kap) * J.cast<Complex>();
  M.bottomRightCorner<2, 2>() = (B / kap).cast<Complex>();
  return M;
}

std::function<Eigen::Matrix4cd(double)> linearized_system(
    const ModelSpec& model, const WaveParams& params, Complex lambda,
    double eta_sq) {
  auto ev = std::make_shared<ProfileEvaluator>(model, params);
  return [ev, model, params, lambda, eta_sq](double x) {
    return system_matrix(model, params, ev->at(x), lambda, eta_sq);
  };
}

EvansFunction::EvansFunction(const ModelSpec& model, const WaveParams& params,
                             double x0_fraction)
    : model_(model), params_(params) {
  auto ev = std::make_shared<ProfileEvaluator>(model, params);
  period_ = ev->period();
  xi_phi_ = ev->xi_phi();
  x0_ = x0_fraction * period_;
  evaluator_ = std::move(ev);
}

EvansFunction::EvansFunction(const ModelSpec& model, const WaveParams& params,
                             std::function<ProfilePoint(double)> source,
                             double period, double xi_phi, double x0)
    : model_(model),
      params_(params),
      source_(std::move(source)),
      period_(period),
      xi_phi_(xi_phi),
      x0_(x0) {
  if (!(period > 0.0)) fail(ErrorCode::ConfigError, "period must be positive");
}

MonodromyResult EvansFunction::monodromy(Complex lambda, double eta_sq) const {
  if (std::abs(lambda) > lambda_ceiling)
    fail(ErrorCode::ConfigError,
         "|lambda| beyond the supported ceiling for monodromy queries");
  auto point = [&](double x) {
    return evaluator_ ? evaluator_->at(x) : source_(x);
  };
  auto rhs = [&](double x, const Eigen::Matrix4cd& y) -> Eigen::Matrix4cd {
    return system_matrix(model_, params_, point(x), lambda, eta_sq) * y;
  };
  OdeOptions opt;
  opt.rtol = 1e-12;
  opt.atol = 1e-15;
  MonodromyResult out;
  out.R = dopri5<Eigen::Matrix4cd>(rhs, x0_, x0_ + period_,
                                   Eigen::Matrix4cd::Identity(), opt);
  // tr M = -2 d/dx log kappa(|V|^2), so the Abel integral telescopes
  const double kap0 =
      eval(model_, Component::kappa, point(x0_).V.squaredNorm(), 0);
  const double kap1 =
      eval(model_, Component::kappa, point(x0_ + period_).V.squaredNorm(), 0);
  const double ratio = (kap0 / kap1) * (kap0 / kap1);
  out.det_check = out.R.determinant() - Complex(ratio, 0.0);
  out.evans = Complex(0.0, 0.0);
  return out;
}

Complex EvansFunction::evans(const Eigen::Matrix4cd& R, double xi) const {
  const Complex phase = std::exp(Complex(0.0, xi));
  return (R - phase * block_twist(xi_phi_)).determinant();
}

Complex EvansFunction::operator()(double xi, Complex lambda,
                                  double eta_sq) const {
  return evans(monodromy(lambda, eta_sq).R, xi);
}

namespace {

// Signed argument increments of D along a closed polygonal contour;
// segments are bisected until each increment stays under pi/2, which both
// makes the principal-branch unwrapping safe and localizes near-contour
// roots.
class ArgumentMarcher {
 public:
  ArgumentMarcher(std::function<Complex(double)> path,
                  std::function<Complex(double)> value)
      : path_(std::move(path)), value_(std::move(value)) {}

  double total_argument(int n_initial) {
    total_ = 0.0;
    max_abs_ = 0.0;
    std::vector<Complex> d(n_initial);
    for (int j = 0; j < n_initial; ++j) {
      d[j] = value_(double(j) / n_initial);
      max_abs_ = std::max(max_abs_, std::abs(d[j]));
    }
    for (int j = 0; j < n_initial; ++j) check_floor(d[j]);
    for (int j = 0; j < n_initial; ++j) {
      const double t0 = double(j) / n_initial;
      const double t1 = double(j + 1) / n_initial;
      segment(t0, d[j], t1, d[(j + 1) % n_initial], 0);
    }
    return total_;
  }

 private:
  void check_floor(Complex d) const {
    if (std::abs(d) < 1e-12 * max_abs_)
      fail(ErrorCode::RootOnContour,
           "the function vanishes on the integration contour");
  }

  void segment(double t0, Complex d0, double t1, Complex d1, int depth) {
    const double delta = std::arg(d1 / d0);
    if (std::abs(delta) < 1.2) {
      total_ += delta;
      return;
    }
    if (depth > 44)
      fail(ErrorCode::RootOnContour,
           "argument jump persists at vanishing contour separation");
    const double tm = 0.5 * (t0 + t1);
    const Complex dm = value_(tm);
    max_abs_ = std::max(max_abs_, std::abs(dm));
    check_floor(dm);
    segment(t0, d0, tm, dm, depth + 1);
    segment(tm, dm, t1, d1, depth + 1);
  }

  std::function<Complex(double)> path_;
  std::function<Complex(double)> value_;
  double total_ = 0.0;
  double max_abs_ = 0.0;
};

int winding_of(const std::function<Complex(double)>& path,
               const std::function<Complex(double)>& value, int n_initial) {
  ArgumentMarcher marcher(path, value);
  const double total = marcher.total_argument(n_initial);
  const double w = total / (2.0 * kPi);
  const long rounded = std::lround(w);
  if (std::abs(w - double(rounded)) > 0.25)
    fail(ErrorCode::RootOnContour,
         "winding number failed to settle on an integer");
  return int(rounded);
}

}  // namespace

int count_unstable(const EvansFunction& ev, double xi, double eta_sq,
                   Complex corner_lo, Complex corner_hi) {
  if (!(corner_lo.real() > 0.0))
    fail(ErrorCode::ConfigError, "counting rectangle must lie in Re > 0");
  if (!(corner_hi.real() > corner_lo.real()) ||
      !(corner_hi.imag() > corner_lo.imag()))
    fail(ErrorCode::ConfigError, "degenerate counting rectangle");

  const Complex c0 = corner_lo;
  const Complex c1(corner_hi.real(), corner_lo.imag());
  const Complex c2 = corner_hi;
  const Complex c3(corner_lo.real(), corner_hi.imag());
  auto path = [&](double t) -> Complex {
    const double s = 4.0 * (t - std::floor(t));
    const int edge = std::min(3, int(s));
    const double f = s - edge;
    switch (edge) {
      case 0: return c0 + f * (c1 - c0);
      case 1: return c1 + f * (c2 - c1);
      case 2: return c2 + f * (c3 - c2);
      default: return c3 + f * (c0 - c3);
    }
  };
  auto value = [&](double t) { return ev(xi, path(t), eta_sq); };
  return winding_of(path, value, 64);
}

namespace {

struct DiskMoments {
  int winding = 0;
  std::array<Complex, 4> power_sums{};  // of (root - center)/radius
};

DiskMoments moments_from_samples(const std::vector<Complex>& d) {
  const int n = int(d.size());
  DiskMoments out;
  double total = 0.0;
  std::vector<double> cumulative(n, 0.0);
  for (int j = 0; j + 1 < n; ++j) {
    total += std::arg(d[j + 1] / d[j]);
    cumulative[j + 1] = total;
  }
  total += std::arg(d[0] / d[n - 1]);
  const double w = total / (2.0 * kPi);
  const long rounded = std::lround(w);
  if (std::abs(w - double(rounded)) > 0.25)
    fail(ErrorCode::RootOnContour, "non-integer winding on disk boundary");
  out.winding = int(rounded);

  for (int k = 1; k <= 4; ++k) {
    Complex acc(0.0, 0.0);
    for (int j = 0; j < n; ++j) {
      const double th = 2.0 * kPi * j / n;
      const Complex logd(std::log(std::abs(d[j]) / std::abs(d[0])),
                         cumulative[j]);
      const Complex p = logd - Complex(0.0, out.winding * th);
      acc += std::exp(Complex(0.0, k * th)) * p;
    }
    out.power_sums[k - 1] = -(double(k) / n) * acc;
  }
  return out;
}

// Power sums of the zeros inside |lambda - center| < radius via the
// argument principle.  After peeling off the winding ramp the remaining
// log is periodic and smooth, so the uniform trapezoid sum converges
// spectrally; integrating z^k d(log D) by parts gives
//   s_k = -(k/N) sum_j e^{ik theta_j} P(theta_j),  P = log D - i w theta,
// which needs no derivative of D.  The sample count doubles (reusing
// earlier points) until consecutive moment sets agree, which catches the
// slow aliasing decay of roots sitting close to the boundary.
DiskMoments disk_moments(const std::function<Complex(Complex)>& value,
                         Complex center, double radius) {
  auto sample = [&](int j, int n) {
    const double th = 2.0 * kPi * j / n;
    return value(center + radius * std::exp(Complex(0.0, th)));
  };
  int n = 32;
  std::vector<Complex> d(n);
  for (int j = 0; j < n; ++j) d[j] = sample(j, n);
  bool have_prev = false;
  DiskMoments prev;
  for (;;) {
    double max_abs = 0.0;
    for (const Complex& v : d) max_abs = std::max(max_abs, std::abs(v));
    bool phase_ok = true;
    for (int j = 0; j < n; ++j) {
      if (std::abs(d[j]) < 1e-12 * max_abs)
        fail(ErrorCode::RootOnContour, "zero on the disk boundary");
      if (std::abs(std::arg(d[(j + 1) % n] / d[j])) > 1.2) phase_ok = false;
    }
    if (phase_ok) {
      const DiskMoments cur = moments_from_samples(d);
      if (have_prev && prev.winding == cur.winding) {
        double drift = 0.0;
        for (int k = 0; k < 4; ++k)
          drift = std::max(drift,
                           std::abs(cur.power_sums[k] - prev.power_sums[k]));
        if (drift <= 1e-9) return cur;
      }
      prev = cur;
      have_prev = true;
    } else {
      have_prev = false;
    }
    if (n >= 4096)
      fail(ErrorCode::RootOnContour,
           "boundary data never stabilized on the disk");
    std::vector<Complex> doubled(2 * n);
    for (int j = 0; j < n; ++j) {
      doubled[2 * j] = d[j];
      doubled[2 * j + 1] = sample(2 * j + 1, 2 * n);
    }
    d = std::move(doubled);
    n *= 2;
  }
}

std::array<Complex, 4> roots_from_power_sums(
    const std::array<Complex, 4>& s) {
  // Newton's identities, then the companion matrix of the monic quartic
  const Complex e1 = s[0];
  const Complex e2 = (e1 * s[0] - s[1]) / 2.0;
  const Complex e3 = (e2 * s[0] - e1 * s[1] + s[2]) / 3.0;
  const Complex e4 = (e3 * s[0] - e2 * s[1] + e1 * s[2] - s[3]) / 4.0;
  Eigen::Matrix4cd companion = Eigen::Matrix4cd::Zero();
  companion(1, 0) = companion(2, 1) = companion(3, 2) = 1.0;
  companion(0, 3) = -e4;
  companion(1, 3) = e3;
  companion(2, 3) = -e2;
  companion(3, 3) = e1;
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> solver(companion);
  std::array<Complex, 4> roots;
  for (int i = 0; i < 4; ++i) roots[i] = solver.eigenvalues()[i];
  return roots;
}

// Capture exactly four zeros in a disk around the origin, then shrink the
// disk onto the root cluster so clustered roots are resolved to the
// quadrature noise of the small disk rather than of the capture disk.
std::array<Complex, 4> critical_roots(
    const std::function<Complex(Complex)>& value, double radius_hint) {
  Complex center(0.0, 0.0);
  double radius = radius_hint > 0.0 ? radius_hint : 0.05;
  DiskMoments m;
  bool captured = false;
  for (int attempt = 0; attempt < 24 && !captured; ++attempt) {
    try {
      m = disk_moments(value, center, radius);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::RootOnContour) throw;
      radius *= 1.131;
      continue;
    }
    if (m.winding == 4)
      captured = true;
    else if (m.winding > 4)
      radius *= 0.6;
    else
      radius *= 1.7;
  }
  if (!captured)
    fail(ErrorCode::DiskCaptureFailed,
         "no disk isolating exactly four spectral curves");

  std::array<Complex, 4> roots;
  for (int iter = 0; iter < 8; ++iter) {
    auto z = roots_from_power_sums(m.power_sums);
    Complex mean(0.0, 0.0);
    for (const auto& zj : z) mean += zj;
    mean /= 4.0;
    double spread = 0.0;
    for (int i = 0; i < 4; ++i) {
      roots[i] = center + radius * z[i];
      spread = std::max(spread, std::abs(z[i] - mean) * radius);
    }
    const Complex new_center = center + radius * mean;
    const double new_radius = std::max(5.0 * spread, 3e-7);
    if (new_radius >= 0.35 * radius) break;
    DiskMoments refined;
    try {
      refined = disk_moments(value, new_center, new_radius);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::RootOnContour) throw;
      break;
    }
    if (refined.winding != 4) break;
    center = new_center;
    radius = new_radius;
    m = refined;
  }
  return roots;
}

std::array<Complex, 4> match_to_previous(const std::array<Complex, 4>& roots,
                                         const std::array<Complex, 4>& prev) {
  std::array<int, 4> perm = {0, 1, 2, 3};
  std::array<int, 4> best = perm;
  double best_cost = std::numeric_limits<double>::infinity();
  std::sort(perm.begin(), perm.end());
  do {
    double cost = 0.0;
    for (int i = 0; i < 4; ++i) cost += std::abs(roots[perm[i]] - prev[i]);
    if (cost < best_cost) {
      best_cost = cost;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::array<Complex, 4> out;
  for (int i = 0; i < 4; ++i) out[i] = roots[best[i]];
  return out;
}

}  // namespace

std::vector<std::array<Complex, 4>> eigencurves(
    const EvansFunction& ev, const std::vector<double>& xi_list,
    double radius_hint) {
  std::vector<std::array<Complex, 4>> out;
  out.reserve(xi_list.size());
  for (std::size_t i = 0; i < xi_list.size(); ++i) {
    const double xi = xi_list[i];
    if (xi == 0.0) {
      // The phase and translation generators force a quadruple root at the
      // origin for every wave.  Root extraction cannot see this: monodromy
      // noise eps splits a fourth-order root at the eps^(1/3) scale, so the
      // degenerate query is answered by the symmetry instead.
      out.push_back({Complex(0.0, 0.0), Complex(0.0, 0.0), Complex(0.0, 0.0),
                     Complex(0.0, 0.0)});
      continue;
    }
    auto value = [&](Complex lambda) { return ev(xi, lambda, 0.0); };
    auto roots = critical_roots(value, radius_hint);
    if (out.empty()) {
      std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) {
        if (a.imag() != b.imag()) return a.imag() < b.imag();
        return a.real() < b.real();
      });
    } else {
      roots = match_to_previous(roots, out.back());
    }
    out.push_back(roots);
  }
  return out;
}

double calibrate_r0(const EvansFunction& ev, double lambda_max) {
  const int n = 80;
  const double lo = 0.05;
  double last_change = -1.0;
  double d0_prev = 0.0, dpi_prev = 0.0;
  bool prev_reliable = false;
  for (int j = 0; j < n; ++j) {
    const double lam =
        lo * std::pow(lambda_max / lo, double(j) / double(n - 1));
    const MonodromyResult m = ev.monodromy(Complex(lam, 0.0), 0.0);
    const double d0 = ev.evans(m.R, 0.0).real();
    const double dpi = ev.evans(m.R, kPi).real();
    // The determinant carries absolute rounding of order eps |R|^4; once
    // the fast Floquet modes dwarf that, the sign is meaningless and the
    // scan stops trusting it.
    const double log_noise = 4.0 * std::log10(m.R.norm()) - 13.0;
    const bool reliable =
        std::log10(std::min(std::abs(d0), std::abs(dpi)) + 1e-300) > log_noise;
    if (j > 0 && prev_reliable && reliable &&
        (d0 * d0_prev < 0.0 || dpi * dpi_prev < 0.0))
      last_change = lam;
    d0_prev = d0;
    dpi_prev = dpi;
    prev_reliable = reliable;
  }
  return last_change > 0.0 ? 2.0 * last_change : 10.0;
}

}  // namespace wavestab
