#include "wavestab/modulation.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "wavestab/errors.hpp"

namespace wavestab {

namespace {

Eigen::Matrix4d a0_matrix() {
  Eigen::Matrix4d a = Eigen::Matrix4d::Identity();
  a(2, 2) = -1.0;
  a(3, 3) = -1.0;
  return a;
}

Eigen::Matrix4d b0_matrix() {
  Eigen::Matrix4d b = Eigen::Matrix4d::Zero();
  b(0, 1) = b(1, 0) = b(2, 3) = b(3, 2) = 1.0;
  return b;
}

Eigen::Matrix4d c0_matrix(double s1, double s2, double s3) {
  Eigen::Matrix4d c = Eigen::Matrix4d::Zero();
  c(1, 1) = -s3;
  c(1, 2) = s2;
  c(2, 1) = -s2;
  c(2, 2) = s1;
  return c;
}

// Row permutations conjugating the (A0, B0, C0) pencil into the
// (Sigma_t, I, Sigma_y) one; both have determinant +1.
Eigen::Matrix4d left_permutation() {
  Eigen::Matrix4d p = Eigen::Matrix4d::Zero();
  p(0, 3) = p(1, 0) = p(2, 2) = p(3, 1) = 1.0;
  return p;
}

Eigen::Matrix4d right_permutation() {
  Eigen::Matrix4d p = Eigen::Matrix4d::Zero();
  p(0, 3) = p(1, 1) = p(2, 0) = p(3, 2) = 1.0;
  return p;
}

Complex ipow(Complex x, int k) {
  Complex r(1.0, 0.0);
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

bool speed_order(const Complex& a, const Complex& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

// Pencil eigenvalues a of B0 v = a (k_x A0 hess) v, sorted; false when the
// left side is singular.
bool pencil_eigenvalues(const Eigen::Matrix4d& hess, double k_x,
                        std::array<Complex, 4>& out) {
  const Eigen::Matrix4d lhs = k_x * a0_matrix() * hess;
  Eigen::FullPivLU<Eigen::Matrix4d> lu(lhs);
  if (!lu.isInvertible()) {
    out.fill(Complex(std::numeric_limits<double>::quiet_NaN(), 0.0));
    return false;
  }
  const Eigen::Matrix4d m = lu.solve(b0_matrix());
  Eigen::EigenSolver<Eigen::Matrix4d> es(m);
  for (int i = 0; i < 4; ++i) out[i] = es.eigenvalues()(i);
  std::sort(out.begin(), out.end(), speed_order);
  return true;
}

// Roots of sum_k c[k] lambda^k with leading near-zeros trimmed.
std::vector<Complex> poly_roots(const std::array<Complex, 5>& c) {
  double scale = 0.0;
  for (const Complex& v : c) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return {};
  int deg = 4;
  while (deg > 0 && std::abs(c[deg]) <= 1e-13 * scale) --deg;
  if (deg == 0) return {};
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -c[i] / c[deg];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(companion);
  std::vector<Complex> roots(deg);
  for (int i = 0; i < deg; ++i) roots[i] = es.eigenvalues()(i);
  return roots;
}

struct DirectionSample {
  double xi = 0.0;
  double zeta = 0.0;
  Complex top{0.0, 0.0};  // root with the largest real part
  bool unstable = false;
};

DirectionSample sample_direction(const ModulationData& data, double theta) {
  DirectionSample s;
  s.xi = std::cos(theta);
  s.zeta = std::sin(theta);
  const std::vector<Complex> roots = direction_roots(data, s.xi, s.zeta);
  s.top = Complex(-std::numeric_limits<double>::infinity(), 0.0);
  for (const Complex& r : roots) {
    if (r.real() > s.top.real()) s.top = r;
  }
  if (roots.empty()) s.top = Complex(0.0, 0.0);
  s.unstable = s.top.real() > kTransverseRealTol * (1.0 + std::abs(s.top));
  return s;
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Unstable: return "UNSTABLE";
    case Verdict::StableCandidate: return "STABLE_CANDIDATE";
    case Verdict::Inconclusive: return "INCONCLUSIVE";
    default: return "NOT_APPLICABLE";
  }
}

double ModulationData::delta_at(int m, int n, int p) const {
  const auto it = delta.find({m, n, p});
  return it == delta.end() ? 0.0 : it->second;
}

Complex ModulationData::delta0(Complex lambda, Complex z, Complex zeta) const {
  Complex value(0.0, 0.0);
  for (const auto& [key, coeff] : delta) {
    value += coeff * ipow(lambda, key[0] - key[2]) * ipow(z, key[1]) *
             ipow(zeta, 2 * key[2]);
  }
  return value;
}

DeltaMap delta_from_pencil(const Eigen::Matrix4d& T, const Eigen::Matrix4d& E,
                           const Eigen::Matrix4d& Y) {
  constexpr std::array<double, 5> z_nodes = {-2.0, -1.0, 0.0, 1.0, 2.0};
  constexpr std::array<double, 3> zeta_nodes = {0.0, 1.0, 2.0};

  // P(1, z, zeta) on the tensor grid.
  Eigen::Matrix<double, 5, 3> samples;
  for (int j = 0; j < 5; ++j) {
    for (int l = 0; l < 3; ++l) {
      const double w = zeta_nodes[l] * zeta_nodes[l];
      samples(j, l) = (T - z_nodes[j] * E + w * Y).determinant();
    }
  }

  // Per z node: coefficients of 1, zeta^2, zeta^4 (Y enters through at most
  // two columns of the determinant, so the zeta degree caps at 4).
  Eigen::Matrix3d w_vand;
  for (int l = 0; l < 3; ++l) {
    const double w = zeta_nodes[l] * zeta_nodes[l];
    w_vand(l, 0) = 1.0;
    w_vand(l, 1) = w;
    w_vand(l, 2) = w * w;
  }
  const Eigen::FullPivLU<Eigen::Matrix3d> w_lu(w_vand);
  Eigen::Matrix<double, 5, 3> layers;
  for (int j = 0; j < 5; ++j) {
    layers.row(j) = w_lu.solve(samples.row(j).transpose()).transpose();
  }

  // Per zeta layer: coefficients of z^0..z^4. The lambda exponent of the
  // (b, c) monomial is pinned to 8 - 2c - b by homogeneity.
  Eigen::Matrix<double, 5, 5> z_vand;
  for (int j = 0; j < 5; ++j) {
    double zp = 1.0;
    for (int b = 0; b < 5; ++b) {
      z_vand(j, b) = zp;
      zp *= z_nodes[j];
    }
  }
  const Eigen::FullPivLU<Eigen::Matrix<double, 5, 5>> z_lu(z_vand);
  Eigen::Matrix<double, 5, 3> coeff;
  for (int c = 0; c < 3; ++c) coeff.col(c) = z_lu.solve(layers.col(c));

  const double scale = coeff.cwiseAbs().maxCoeff();
  DeltaMap delta;
  for (int c = 0; c < 3; ++c) {
    for (int b = 0; b < 5; ++b) {
      if (2 * c + b > 4) {
        if (std::abs(coeff(b, c)) > 1e-9 * scale) {
          fail(ErrorCode::SingularityNotSpurious,
               "pencil determinant is not divisible by lambda^4: residue " +
                   std::to_string(coeff(b, c)) + " at z^" + std::to_string(b) +
                   " zeta^" + std::to_string(2 * c));
        }
      } else {
        delta[{4 - c - b, b, c}] = coeff(b, c);
      }
    }
  }
  return delta;
}

ModulationData assemble(const Eigen::Matrix4d& hess, const Averages& averages,
                        double k_x) {
  const double asym = (hess - hess.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-8 * (1.0 + hess.cwiseAbs().maxCoeff())) {
    fail(ErrorCode::ConfigError, "assemble: hessian must be symmetric");
  }
  ModulationData data;
  data.A0 = a0_matrix();
  data.B0 = b0_matrix();
  data.C0 = c0_matrix(averages.sigma1, averages.sigma2, averages.sigma3);
  const Eigen::Matrix4d pl = left_permutation();
  const Eigen::Matrix4d pr = right_permutation();
  data.Sigma_t = pl * (data.A0 * hess) * pr;
  data.Sigma_y = pl * data.C0 * pr;
  data.delta = delta_from_pencil(data.A0 * hess, data.B0, data.C0);
  pencil_eigenvalues(hess, k_x, data.char_speeds);
  return data;
}

SidebandReport characteristic_speeds(const Eigen::Matrix4d& hess, double k_x,
                                     double c_x) {
  std::array<Complex, 4> a{};
  if (!pencil_eigenvalues(hess, k_x, a)) {
    fail(ErrorCode::SingularHessian,
         "characteristic pencil: k_x * A0 * hess is singular");
  }
  SidebandReport report;
  report.weakly_hyperbolic = true;
  for (int i = 0; i < 4; ++i) {
    if (std::abs(a[i].imag()) > 1e-8 * (1.0 + std::abs(a[i]))) {
      report.weakly_hyperbolic = false;
    }
    report.char_speeds[i] = a[i] - c_x;
  }
  report.verdict = report.weakly_hyperbolic ? Verdict::StableCandidate
                                            : Verdict::Unstable;
  return report;
}

CoperiodicReport coperiodic_criterion(const Eigen::Matrix4d& hess) {
  Eigen::FullPivLU<Eigen::Matrix4d> lu(hess);
  if (!lu.isInvertible()) {
    fail(ErrorCode::SingularHessian, "co-periodic criterion: singular hessian");
  }
  CoperiodicReport report;
  report.det = hess.determinant();
  report.det_sign = report.det > 0.0 ? 1 : -1;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(hess);
  report.negative_signature = 0;
  for (int i = 0; i < 4; ++i) {
    if (es.eigenvalues()(i) < 0.0) ++report.negative_signature;
  }
  if (report.det < 0.0) {
    report.verdict = Verdict::Unstable;
  } else if (report.negative_signature == 2 && hess(0, 0) != 0.0) {
    report.verdict = Verdict::StableCandidate;
  } else {
    report.verdict = Verdict::Inconclusive;
  }
  return report;
}

std::vector<Complex> direction_roots(const ModulationData& data, double xi,
                                     double zeta) {
  const Complex iz(0.0, xi);
  const double z2 = zeta * zeta;
  std::array<Complex, 5> c;
  c[4] = data.delta_at(4, 0, 0);
  c[3] = data.delta_at(3, 1, 0) * iz;
  c[2] = data.delta_at(2, 2, 0) * iz * iz + data.delta_at(3, 0, 1) * z2;
  c[1] = data.delta_at(1, 3, 0) * ipow(iz, 3) +
         data.delta_at(2, 1, 1) * iz * z2;
  c[0] = data.delta_at(0, 4, 0) * ipow(iz, 4) +
         data.delta_at(1, 2, 1) * iz * iz * z2 +
         data.delta_at(2, 0, 2) * z2 * z2;
  return poly_roots(c);
}

TransverseReport transverse_criteria(const ModulationData& data,
                                     int directions) {
  if (directions < 4) {
    fail(ErrorCode::ConfigError, "transverse scan needs at least 4 directions");
  }
  TransverseReport report;

  const double d400 = data.delta_at(4, 0, 0);
  const double d301 = data.delta_at(3, 0, 1);
  const double d202 = data.delta_at(2, 0, 2);
  report.xi0.delta400 = d400;
  report.xi0.delta301 = d301;
  report.xi0.delta202 = d202;
  report.xi0.inequalities_hold =
      d400 >= 0.0 && d202 >= 0.0 && d301 >= 2.0 * std::sqrt(std::abs(d400 * d202));
  report.xi0.verdict = report.xi0.inequalities_hold ? Verdict::StableCandidate
                                                    : Verdict::Unstable;

  const double h = M_PI / directions;
  std::vector<DirectionSample> base(directions);
  for (int k = 0; k < directions; ++k) {
    base[k] = sample_direction(data, k * h);
  }
  std::vector<DirectionSample> all = base;
  // One level of 4x refinement across every stability flag change; the scan
  // is pi-periodic, so index 0 neighbors index directions - 1.
  for (int k = 0; k < directions; ++k) {
    const int prev = (k + directions - 1) % directions;
    if (base[k].unstable == base[prev].unstable) continue;
    const double left = (k == 0) ? -h : (k - 1) * h;
    for (int j = 1; j < 4; ++j) {
      all.push_back(sample_direction(data, left + j * h / 4.0));
    }
  }

  report.full.max_re = -std::numeric_limits<double>::infinity();
  for (const DirectionSample& s : all) {
    if (s.top.real() > report.full.max_re) {
      report.full.max_re = s.top.real();
      report.full.worst = {s.xi, s.zeta, s.top};
    }
    if (s.unstable) {
      report.full.unstable_directions.push_back({s.xi, s.zeta, s.top});
    }
  }
  report.full.verdict = report.full.unstable_directions.empty()
                            ? Verdict::StableCandidate
                            : Verdict::Unstable;
  return report;
}

SplittingReport splitting_criteria(const ModulationData& data,
                                   const Eigen::Matrix4d& hess,
                                   double /*k_x*/, double cluster_tol) {
  SplittingReport report;
  const double d121 = data.delta_at(1, 2, 1);
  const double d211 = data.delta_at(2, 1, 1);
  const double d301 = data.delta_at(3, 0, 1);
  const double d310 = data.delta_at(3, 1, 0);
  const double d400 = data.delta_at(4, 0, 0);
  const double d220 = data.delta_at(2, 2, 0);
  const double d202 = data.delta_at(2, 0, 2);

  Eigen::FullPivLU<Eigen::Matrix4d> lu(hess);
  if (lu.isInvertible()) {
    // det Sigma_t = det hess, so Sigma_t is invertible too.
    Eigen::EigenSolver<Eigen::Matrix4d> es(data.Sigma_t.inverse());
    std::array<Complex, 4> omega{};
    for (int i = 0; i < 4; ++i) omega[i] = es.eigenvalues()(i);
    std::sort(omega.begin(), omega.end(), speed_order);

    bool any_cluster = false;
    for (int i = 0, j = 0; i < 4; i = j) {
      j = i + 1;
      while (j < 4 && std::abs(omega[j] - omega[j - 1]) <=
                          cluster_tol * (1.0 + std::abs(omega[i]))) {
        ++j;
      }
      const int r0 = j - i;
      Complex mean(0.0, 0.0);
      for (int t = i; t < j; ++t) mean += omega[t];
      mean /= static_cast<double>(r0);
      const bool real_cluster =
          std::abs(mean.imag()) <= 1e-8 * (1.0 + std::abs(mean));
      if (r0 < 2 || !real_cluster) continue;
      const double w0 = mean.real();
      const double num = d121 + d211 * w0 + d301 * w0 * w0;
      const double num_scale =
          std::abs(d121) + std::abs(d211 * w0) + std::abs(d301 * w0 * w0);
      double den = 0.0;
      double den_scale = 0.0;
      if (r0 == 2) {
        den = 6.0 * d400 * w0 * w0 + 3.0 * d310 * w0 + d220;
        den_scale = std::abs(6.0 * d400 * w0 * w0) +
                    std::abs(3.0 * d310 * w0) + std::abs(d220);
      } else if (r0 == 3) {
        den = 4.0 * d400 * w0 + d310;
        den_scale = std::abs(4.0 * d400 * w0) + std::abs(d310);
      } else {
        den = d400;
        den_scale = std::abs(d400);
      }
      const bool num_nonzero =
          std::abs(num) > 1e-9 * std::max(num_scale, 1e-300);
      const bool den_nonzero =
          std::abs(den) > 1e-9 * std::max(den_scale, 1e-300);
      const bool triggers = (r0 >= 3)
                                ? num_nonzero
                                : (num_nonzero && den_nonzero && num / den < 0.0);
      if (!any_cluster || triggers) {
        report.eta0.omega0 = w0;
        report.eta0.multiplicity = r0;
        report.eta0.numerator = num;
        report.eta0.denominator = den;
        report.eta0.verdict =
            triggers ? Verdict::Unstable : Verdict::Inconclusive;
      }
      any_cluster = true;
      if (triggers) break;
    }
    if (!any_cluster) report.eta0.verdict = Verdict::NotApplicable;
  }

  const double gap = d301 * d301 - 4.0 * d400 * d202;
  const double gap_scale = std::max(d301 * d301, std::abs(4.0 * d400 * d202));
  report.xi0.discriminant_gap = gap;
  report.xi0.quantity = d211 * d400 - 0.5 * d310 * d301;
  if (std::abs(d400) > 0.0 && std::abs(gap) <= cluster_tol * std::max(gap_scale, 1e-300)) {
    const double q_scale =
        std::abs(d211 * d400) + 0.5 * std::abs(d310 * d301);
    report.xi0.verdict =
        std::abs(report.xi0.quantity) > 1e-9 * std::max(q_scale, 1e-300)
            ? Verdict::Unstable
            : Verdict::Inconclusive;
  }
  return report;
}

StabilityReport stability_report(const ModulationData& data,
                                 const Eigen::Matrix4d& hess, double k_x,
                                 double c_x) {
  StabilityReport report;
  report.coperiodic = coperiodic_criterion(hess);
  report.sideband = characteristic_speeds(hess, k_x, c_x);
  const TransverseReport transverse = transverse_criteria(data);
  report.transverse_xi0 = transverse.xi0;
  report.transverse_full = transverse.full;
  report.splitting = splitting_criteria(data, hess, k_x);
  return report;
}

StabilityReport stability_report(const Eigen::Matrix4d& hess,
                                 const Averages& averages, double k_x,
                                 double c_x) {
  return stability_report(assemble(hess, averages, k_x), hess, k_x, c_x);
}

}  // namespace wavestab
