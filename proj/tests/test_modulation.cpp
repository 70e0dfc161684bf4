#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "fixtures.hpp"
#include "wavestab/errors.hpp"
#include "wavestab/modulation.hpp"
#include "wavestab/spectral.hpp"

using namespace wavestab;

namespace {

Eigen::Matrix4d mat4(const std::array<std::array<double, 4>, 4>& rows) {
  Eigen::Matrix4d m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = rows[i][j];
  return m;
}

Averages sigmas(double s1, double s2, double s3) {
  Averages a;
  a.sigma1 = s1;
  a.sigma2 = s2;
  a.sigma3 = s3;
  return a;
}

ModulationData ref_data() {
  return assemble(mat4(fx::ref::hess),
                  sigmas(fx::ref::sigma[0], fx::ref::sigma[1], fx::ref::sigma[2]),
                  1.0 / fx::ref::X_x);
}

std::array<std::complex<double>, 4> by_imag(std::array<Complex, 4> s) {
  std::sort(s.begin(), s.end(), [](Complex a, Complex b) {
    if (a.imag() != b.imag()) return a.imag() < b.imag();
    return a.real() < b.real();
  });
  return s;
}

}  // namespace

TEST_CASE("pencil coefficients match the integer cofactor oracle") {
  const ModulationData data =
      assemble(mat4(fx::pencil_int::H),
               sigmas(fx::pencil_int::s1, fx::pencil_int::s2, fx::pencil_int::s3),
               1.0);
  CHECK(data.delta.size() == 9);
  auto close = [&](int m, int n, int p, double want) {
    CHECK(std::abs(data.delta_at(m, n, p) - want) <=
          1e-9 * std::max(1.0, std::abs(want)));
  };
  close(0, 4, 0, fx::pencil_int::d040);
  close(1, 2, 1, fx::pencil_int::d121);
  close(1, 3, 0, fx::pencil_int::d130);
  close(2, 0, 2, fx::pencil_int::d202);
  close(2, 1, 1, fx::pencil_int::d211);
  close(2, 2, 0, fx::pencil_int::d220);
  close(3, 0, 1, fx::pencil_int::d301);
  close(3, 1, 0, fx::pencil_int::d310);
  close(4, 0, 0, fx::pencil_int::d400);
}

TEST_CASE("reference wave coefficients match the frozen table") {
  const ModulationData data = ref_data();
  auto rel = [&](int m, int n, int p, double want) {
    CHECK(data.delta_at(m, n, p) == doctest::Approx(want).epsilon(1e-10));
  };
  rel(0, 4, 0, fx::ref::d040);
  rel(1, 2, 1, fx::ref::d121);
  rel(2, 0, 2, fx::ref::d202);
  rel(2, 2, 0, fx::ref::d220);
  rel(3, 0, 1, fx::ref::d301);
  rel(4, 0, 0, fx::ref::d400);
  // sigma2 = 0 and the checkerboard Hessian kill every odd-n coefficient.
  const double scale = std::abs(fx::ref::d202);
  CHECK(std::abs(data.delta_at(3, 1, 0)) <= 1e-12 * scale);
  CHECK(std::abs(data.delta_at(2, 1, 1)) <= 1e-12 * scale);
  CHECK(std::abs(data.delta_at(1, 3, 0)) <= 1e-12 * scale);
}

TEST_CASE("assembled matrices satisfy the permutation identities") {
  const Eigen::Matrix4d hess = mat4(fx::ref::hess);
  const ModulationData data = ref_data();

  CHECK(data.A0.diagonal().isApprox(Eigen::Vector4d(1, 1, -1, -1)));
  CHECK(data.B0.determinant() == doctest::Approx(1.0));
  // REF has sigma2 = 0, so the off-diagonal C0 entries vanish.
  CHECK(data.C0(1, 2) == 0.0);
  CHECK(data.C0(2, 1) == 0.0);
  CHECK(data.C0(1, 1) == -fx::ref::sigma[2]);
  CHECK(data.C0(2, 2) == fx::ref::sigma[0]);

  // Sigma_t is a signed row/column shuffle of the Hessian: row map
  // (3, 0, 2, 1) with signs (-, +, -, +), column map (2, 1, 3, 0).
  const int rmap[4] = {3, 0, 2, 1};
  const double sign[4] = {-1.0, 1.0, -1.0, 1.0};
  const int cmap[4] = {2, 1, 3, 0};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      CHECK(data.Sigma_t(i, j) == sign[i] * hess(rmap[i], cmap[j]));
    }
  }

  // Sigma_y: rows 0, 1 and columns 2, 3 vanish; the live block is
  // [[sigma1, -sigma2], [sigma2, -sigma3]].
  CHECK(data.Sigma_y.topRows(2).cwiseAbs().maxCoeff() == 0.0);
  CHECK(data.Sigma_y.rightCols(2).cwiseAbs().maxCoeff() == 0.0);
  CHECK(data.Sigma_y(2, 0) == fx::ref::sigma[0]);
  CHECK(data.Sigma_y(2, 1) == -fx::ref::sigma[1]);
  CHECK(data.Sigma_y(3, 0) == fx::ref::sigma[1]);
  CHECK(data.Sigma_y(3, 1) == -fx::ref::sigma[2]);

  // Same polynomial from both pencil forms.
  const DeltaMap direct = delta_from_pencil(data.A0 * hess, data.B0, data.C0);
  const DeltaMap conjugated = delta_from_pencil(
      data.Sigma_t, Eigen::Matrix4d::Identity(), data.Sigma_y);
  for (const auto& [key, value] : direct) {
    const auto it = conjugated.find(key);
    REQUIRE(it != conjugated.end());
    CHECK(std::abs(it->second - value) <= 1e-12 * std::max(1.0, std::abs(value)));
  }

  CHECK_THROWS_WITH_AS(
      assemble(hess + Eigen::Matrix4d{{0, 1, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}},
               sigmas(1, 0, 1), 1.0),
      doctest::Contains("symmetric"), Error);
}

TEST_CASE("dispersion polynomial symmetries") {
  const ModulationData data = ref_data();
  CHECK(data.delta_at(0, 4, 0) == doctest::Approx(1.0).epsilon(1e-10));

  std::mt19937 gen(20240815);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int k = 0; k < 20; ++k) {
    const Complex lambda(u(gen), u(gen));
    const Complex z(u(gen), u(gen));
    const Complex zeta(u(gen), u(gen));
    const Complex value = data.delta0(lambda, z, zeta);
    const double scale = 1.0 + std::abs(value);

    CHECK(std::abs(data.delta0(-lambda, -z, zeta) - value) <= 1e-10 * scale);
    CHECK(std::abs(data.delta0(lambda, z, -zeta) - value) <= 1e-10 * scale);
    CHECK(std::abs(data.delta0(std::conj(lambda), std::conj(z), std::conj(zeta)) -
                   std::conj(value)) <= 1e-10 * scale);
    const Complex eps(u(gen), u(gen));
    CHECK(std::abs(data.delta0(eps * lambda, eps * z, eps * zeta) -
                   eps * eps * eps * eps * value) <=
          1e-10 * (1.0 + std::abs(eps * eps * eps * eps * value)));
  }
}

TEST_CASE("characteristic speeds match the frozen eigenvalues") {
  // Elliptic focusing wave: two conjugate purely imaginary pairs.
  const auto ref = characteristic_speeds(mat4(fx::ref::hess),
                                         1.0 / fx::ref::X_x, fx::ref::c_x);
  CHECK_FALSE(ref.weakly_hyperbolic);
  CHECK(ref.verdict == Verdict::Unstable);
  const auto rs = by_imag(ref.char_speeds);
  CHECK(rs[0].imag() == doctest::Approx(-fx::ref::speed_im_large).epsilon(1e-10));
  CHECK(rs[1].imag() == doctest::Approx(-fx::ref::speed_im_small).epsilon(1e-10));
  CHECK(rs[2].imag() == doctest::Approx(fx::ref::speed_im_small).epsilon(1e-10));
  CHECK(rs[3].imag() == doctest::Approx(fx::ref::speed_im_large).epsilon(1e-10));
  for (const auto& s : rs) {
    CHECK(std::abs(s.real()) <= 1e-8 * (1.0 + std::abs(s)));
  }

  const auto small = characteristic_speeds(mat4(fx::ref_small::hess),
                                           1.0 / fx::ref_small::X_x, 0.0);
  CHECK_FALSE(small.weakly_hyperbolic);
  const auto ss = by_imag(small.char_speeds);
  CHECK(ss[3].imag() ==
        doctest::Approx(fx::ref_small::speed_im_large).epsilon(1e-9));
  CHECK(ss[2].imag() ==
        doctest::Approx(fx::ref_small::speed_im_small).epsilon(1e-9));

  // Defocusing members are weakly hyperbolic with all-real speeds.
  auto check_real = [](const std::array<std::array<double, 4>, 4>& hess,
                       double period, const std::array<double, 4>& want) {
    const auto rep = characteristic_speeds(mat4(hess), 1.0 / period, 0.0);
    CHECK(rep.weakly_hyperbolic);
    CHECK(rep.verdict == Verdict::StableCandidate);
    std::array<double, 4> got;
    for (int i = 0; i < 4; ++i) got[i] = rep.char_speeds[i].real();
    std::array<double, 4> expect = want;
    std::sort(expect.begin(), expect.end());
    for (int i = 0; i < 4; ++i) {
      CHECK(got[i] == doctest::Approx(expect[i]).epsilon(1e-8));
    }
  };
  check_real(fx::refd::harmonic_member::hess, fx::refd::harmonic_member::X_x,
             fx::refd::harmonic_member::speeds);
  check_real(fx::refd::large_period::hess, fx::refd::large_period::X_x,
             fx::refd::large_period::speeds);

  CHECK_THROWS_WITH_AS(
      characteristic_speeds(Eigen::Vector4d(1, 1, 1, 0).asDiagonal(), 1.0, 0.0),
      doctest::Contains("SingularHessian"), Error);
}

TEST_CASE("characteristic speeds are scale invariant") {
  const Eigen::Matrix4d hess = mat4(fx::refd::harmonic_member::hess);
  const double kx = 1.0 / fx::refd::harmonic_member::X_x;
  const double s = 3.7;
  const auto a = characteristic_speeds(hess, kx, 0.0);
  const auto b = characteristic_speeds(s * hess, kx / s, 0.0);
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(a.char_speeds[i] - b.char_speeds[i]) <=
          1e-12 * (1.0 + std::abs(a.char_speeds[i])));
  }
}

TEST_CASE("coperiodic criterion verdicts") {
  const auto small = coperiodic_criterion(mat4(fx::ref_small::hess));
  CHECK(small.det == doctest::Approx(fx::ref_small::hess_det).epsilon(1e-9));
  CHECK(small.det_sign == 1);
  CHECK(small.negative_signature == 2);
  CHECK(small.verdict == Verdict::StableCandidate);

  const auto large = coperiodic_criterion(mat4(fx::refd::large_period::hess));
  CHECK(large.det ==
        doctest::Approx(fx::refd::large_period::hess_det).epsilon(1e-7));
  CHECK(large.negative_signature == 2);
  CHECK(large.verdict == Verdict::StableCandidate);

  const auto id = coperiodic_criterion(Eigen::Matrix4d::Identity());
  CHECK(id.negative_signature == 0);
  CHECK(id.verdict == Verdict::Inconclusive);

  const auto odd = coperiodic_criterion(Eigen::Vector4d(-1, 1, 1, 1).asDiagonal());
  CHECK(odd.det_sign == -1);
  CHECK(odd.verdict == Verdict::Unstable);

  CHECK_THROWS_WITH_AS(
      coperiodic_criterion(Eigen::Vector4d(1, 2, 3, 0).asDiagonal()),
      doctest::Contains("SingularHessian"), Error);
}

TEST_CASE("transverse criteria flag the reference wave") {
  const ModulationData data = ref_data();
  const TransverseReport report = transverse_criteria(data);

  // delta(2,0,2) < 0 already violates the xi = 0 necessary conditions.
  CHECK(report.xi0.delta202 == doctest::Approx(fx::ref::d202).epsilon(1e-10));
  CHECK_FALSE(report.xi0.inequalities_hold);
  CHECK(report.xi0.verdict == Verdict::Unstable);

  CHECK(report.full.verdict == Verdict::Unstable);
  REQUIRE(!report.full.unstable_directions.empty());

  // The scan must pick up a genuinely transverse witness.
  bool transverse_witness = false;
  for (const auto& w : report.full.unstable_directions) {
    if (std::abs(w.zeta) > 0.5 && w.lambda.real() > 1e-3) transverse_witness = true;
  }
  CHECK(transverse_witness);

  // Closed form of the worst purely transverse root: the biquadratic
  // delta400 l^4 + delta301 l^2 + delta202 at (xi, zeta) = (0, 1).
  const double lam_sq =
      (-fx::ref::d301 +
       std::sqrt(fx::ref::d301 * fx::ref::d301 - 4.0 * fx::ref::d400 * fx::ref::d202)) /
      (2.0 * fx::ref::d400);
  const double lam_ref = std::sqrt(lam_sq);
  const auto roots = direction_roots(data, 0.0, 1.0);
  double top = 0.0;
  for (const auto& r : roots) top = std::max(top, r.real());
  CHECK(top == doctest::Approx(lam_ref).epsilon(1e-10));
  CHECK(report.full.max_re >= lam_ref - 1e-6);
}

TEST_CASE("quartic with only even axis coefficients is unstable off axis") {
  // Delta0(i w, i xi, zeta) = w^4 + xi^4: real roots only on the zeta axis,
  // yet the xi = 0 inequalities all hold. The full scan must catch it.
  ModulationData data;
  data.delta[{4, 0, 0}] = 1.0;
  data.delta[{0, 4, 0}] = 1.0;
  const TransverseReport report = transverse_criteria(data);
  CHECK(report.xi0.inequalities_hold);
  CHECK(report.xi0.verdict == Verdict::StableCandidate);
  CHECK(report.full.verdict == Verdict::Unstable);
  CHECK(report.full.max_re == doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));
  CHECK(report.full.worst.xi == 1.0);
  CHECK(report.full.worst.zeta == 0.0);
}

TEST_CASE("splitting propositions: reference wave is out of scope") {
  const ModulationData data = ref_data();
  const SplittingReport rep =
      splitting_criteria(data, mat4(fx::ref::hess), 1.0 / fx::ref::X_x);
  // Sigma_t^{-1} has two conjugate non-real pairs: no real multiple root.
  CHECK(rep.eta0.verdict == Verdict::NotApplicable);
  // delta301^2 differs from 4 delta400 delta202 by a wide margin.
  CHECK(rep.xi0.verdict == Verdict::NotApplicable);
  CHECK(std::abs(rep.xi0.discriminant_gap) > 100.0);
}

TEST_CASE("splitting eta0: distinct real speeds are not applicable") {
  const ModulationData data =
      assemble(mat4(fx::refd::harmonic_member::hess), sigmas(1.0, 0.5, 2.0),
               1.0 / fx::refd::harmonic_member::X_x);
  const SplittingReport rep = splitting_criteria(
      data, mat4(fx::refd::harmonic_member::hess),
      1.0 / fx::refd::harmonic_member::X_x);
  CHECK(rep.eta0.verdict == Verdict::NotApplicable);
}

TEST_CASE("splitting eta0: synthetic double root with negative ratio") {
  // Sigma_t similar to a Jordan block J2(1) + diag(2, 3); Sigma_t^{-1} then
  // carries the real eigenvalue 1 with algebraic multiplicity 2. The single
  // transverse entry Y0(1,0) = 1 gives numerator -2, denominator 2.
  Eigen::Matrix4d t0 = Eigen::Matrix4d::Zero();
  t0(0, 0) = 1.0;
  t0(0, 1) = 1.0;
  t0(1, 1) = 1.0;
  t0(2, 2) = 2.0;
  t0(3, 3) = 3.0;
  Eigen::Matrix4d y0 = Eigen::Matrix4d::Zero();
  y0(1, 0) = 1.0;

  Eigen::Matrix4d s = Eigen::Matrix4d::Identity();
  s(0, 2) = 0.4;
  s(1, 3) = -0.3;
  s(2, 3) = 0.2;
  const Eigen::Matrix4d sinv = s.inverse();

  ModulationData data;
  data.Sigma_t = s * t0 * sinv;
  data.Sigma_y = s * y0 * sinv;
  data.delta = delta_from_pencil(data.Sigma_t, Eigen::Matrix4d::Identity(),
                                 data.Sigma_y);

  const SplittingReport rep = splitting_criteria(data, data.Sigma_t, 1.0);
  CHECK(rep.eta0.verdict == Verdict::Unstable);
  CHECK(rep.eta0.multiplicity == 2);
  CHECK(rep.eta0.omega0 == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(rep.eta0.numerator == doctest::Approx(-2.0).epsilon(1e-6));
  CHECK(rep.eta0.denominator == doctest::Approx(2.0).epsilon(1e-6));

  // The full directional scan must confirm the predicted breaking.
  const TransverseReport scan = transverse_criteria(data);
  CHECK(scan.full.verdict == Verdict::Unstable);
}

TEST_CASE("splitting xi0: degenerate discriminant cases") {
  ModulationData data;
  data.Sigma_t = Eigen::Matrix4d::Identity();
  data.Sigma_y = Eigen::Matrix4d::Zero();
  data.delta[{4, 0, 0}] = 1.0;
  data.delta[{3, 0, 1}] = 2.0;
  data.delta[{2, 0, 2}] = 1.0;  // discriminant gap = 0
  data.delta[{3, 1, 0}] = 1.0;
  data.delta[{2, 1, 1}] = 3.0;
  data.delta[{0, 4, 0}] = 1.0;

  auto rep = splitting_criteria(data, Eigen::Matrix4d::Identity(), 1.0);
  CHECK(rep.xi0.verdict == Verdict::Unstable);
  CHECK(rep.xi0.quantity == doctest::Approx(2.0));

  data.delta[{2, 1, 1}] = 1.0;  // quantity = 1 - 1 = 0
  rep = splitting_criteria(data, Eigen::Matrix4d::Identity(), 1.0);
  CHECK(rep.xi0.verdict == Verdict::Inconclusive);

  data.delta[{2, 0, 2}] = 5.0;  // discriminant far from zero
  rep = splitting_criteria(data, Eigen::Matrix4d::Identity(), 1.0);
  CHECK(rep.xi0.verdict == Verdict::NotApplicable);
}

TEST_CASE("scan prediction is confirmed by the evans function") {
  const ModelSpec model = make_model({1.0}, {0.0, 0.0, -0.125});
  const WaveParams params{fx::ref::mu_x, fx::ref::c_x, fx::ref::omega_phi,
                          fx::ref::mu_phi};
  const ModulationData data = ref_data();

  // Purely transverse witness (xi, zeta) = (0, 1) with a real growing root.
  const auto roots = direction_roots(data, 0.0, 1.0);
  Complex lambda0(0.0, 0.0);
  for (const auto& r : roots) {
    if (r.real() > lambda0.real()) lambda0 = r;
  }
  REQUIRE(lambda0.real() > 1.0);

  // At eta = t zeta the unstable eigenvalue sits near t lambda0.
  const double t = 0.05;
  const EvansFunction evans(model, params);
  const Complex center = t * lambda0;
  const int count = count_unstable(evans, 0.0, t * t,
                                   Complex(0.5 * center.real(), -0.08),
                                   Complex(1.9 * center.real(), 0.08));
  CHECK(count >= 1);
}

TEST_CASE("stability report composes the criteria with evidence") {
  const Averages avg =
      sigmas(fx::ref::sigma[0], fx::ref::sigma[1], fx::ref::sigma[2]);
  const StabilityReport rep = stability_report(
      mat4(fx::ref::hess), avg, 1.0 / fx::ref::X_x, fx::ref::c_x);

  CHECK(rep.coperiodic.verdict == Verdict::StableCandidate);
  CHECK(rep.coperiodic.negative_signature == 2);
  CHECK(rep.coperiodic.det == doctest::Approx(fx::ref::hess_det).epsilon(1e-9));

  CHECK(rep.sideband.verdict == Verdict::Unstable);
  CHECK_FALSE(rep.sideband.weakly_hyperbolic);

  CHECK(rep.transverse_xi0.verdict == Verdict::Unstable);
  CHECK(rep.transverse_full.verdict == Verdict::Unstable);
  CHECK(rep.transverse_full.max_re > 2.0);
  CHECK(rep.transverse_full.worst.lambda.real() ==
        doctest::Approx(rep.transverse_full.max_re));

  CHECK(rep.splitting.eta0.verdict == Verdict::NotApplicable);
  CHECK(rep.splitting.xi0.verdict == Verdict::NotApplicable);

  CHECK(std::string(to_string(Verdict::Unstable)) == "UNSTABLE");
  CHECK(std::string(to_string(Verdict::StableCandidate)) == "STABLE_CANDIDATE");
  CHECK(std::string(to_string(Verdict::Inconclusive)) == "INCONCLUSIVE");
  CHECK(std::string(to_string(Verdict::NotApplicable)) == "NOT_APPLICABLE");
}
