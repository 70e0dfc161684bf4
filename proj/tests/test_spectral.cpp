#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "fixtures.hpp"
#include "wavestab/errors.hpp"
#include "wavestab/profile.hpp"
#include "wavestab/spectral.hpp"

using namespace wavestab;

namespace {

ModelSpec ref_model() { return make_model({1.0}, {0.0, 0.0, -0.125}); }
ModelSpec refd_model() { return make_model({1.0}, {0.0, 0.0, 0.125}); }
ModelSpec free_model() { return make_model({1.0}, {0.0}); }

WaveParams ref_params() {
  return {fx::ref::mu_x, fx::ref::c_x, fx::ref::omega_phi, fx::ref::mu_phi};
}
WaveParams ref_small_params() {
  return {fx::ref_small::mu_x, fx::ref_small::c_x, fx::ref_small::omega_phi,
          fx::ref_small::mu_phi};
}
WaveParams refd_params() {
  using namespace fx::refd::generic;
  return {mu_x, c_x, omega_phi, mu_phi};
}

Eigen::Matrix4cd twist_matrix(double xi_phi) {
  Eigen::Matrix4d t = Eigen::Matrix4d::Zero();
  t.topLeftCorner<2, 2>() = rotJ(xi_phi);
  t.bottomRightCorner<2, 2>() = rotJ(xi_phi);
  return t.cast<Complex>();
}

// Both generators of the phase-portrait symmetries must solve the
// first-order system at (lambda, eta) = (0, 0); this pins every sign in
// the coefficient blocks.
void check_kernel_solutions(const ModelSpec& model, const WaveParams& params) {
  ProfileEvaluator ev(model, params);
  const double X = ev.period();
  const Eigen::Matrix2d J = Jmat();
  for (int j = 0; j < 12; ++j) {
    const double x = (j + 0.37) / 12.0 * X;
    const ProfilePoint pt = ev.at(x);
    const Eigen::Matrix4cd M =
        system_matrix(model, params, pt, Complex(0.0, 0.0), 0.0);
    CHECK(M.imag().norm() == doctest::Approx(0.0).epsilon(1e-14));
    const Eigen::Matrix2d A = M.bottomLeftCorner<2, 2>().real();
    const Eigen::Matrix2d B = M.bottomRightCorner<2, 2>().real();

    // rotation generator (J V, J V_x): second derivative is J V_xx
    const Eigen::Vector2d r1 = A * (J * pt.V) + B * (J * pt.Vx) - J * pt.Vxx;
    CHECK(r1.norm() <= 1e-8 * std::max(1.0, pt.Vxx.norm()));

    // translation generator (V_x, V_xx): V_xxx by Richardson differences
    const double h = 1e-3;
    const Eigen::Vector2d d1 = (ev.at(x + h).Vxx - ev.at(x - h).Vxx) / (2 * h);
    const Eigen::Vector2d d2 = (ev.at(x + h / 2).Vxx - ev.at(x - h / 2).Vxx) / h;
    const Eigen::Vector2d vxxx = (4.0 * d2 - d1) / 3.0;
    const Eigen::Vector2d r2 = A * pt.Vx + B * pt.Vxx - vxxx;
    CHECK(r2.norm() <= 1e-8 * std::max(1.0, vxxx.norm()));
  }
}

ProfilePoint constant_point(double rho0) {
  ProfilePoint pt;
  pt.V = Eigen::Vector2d(std::sqrt(2.0 * rho0), 0.0);
  pt.Vx.setZero();
  pt.Vxx.setZero();
  pt.rho = rho0;
  return pt;
}

}  // namespace

TEST_CASE("kernel solutions solve the linearized system") {
  check_kernel_solutions(ref_model(), ref_params());
  check_kernel_solutions(refd_model(), refd_params());
}

TEST_CASE("constant profile reduces to the dispersion matrix") {
  const ModelSpec model = ref_model();
  WaveParams params;
  params.omega_phi = -1.0;
  params.c_x = 0.3;
  const ProfilePoint pt = constant_point(1.0);  // |V|^2 = 2
  const Complex lambda(2.0, 1.0);
  const double eta_sq = 0.3;
  const Eigen::Matrix4cd M = system_matrix(model, params, pt, lambda, eta_sq);

  // a = 2 W'(2) - omega_phi = 0, b = 4 W''(2) = -1, kappa = 1
  Eigen::Matrix2cd A_expect;
  A_expect << Complex(eta_sq - 2.0, 0.0), lambda, -lambda, Complex(eta_sq, 0.0);
  Eigen::Matrix2cd B_expect;
  B_expect << 0.0, -0.3, 0.3, 0.0;
  CHECK((M.topLeftCorner<2, 2>()).norm() == doctest::Approx(0.0));
  CHECK((M.topRightCorner<2, 2>() - Eigen::Matrix2cd::Identity()).norm() ==
        doctest::Approx(0.0));
  CHECK((M.bottomLeftCorner<2, 2>() - A_expect).norm() <= 1e-14);
  CHECK((M.bottomRightCorner<2, 2>() - B_expect).norm() <= 1e-14);

  auto map = linearized_system(model, ref_params(), lambda, eta_sq);
  const Eigen::Matrix4cd M2 = map(0.7);
  CHECK((M2.topRightCorner<2, 2>() - Eigen::Matrix2cd::Identity()).norm() ==
        doctest::Approx(0.0));
  CHECK(M2.allFinite());
}

TEST_CASE("monodromy annihilates the kernel directions") {
  for (int which = 0; which < 2; ++which) {
    const ModelSpec model = which == 0 ? ref_model() : refd_model();
    const WaveParams params = which == 0 ? ref_params() : refd_params();
    const EvansFunction ev(model, params);
    ProfileEvaluator pe(model, params);
    const Eigen::Matrix4cd R = ev.monodromy(Complex(0.0, 0.0), 0.0).R;
    const Eigen::Matrix4cd T = twist_matrix(ev.xi_phi());
    const Eigen::Matrix2d J = Jmat();
    const ProfilePoint pt = pe.at(ev.x0());

    Eigen::Vector4cd phi1, phi2;
    phi1 << J * pt.V, J * pt.Vx;
    phi2 << pt.Vx, pt.Vxx;
    const double scale = std::max(1.0, R.norm());
    CHECK(((R - T) * phi1).norm() <= 1e-8 * scale * phi1.norm());
    CHECK(((R - T) * phi2).norm() <= 1e-8 * scale * phi2.norm());
  }
}

TEST_CASE("liouville determinant identity") {
  const EvansFunction ev(ref_model(), ref_params());
  const MonodromyResult m = ev.monodromy(Complex(0.1, 0.2), 0.3);
  CHECK(std::abs(m.det_check) <= 1e-8 * std::abs(m.R.determinant()));

  // keep the transverse growth e^{|eta| X} moderate: the determinant is
  // conditioned like |R|^2, so fast modes would swamp an 1e-8 bound
  const EvansFunction evd(refd_model(), refd_params());
  const MonodromyResult md = evd.monodromy(Complex(0.0, 0.35), 0.1);
  CHECK(std::abs(md.det_check) <= 1e-8 * std::abs(md.R.determinant()));
}

TEST_CASE("constant coefficients match the closed form") {
  const ModelSpec model = free_model();
  const WaveParams params;
  auto src = [](double) { return constant_point(0.5); };
  for (double X : {1.0, 3.141592653589793}) {
    const EvansFunction ev(model, params, src, X, 0.0);
    for (double eta : {0.5, 1.0, 2.0}) {
      const MonodromyResult m = ev.monodromy(Complex(0.0, 0.0), eta * eta);
      CHECK(std::abs(m.det_check) <= 1e-8 * m.R.squaredNorm());
      const Complex d0 = ev.evans(m.R, 0.0);
      const double factor =
          (std::exp(eta * X) - 1.0) * (std::exp(-eta * X) - 1.0);
      const double closed = factor * factor;
      CHECK(std::abs(d0 - closed) <= 1e-8 * std::abs(closed));
    }
  }
}

TEST_CASE("evans function vanishes at the origin") {
  const EvansFunction ev(ref_model(), ref_params());
  const Complex d00 = ev(0.0, Complex(0.0, 0.0), 0.0);
  const Complex dref = ev(0.0, Complex(0.0, 0.3), 0.0);
  CHECK(std::abs(d00) <= 1e-8 * std::max(1.0, std::abs(dref)));
  CHECK(std::abs(dref) > 1e-6);  // nondegenerate reference scale
}

TEST_CASE("evans conjugation symmetry") {
  const EvansFunction ev(refd_model(), refd_params());
  const Complex lam(0.21, 0.13);
  const Complex d1 = ev(0.4, lam, 0.2);
  const Complex d2 = ev(-0.4, std::conj(lam), 0.2);
  CHECK(std::abs(d2 - std::conj(d1)) <= 1e-12 * std::abs(d1));
}

TEST_CASE("evans function is analytic in lambda") {
  const EvansFunction ev(ref_model(), ref_params());
  const double xi = 0.3, eta_sq = 0.1;
  const Complex lam0(0.2, 0.15);
  const double h = 1e-5;
  auto f = [&](Complex lam) { return ev(xi, lam, eta_sq); };
  const Complex d_re = (f(lam0 + h) - f(lam0 - h)) / (2.0 * h);
  const Complex d_im =
      (f(lam0 + Complex(0.0, h)) - f(lam0 - Complex(0.0, h))) /
      Complex(0.0, 2.0 * h);
  CHECK(std::abs(d_re - d_im) <= 1e-6 * std::max(1.0, std::abs(d_re)));
}

TEST_CASE("winding count is zero for the free system") {
  // J psi'' spectrum is purely imaginary, so any rectangle in Re > 0 is
  // provably empty
  const EvansFunction ev(free_model(), WaveParams{},
                         [](double) { return constant_point(0.5); }, 1.0, 0.0);
  const int n =
      count_unstable(ev, 0.7, 0.0, Complex(0.05, -0.2), Complex(0.3, 0.2));
  CHECK(n == 0);
}

TEST_CASE("winding count finds the sideband instability") {
  const EvansFunction ev(ref_model(), ref_small_params());
  // the slow pencil pair is +-1.4135 i, so at xi = 0.05 one root sits near
  // xi * k_x * 1.4135 = 0.0159 on the positive real axis
  const int n = count_unstable(ev, 0.05, 0.0, Complex(0.004, -0.02),
                               Complex(0.04, 0.02));
  CHECK(n >= 1);
}

TEST_CASE("rectangle validation") {
  const EvansFunction ev(free_model(), WaveParams{},
                         [](double) { return constant_point(0.5); }, 1.0, 0.0);
  CHECK_THROWS_AS(
      count_unstable(ev, 0.0, 0.0, Complex(-0.1, -0.2), Complex(0.3, 0.2)),
      Error);
  CHECK_THROWS_AS(
      count_unstable(ev, 0.0, 0.0, Complex(0.3, -0.2), Complex(0.1, 0.2)),
      Error);
  CHECK_THROWS_AS(ev.monodromy(Complex(600.0, 0.0), 0.0), Error);
}

TEST_CASE("eigencurves collapse at xi = 0") {
  const EvansFunction ev(ref_model(), ref_params());
  const auto curves = eigencurves(ev, {0.0});
  REQUIRE(curves.size() == 1);
  for (const Complex& root : curves[0]) CHECK(std::abs(root) <= 1e-7);
}

TEST_CASE("eigencurve slopes recover the frozen pencil speeds") {
  const EvansFunction ev(ref_model(), ref_params());
  const double kx = 1.0 / fx::ref::X_x;
  const double xi1 = 0.02, xi0 = 0.01;
  const auto curves = eigencurves(ev, {xi1, xi0});
  REQUIRE(curves.size() == 2);

  std::array<Complex, 4> rich;
  for (int j = 0; j < 4; ++j) {
    const Complex s1 = curves[0][j] / (Complex(0.0, 1.0) * kx * xi1);
    const Complex s0 = curves[1][j] / (Complex(0.0, 1.0) * kx * xi0);
    rich[j] = (4.0 * s0 - s1) / 3.0;
  }
  std::sort(rich.begin(), rich.end(),
            [](Complex a, Complex b) { return a.imag() < b.imag(); });
  const std::array<Complex, 4> expect = {
      Complex(0.0, -fx::ref::speed_im_large),
      Complex(0.0, -fx::ref::speed_im_small),
      Complex(0.0, fx::ref::speed_im_small),
      Complex(0.0, fx::ref::speed_im_large)};
  for (int j = 0; j < 4; ++j)
    CHECK(std::abs(rich[j] - expect[j]) <= 1e-3 * std::abs(expect[j]));
}

TEST_CASE("resolvent bound calibration") {
  const EvansFunction ev(ref_model(), ref_params());
  const double r0 = calibrate_r0(ev);
  CHECK(r0 > 0.0);
  CHECK(r0 < 500.0);
  for (double fac : {1.0, 2.0}) {
    const double lam = std::min(fac * r0, 499.0);
    const MonodromyResult m = ev.monodromy(Complex(lam, 0.0), 0.0);
    CHECK(ev.evans(m.R, 0.0).real() > 0.0);
    CHECK(ev.evans(m.R, 3.141592653589793).real() > 0.0);
  }
}
