#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "wavestab/action.hpp"
#include "wavestab/madelung.hpp"

using namespace wavestab;

namespace {
ModelSpec ref() { return make_model({1.0}, {0.0, 0.0, -0.125}); }
ModelSpec refd() { return make_model({1.0}, {0.0, 0.0, 0.125}); }
WaveParams ref_params() { return {fx::ref::mu_x, fx::ref::c_x, fx::ref::omega_phi, fx::ref::mu_phi}; }
WaveParams refd_generic() {
  return {fx::refd::generic::mu_x, fx::refd::generic::c_x,
          fx::refd::generic::omega_phi, fx::refd::generic::mu_phi};
}

// max relative deviation of the four gradient identities against profile
// quantities computed by the independent profile/averages machinery
double identity_defect(const ModelSpec& m, const WaveParams& p) {
  Eigen::Vector4d g = action_gradient(m, p);
  auto prof = solve_profile(m, p, 128);
  auto av = wave_averages(m, prof);
  double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  double d = std::abs(g[0] - prof.X_x);
  d = std::max(d, std::abs(g[1] - av.q_bar * prof.X_x));
  d = std::max(d, std::abs(g[2] + av.m_bar * prof.X_x));
  d = std::max(d, std::abs(g[3] + prof.xi_phi));
  return d / scale;
}
}  // namespace

TEST_CASE("action value") {
  CHECK(action_value(ref(), ref_params()) ==
        doctest::Approx(fx::ref::theta).epsilon(1e-10));
  CHECK(action_value(refd(), refd_generic()) ==
        doctest::Approx(fx::refd::generic::theta).epsilon(1e-10));

  WaveParams degen = ref_params();
  degen.mu_x = -0.5;
  CHECK_THROWS_WITH_AS(action_value(ref(), degen),
                       doctest::Contains("DegenerateWell"), Error);

  // Theta = O(mu_x - mu_x^(0)) at the harmonic edge
  WaveParams p = ref_params();
  p.mu_x = -0.5 + 1e-3;
  double t3 = action_value(ref(), p);
  p.mu_x = -0.5 + 1e-6;
  double t6 = action_value(ref(), p);
  double expo = std::log(t3 / t6) / std::log(1e3);
  CHECK(expo > 0.9);
  CHECK(expo < 1.1);
}

TEST_CASE("action gradient against frozen values and identities") {
  Eigen::Vector4d g = action_gradient(ref(), ref_params());
  CHECK(g[0] == doctest::Approx(fx::ref::grad[0]).epsilon(1e-10));
  CHECK(std::abs(g[1]) < 1e-12);
  CHECK(g[2] == doctest::Approx(fx::ref::grad[2]).epsilon(1e-10));
  CHECK(std::abs(g[3]) < 1e-12);

  CHECK(identity_defect(ref(), ref_params()) < 1e-8);
  CHECK(identity_defect(refd(), refd_generic()) < 1e-8);
}

TEST_CASE("gradient identities on random parameter draws") {
  std::mt19937 rng(20240817u);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int checked = 0;
  for (int draw = 0; draw < 20; ++draw) {
    WaveParams p{-0.375 + 0.02 * u(rng), 0.08 * u(rng), -1.0 + 0.04 * u(rng),
                 0.08 * u(rng)};
    CAPTURE(draw);
    CHECK(identity_defect(ref(), p) < 1e-6);
    ++checked;
  }
  CHECK(checked == 20);
}

TEST_CASE("small-amplitude gradient limit") {
  // grad/X -> (1, rho0 nu0, -rho0, -nu0) as the well closes; REF well
  // closes onto rho0 = 1 with nu0 = 0.
  WaveParams p = ref_params();
  p.mu_x = -0.5 + 1e-7;
  Eigen::Vector4d g = action_gradient(ref(), p);
  auto prof = solve_profile(ref(), p, 64);
  Eigen::Vector4d lim(1.0, 0.0, -1.0, 0.0);
  CHECK(((g / prof.X_x) - lim).cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("action hessian") {
  ActionData d = action_hessian(ref(), ref_params());
  CHECK(d.theta == doctest::Approx(fx::ref::theta).epsilon(1e-10));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      CAPTURE(i);
      CAPTURE(j);
      double want = fx::ref::hess[i][j];
      if (want == 0.0)
        CHECK(std::abs(d.hess(i, j)) < 1e-7);
      else
        CHECK(d.hess(i, j) == doctest::Approx(want).epsilon(1e-6));
    }
  CHECK((d.hess - d.hess.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(d.est_error.maxCoeff() < 1e-4);
  CHECK(d.hess.determinant() ==
        doctest::Approx(fx::ref::hess_det).epsilon(1e-5));

  // negative signature is 2
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(d.hess);
  int negative = 0;
  for (int i = 0; i < 4; ++i)
    if (es.eigenvalues()[i] < 0) ++negative;
  CHECK(negative == 2);
  for (int i = 0; i < 4; ++i)
    CHECK(es.eigenvalues()[i] ==
          doctest::Approx(fx::ref::hess_eigs[i]).epsilon(1e-6));

  // hess[0][0] == slope of X_x in mu_x by an independent period difference
  double h = 1e-5;
  WaveParams pp = ref_params(), pm = ref_params();
  pp.mu_x += h;
  pm.mu_x -= h;
  double slope =
      (solve_profile(ref(), pp, 96).X_x - solve_profile(ref(), pm, 96).X_x) /
      (2 * h);
  CHECK(d.hess(0, 0) == doctest::Approx(slope).epsilon(1e-5));
}

TEST_CASE("hessian near the existence boundary") {
  WaveParams p = ref_params();
  p.mu_x = -0.5 + 5e-9;
  CHECK_THROWS_WITH_AS(action_hessian(ref(), p),
                       doctest::Contains("BoundaryTooClose"), Error);

  // adaptive shrink succeeds a little further in
  p.mu_x = -0.5 + 1e-3;
  ActionData d = action_hessian(ref(), p);
  CHECK(d.fd_step < 1e-3);  // had to shrink below the default
  CHECK(d.hess(0, 0) != 0.0);
}

TEST_CASE("modulation coordinates") {
  ActionData d = action_hessian(ref(), ref_params());
  auto mc = modulation_coordinates(ref(), ref_params(), d);
  CHECK(mc.k_x == doctest::Approx(1.0 / fx::ref::X_x).epsilon(1e-10));
  CHECK(std::abs(mc.k_phi) < 1e-12);
  CHECK(std::abs(mc.q_bar) < 1e-12);
  CHECK(mc.m_bar == doctest::Approx(fx::ref::m_bar).epsilon(1e-8));

  // Jacobian columns match finite differences of the coordinate map
  double h = 1e-6;
  for (int j = 0; j < 4; ++j) {
    WaveParams pp = ref_params(), pm = ref_params();
    pp[j] += h;
    pm[j] -= h;
    Eigen::Vector4d gp = action_gradient(ref(), pp);
    Eigen::Vector4d gm = action_gradient(ref(), pm);
    auto coords = [](const Eigen::Vector4d& g) {
      return Eigen::Vector4d(1.0 / g[0], -g[3] / g[0], g[1] / g[0],
                             -g[2] / g[0]);
    };
    Eigen::Vector4d fd = (coords(gp) - coords(gm)) / (2 * h);
    CAPTURE(j);
    CHECK((mc.jacobian.col(j) - fd).cwiseAbs().maxCoeff() < 1e-5);
  }

  // invertible together with the hessian
  CHECK(std::abs(mc.jacobian.determinant()) > 1e-6);
  CHECK(std::abs(d.hess.determinant()) > 1e-6);
}
