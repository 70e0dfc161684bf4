#include "detail.hpp"

#include <algorithm>
#include <cmath>

#include "wavestab/errors.hpp"

namespace wavestab::detail {

Vec poly_mul(const Vec& a, const Vec& b) {
  Vec r = Vec::Zero(a.size() + b.size() - 1);
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

Vec poly_add(const Vec& a, const Vec& b) {
  Vec r = Vec::Zero(std::max(a.size(), b.size()));
  r.head(a.size()) = a;
  r.head(b.size()) += b;
  return r;
}

Vec poly_scale_arg(const Vec& a, double s) {
  Vec r = a;
  double f = 1.0;
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    r[i] *= f;
    f *= s;
  }
  return r;
}

Vec poly_shift_up(const Vec& a, int k) {
  Vec r = Vec::Zero(a.size() + k);
  r.tail(a.size()) = a;
  return r;
}

std::pair<Vec, double> poly_deflate(const Vec& p, double r) {
  Eigen::Index n = p.size();
  if (n == 1) return {Vec::Zero(1), p[0]};
  Vec q = Vec::Zero(n - 1);
  double carry = p[n - 1];
  for (Eigen::Index i = n - 2; i >= 0; --i) {
    q[i] = carry;
    carry = p[i] + r * carry;
  }
  return {q, carry};
}

std::vector<double> real_roots(Vec p, double lo, double hi) {
  double scale = p.cwiseAbs().maxCoeff();
  if (scale == 0.0) return {};
  Eigen::Index deg = p.size() - 1;
  while (deg > 0 && std::abs(p[deg]) < 1e-14 * scale) --deg;
  p.conservativeResize(deg + 1);
  if (deg == 0) return {};
  if (deg == 1) {
    double r = -p[0] / p[1];
    if (r >= lo && r <= hi) return {r};
    return {};
  }
  Vec dp = poly_derivative(p);
  std::vector<double> brk = real_roots(dp, lo, hi);
  brk.insert(brk.begin(), lo);
  brk.push_back(hi);
  std::sort(brk.begin(), brk.end());

  std::vector<double> roots;
  auto push_unique = [&](double r) {
    for (double s : roots)
      if (std::abs(s - r) <= 1e-11 * (1.0 + std::abs(r))) return;
    roots.push_back(r);
  };
  for (std::size_t i = 0; i + 1 < brk.size(); ++i) {
    double l = brk[i], r = brk[i + 1];
    if (r - l <= 0.0) continue;
    double fl = poly_eval(p, l), fr = poly_eval(p, r);
    if (fl == 0.0) push_unique(l);
    if (fr == 0.0 && i + 2 == brk.size()) push_unique(r);
    if (fl * fr >= 0.0) continue;
    // bisection
    double a = l, b = r;
    for (int it = 0; it < 200 && (b - a) > 1e-16 * (1.0 + std::abs(a)); ++it) {
      double m = 0.5 * (a + b);
      double fm = poly_eval(p, m);
      if (fm == 0.0) { a = b = m; break; }
      if (fl * fm < 0.0) b = m; else { a = m; fl = fm; }
    }
    double x = 0.5 * (a + b);
    for (int it = 0; it < 8; ++it) {  // Newton polish within the bracket
      double fx = poly_eval(p, x), dfx = poly_eval(dp, x);
      if (dfx == 0.0) break;
      double xn = x - fx / dfx;
      if (xn < l || xn > r) break;
      x = xn;
    }
    push_unique(x);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

RationalF make_f(const ModelSpec& model, const WaveParams& p) {
  Vec kappa2 = poly_scale_arg(model.kappa, 2.0);
  Vec W2 = poly_scale_arg(model.W, 2.0);
  Vec Df = 4.0 * poly_shift_up(kappa2, 1);
  Vec lin(2);
  lin << p.mu_x, -p.omega_phi;
  Vec flux(2);
  flux << p.mu_phi, -p.c_x;
  RationalF f;
  f.Df = Df;
  f.Nf = poly_add(poly_mul(Df, poly_add(W2, lin)), -poly_mul(flux, flux));
  f.dNf = poly_derivative(f.Nf);
  return f;
}

Geometry make_geometry(const ModelSpec& model, const WaveParams& params,
                       std::optional<std::pair<double, double>> seed) {
  Geometry geo;
  geo.model = model;
  geo.params = params;
  geo.f = make_f(model, params);
  auto tp = turning_points(model, params, seed);
  geo.a = tp.first;
  geo.b = tp.second;
  geo.delta = geo.b - geo.a;
  auto [q1, rem1] = poly_deflate(geo.f.Nf, geo.a);
  auto [q2, rem2] = poly_deflate(q1, geo.b);
  (void)rem1;
  (void)rem2;
  geo.qhat = q2;
  geo.kappa2 = poly_scale_arg(model.kappa, 2.0);
  geo.nu_num = Vec(2);
  geo.nu_num << params.mu_phi, -params.c_x;
  geo.nu_den = 2.0 * poly_shift_up(geo.kappa2, 1);

  if (2.0 * geo.b > model.alpha_max)
    fail(ErrorCode::ModelRangeExceeded,
         "||V||^2 exceeds the declared alpha_max range");
  // htilde must stay positive across the closed well.
  for (int i = 0; i <= 128; ++i) {
    double rho = geo.a + geo.delta * i / 128.0;
    if (!(geo.htilde(rho) > 0.0))
      fail(ErrorCode::DegenerateWell,
           "interior degeneracy: deflated potential factor is not positive");
  }
  return geo;
}

}  // namespace wavestab::detail
