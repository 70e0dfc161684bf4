#pragma once

// Internal numerical machinery shared by the profile construction and the
// action quadratures. Not part of the installed interface.

#include <optional>
#include <utility>
#include <vector>

#include "wavestab/model.hpp"
#include "wavestab/profile.hpp"

namespace wavestab::detail {

using Vec = Eigen::VectorXd;

// Polynomial helpers (ascending coefficients).
Vec poly_mul(const Vec& a, const Vec& b);
Vec poly_add(const Vec& a, const Vec& b);
Vec poly_scale_arg(const Vec& a, double s);  // p(s x)
Vec poly_shift_up(const Vec& a, int k);      // x^k p(x)
// (quotient, remainder) of p / (x - r)
std::pair<Vec, double> poly_deflate(const Vec& p, double r);
// All real roots in [lo, hi], recursive isolation + bisection + polish.
std::vector<double> real_roots(Vec p, double lo, double hi);

// Rational data of f(rho) = mu_x - effective potential = Nf / Df with
//   Nf = 4 rho kappa(2 rho) (mu_x + W(2 rho) - omega_phi rho) - (mu_phi - c_x rho)^2
//   Df = 4 rho kappa(2 rho).
struct RationalF {
  Vec Nf, dNf, Df;
  double operator()(double rho) const {
    return poly_eval(Nf, rho) / poly_eval(Df, rho);
  }
};

RationalF make_f(const ModelSpec& model, const WaveParams& p);

// Well geometry under the substitution rho(u) = a + (b - a) sin^2 u, with
// the turning-point factors of Nf deflated away so every integrand built
// from it is smooth up to the endpoints:
//   f(rho) = (rho - a)(b - rho) htilde(rho),  htilde > 0 on [a, b].
struct Geometry {
  ModelSpec model;
  WaveParams params;
  RationalF f;
  double a = 0.0, b = 0.0, delta = 0.0;
  Vec qhat;    // Nf = (x - a)(x - b) qhat + O(refinement tol)
  Vec kappa2;  // kappa(2 rho)
  Vec nu_num;  // mu_phi - c_x rho
  Vec nu_den;  // 2 rho kappa(2 rho)

  double rho_of_u(double u) const {
    double s = std::sin(u);
    return a + delta * s * s;
  }
  double htilde(double rho) const {
    return -poly_eval(qhat, rho) / poly_eval(f.Df, rho);
  }
  double f_stable(double rho) const {
    return (rho - a) * (b - rho) * htilde(rho);
  }
  double kap(double rho) const { return poly_eval(kappa2, rho); }
  double nu_of(double rho) const {
    return poly_eval(nu_num, rho) / poly_eval(nu_den, rho);
  }
  // dx/du
  double g(double u) const {
    double rho = rho_of_u(u);
    return std::sqrt(kap(rho) / (rho * htilde(rho)));
  }
};

Geometry make_geometry(const ModelSpec& model, const WaveParams& params,
                       std::optional<std::pair<double, double>> seed);

}  // namespace wavestab::detail
