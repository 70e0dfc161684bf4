#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "wavestab/errors.hpp"

namespace wavestab {

// Equation data: dispersion coefficient kappa(alpha), potential W(alpha),
// optional anisotropic transverse coefficient.  Coefficients ascending in
// degree.  Polynomials only, so every derivative through order 4 is exact.
struct ModelSpec {
  Eigen::VectorXd kappa;
  Eigen::VectorXd W;
  Eigen::VectorXd kappa_transverse;  // empty: isotropic, defaults to kappa
  double alpha_max = 8.0;
  int max_derivative_order = 4;

  bool has_transverse() const { return kappa_transverse.size() > 0; }
  const Eigen::VectorXd& kt() const {
    return has_transverse() ? kappa_transverse : kappa;
  }
};

enum class Component { kappa, W, kappa_transverse };

// Throws KappaNotPositive if kappa (or the transverse coefficient) fails
// to stay positive on [0, alpha_max]; EmptyCoefficients on empty input.
ModelSpec make_model(const std::vector<double>& kappa_coeffs,
                     const std::vector<double>& W_coeffs,
                     const std::optional<std::vector<double>>&
                         kappa_transverse_coeffs = std::nullopt,
                     double alpha_max = 8.0);

// Exact polynomial derivative of the selected component at alpha.
double eval(const ModelSpec& model, Component which, double alpha,
            int order = 0);

// Effective model for a nonzero transverse phase wavevector:
// W(alpha) -> W(alpha) + (1/2) ktil_norm_sq * alpha * kappa(alpha).
ModelSpec shift_transverse_phase(const ModelSpec& model, double ktil_norm_sq);

// Polynomial evaluation by Horner's rule; T may be a Jet scalar.
template <class T>
T poly_eval(const Eigen::VectorXd& coeffs, const T& x) {
  T acc = x * 0.0;  // zero of the scalar type
  for (Eigen::Index i = coeffs.size() - 1; i >= 0; --i)
    acc = acc * x + coeffs[i];
  return acc;
}

inline double poly_eval(const Eigen::VectorXd& coeffs, double x) {
  double acc = 0.0;
  for (Eigen::Index i = coeffs.size() - 1; i >= 0; --i)
    acc = acc * x + coeffs[i];
  return acc;
}

Eigen::VectorXd poly_derivative(const Eigen::VectorXd& coeffs);

}  // namespace wavestab
