#include "wavestab/model.hpp"

#include <cmath>
#include <sstream>

namespace wavestab {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyCoefficients: return "EmptyCoefficients";
    case ErrorCode::KappaNotPositive: return "KappaNotPositive";
    case ErrorCode::OrderTooHigh: return "OrderTooHigh";
    case ErrorCode::NonpositiveRho: return "NonpositiveRho";
    case ErrorCode::NoWellFound: return "NoWellFound";
    case ErrorCode::DegenerateWell: return "DegenerateWell";
    case ErrorCode::NoDualPoint: return "NoDualPoint";
    case ErrorCode::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorCode::BoundaryTooClose: return "BoundaryTooClose";
    case ErrorCode::NoiseFloor: return "NoiseFloor";
    case ErrorCode::ZeroPeriodDerivative: return "ZeroPeriodDerivative";
    case ErrorCode::ModelRangeExceeded: return "ModelRangeExceeded";
    case ErrorCode::IntegratorFailed: return "IntegratorFailed";
    case ErrorCode::RootOnContour: return "RootOnContour";
    case ErrorCode::DiskCaptureFailed: return "DiskCaptureFailed";
    case ErrorCode::SingularityNotSpurious: return "SingularityNotSpurious";
    case ErrorCode::SingularHessian: return "SingularHessian";
    case ErrorCode::NotAMinimum: return "NotAMinimum";
    case ErrorCode::NoSolitaryWave: return "NoSolitaryWave";
    case ErrorCode::VanishingModulus: return "VanishingModulus";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "UnknownError";
}

namespace {

Eigen::VectorXd to_vec(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(),
                                           static_cast<Eigen::Index>(v.size()));
}

// Positive on (0, alpha_max]; a zero exactly at the origin is tolerated
// (profiles keep ||V||^2 = 2 rho > 0, so the origin is never sampled).
void check_positive(const Eigen::VectorXd& coeffs, double alpha_max,
                    const char* name) {
  constexpr int kSamples = 1024;
  if (poly_eval(coeffs, 0.0) < 0.0)
    fail(ErrorCode::KappaNotPositive,
         std::string(name) + " is negative at alpha=0");
  for (int i = 1; i <= kSamples; ++i) {
    double a = alpha_max * static_cast<double>(i) / kSamples;
    if (!(poly_eval(coeffs, a) > 0.0)) {
      std::ostringstream os;
      os << name << " is not positive at alpha=" << a;
      fail(ErrorCode::KappaNotPositive, os.str());
    }
  }
}

}  // namespace

ModelSpec make_model(const std::vector<double>& kappa_coeffs,
                     const std::vector<double>& W_coeffs,
                     const std::optional<std::vector<double>>&
                         kappa_transverse_coeffs,
                     double alpha_max) {
  if (kappa_coeffs.empty() || W_coeffs.empty())
    fail(ErrorCode::EmptyCoefficients, "kappa and W coefficients required");
  if (!(alpha_max > 0.0))
    fail(ErrorCode::ConfigError, "alpha_max must be positive");

  ModelSpec m;
  m.kappa = to_vec(kappa_coeffs);
  m.W = to_vec(W_coeffs);
  m.alpha_max = alpha_max;
  check_positive(m.kappa, alpha_max, "kappa");
  if (kappa_transverse_coeffs) {
    if (kappa_transverse_coeffs->empty())
      fail(ErrorCode::EmptyCoefficients, "kappa_transverse given but empty");
    m.kappa_transverse = to_vec(*kappa_transverse_coeffs);
    check_positive(m.kappa_transverse, alpha_max, "kappa_transverse");
  }
  return m;
}

Eigen::VectorXd poly_derivative(const Eigen::VectorXd& coeffs) {
  if (coeffs.size() <= 1) return Eigen::VectorXd::Zero(1);
  Eigen::VectorXd d(coeffs.size() - 1);
  for (Eigen::Index i = 1; i < coeffs.size(); ++i)
    d[i - 1] = coeffs[i] * static_cast<double>(i);
  return d;
}

double eval(const ModelSpec& model, Component which, double alpha, int order) {
  if (order < 0 || order > model.max_derivative_order)
    fail(ErrorCode::OrderTooHigh, "derivative order " + std::to_string(order));
  const Eigen::VectorXd* p = nullptr;
  switch (which) {
    case Component::kappa: p = &model.kappa; break;
    case Component::W: p = &model.W; break;
    case Component::kappa_transverse: p = &model.kt(); break;
  }
  Eigen::VectorXd c = *p;
  for (int k = 0; k < order; ++k) c = poly_derivative(c);
  return poly_eval(c, alpha);
}

ModelSpec shift_transverse_phase(const ModelSpec& model, double ktil_norm_sq) {
  if (ktil_norm_sq < 0.0)
    fail(ErrorCode::ConfigError, "ktil_norm_sq must be nonnegative");
  ModelSpec out = model;
  // alpha * kappa(alpha): shift kappa coefficients up one degree.
  Eigen::VectorXd extra = Eigen::VectorXd::Zero(model.kappa.size() + 1);
  extra.tail(model.kappa.size()) = 0.5 * ktil_norm_sq * model.kappa;
  Eigen::Index n = std::max(out.W.size(), extra.size());
  Eigen::VectorXd W = Eigen::VectorXd::Zero(n);
  W.head(out.W.size()) = out.W;
  W.head(extra.size()) += extra;
  out.W = W;
  return out;
}

}  // namespace wavestab
