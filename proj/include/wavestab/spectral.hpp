#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <functional>
#include <memory>
#include <vector>

#include "wavestab/model.hpp"
#include "wavestab/profile.hpp"

namespace wavestab {

using Complex = std::complex<double>;

struct SpectralQuery {
  Complex lambda;
  double xi = 0.0;      // Floquet exponent in [-pi, pi]
  double eta_sq = 0.0;  // squared transverse frequency, >= 0
};

struct MonodromyResult {
  Eigen::Matrix4cd R;   // solution operator over one period from x0
  Complex det_check;    // det R minus exp(int tr M)  (Liouville defect)
  Complex evans;        // filled when a Floquet exponent was supplied
};

// Coefficient matrix M(x) of the first-order form Phi' = M Phi,
// Phi = (psi, psi'), of lambda psi = J Hess H_u[V] psi + eta^2 kt(|V|^2) J psi,
// assembled from the pointwise profile data.
Eigen::Matrix4cd system_matrix(const ModelSpec& model, const WaveParams& params,
                               const ProfilePoint& pt, Complex lambda,
                               double eta_sq);

// The same as a map x -> M(x) over a freshly constructed profile.
std::function<Eigen::Matrix4cd(double)> linearized_system(
    const ModelSpec& model, const WaveParams& params, Complex lambda,
    double eta_sq);

// Evans function machinery bound to one wave. Monodromies at distinct
// (lambda, eta_sq) are independent; the object is safe to share across
// threads.
class EvansFunction {
 public:
  // base point defaults to the quarter period, where V . V_x != 0
  EvansFunction(const ModelSpec& model, const WaveParams& params,
                double x0_fraction = 0.25);
  // custom coefficient source (e.g. constant states), period and twist
  // supplied explicitly
  EvansFunction(const ModelSpec& model, const WaveParams& params,
                std::function<ProfilePoint(double)> source, double period,
                double xi_phi, double x0 = 0.0);

  MonodromyResult monodromy(Complex lambda, double eta_sq) const;
  Complex evans(const Eigen::Matrix4cd& R, double xi) const;
  Complex operator()(double xi, Complex lambda, double eta_sq) const;

  double period() const { return period_; }
  double xi_phi() const { return xi_phi_; }
  double x0() const { return x0_; }
  const ModelSpec& model() const { return model_; }
  const WaveParams& params() const { return params_; }

  // queries with |lambda| beyond this bound are refused (overflow guard)
  double lambda_ceiling = 500.0;

 private:
  ModelSpec model_;
  WaveParams params_;
  std::shared_ptr<const ProfileEvaluator> evaluator_;
  std::function<ProfilePoint(double)> source_;
  double period_ = 0.0, xi_phi_ = 0.0, x0_ = 0.0;
};

// Winding number of D_xi(., eta_sq) around the closed rectangle with the
// given corners (counterclockwise), by adaptive argument tracking. The
// rectangle must lie in Re lambda > 0.
int count_unstable(const EvansFunction& ev, double xi, double eta_sq,
                   Complex corner_lo, Complex corner_hi);

// The four critical spectral curves near the origin: for each Floquet
// exponent in xi_list, the 4 roots of D_xi(., 0) in a small disk, by
// argument-principle moment integrals with adaptive disk placement.
// Roots are continuity-ordered along xi_list.
std::vector<std::array<Complex, 4>> eigencurves(const EvansFunction& ev,
                                                const std::vector<double>& xi_list,
                                                double radius_hint = 0.0);

// Calibrated lower bound for the resolvent-positivity scan: twice the
// last sign change of D_0 or D_pi on a logarithmic grid of real lambda,
// or 10 when neither changes sign.
double calibrate_r0(const EvansFunction& ev, double lambda_max = 500.0);

}  // namespace wavestab
