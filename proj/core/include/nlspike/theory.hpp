#pragma once

#include <vector>

#include "nlspike/coefficients.hpp"
#include "nlspike/distributions.hpp"
#include "nlspike/nonlinearity.hpp"

namespace nlspike {

/// Population-level limits for one gamma_0.
struct Prediction {
  double gamma0 = 0.0;
  int k_star = 0;
  /// gamma_0^{k*} theta_{k*} / k*! m_{2k*}
  double effective_spike = 0.0;
  double sigma = 0.0;
  double lambda_limit = 0.0;
  double overlap_limit = 0.0;
  bool supercritical = false;
};

/// Limit of the leading eigenvalue of sigma W + g u u^T:
/// 2 sigma sign(g) below threshold (sign(0) = +1), g + sigma^2 / g from |g| >= sigma on.
double bbp_eigenvalue(double gamma_eff, double sigma);

/// Limit of the squared overlap: (1 - sigma^2 / g^2) 1{|g| >= sigma}.
double bbp_overlap(double gamma_eff, double sigma);

/// gamma(N) = gamma_0 N^{(1 - 1/k*) / 2}.
double relevant_gamma(double gamma0, std::size_t n, int k_star);

/// gamma_0^{k*} theta_{k*} / k*! m_{2k*}. Throws IndexNotDetected without k*.
double effective_spike(double gamma0, const CoefficientReport& report, const SignalSpec& signal);

Prediction predict(double gamma0, const CoefficientReport& report, const SignalSpec& signal);
Prediction predict(double gamma0, const Nonlinearity& f, const NoiseSpec& noise, const SignalSpec& signal);

/// Positive gamma_0 at which |effective spike| = sigma.
double critical_gamma0(const CoefficientReport& report, const SignalSpec& signal);

/// Population limits for the rank-K model at relevant scaling, where spike l
/// has strength gamma0s[l]. The finite-rank equivalent is sum over multi-indices
/// |a| = k* of c_a x^a (x^a)^T / n; its nonzero eigenvalues converge to those of
/// G^{1/2} C G^{1/2} with Gram G_ab = prod_l m_{a_l + b_l}. The leading outlier
/// follows the rank-one limits of the largest such eigenvalue; the overlap is
/// taken against x_1^{k*}.
struct RankKPrediction {
  int k_star = 0;
  double sigma = 0.0;
  /// Nonzero limit eigenvalues of the equivalent perturbation, by decreasing magnitude.
  std::vector<double> perturbation_eigenvalues;
  double lambda_limit = 0.0;
  double overlap_limit = 0.0;
};

RankKPrediction predict_rank_k(const std::vector<double>& gamma0s, const CoefficientReport& report,
                               const std::vector<SignalSpec>& signals);

/// Number of multi-indices of size k over K spikes, C(K + k - 1, K - 1).
std::size_t finite_rank_count(std::size_t spikes, int k_star);

}  // namespace nlspike
