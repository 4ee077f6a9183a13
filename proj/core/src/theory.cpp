#include "nlspike/theory.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "nlspike/errors.hpp"

namespace nlspike {

namespace {

double factorial(int k) {
  double r = 1.0;
  for (int j = 2; j <= k; ++j) r *= j;
  return r;
}

void require_positive_sigma(double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
}

int require_index(const CoefficientReport& report) {
  if (!report.k_star) throw IndexNotDetected("information index not detected; no prediction");
  return *report.k_star;
}

// All multi-indices of `parts` nonnegative integers summing to `total`, in
// lexicographically decreasing order so (total, 0, ..., 0) comes first.
void multi_indices(int parts, int total, std::vector<int>& current, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(current.size()) == parts - 1) {
    current.push_back(total);
    out.push_back(current);
    current.pop_back();
    return;
  }
  for (int a = total; a >= 0; --a) {
    current.push_back(a);
    multi_indices(parts, total - a, current, out);
    current.pop_back();
  }
}

}  // namespace

double bbp_eigenvalue(double gamma_eff, double sigma) {
  require_positive_sigma(sigma);
  if (std::abs(gamma_eff) < sigma) return gamma_eff < 0.0 ? -2.0 * sigma : 2.0 * sigma;
  return gamma_eff + sigma * sigma / gamma_eff;
}

double bbp_overlap(double gamma_eff, double sigma) {
  require_positive_sigma(sigma);
  if (std::abs(gamma_eff) < sigma) return 0.0;
  return 1.0 - (sigma * sigma) / (gamma_eff * gamma_eff);
}

double relevant_gamma(double gamma0, std::size_t n, int k_star) {
  if (k_star < 1) throw std::invalid_argument("information index must be >= 1");
  if (n < 1) throw std::invalid_argument("size must be >= 1");
  return gamma0 * std::pow(static_cast<double>(n), 0.5 * (1.0 - 1.0 / k_star));
}

double effective_spike(double gamma0, const CoefficientReport& report, const SignalSpec& signal) {
  const int k = require_index(report);
  const double m2k = moment(signal, 2 * k);
  if (!std::isfinite(m2k)) throw std::domain_error("signal moment m_{2k*} is not finite");
  return std::pow(gamma0, k) * (report.theta[k] / factorial(k)) * m2k;
}

Prediction predict(double gamma0, const CoefficientReport& report, const SignalSpec& signal) {
  Prediction p;
  p.gamma0 = gamma0;
  p.k_star = require_index(report);
  p.sigma = report.sigma;
  p.effective_spike = effective_spike(gamma0, report, signal);
  p.lambda_limit = bbp_eigenvalue(p.effective_spike, p.sigma);
  p.overlap_limit = bbp_overlap(p.effective_spike, p.sigma);
  p.supercritical = std::abs(p.effective_spike) >= p.sigma;
  return p;
}

Prediction predict(double gamma0, const Nonlinearity& f, const NoiseSpec& noise, const SignalSpec& signal) {
  return predict(gamma0, info_index(f, noise), signal);
}

double critical_gamma0(const CoefficientReport& report, const SignalSpec& signal) {
  const int k = require_index(report);
  const double strength = std::abs(report.theta[k]) / factorial(k) * moment(signal, 2 * k);
  return std::pow(report.sigma / strength, 1.0 / k);
}

std::size_t finite_rank_count(std::size_t spikes, int k_star) {
  if (spikes == 0 || k_star < 1) throw std::invalid_argument("need K >= 1 and k* >= 1");
  // C(K + k - 1, K - 1) computed incrementally.
  double r = 1.0;
  for (std::size_t j = 1; j < spikes; ++j) r = r * static_cast<double>(k_star + j) / static_cast<double>(j);
  return static_cast<std::size_t>(std::llround(r));
}

RankKPrediction predict_rank_k(const std::vector<double>& gamma0s, const CoefficientReport& report,
                               const std::vector<SignalSpec>& signals) {
  const int k = require_index(report);
  if (gamma0s.empty() || gamma0s.size() != signals.size()) {
    throw std::invalid_argument("need K >= 1 spike strengths and as many signal laws");
  }
  const int spikes = static_cast<int>(signals.size());
  std::vector<std::vector<int>> indices;
  std::vector<int> scratch;
  multi_indices(spikes, k, scratch, indices);
  const auto terms = static_cast<Eigen::Index>(indices.size());

  Eigen::MatrixXd gram(terms, terms);
  Eigen::VectorXd weight(terms);
  for (Eigen::Index a = 0; a < terms; ++a) {
    double multinomial = factorial(k);
    double strength = 1.0;
    for (int l = 0; l < spikes; ++l) {
      multinomial /= factorial(indices[a][l]);
      strength *= std::pow(gamma0s[l], indices[a][l]);
    }
    weight[a] = report.theta[k] / factorial(k) * multinomial * strength;
    for (Eigen::Index b = 0; b < terms; ++b) {
      double g = 1.0;
      for (int l = 0; l < spikes; ++l) g *= moment(signals[l], indices[a][l] + indices[b][l]);
      gram(a, b) = g;
    }
  }

  // Nonzero eigenvalues of V C V^T equal those of C G.
  const Eigen::MatrixXd cg = weight.asDiagonal() * gram;
  Eigen::EigenSolver<Eigen::MatrixXd> eig(cg);
  const Eigen::VectorXcd values = eig.eigenvalues();
  RankKPrediction out;
  out.k_star = k;
  out.sigma = report.sigma;
  Eigen::Index lead = 0;
  for (Eigen::Index i = 0; i < terms; ++i) {
    if (std::abs(values[i].real()) > std::abs(values[lead].real())) lead = i;
    if (std::abs(values[i].real()) > 1e-12 * std::max(1.0, std::abs(values[lead].real()))) {
      out.perturbation_eigenvalues.push_back(values[i].real());
    }
  }
  std::sort(out.perturbation_eigenvalues.begin(), out.perturbation_eigenvalues.end(),
            [](double x, double y) { return std::abs(x) > std::abs(y); });

  const double theta = values[lead].real();
  const Eigen::VectorXd a = eig.eigenvectors().col(lead).real();
  // Eigenvector V a against the first spike's x_1^{k} = V e_0.
  const double along = a.dot(gram.col(0));
  const double norm_sq = a.dot(gram * a);
  const double cos_sq = norm_sq > 0.0 ? along * along / (norm_sq * gram(0, 0)) : 0.0;

  out.lambda_limit = bbp_eigenvalue(theta, report.sigma);
  out.overlap_limit = bbp_overlap(theta, report.sigma) * cos_sq;
  return out;
}

}  // namespace nlspike
