#pragma once

#include <functional>
#include <span>
#include <vector>

namespace nlspike {

/// Gauss-Hermite rule for the standard normal weight (2 pi)^{-1/2} e^{-x^2/2}.
/// Stores the nonnegative half of the nodes; the rule is symmetric and the
/// node count even, so expectations are accumulated as f(x) + f(-x) pairs.
/// With n nodes the rule is exact for polynomials of degree <= 2n - 1.
class GaussHermiteRule {
 public:
  explicit GaussHermiteRule(int nodes);

  /// Shared 200-node rule.
  static const GaussHermiteRule& standard();

  [[nodiscard]] int size() const { return 2 * static_cast<int>(nodes_.size()); }
  [[nodiscard]] const std::vector<double>& positive_nodes() const { return nodes_; }
  [[nodiscard]] const std::vector<double>& positive_weights() const { return weights_; }

  /// E f(G) for G ~ N(0, 1).
  [[nodiscard]] double expectation(const std::function<double(double)>& f) const;

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

struct AdaptiveResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

/// Adaptive Gauss-Kronrod integration of f over [a, b] (either end may be
/// infinite), split at the interior breakpoints where f is not smooth.
AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                  std::span<const double> breakpoints = {},
                                  double relative_tolerance = 1e-12);

}  // namespace nlspike
