#include "nlspike/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace nlspike {

namespace {

// Roots of the physicists' H_n: Jacobi-matrix eigenvalues as starting points,
// polished by Newton iteration on the orthonormal recurrence, which also
// yields the weights to full relative accuracy in the tails. Returns the
// positive half in descending order.
void physicists_rule(int n, std::vector<double>& x, std::vector<double>& w) {
  const int half = n / 2;
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int j = 1; j < n; ++j) jacobi(j, j - 1) = jacobi(j - 1, j) = std::sqrt(j / 2.0);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi, Eigen::EigenvaluesOnly);
  x.assign(half, 0.0);
  w.assign(half, 0.0);
  const double pim4 = std::pow(std::numbers::pi, -0.25);
  for (int i = 0; i < half; ++i) {
    double z = eig.eigenvalues()[n - 1 - i];
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = pim4;
      double p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double step = p1 / pp;
      z -= step;
      if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    x[i] = z;
    w[i] = 2.0 / (pp * pp);
  }
}

}  // namespace

GaussHermiteRule::GaussHermiteRule(int nodes) {
  if (nodes < 2 || nodes % 2 != 0) {
    throw std::invalid_argument("Gauss-Hermite node count must be even and >= 2");
  }
  std::vector<double> x;
  std::vector<double> w;
  physicists_rule(nodes, x, w);
  // Change of variables to the standard normal weight; keep descending order
  // so sums accumulate the smallest weights first.
  nodes_.resize(x.size());
  weights_.resize(w.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    nodes_[i] = std::numbers::sqrt2 * x[i];
    weights_[i] = w[i] / std::sqrt(std::numbers::pi);
  }
}

const GaussHermiteRule& GaussHermiteRule::standard() {
  static const GaussHermiteRule rule(200);
  return rule;
}

double GaussHermiteRule::expectation(const std::function<double(double)>& f) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    sum += weights_[i] * (f(nodes_[i]) + f(-nodes_[i]));
  }
  return sum;
}

AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                  std::span<const double> breakpoints, double relative_tolerance) {
  if (!(a < b)) throw std::invalid_argument("integration interval must satisfy a < b");
  std::vector<double> cuts{a};
  for (double p : breakpoints) {
    if (p > a && p < b) cuts.push_back(p);
  }
  cuts.push_back(b);
  std::sort(cuts.begin() + 1, cuts.end() - 1);
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  AdaptiveResult total;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    double error = 0.0;
    const double value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        f, cuts[s], cuts[s + 1], 15, relative_tolerance, &error);
    total.value += value;
    total.error_estimate += error;
  }
  return total;
}

}  // namespace nlspike
