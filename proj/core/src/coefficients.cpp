#include "nlspike/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "nlspike/errors.hpp"
#include "nlspike/quadrature.hpp"

namespace nlspike {

double hermite_polynomial(int k, double x) {
  if (k < 0 || k > kMaxHermiteOrder) {
    throw std::domain_error("Hermite order " + std::to_string(k) + " outside [0, 30]");
  }
  if (k == 0) return 1.0;
  double prev = 1.0;
  double cur = x;
  for (int j = 1; j < k; ++j) {
    const double next = x * cur - j * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

std::string_view to_string(CoefficientMethod method) {
  switch (method) {
    case CoefficientMethod::derivative_quadrature: return "derivative_quadrature";
    case CoefficientMethod::density_quadrature: return "density_quadrature";
  }
  return "?";
}

double noise_expectation(const std::function<double(double)>& g, const NoiseSpec& noise,
                         std::span<const double> breakpoints) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  switch (noise.kind()) {
    case NoiseKind::gaussian: {
      if (breakpoints.empty()) return GaussHermiteRule::standard().expectation(g);
      const auto integrand = [&](double x) {
        const double w = density(noise, x);
        return w == 0.0 ? 0.0 : g(x) * w;
      };
      return integrate_adaptive(integrand, -inf, inf, breakpoints).value;
    }
    case NoiseKind::uniform_sym: {
      const auto [lo, hi] = noise.support();
      const double w = density(noise, 0.0);
      return w * integrate_adaptive(g, lo, hi, breakpoints).value;
    }
    case NoiseKind::rademacher: return 0.5 * (g(-1.0) + g(1.0));
    case NoiseKind::laplace: {
      std::vector<double> cuts(breakpoints.begin(), breakpoints.end());
      cuts.push_back(0.0);
      const auto integrand = [&](double x) {
        const double w = density(noise, x);
        return w == 0.0 ? 0.0 : g(x) * w;
      };
      return integrate_adaptive(integrand, -inf, inf, cuts).value;
    }
  }
  return 0.0;
}

std::optional<CoefficientMethod> applicable_method(const Nonlinearity& f, const NoiseSpec& noise, int k) {
  if (f.derivative_order_available() >= k) return CoefficientMethod::derivative_quadrature;
  if (noise.has_smooth_density()) return CoefficientMethod::density_quadrature;
  return std::nullopt;
}

double info_coefficient(const Nonlinearity& f, const NoiseSpec& noise, int k) {
  const auto method = applicable_method(f, noise, k);
  if (!method) {
    throw NoApplicableMethod("no applicable method for theta_" + std::to_string(k) + " of " + f.name() +
                             " under " + std::string(noise.name()) + " noise");
  }
  return info_coefficient(f, noise, k, *method);
}

double info_coefficient(const Nonlinearity& f, const NoiseSpec& noise, int k, CoefficientMethod method) {
  if (k < 0 || k > kMaxHermiteOrder) throw std::domain_error("coefficient order outside [0, 30]");
  const auto breaks = f.breakpoints();

  if (method == CoefficientMethod::derivative_quadrature) {
    if (f.derivative_order_available() < k) {
      throw NoApplicableMethod(f.name() + " has no derivative of order " + std::to_string(k));
    }
    return noise_expectation([&](double x) { return f.derivative(k, x); }, noise, breaks);
  }

  if (!noise.has_smooth_density()) {
    throw NoApplicableMethod(std::string(noise.name()) + " noise has no smooth density");
  }
  if (noise.kind() == NoiseKind::gaussian) {
    // (-1)^k w_G^{(k)} = He_k w_G, so the integral is E[f(G) He_k(G)].
    return noise_expectation([&](double x) { return f(x) * hermite_polynomial(k, x); }, noise, breaks);
  }
  std::vector<double> cuts = breaks;
  cuts.push_back(0.0);
  constexpr double inf = std::numeric_limits<double>::infinity();
  const double sign = k % 2 == 0 ? 1.0 : -1.0;
  const auto integrand = [&](double x) {
    const double w = density_derivative(noise, k, x);
    return w == 0.0 ? 0.0 : f(x) * w;
  };
  return sign * integrate_adaptive(integrand, -inf, inf, cuts).value;
}

double default_index_tolerance(const Nonlinearity& f, const NoiseSpec& noise) {
  const auto breaks = f.breakpoints();
  const double second = noise_expectation([&](double x) { return f(x) * f(x); }, noise, breaks);
  return 1e-8 * std::max(1.0, std::sqrt(std::max(0.0, second)));
}

namespace {

struct Moments {
  double first;
  double second;
  double centered;
};

Moments checked_moments(const Nonlinearity& f, const NoiseSpec& noise) {
  const auto breaks = f.breakpoints();
  const double fourth = noise_expectation(
      [&](double x) {
        const double v = f(x);
        return v * v * v * v;
      },
      noise, breaks);
  if (!std::isfinite(fourth)) {
    throw std::domain_error(f.name() + " is not in L^4 of the " + std::string(noise.name()) + " law");
  }
  const double first = noise_expectation([&](double x) { return f(x); }, noise, breaks);
  const double second = noise_expectation([&](double x) { return f(x) * f(x); }, noise, breaks);
  const double centered = noise_expectation(
      [&](double x) {
        const double d = f(x) - first;
        return d * d;
      },
      noise, breaks);
  return {first, second, centered};
}

double sigma_from(const Moments& m) {
  return std::sqrt(std::max(0.0, m.centered));
}

}  // namespace

double noise_scale(const Nonlinearity& f, const NoiseSpec& noise) {
  return sigma_from(checked_moments(f, noise));
}

CoefficientReport info_index(const Nonlinearity& f, const NoiseSpec& noise, int k_max, std::optional<double> tol) {
  if (k_max < 1 || k_max > kMaxHermiteOrder) throw std::invalid_argument("k_max must lie in [1, 30]");
  if (tol && !(*tol > 0.0)) throw std::invalid_argument("index tolerance must be positive");

  const Moments m = checked_moments(f, noise);
  CoefficientReport report;
  report.theta0_of_f_squared = m.second;
  report.sigma = sigma_from(m);
  report.tolerance_used = tol ? *tol : 1e-8 * std::max(1.0, std::sqrt(std::max(0.0, m.second)));

  const auto method = applicable_method(f, noise, k_max);
  if (!method) {
    throw NoApplicableMethod("no applicable method for " + f.name() + " under " + std::string(noise.name()) +
                             " noise");
  }
  report.method = *method;
  report.best_effort = *method == CoefficientMethod::density_quadrature && noise.density_is_best_effort();

  report.theta.resize(static_cast<std::size_t>(k_max) + 1);
  report.theta[0] = m.first;
  for (int k = 1; k <= k_max; ++k) {
    report.theta[k] = info_coefficient(f, noise, k);
    if (!report.k_star && std::abs(report.theta[k]) > report.tolerance_used) report.k_star = k;
  }
  return report;
}

}  // namespace nlspike
