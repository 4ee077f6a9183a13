#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "nlspike/distributions.hpp"
#include "nlspike/hermite.hpp"
#include "nlspike/nonlinearity.hpp"

namespace nlspike {

inline constexpr int kDefaultMaxIndex = 8;

enum class CoefficientMethod {
  /// theta_k = E f^{(k)}(Z)
  derivative_quadrature,
  /// theta_k = (-1)^k \int f w_Z^{(k)}
  density_quadrature,
};

std::string_view to_string(CoefficientMethod method);

struct CoefficientReport {
  /// theta[k] for k = 0..k_max.
  std::vector<double> theta;
  /// Smallest k >= 1 with |theta_k| > tolerance_used; empty when none is found.
  std::optional<int> k_star;
  double sigma = 0.0;
  /// E f(Z)^2
  double theta0_of_f_squared = 0.0;
  CoefficientMethod method = CoefficientMethod::derivative_quadrature;
  double tolerance_used = 0.0;
  /// Set when coefficients rely on a density differentiable only almost everywhere.
  bool best_effort = false;
};

/// E g(Z) under the noise law. Gauss-Hermite (200 nodes) for gaussian noise
/// and smooth g, adaptive Gauss-Kronrod split at the breakpoints otherwise.
double noise_expectation(const std::function<double(double)>& g, const NoiseSpec& noise,
                         std::span<const double> breakpoints = {});

/// Which route info_coefficient takes by default for order k, if any.
std::optional<CoefficientMethod> applicable_method(const Nonlinearity& f, const NoiseSpec& noise, int k);

/// k-th information coefficient theta_k(f) by the default route.
/// Throws NoApplicableMethod when f is not k times differentiable and the
/// noise has no smooth density.
double info_coefficient(const Nonlinearity& f, const NoiseSpec& noise, int k);

/// Same, forcing a route. Throws NoApplicableMethod when it does not apply.
double info_coefficient(const Nonlinearity& f, const NoiseSpec& noise, int k, CoefficientMethod method);

/// 1e-8 * max(1, ||f||_{L^2(mu_Z)}).
double default_index_tolerance(const Nonlinearity& f, const NoiseSpec& noise);

/// theta_0..theta_{k_max}, the information index and the noise scale sigma.
CoefficientReport info_index(const Nonlinearity& f, const NoiseSpec& noise, int k_max = kDefaultMaxIndex,
                             std::optional<double> tol = std::nullopt);

/// sigma = sqrt(E f(Z)^2 - (E f(Z))^2). Throws std::domain_error when f is
/// not in L^4 of the noise law.
double noise_scale(const Nonlinearity& f, const NoiseSpec& noise);

}  // namespace nlspike
