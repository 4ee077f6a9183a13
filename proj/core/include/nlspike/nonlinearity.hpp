#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace nlspike {

inline constexpr int kMaxDerivativeOrder = 30;

enum class NonlinearityKind { identity, abs, sign, relu, tanh, hermite, polynomial, shifted_composite };

/// Entrywise non-linearity f with closed-form derivatives where they exist.
/// Value type; copies share the (immutable) inner function of a composite.
class Nonlinearity {
 public:
  static Nonlinearity identity();
  static Nonlinearity abs();
  static Nonlinearity sign();
  static Nonlinearity relu();
  static Nonlinearity tanh();
  /// Probabilists' He_k, k <= 30.
  static Nonlinearity hermite(int k);
  /// sum_j c_j x^j with coefficients in ascending order.
  static Nonlinearity polynomial(std::vector<double> coefficients);
  /// x -> inner(x + shift).
  static Nonlinearity shifted(const Nonlinearity& inner, double shift);

  /// Registry lookup: identity, abs, sign, relu, tanh, he<k> (or hermite:<k>),
  /// poly:c0,c1,... and shift:<s>:<inner name>.
  static Nonlinearity parse(std::string_view name);

  [[nodiscard]] NonlinearityKind kind() const { return kind_; }
  [[nodiscard]] std::string name() const;

  [[nodiscard]] double operator()(double x) const;

  /// Highest k for which derivative(k, .) is defined everywhere (0 for kinked f).
  [[nodiscard]] int derivative_order_available() const;

  /// f^{(k)}(x). Throws std::domain_error when k exceeds derivative_order_available().
  [[nodiscard]] double derivative(int k, double x) const;

  /// Points where f or one of its derivatives is discontinuous; quadrature
  /// splits its domain there.
  [[nodiscard]] std::vector<double> breakpoints() const;

  [[nodiscard]] const std::vector<double>& polynomial_coefficients() const { return coefficients_; }

 private:
  Nonlinearity() = default;

  NonlinearityKind kind_ = NonlinearityKind::identity;
  int order_ = 0;
  double shift_ = 0.0;
  std::vector<double> coefficients_;
  std::shared_ptr<const Nonlinearity> inner_;
};

}  // namespace nlspike
