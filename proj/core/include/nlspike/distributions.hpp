#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "nlspike/rng.hpp"
#include "nlspike/types.hpp"

namespace nlspike {

enum class NoiseKind { gaussian, uniform_sym, rademacher, laplace };

/// Stretched-exponential tail envelope: P(|Z| > M) <= scale * exp(-rate * M^exponent).
struct TailBound {
  double scale;
  double rate;
  double exponent;
};

/// Law of the noise entries. All kinds are standardized to mean 0 and
/// variance 1; uniform_sym is Uniform(-sqrt 3, sqrt 3) and laplace has scale 1/sqrt 2.
class NoiseSpec {
 public:
  constexpr NoiseSpec() = default;
  constexpr explicit NoiseSpec(NoiseKind kind) : kind_(kind) {}

  static NoiseSpec parse(std::string_view name);

  [[nodiscard]] constexpr NoiseKind kind() const { return kind_; }
  [[nodiscard]] std::string_view name() const;

  /// True when density derivatives of every order are available. Laplace
  /// qualifies with derivatives defined almost everywhere (see best_effort).
  [[nodiscard]] bool has_smooth_density() const;
  /// Density derivatives exist only almost everywhere; coefficients computed
  /// through them are reported as best-effort.
  [[nodiscard]] bool density_is_best_effort() const;
  [[nodiscard]] TailBound tail_bound() const;
  [[nodiscard]] double tail_exponent() const { return tail_bound().exponent; }
  /// Exact P(|Z| > m).
  [[nodiscard]] double tail_probability(double m) const;

  /// Closed support [lo, hi] of the law (infinite for gaussian/laplace).
  [[nodiscard]] std::pair<double, double> support() const;

  [[nodiscard]] double sample(const CounterRng& rng, std::uint64_t i, std::uint64_t j) const;

  friend constexpr bool operator==(NoiseSpec, NoiseSpec) = default;

 private:
  NoiseKind kind_ = NoiseKind::gaussian;
};

enum class SignalKind { gaussian, rademacher, uniform_sym, user_discrete };

/// Law of the signal entries x_i.
class SignalSpec {
 public:
  SignalSpec() = default;
  explicit SignalSpec(SignalKind kind);

  /// Finite discrete law; weights are normalized. Throws std::invalid_argument
  /// for an empty support, negative weights, or the point mass at zero.
  static SignalSpec user_discrete(std::vector<double> support, std::vector<double> weights);
  /// "gaussian", "rademacher", "uniform_sym", or "discrete:x1/w1,x2/w2,...".
  static SignalSpec parse(std::string_view name);

  [[nodiscard]] SignalKind kind() const { return kind_; }
  [[nodiscard]] std::string name() const;
  [[nodiscard]] const std::vector<double>& support_points() const { return support_; }
  [[nodiscard]] const std::vector<double>& weights() const { return weights_; }

  [[nodiscard]] double sample(const CounterRng& rng, std::uint64_t i) const;

 private:
  SignalKind kind_ = SignalKind::gaussian;
  std::vector<double> support_;
  std::vector<double> weights_;
  std::vector<double> cumulative_;
};

/// n iid draws from the signal law; entry i depends only on (stream, i).
Vector sample_signal(const SignalSpec& spec, std::size_t n, const SeededStream& stream);

/// Symmetric noise matrix with iid entries on and above the diagonal.
Matrix sample_noise_symmetric(const NoiseSpec& spec, std::size_t n, const SeededStream& stream);

/// Density of the noise law. Throws std::invalid_argument for rademacher.
double density(const NoiseSpec& spec, double x);

/// k-th derivative of the noise density. Gaussian uses (-1)^k He_k(x) w(x);
/// laplace returns the almost-everywhere derivative. Throws
/// std::invalid_argument for kinds without a smooth density and
/// std::domain_error for k above the Hermite cap.
double density_derivative(const NoiseSpec& spec, int k, double x);

double moment(const NoiseSpec& spec, int k);
double moment(const SignalSpec& spec, int k);

}  // namespace nlspike
