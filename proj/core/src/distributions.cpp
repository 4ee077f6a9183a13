#include "nlspike/distributions.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "nlspike/hermite.hpp"

namespace nlspike {

namespace {

constexpr double kSqrt3 = std::numbers::sqrt3;
constexpr double kSqrt2 = std::numbers::sqrt2;
// Laplace(0, b) with 2 b^2 = 1.
constexpr double kLaplaceScale = 1.0 / std::numbers::sqrt2;

double double_factorial_odd(int k) {
  // (k-1)!! for even k.
  double r = 1.0;
  for (int j = k - 1; j > 1; j -= 2) r *= j;
  return r;
}

double parse_double(std::string_view text) {
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  while (first != last && *first == ' ') ++first;
  while (last != first && *(last - 1) == ' ') --last;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

NoiseSpec NoiseSpec::parse(std::string_view name) {
  if (name == "gaussian" || name == "normal") return NoiseSpec(NoiseKind::gaussian);
  if (name == "uniform_sym" || name == "uniform") return NoiseSpec(NoiseKind::uniform_sym);
  if (name == "rademacher") return NoiseSpec(NoiseKind::rademacher);
  if (name == "laplace") return NoiseSpec(NoiseKind::laplace);
  throw std::invalid_argument("unknown noise law '" + std::string(name) + "'");
}

std::string_view NoiseSpec::name() const {
  switch (kind_) {
    case NoiseKind::gaussian: return "gaussian";
    case NoiseKind::uniform_sym: return "uniform_sym";
    case NoiseKind::rademacher: return "rademacher";
    case NoiseKind::laplace: return "laplace";
  }
  return "?";
}

bool NoiseSpec::has_smooth_density() const {
  return kind_ == NoiseKind::gaussian || kind_ == NoiseKind::laplace;
}

bool NoiseSpec::density_is_best_effort() const { return kind_ == NoiseKind::laplace; }

TailBound NoiseSpec::tail_bound() const {
  switch (kind_) {
    case NoiseKind::gaussian: return {2.0, 0.5, 2.0};
    case NoiseKind::laplace: return {1.0, kSqrt2, 1.0};
    // Bounded laws satisfy any exponent; these envelopes dominate 1 on the support.
    case NoiseKind::uniform_sym: return {std::exp(3.0), 1.0, 2.0};
    case NoiseKind::rademacher: return {std::exp(1.0), 1.0, 2.0};
  }
  return {};
}

double NoiseSpec::tail_probability(double m) const {
  if (m < 0.0) return 1.0;
  switch (kind_) {
    case NoiseKind::gaussian: return std::erfc(m / kSqrt2);
    case NoiseKind::laplace: return std::exp(-m / kLaplaceScale);
    case NoiseKind::uniform_sym: return std::max(0.0, 1.0 - m / kSqrt3);
    case NoiseKind::rademacher: return m < 1.0 ? 1.0 : 0.0;
  }
  return 0.0;
}

std::pair<double, double> NoiseSpec::support() const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  switch (kind_) {
    case NoiseKind::uniform_sym: return {-kSqrt3, kSqrt3};
    case NoiseKind::rademacher: return {-1.0, 1.0};
    default: return {-inf, inf};
  }
}

double NoiseSpec::sample(const CounterRng& rng, std::uint64_t i, std::uint64_t j) const {
  switch (kind_) {
    case NoiseKind::gaussian: return rng.normal(i, j);
    case NoiseKind::uniform_sym: return kSqrt3 * (2.0 * rng.uniforms(i, j)[0] - 1.0);
    case NoiseKind::rademacher: return rng.uniforms(i, j)[0] < 0.5 ? -1.0 : 1.0;
    case NoiseKind::laplace: {
      const double v = rng.uniforms(i, j)[0] - 0.5;
      const double magnitude = -kLaplaceScale * std::log1p(-2.0 * std::abs(v));
      return v < 0.0 ? -magnitude : magnitude;
    }
  }
  return 0.0;
}

SignalSpec::SignalSpec(SignalKind kind) : kind_(kind) {
  if (kind == SignalKind::user_discrete) {
    throw std::invalid_argument("use SignalSpec::user_discrete for discrete laws");
  }
}

SignalSpec SignalSpec::user_discrete(std::vector<double> support, std::vector<double> weights) {
  if (support.empty() || support.size() != weights.size()) {
    throw std::invalid_argument("discrete signal law needs matching, non-empty support and weights");
  }
  double total = 0.0;
  bool nontrivial = false;
  for (std::size_t k = 0; k < support.size(); ++k) {
    if (!(weights[k] >= 0.0) || !std::isfinite(weights[k]) || !std::isfinite(support[k])) {
      throw std::invalid_argument("discrete signal weights must be finite and nonnegative");
    }
    total += weights[k];
    if (weights[k] > 0.0 && support[k] != 0.0) nontrivial = true;
  }
  if (!(total > 0.0)) throw std::invalid_argument("discrete signal weights sum to zero");
  if (!nontrivial) throw std::invalid_argument("signal law must not be the point mass at zero");

  SignalSpec spec;
  spec.kind_ = SignalKind::user_discrete;
  spec.support_ = std::move(support);
  spec.weights_ = std::move(weights);
  for (double& w : spec.weights_) w /= total;
  spec.cumulative_.resize(spec.weights_.size());
  std::partial_sum(spec.weights_.begin(), spec.weights_.end(), spec.cumulative_.begin());
  spec.cumulative_.back() = 1.0;
  return spec;
}

SignalSpec SignalSpec::parse(std::string_view name) {
  if (name == "gaussian" || name == "normal") return SignalSpec(SignalKind::gaussian);
  if (name == "rademacher") return SignalSpec(SignalKind::rademacher);
  if (name == "uniform_sym" || name == "uniform") return SignalSpec(SignalKind::uniform_sym);
  constexpr std::string_view prefix = "discrete:";
  if (name.starts_with(prefix)) {
    std::vector<double> support;
    std::vector<double> weights;
    std::string_view rest = name.substr(prefix.size());
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string_view item = rest.substr(0, comma);
      const auto slash = item.find('/');
      if (slash == std::string_view::npos) {
        throw std::invalid_argument("discrete signal item '" + std::string(item) + "' is not value/weight");
      }
      support.push_back(parse_double(item.substr(0, slash)));
      weights.push_back(parse_double(item.substr(slash + 1)));
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    }
    return user_discrete(std::move(support), std::move(weights));
  }
  throw std::invalid_argument("unknown signal law '" + std::string(name) + "'");
}

std::string SignalSpec::name() const {
  switch (kind_) {
    case SignalKind::gaussian: return "gaussian";
    case SignalKind::rademacher: return "rademacher";
    case SignalKind::uniform_sym: return "uniform_sym";
    case SignalKind::user_discrete: {
      std::string out = "discrete:";
      for (std::size_t k = 0; k < support_.size(); ++k) {
        if (k) out += ',';
        char buf[64];
        auto r = std::to_chars(buf, buf + sizeof buf, support_[k]);
        out.append(buf, r.ptr);
        out += '/';
        r = std::to_chars(buf, buf + sizeof buf, weights_[k]);
        out.append(buf, r.ptr);
      }
      return out;
    }
  }
  return "?";
}

double SignalSpec::sample(const CounterRng& rng, std::uint64_t i) const {
  switch (kind_) {
    case SignalKind::gaussian: return rng.normal(i, 0);
    case SignalKind::rademacher: return rng.uniforms(i, 0)[0] < 0.5 ? -1.0 : 1.0;
    case SignalKind::uniform_sym: return kSqrt3 * (2.0 * rng.uniforms(i, 0)[0] - 1.0);
    case SignalKind::user_discrete: {
      const double u = rng.uniforms(i, 0)[0];
      const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
      const auto idx = std::min<std::size_t>(it - cumulative_.begin(), support_.size() - 1);
      return support_[idx];
    }
  }
  return 0.0;
}

Vector sample_signal(const SignalSpec& spec, std::size_t n, const SeededStream& stream) {
  if (n == 0) throw std::invalid_argument("signal length must be positive");
  const CounterRng rng(stream);
  Vector x(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) x[static_cast<Eigen::Index>(i)] = spec.sample(rng, i);
  return x;
}

Matrix sample_noise_symmetric(const NoiseSpec& spec, std::size_t n, const SeededStream& stream) {
  if (n == 0) throw std::invalid_argument("matrix size must be positive");
  const CounterRng rng(stream);
  const auto size = static_cast<Eigen::Index>(n);
  Matrix z(size, size);
  for (Eigen::Index i = 0; i < size; ++i) {
    for (Eigen::Index j = i; j < size; ++j) z(i, j) = spec.sample(rng, i, j);
  }
  for (Eigen::Index i = 1; i < size; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) z(i, j) = z(j, i);
  }
  return z;
}

double density(const NoiseSpec& spec, double x) {
  switch (spec.kind()) {
    case NoiseKind::gaussian: return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
    case NoiseKind::uniform_sym: return std::abs(x) <= kSqrt3 ? 0.5 / kSqrt3 : 0.0;
    case NoiseKind::laplace: return std::exp(-std::abs(x) / kLaplaceScale) / (2.0 * kLaplaceScale);
    case NoiseKind::rademacher: break;
  }
  throw std::invalid_argument("noise law '" + std::string(spec.name()) + "' has no density");
}

double density_derivative(const NoiseSpec& spec, int k, double x) {
  if (!spec.has_smooth_density()) {
    throw std::invalid_argument("noise law '" + std::string(spec.name()) + "' has no smooth density");
  }
  if (k < 0 || k > kMaxHermiteOrder) throw std::domain_error("density derivative order out of range");
  if (k == 0) return density(spec, x);
  if (spec.kind() == NoiseKind::gaussian) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    return sign * hermite_polynomial(k, x) * density(spec, x);
  }
  // Laplace: w^{(k)}(x) = (-sign(x)/b)^k w(x) away from the origin.
  const double s = x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
  return std::pow(-s / kLaplaceScale, k) * density(spec, x);
}

double moment(const NoiseSpec& spec, int k) {
  if (k < 0) throw std::invalid_argument("moment order must be nonnegative");
  if (k == 0) return 1.0;
  if (k % 2 == 1) return 0.0;
  switch (spec.kind()) {
    case NoiseKind::gaussian: return double_factorial_odd(k);
    case NoiseKind::uniform_sym: return std::pow(kSqrt3, k) / (k + 1);
    case NoiseKind::rademacher: return 1.0;
    case NoiseKind::laplace: return std::tgamma(k + 1.0) * std::pow(kLaplaceScale, k);
  }
  return 0.0;
}

double moment(const SignalSpec& spec, int k) {
  if (k < 0) throw std::invalid_argument("moment order must be nonnegative");
  if (k == 0) return 1.0;
  switch (spec.kind()) {
    case SignalKind::gaussian: return k % 2 ? 0.0 : double_factorial_odd(k);
    case SignalKind::rademacher: return k % 2 ? 0.0 : 1.0;
    case SignalKind::uniform_sym: return k % 2 ? 0.0 : std::pow(kSqrt3, k) / (k + 1);
    case SignalKind::user_discrete: {
      double m = 0.0;
      for (std::size_t i = 0; i < spec.support_points().size(); ++i) {
        m += spec.weights()[i] * std::pow(spec.support_points()[i], k);
      }
      return m;
    }
  }
  return 0.0;
}

}  // namespace nlspike
