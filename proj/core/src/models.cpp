#include "nlspike/models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "nlspike/coefficients.hpp"
#include "nlspike/errors.hpp"

namespace nlspike {

namespace {

constexpr std::uint64_t kNoiseTag = 0x6E6F697365ull;   // "noise"
constexpr std::uint64_t kSignalTag = 0x7369676E616Cull;  // "signal"
constexpr std::uint64_t kRectUTag = 0x75ull;
constexpr std::uint64_t kRectVTag = 0x76ull;

double factorial(int k) {
  double r = 1.0;
  for (int j = 2; j <= k; ++j) r *= j;
  return r;
}

double int_power(double base, int k) {
  double r = 1.0;
  for (int j = 0; j < k; ++j) r *= base;
  return r;
}

void check_size(std::size_t n) {
  if (n < 2) throw std::invalid_argument("model size must be at least 2");
}

}  // namespace

SeededStream noise_stream(const SeededStream& model) { return model.child(kNoiseTag); }

SeededStream signal_stream(const SeededStream& model, std::size_t spike) {
  return model.child(kSignalTag).child(spike);
}

RankKModel build_rank_k(const RankKConfig& config) {
  check_size(config.n);
  const std::size_t rank = config.signals.size();
  if (rank == 0 || config.gammas.size() != rank) {
    throw std::invalid_argument("rank-K model needs K >= 1 signals and as many gammas");
  }
  for (double g : config.gammas) {
    if (!std::isfinite(g)) throw std::invalid_argument("gamma must be finite");
  }

  const double centering = info_coefficient(config.f, config.noise, 0);
  const auto n = static_cast<Eigen::Index>(config.n);
  const double sqrt_n = std::sqrt(static_cast<double>(config.n));

  RankKModel model;
  model.signals.reserve(rank);
  for (std::size_t l = 0; l < rank; ++l) {
    model.signals.push_back(sample_signal(config.signals[l], config.n, signal_stream(config.stream, l)));
  }

  const CounterRng rng(noise_stream(config.stream));
  model.y.resize(n, n);
  if (config.couple_to_null) model.null_model.emplace(n, n);

  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const double z = config.noise.sample(rng, i, j);
      double inner = 0.0;
      for (std::size_t l = 0; l < rank; ++l) {
        const Vector& x = model.signals[l];
        inner += config.gammas[l] * x[i] * x[j] / sqrt_n;
      }
      model.y(i, j) = (config.f(z + inner) - centering) / sqrt_n;
      if (model.null_model) (*model.null_model)(i, j) = (config.f(z) - centering) / sqrt_n;
    }
  }
  for (Eigen::Index i = 1; i < n; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      model.y(i, j) = model.y(j, i);
      if (model.null_model) (*model.null_model)(i, j) = (*model.null_model)(j, i);
    }
  }
  return model;
}

SpikedModel build_spiked(const SpikedModelConfig& config) {
  RankKConfig rank_one{config.n, config.f, config.noise, {config.signal}, {config.gamma}, config.stream,
                       config.couple_to_null};
  RankKModel built = build_rank_k(rank_one);
  return SpikedModel{std::move(built.y), std::move(built.signals.front()), std::move(built.null_model)};
}

Matrix rank_one_equivalent(const Vector& x, double gamma, int k_star, double theta_k_star) {
  if (k_star < 1) throw IndexNotDetected("information index must be >= 1");
  const auto n = static_cast<double>(x.size());
  const double scale = int_power(gamma, k_star) / std::pow(n, 0.5 * (k_star - 1)) * theta_k_star / factorial(k_star);
  const Vector powered = x.array().pow(k_star).matrix();
  Matrix p = powered * powered.transpose();
  p *= scale / n;
  return p;
}

Matrix equivalent_perturbation(const Nonlinearity& f, const NoiseSpec& noise, const Vector& x, double gamma,
                               std::optional<int> k_star) {
  if (!k_star) throw IndexNotDetected("information index not detected; no equivalent perturbation");
  const double theta = info_coefficient(f, noise, *k_star);
  if (theta == 0.0) throw IndexNotDetected("theta at the information index vanishes");
  return rank_one_equivalent(x, gamma, *k_star, theta);
}

Matrix finite_rank_equivalent(const std::vector<Vector>& signals, const std::vector<double>& gammas, int k_star,
                              double theta_k_star) {
  if (k_star < 1) throw IndexNotDetected("information index must be >= 1");
  if (signals.empty() || signals.size() != gammas.size()) {
    throw std::invalid_argument("need K >= 1 signals and as many gammas");
  }
  const auto n = signals.front().size();
  for (const auto& x : signals) {
    if (x.size() != n) throw std::invalid_argument("signal vectors differ in length");
  }
  Matrix inner = Matrix::Zero(n, n);
  for (std::size_t l = 0; l < signals.size(); ++l) inner.noalias() += gammas[l] * signals[l] * signals[l].transpose();
  const double scale =
      theta_k_star / (std::pow(static_cast<double>(n), 0.5 * (k_star + 1)) * factorial(k_star));
  Matrix p(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) p(i, j) = scale * int_power(inner(i, j), k_star);
  }
  return p;
}

Matrix equivalent_perturbation_rank_k(const Nonlinearity& f, const NoiseSpec& noise,
                                      const std::vector<Vector>& signals, const std::vector<double>& gammas,
                                      std::optional<int> k_star) {
  if (!k_star) throw IndexNotDetected("information index not detected; no equivalent perturbation");
  const double theta = info_coefficient(f, noise, *k_star);
  if (theta == 0.0) throw IndexNotDetected("theta at the information index vanishes");
  return finite_rank_equivalent(signals, gammas, *k_star, theta);
}

VarianceProfile::VarianceProfile(std::vector<std::size_t> block_sizes, Matrix values)
    : values_(std::move(values)) {
  if (block_sizes.empty()) throw std::invalid_argument("variance profile needs at least one block");
  const auto blocks = static_cast<Eigen::Index>(block_sizes.size());
  if (values_.rows() != blocks || values_.cols() != blocks) {
    throw std::invalid_argument("variance profile values must be S x S for S blocks");
  }
  for (Eigen::Index s = 0; s < blocks; ++s) {
    for (Eigen::Index t = 0; t < blocks; ++t) {
      if (!(values_(s, t) >= 0.0) || !std::isfinite(values_(s, t))) {
        throw std::invalid_argument("variance profile values must be finite and nonnegative");
      }
      if (values_(s, t) != values_(t, s)) throw std::invalid_argument("variance profile must be symmetric");
    }
  }
  block_starts_.reserve(block_sizes.size() + 1);
  block_starts_.push_back(0);
  for (std::size_t size : block_sizes) {
    if (size == 0) throw std::invalid_argument("variance profile blocks must be non-empty");
    block_starts_.push_back(block_starts_.back() + size);
  }
}

VarianceProfile VarianceProfile::uniform(std::size_t n, double value) {
  return VarianceProfile({n}, Matrix::Constant(1, 1, value));
}

std::size_t VarianceProfile::block_of(std::size_t index) const {
  if (index >= size()) throw std::out_of_range("index outside the variance profile");
  const auto it = std::upper_bound(block_starts_.begin(), block_starts_.end(), index);
  return static_cast<std::size_t>(it - block_starts_.begin()) - 1;
}

double VarianceProfile::value(std::size_t i, std::size_t j) const { return block_value(block_of(i), block_of(j)); }

double VarianceProfile::block_value(std::size_t s, std::size_t t) const {
  return values_(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(t));
}

Matrix apply_variance_profile(const VarianceProfile& profile, const Matrix& m) {
  const auto n = static_cast<std::size_t>(m.rows());
  if (m.rows() != m.cols() || n != profile.size()) {
    throw std::invalid_argument("variance profile covers " + std::to_string(profile.size()) +
                                " indices but the matrix is " + std::to_string(m.rows()) + "x" +
                                std::to_string(m.cols()));
  }
  std::vector<std::size_t> block(n);
  for (std::size_t i = 0; i < n; ++i) block[i] = profile.block_of(i);
  Matrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto r = static_cast<Eigen::Index>(i);
      const auto c = static_cast<Eigen::Index>(j);
      out(r, c) = profile.block_value(block[i], block[j]) * m(r, c);
    }
  }
  return out;
}

RectangularModel build_rectangular(const RectangularConfig& config) {
  if (config.n < 1 || config.m < config.n) throw std::invalid_argument("rectangular model needs 1 <= n <= m");
  if (!std::isfinite(config.gamma)) throw std::invalid_argument("gamma must be finite");
  const double centering = info_coefficient(config.f, config.noise, 0);
  const double sqrt_n = std::sqrt(static_cast<double>(config.n));

  RectangularModel model;
  model.u = sample_signal(config.signal_u, config.n, config.stream.child(kSignalTag).child(kRectUTag));
  model.v = sample_signal(config.signal_v, config.m, config.stream.child(kSignalTag).child(kRectVTag));
  const CounterRng rng(noise_stream(config.stream));
  const auto rows = static_cast<Eigen::Index>(config.n);
  const auto cols = static_cast<Eigen::Index>(config.m);
  model.y.resize(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      const double z = config.noise.sample(rng, i, j);
      model.y(i, j) = config.f(z + config.gamma * model.u[i] * model.v[j] / sqrt_n) - centering;
    }
  }
  return model;
}

Matrix symmetrize_rectangular(const Matrix& factor, std::size_t m) {
  if (m == 0) throw std::invalid_argument("normalization dimension must be positive");
  const auto rows = factor.rows();
  const auto cols = factor.cols();
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  Matrix out = Matrix::Zero(rows + cols, rows + cols);
  out.topRightCorner(rows, cols) = scale * factor;
  out.bottomLeftCorner(cols, rows) = scale * factor.transpose();
  return out;
}

}  // namespace nlspike
