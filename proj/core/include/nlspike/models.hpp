#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "nlspike/distributions.hpp"
#include "nlspike/nonlinearity.hpp"
#include "nlspike/rng.hpp"
#include "nlspike/types.hpp"

namespace nlspike {

/// Sub-streams of a model seed. Exposed so tests and tools can regenerate
/// the exact noise or signal that a builder used.
SeededStream noise_stream(const SeededStream& model);
SeededStream signal_stream(const SeededStream& model, std::size_t spike);

struct SpikedModelConfig {
  std::size_t n = 0;
  Nonlinearity f = Nonlinearity::identity();
  NoiseSpec noise;
  SignalSpec signal;
  /// Realized SNR gamma(N), not gamma_0.
  double gamma = 0.0;
  SeededStream stream;
  /// Also build the gamma = 0 matrix from the identical noise realization.
  bool couple_to_null = false;
};

struct SpikedModel {
  Matrix y;
  Vector x;
  std::optional<Matrix> null_model;
};

/// Y_ij = [f(Z_ij + gamma x_i x_j / sqrt n) - E f(Z)] / sqrt n with E f(Z)
/// taken from quadrature. Propagates NoApplicableMethod from that quadrature.
SpikedModel build_spiked(const SpikedModelConfig& config);

struct RankKConfig {
  std::size_t n = 0;
  Nonlinearity f = Nonlinearity::identity();
  NoiseSpec noise;
  std::vector<SignalSpec> signals;
  std::vector<double> gammas;
  SeededStream stream;
  bool couple_to_null = false;
};

struct RankKModel {
  Matrix y;
  std::vector<Vector> signals;
  std::optional<Matrix> null_model;
};

/// Rank-K analogue with inner perturbation sum_l gamma_l x_{il} x_{jl} / sqrt n.
/// With K = 1 the output is bit-identical to build_spiked on the same stream.
RankKModel build_rank_k(const RankKConfig& config);

/// P = gamma^k / n^{(k-1)/2} * theta_k / k! * (x^k / sqrt n)(x^k / sqrt n)^T.
Matrix rank_one_equivalent(const Vector& x, double gamma, int k_star, double theta_k_star);

/// Same, computing theta_{k*} from (f, noise). Throws IndexNotDetected when
/// k_star is empty or theta_{k*} vanishes.
Matrix equivalent_perturbation(const Nonlinearity& f, const NoiseSpec& noise, const Vector& x, double gamma,
                               std::optional<int> k_star);

/// P_K = theta_k / (n^{(k+1)/2} k!) * [sum_l gamma_l x_l x_l^T]^{(Hadamard) k}.
Matrix finite_rank_equivalent(const std::vector<Vector>& signals, const std::vector<double>& gammas, int k_star,
                              double theta_k_star);

Matrix equivalent_perturbation_rank_k(const Nonlinearity& f, const NoiseSpec& noise,
                                      const std::vector<Vector>& signals, const std::vector<double>& gammas,
                                      std::optional<int> k_star);

/// Block-constant symmetric variance profile over [0, n).
class VarianceProfile {
 public:
  /// block_sizes partition [0, n); values is a symmetric S x S matrix of
  /// nonnegative entries. Throws std::invalid_argument otherwise.
  VarianceProfile(std::vector<std::size_t> block_sizes, Matrix values);

  static VarianceProfile uniform(std::size_t n, double value = 1.0);

  [[nodiscard]] std::size_t size() const { return block_starts_.back(); }
  [[nodiscard]] std::size_t block_count() const { return block_starts_.size() - 1; }
  [[nodiscard]] std::size_t block_of(std::size_t index) const;
  [[nodiscard]] double value(std::size_t i, std::size_t j) const;
  [[nodiscard]] double block_value(std::size_t s, std::size_t t) const;

 private:
  std::vector<std::size_t> block_starts_;
  Matrix values_;
};

/// Hadamard product Delta (.) M. Throws std::invalid_argument on size mismatch.
Matrix apply_variance_profile(const VarianceProfile& profile, const Matrix& m);

struct RectangularConfig {
  std::size_t n = 0;
  std::size_t m = 0;
  Nonlinearity f = Nonlinearity::identity();
  NoiseSpec noise;
  SignalSpec signal_u;
  SignalSpec signal_v;
  double gamma = 0.0;
  SeededStream stream;
};

struct RectangularModel {
  /// Unnormalized n x m factor f(Z + gamma u v^T / sqrt n) - E f(Z).
  Matrix y;
  Vector u;
  Vector v;
};

RectangularModel build_rectangular(const RectangularConfig& config);

/// [[0, A], [A^T, 0]] / sqrt m for an n x m factor A.
Matrix symmetrize_rectangular(const Matrix& factor, std::size_t m);

}  // namespace nlspike
