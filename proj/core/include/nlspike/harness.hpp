#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nlspike/config.hpp"
#include "nlspike/rng.hpp"
#include "nlspike/spectral.hpp"

namespace nlspike {

inline constexpr std::string_view kStatusOk = "ok";
inline constexpr std::string_view kStatusNotConverged = "not_converged";

struct SweepRow {
  std::size_t n = 0;
  double gamma0 = 0.0;
  std::size_t replica = 0;
  /// stream_id of the replica; (base_seed, seed) regenerates the model.
  std::uint64_t seed = 0;
  double lambda1 = 0.0;
  double overlap_sq = 0.0;
  double lambda_pred = 0.0;
  double overlap_pred = 0.0;
  double sigma = 0.0;
  int k_star = 0;
  double wall_time_ms = 0.0;
  std::string status{kStatusOk};

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

struct EquivalenceRow {
  std::size_t n = 0;
  double gamma0 = 0.0;
  std::size_t replica = 0;
  std::uint64_t seed = 0;
  /// ||Y - Y_0 - P||_op
  double residual_norm = 0.0;
  std::string status{kStatusOk};

  friend bool operator==(const EquivalenceRow&, const EquivalenceRow&) = default;
};

struct RectangularRow {
  std::size_t n = 0;
  std::size_t m = 0;
  double gamma0 = 0.0;
  std::size_t replica = 0;
  std::uint64_t seed = 0;
  /// max_i |lambda_i + lambda_{n+m-1-i}| over the ascending spectrum
  double pairing_defect = 0.0;
  std::size_t zero_count = 0;
  /// max |lambda_i^2 - mu_i| between the n largest symmetrized eigenvalues and the Gram eigenvalues
  double gram_defect = 0.0;
  double gram_lambda1 = 0.0;
  double overlap_u = 0.0;
  double overlap_v = 0.0;
  std::string status{kStatusOk};

  friend bool operator==(const RectangularRow&, const RectangularRow&) = default;
};

/// Stream of replica r in cell (n, gamma_0), keyed by the value of gamma_0
/// rather than its grid position.
SeededStream replica_stream(std::uint64_t base_seed, std::size_t n, double gamma0, std::size_t replica);

/// Largest-magnitude eigenpair, retrying once with four times the budget.
/// Returns nullopt when the retry also fails.
std::optional<EigenResult> solve_leading(const Matrix& m, double tol, int max_iter);

/// Rows sorted by (n, gamma0, replica). Throws IndexNotDetected when f has no
/// index up to k_max; solver failures become flagged rows.
std::vector<SweepRow> run_sweep(const ExperimentConfig& config);

/// Residual of the rank-one equivalence at relevant scaling, with the null
/// model sharing the noise realization.
std::vector<EquivalenceRow> run_equivalence(const ExperimentConfig& config);

struct RankReport {
  std::size_t n = 0;
  double gamma0 = 0.0;
  std::size_t spikes = 0;
  int k_star = 0;
  /// C(K + k* - 1, K - 1)
  std::size_t expected_rank = 0;
  std::size_t numerical_rank = 0;
  /// Leading eigenvalues of P_K by decreasing magnitude (expected_rank + 1 of them).
  std::vector<double> eigenvalues;
  /// Limit eigenvalues of P_K.
  std::vector<double> predicted_eigenvalues;
  /// max |P_K - termwise expansion| / max |P_K|; only for K = k* = 2.
  std::optional<double> cross_term_defect;
};

struct RankKResult {
  std::vector<SweepRow> rows;
  RankReport report;
};

/// Sweep over gamma_0 where spike l has strength gamma_0 * spike_weights[l];
/// overlaps are measured against x_1^{k*}. The rank report uses the largest
/// n, the first gamma_0 and replica 0.
RankKResult run_rank_k(const ExperimentConfig& config);

std::vector<RectangularRow> run_rectangular(const ExperimentConfig& config);

struct SpectrumResult {
  std::size_t n = 0;
  double gamma0 = 0.0;
  double sigma = 0.0;
  std::vector<double> eigenvalues;
  SpectrumHistogram histogram;
  double ks_distance = 0.0;
};

/// Full spectrum of one model at the first n and gamma_0 (replica 0).
SpectrumResult run_spectrum(const ExperimentConfig& config);

/// Entries q-quantile with linear interpolation; NaNs are skipped.
double quantile(std::vector<double> values, double q);

}  // namespace nlspike
