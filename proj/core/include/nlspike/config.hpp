#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nlspike/distributions.hpp"
#include "nlspike/nonlinearity.hpp"
#include "nlspike/spectral.hpp"

namespace nlspike {

/// Malformed, incomplete or inconsistent experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ExperimentKind { sweep, equivalence, spectrum, rank_k, rectangular };
enum class OutputFormat { csv, json, plotdata };

std::string_view to_string(ExperimentKind kind);
std::string_view to_string(OutputFormat format);

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::sweep;
  Nonlinearity f = Nonlinearity::identity();
  NoiseSpec noise;
  SignalSpec signal;
  std::vector<std::size_t> n_grid{500, 1000, 2000, 4000};
  std::vector<double> gamma0_grid;
  std::size_t replicas = 8;
  std::uint64_t base_seed = 0;
  double tol = kDefaultSolverTolerance;
  int max_iter = kDefaultSolverIterations;
  int k_max = 8;
  std::optional<std::filesystem::path> output;
  OutputFormat format = OutputFormat::csv;
  /// 0 means one per hardware thread.
  unsigned workers = 0;
  /// When false the wall_time_ms column is written as 0 so outputs stay byte-identical.
  bool record_timing = false;

  // rank_k: spike l has strength gamma_0 * spike_weights[l] and law signals[l].
  std::size_t rank = 1;
  std::vector<double> spike_weights;
  std::vector<SignalSpec> signals;

  // rectangular: the factor is n x m with m = columns, or round(aspect * n).
  std::optional<std::size_t> columns;
  std::optional<double> aspect;
  std::optional<SignalSpec> signal_u;
  std::optional<SignalSpec> signal_v;

  // spectrum
  int bins = 40;

  /// Number of columns of the rectangular factor for row count n.
  [[nodiscard]] std::size_t columns_for(std::size_t n) const;
};

/// Parses `key = value` lines; `#` starts a comment. Lists are comma separated.
/// With `expected` set, a missing experiment key defaults to it and a
/// different one is rejected. Throws ConfigError with the offending line number.
ExperimentConfig parse_config(std::istream& in, std::optional<ExperimentKind> expected = std::nullopt);
ExperimentConfig parse_config_text(std::string_view text, std::optional<ExperimentKind> expected = std::nullopt);
ExperimentConfig load_config(const std::filesystem::path& path, std::optional<ExperimentKind> expected = std::nullopt);

/// Checks grid and parameter invariants. Throws ConfigError.
void validate(const ExperimentConfig& config);

}  // namespace nlspike
