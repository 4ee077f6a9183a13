#include "nlspike/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "nlspike/coefficients.hpp"
#include "nlspike/errors.hpp"
#include "nlspike/models.hpp"
#include "nlspike/theory.hpp"

namespace nlspike {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::uint64_t kSketchTag = 0x736B65746368ull;  // "sketch"
constexpr double kZeroThreshold = 1e-8;

unsigned worker_count(const ExperimentConfig& config, std::size_t jobs) {
  unsigned w = config.workers ? config.workers : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(w, std::max<std::size_t>(jobs, 1)));
}

// Runs job(i) for i in [0, jobs) on a pool; the first exception is rethrown after all workers stop.
template <class Job>
void parallel_for(std::size_t jobs, unsigned workers, Job&& job) {
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < jobs && !failed; i = next++) {
      try {
        job(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
  }
  if (error) std::rethrow_exception(error);
}

struct Cell {
  std::size_t n;
  double gamma0;
  std::size_t replica;
};

std::vector<Cell> cells(const ExperimentConfig& config) {
  std::vector<Cell> out;
  for (std::size_t n : config.n_grid) {
    for (double g : config.gamma0_grid) {
      for (std::size_t r = 0; r < config.replicas; ++r) out.push_back({n, g, r});
    }
  }
  return out;
}

template <class Row>
void sort_rows(std::vector<Row>& rows) {
  std::ranges::sort(rows, [](const Row& a, const Row& b) {
    if (a.n != b.n) return a.n < b.n;
    if (a.gamma0 != b.gamma0) return a.gamma0 < b.gamma0;
    return a.replica < b.replica;
  });
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

int required_index(const CoefficientReport& report) {
  if (!report.k_star) throw IndexNotDetected("no information coefficient above tolerance up to k_max");
  return *report.k_star;
}

std::vector<double> spike_weights(const ExperimentConfig& config) {
  return config.spike_weights.empty() ? std::vector<double>(config.rank, 1.0) : config.spike_weights;
}

std::vector<SignalSpec> spike_signals(const ExperimentConfig& config) {
  return config.signals.empty() ? std::vector<SignalSpec>(config.rank, config.signal) : config.signals;
}

std::vector<double> spike_gammas(const std::vector<double>& weights, double gamma0, std::size_t n, int k) {
  std::vector<double> out;
  for (double w : weights) out.push_back(relevant_gamma(gamma0 * w, n, k));
  return out;
}

// Shared by run_sweep and run_rank_k; the rank-one case goes through build_spiked.
std::vector<SweepRow> sweep_rows(const ExperimentConfig& config, const CoefficientReport& report) {
  const int k = required_index(report);
  const auto weights = spike_weights(config);
  const auto signals = spike_signals(config);

  std::vector<SweepRow> rows;
  for (const Cell& cell : cells(config)) {
    SweepRow row;
    row.n = cell.n;
    row.gamma0 = cell.gamma0;
    row.replica = cell.replica;
    row.seed = replica_stream(config.base_seed, cell.n, cell.gamma0, cell.replica).stream_id;
    row.sigma = report.sigma;
    row.k_star = k;
    if (config.rank == 1) {
      const Prediction p = predict(cell.gamma0 * weights[0], report, signals[0]);
      row.lambda_pred = p.lambda_limit;
      row.overlap_pred = p.overlap_limit;
    } else {
      std::vector<double> strengths;
      for (double w : weights) strengths.push_back(cell.gamma0 * w);
      const RankKPrediction p = predict_rank_k(strengths, report, signals);
      row.lambda_pred = p.lambda_limit;
      row.overlap_pred = p.overlap_limit;
    }
    rows.push_back(std::move(row));
  }

  parallel_for(rows.size(), worker_count(config, rows.size()), [&](std::size_t i) {
    SweepRow& row = rows[i];
    const auto start = std::chrono::steady_clock::now();
    const SeededStream stream{config.base_seed, row.seed};
    Matrix y;
    Vector x;
    if (config.rank == 1) {
      SpikedModel model = build_spiked({row.n, config.f, config.noise, signals[0],
                                        relevant_gamma(row.gamma0 * weights[0], row.n, k), stream, false});
      y = std::move(model.y);
      x = std::move(model.x);
    } else {
      RankKModel model = build_rank_k(
          {row.n, config.f, config.noise, signals, spike_gammas(weights, row.gamma0, row.n, k), stream, false});
      y = std::move(model.y);
      x = std::move(model.signals.front());
    }
    if (const auto eig = solve_leading(y, config.tol, config.max_iter)) {
      row.lambda1 = eig->lambda1;
      row.overlap_sq = overlap(eig->v1, x, k);
    } else {
      row.lambda1 = kNaN;
      row.overlap_sq = kNaN;
      row.status = kStatusNotConverged;
    }
    row.wall_time_ms = config.record_timing ? elapsed_ms(start) : 0.0;
  });
  sort_rows(rows);
  return rows;
}

}  // namespace

SeededStream replica_stream(std::uint64_t base_seed, std::size_t n, double gamma0, std::size_t replica) {
  // +0.0 and -0.0 name the same cell.
  const double g = gamma0 == 0.0 ? 0.0 : gamma0;
  std::uint64_t id = hash_combine(0x7265706C696361ull, static_cast<std::uint64_t>(n));  // "replica"
  id = hash_combine(id, std::bit_cast<std::uint64_t>(g));
  id = hash_combine(id, static_cast<std::uint64_t>(replica));
  return SeededStream{base_seed, id};
}

std::optional<EigenResult> solve_leading(const Matrix& m, double tol, int max_iter) {
  try {
    return leading_eigenpair(m, tol, max_iter);
  } catch (const NotConverged&) {
  }
  try {
    return leading_eigenpair(m, tol, 4 * max_iter);
  } catch (const NotConverged&) {
    return std::nullopt;
  }
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& config) {
  ExperimentConfig single = config;
  single.rank = 1;
  single.spike_weights.clear();
  single.signals.clear();
  return sweep_rows(single, info_index(config.f, config.noise, config.k_max));
}

std::vector<EquivalenceRow> run_equivalence(const ExperimentConfig& config) {
  const CoefficientReport report = info_index(config.f, config.noise, config.k_max);
  const int k = required_index(report);
  const double theta = report.theta[k];

  std::vector<EquivalenceRow> rows;
  for (const Cell& cell : cells(config)) {
    EquivalenceRow row;
    row.n = cell.n;
    row.gamma0 = cell.gamma0;
    row.replica = cell.replica;
    row.seed = replica_stream(config.base_seed, cell.n, cell.gamma0, cell.replica).stream_id;
    rows.push_back(row);
  }
  parallel_for(rows.size(), worker_count(config, rows.size()), [&](std::size_t i) {
    EquivalenceRow& row = rows[i];
    const double gamma = relevant_gamma(row.gamma0, row.n, k);
    SpikedModel model = build_spiked(
        {row.n, config.f, config.noise, config.signal, gamma, SeededStream{config.base_seed, row.seed}, true});
    model.y -= *model.null_model;
    model.null_model.reset();
    model.y -= rank_one_equivalent(model.x, gamma, k, theta);
    if (const auto eig = solve_leading(model.y, config.tol, config.max_iter)) {
      row.residual_norm = std::abs(eig->lambda1);
    } else {
      row.residual_norm = kNaN;
      row.status = kStatusNotConverged;
    }
  });
  sort_rows(rows);
  return rows;
}

RankKResult run_rank_k(const ExperimentConfig& config) {
  const CoefficientReport report = info_index(config.f, config.noise, config.k_max);
  const int k = required_index(report);
  RankKResult result;
  result.rows = sweep_rows(config, report);

  RankReport& rr = result.report;
  rr.n = *std::ranges::max_element(config.n_grid);
  rr.gamma0 = config.gamma0_grid.front();
  rr.spikes = config.rank;
  rr.k_star = k;
  rr.expected_rank = finite_rank_count(config.rank, k);

  const auto weights = spike_weights(config);
  const auto signals = spike_signals(config);
  const SeededStream stream = replica_stream(config.base_seed, rr.n, rr.gamma0, 0);
  std::vector<Vector> xs;
  for (std::size_t l = 0; l < config.rank; ++l) xs.push_back(sample_signal(signals[l], rr.n, signal_stream(stream, l)));
  const auto gammas = spike_gammas(weights, rr.gamma0, rr.n, k);
  const Matrix p = finite_rank_equivalent(xs, gammas, k, report.theta[k]);

  const auto values = low_rank_eigenvalues(p, static_cast<int>(rr.expected_rank) + 10, stream.child(kSketchTag));
  rr.numerical_rank = numerical_rank(values);
  rr.eigenvalues.assign(values.begin(), values.begin() + std::min(values.size(), rr.expected_rank + 1));

  std::vector<double> strengths;
  for (double w : weights) strengths.push_back(rr.gamma0 * w);
  rr.predicted_eigenvalues = predict_rank_k(strengths, report, signals).perturbation_eigenvalues;

  if (config.rank == 2 && k == 2) {
    const auto n = static_cast<Eigen::Index>(rr.n);
    const Vector a = xs[0].array().square();
    const Vector b = xs[1].array().square();
    const Vector ab = xs[0].cwiseProduct(xs[1]);
    const double c = report.theta[2] / (2.0 * std::pow(static_cast<double>(n), 1.5));
    Matrix termwise = (c * gammas[0] * gammas[0]) * a * a.transpose();
    termwise += (2.0 * c * gammas[0] * gammas[1]) * ab * ab.transpose();
    termwise += (c * gammas[1] * gammas[1]) * b * b.transpose();
    const double scale = p.cwiseAbs().maxCoeff();
    rr.cross_term_defect = scale > 0.0 ? (p - termwise).cwiseAbs().maxCoeff() / scale : 0.0;
  }
  return result;
}

std::vector<RectangularRow> run_rectangular(const ExperimentConfig& config) {
  const CoefficientReport report = info_index(config.f, config.noise, config.k_max);
  const int k = required_index(report);
  const SignalSpec su = config.signal_u.value_or(config.signal);
  const SignalSpec sv = config.signal_v.value_or(config.signal);

  std::vector<RectangularRow> rows;
  for (const Cell& cell : cells(config)) {
    RectangularRow row;
    row.n = cell.n;
    row.m = config.columns_for(cell.n);
    row.gamma0 = cell.gamma0;
    row.replica = cell.replica;
    row.seed = replica_stream(config.base_seed, cell.n, cell.gamma0, cell.replica).stream_id;
    rows.push_back(row);
  }
  parallel_for(rows.size(), worker_count(config, rows.size()), [&](std::size_t i) {
    RectangularRow& row = rows[i];
    const RectangularModel model =
        build_rectangular({row.n, row.m, config.f, config.noise, su, sv, relevant_gamma(row.gamma0, row.n, k),
                           SeededStream{config.base_seed, row.seed}});
    const auto spectrum = full_spectrum(symmetrize_rectangular(model.y, row.m));
    const std::size_t total = spectrum.size();
    double top = 0.0;
    for (double v : spectrum) top = std::max(top, std::abs(v));
    for (std::size_t j = 0; j < total; ++j) {
      row.pairing_defect = std::max(row.pairing_defect, std::abs(spectrum[j] + spectrum[total - 1 - j]));
      if (std::abs(spectrum[j]) <= kZeroThreshold * std::max(1.0, top)) ++row.zero_count;
    }

    const Matrix gram = (model.y * model.y.transpose()) / static_cast<double>(row.m);
    const auto mu = full_spectrum(gram);
    for (std::size_t j = 0; j < row.n; ++j) {
      const double s = spectrum[total - row.n + j];
      row.gram_defect = std::max(row.gram_defect, std::abs(s * s - mu[j]));
    }
    row.gram_lambda1 = mu.back();

    if (const auto eig = solve_leading(gram, config.tol, config.max_iter)) {
      row.overlap_u = overlap(eig->v1, model.u, k);
      const Vector right = model.y.transpose() * eig->v1;
      const double norm = right.norm();
      row.overlap_v = norm > 0.0 ? overlap(right / norm, model.v, k) : 0.0;
    } else {
      row.overlap_u = kNaN;
      row.overlap_v = kNaN;
      row.status = kStatusNotConverged;
    }
  });
  sort_rows(rows);
  return rows;
}

SpectrumResult run_spectrum(const ExperimentConfig& config) {
  SpectrumResult result;
  result.n = config.n_grid.front();
  result.gamma0 = config.gamma0_grid.front();
  result.sigma = noise_scale(config.f, config.noise);
  double gamma = 0.0;
  if (result.gamma0 != 0.0) {
    gamma = relevant_gamma(result.gamma0, result.n, required_index(info_index(config.f, config.noise, config.k_max)));
  }
  const SpikedModel model = build_spiked({result.n, config.f, config.noise, config.signal, gamma,
                                          replica_stream(config.base_seed, result.n, result.gamma0, 0), false});
  result.eigenvalues = full_spectrum(model.y);
  result.histogram = histogram(result.eigenvalues, config.bins);
  result.ks_distance = ks_distance_semicircle(result.eigenvalues, result.sigma);
  return result;
}

double quantile(std::vector<double> values, double q) {
  std::erase_if(values, [](double v) { return std::isnan(v); });
  if (values.empty()) return kNaN;
  std::ranges::sort(values);
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

}  // namespace nlspike
