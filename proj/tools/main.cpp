#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <span>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "nlspike/coefficients.hpp"
#include "nlspike/config.hpp"
#include "nlspike/emit.hpp"
#include "nlspike/errors.hpp"
#include "nlspike/harness.hpp"
#include "nlspike/theory.hpp"

namespace {

using namespace nlspike;

constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;

struct RunOptions {
  std::string config;
  std::optional<std::string> out;
  std::optional<unsigned> workers;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> report;
  std::optional<int> bins;
};

void add_run_options(CLI::App* cmd, RunOptions& o) {
  cmd->add_option("--config", o.config, "Experiment config file")->required();
  cmd->add_option("--out", o.out, "Output path (stdout when omitted)");
  cmd->add_option("--workers", o.workers, "Worker threads (default: hardware threads)");
  cmd->add_option("--seed", o.seed, "Override base_seed");
}

ExperimentConfig load(const RunOptions& o, ExperimentKind kind) {
  ExperimentConfig c = load_config(o.config, kind);
  if (o.out) c.output = *o.out;
  if (o.workers) c.workers = *o.workers;
  if (o.seed) c.base_seed = *o.seed;
  if (o.bins) c.bins = *o.bins;
  validate(c);
  return c;
}

template <class Write>
void write_output(const ExperimentConfig& c, Write&& write) {
  if (!c.output) {
    write(std::cout);
    return;
  }
  std::ofstream out(*c.output, std::ios::binary);
  if (!out) throw ConfigError("cannot open output " + c.output->string());
  write(out);
}

template <class Row>
int finish(const ExperimentConfig& c, const std::vector<Row>& rows) {
  write_output(c, [&](std::ostream& out) { emit(out, std::span<const Row>(rows), c.format); });
  const auto failed = std::ranges::count_if(rows, [](const Row& r) { return r.status != kStatusOk; });
  if (failed) {
    std::cerr << "nlspike: " << failed << " replica(s) did not converge; flagged rows written\n";
    return kExitNumerical;
  }
  return 0;
}

nlohmann::json report_json(const CoefficientReport& r) {
  return {{"theta", r.theta},
          {"k_star", r.k_star ? nlohmann::json(*r.k_star) : nlohmann::json(nullptr)},
          {"sigma", r.sigma},
          {"method", std::string(to_string(r.method))},
          {"tol", r.tolerance_used}};
}

nlohmann::json prediction_json(const Prediction& p) {
  return {{"gamma0", p.gamma0},
          {"k_star", p.k_star},
          {"effective_spike", p.effective_spike},
          {"sigma", p.sigma},
          {"lambda_limit", p.lambda_limit},
          {"overlap_limit", p.overlap_limit},
          {"supercritical", p.supercritical}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-linear spiked Wigner matrix experiments"};
  app.require_subcommand(1);

  std::string f_name = "identity";
  std::string noise_name = "gaussian";
  std::string signal_name = "gaussian";
  int k_max = kDefaultMaxIndex;
  double gamma0 = 0.0;

  auto* coeffs = app.add_subcommand("coeffs", "Information coefficients, index and noise scale");
  coeffs->add_option("--f", f_name, "Non-linearity")->required();
  coeffs->add_option("--noise", noise_name, "Noise law");
  coeffs->add_option("--kmax", k_max, "Highest coefficient order");

  auto* pred = app.add_subcommand("predict", "Limit eigenvalue and overlap");
  pred->add_option("--f", f_name, "Non-linearity")->required();
  pred->add_option("--noise", noise_name, "Noise law");
  pred->add_option("--signal", signal_name, "Signal law");
  pred->add_option("--gamma0", gamma0, "Rescaled SNR")->required();

  RunOptions opts;
  auto* sweep = app.add_subcommand("sweep", "Leading eigenpair over an (n, gamma0) grid");
  auto* equiv = app.add_subcommand("equivalence", "Rank-one equivalence residuals");
  auto* rank_k = app.add_subcommand("rank-k", "Rank-K sweep and equivalent-perturbation rank");
  auto* rect = app.add_subcommand("rectangular", "Rectangular model symmetrization checks");
  auto* spec = app.add_subcommand("spectrum", "Histogram of the full spectrum");
  for (auto* cmd : {sweep, equiv, rank_k, rect, spec}) add_run_options(cmd, opts);
  rank_k->add_option("--report", opts.report, "Rank report path (stderr when omitted)");
  spec->add_option("--bins", opts.bins, "Histogram bins");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*coeffs) {
      const auto report = info_index(Nonlinearity::parse(f_name), NoiseSpec::parse(noise_name), k_max);
      std::cout << report_json(report).dump() << '\n';
      return 0;
    }
    if (*pred) {
      const auto p = predict(gamma0, Nonlinearity::parse(f_name), NoiseSpec::parse(noise_name),
                             SignalSpec::parse(signal_name));
      std::cout << prediction_json(p).dump() << '\n';
      return 0;
    }
    if (*sweep) {
      const auto c = load(opts, ExperimentKind::sweep);
      return finish(c, run_sweep(c));
    }
    if (*equiv) {
      const auto c = load(opts, ExperimentKind::equivalence);
      return finish(c, run_equivalence(c));
    }
    if (*rank_k) {
      const auto c = load(opts, ExperimentKind::rank_k);
      const auto result = run_rank_k(c);
      const std::string report = to_json(result.report);
      if (opts.report) {
        std::ofstream out(*opts.report);
        if (!out) throw ConfigError("cannot open report " + *opts.report);
        out << report << '\n';
      } else {
        std::cerr << report << '\n';
      }
      return finish(c, result.rows);
    }
    if (*rect) {
      const auto c = load(opts, ExperimentKind::rectangular);
      return finish(c, run_rectangular(c));
    }
    if (*spec) {
      const auto c = load(opts, ExperimentKind::spectrum);
      const auto result = run_spectrum(c);
      write_output(c, [&](std::ostream& out) { write_histogram_csv(out, result.histogram); });
      std::cerr << "n=" << result.n << " gamma0=" << format_double(result.gamma0)
                << " sigma=" << format_double(result.sigma) << " ks=" << format_double(result.ks_distance) << '\n';
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "nlspike: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IndexNotDetected& e) {
    std::cerr << "nlspike: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "nlspike: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "nlspike: numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
