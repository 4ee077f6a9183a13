#include "nlspike/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace nlspike {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    const auto pos = s.find(sep);
    out.push_back(trim(s.substr(0, pos)));
    if (pos == std::string_view::npos) break;
    s = s.substr(pos + 1);
  }
  return out;
}

template <class T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError("bad value '" + std::string(text) + "' for " + std::string(key));
  }
  return value;
}

template <class T>
std::vector<T> parse_list(std::string_view key, std::string_view text) {
  std::vector<T> out;
  for (auto item : split(text, ',')) {
    if (item.empty()) throw ConfigError("empty item in list for " + std::string(key));
    out.push_back(parse_number<T>(key, item));
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "yes" || text == "1" || text == "on") return true;
  if (text == "false" || text == "no" || text == "0" || text == "off") return false;
  throw ConfigError("bad boolean '" + std::string(text) + "' for " + std::string(key));
}

ExperimentKind parse_experiment(std::string_view text) {
  if (text == "sweep") return ExperimentKind::sweep;
  if (text == "equivalence") return ExperimentKind::equivalence;
  if (text == "spectrum") return ExperimentKind::spectrum;
  if (text == "rank_k" || text == "rank-k") return ExperimentKind::rank_k;
  if (text == "rectangular") return ExperimentKind::rectangular;
  throw ConfigError("unknown experiment '" + std::string(text) + "'");
}

OutputFormat parse_format(std::string_view text) {
  if (text == "csv") return OutputFormat::csv;
  if (text == "json") return OutputFormat::json;
  if (text == "plotdata") return OutputFormat::plotdata;
  throw ConfigError("unknown format '" + std::string(text) + "'");
}

template <class Fn>
auto registry_lookup(std::string_view key, Fn&& fn) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string(key) + ": " + e.what());
  } catch (const std::domain_error& e) {
    throw ConfigError(std::string(key) + ": " + e.what());
  }
}

void apply(ExperimentConfig& c, std::string_view key, std::string_view value) {
  if (key == "experiment") {
    c.experiment = parse_experiment(value);
  } else if (key == "f") {
    c.f = registry_lookup(key, [&] { return Nonlinearity::parse(value); });
  } else if (key == "noise") {
    c.noise = registry_lookup(key, [&] { return NoiseSpec::parse(value); });
  } else if (key == "signal") {
    c.signal = registry_lookup(key, [&] { return SignalSpec::parse(value); });
  } else if (key == "n_grid") {
    c.n_grid = parse_list<std::size_t>(key, value);
  } else if (key == "gamma0_grid") {
    c.gamma0_grid = parse_list<double>(key, value);
  } else if (key == "replicas") {
    c.replicas = parse_number<std::size_t>(key, value);
  } else if (key == "base_seed" || key == "seed") {
    c.base_seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "tol") {
    c.tol = parse_number<double>(key, value);
  } else if (key == "max_iter") {
    c.max_iter = parse_number<int>(key, value);
  } else if (key == "k_max") {
    c.k_max = parse_number<int>(key, value);
  } else if (key == "output") {
    c.output = std::filesystem::path(std::string(value));
  } else if (key == "format") {
    c.format = parse_format(value);
  } else if (key == "workers") {
    c.workers = parse_number<unsigned>(key, value);
  } else if (key == "record_timing") {
    c.record_timing = parse_bool(key, value);
  } else if (key == "rank") {
    c.rank = parse_number<std::size_t>(key, value);
  } else if (key == "spike_weights") {
    c.spike_weights = parse_list<double>(key, value);
  } else if (key == "signals") {
    c.signals.clear();
    for (auto item : split(value, ';')) {
      c.signals.push_back(registry_lookup(key, [&] { return SignalSpec::parse(item); }));
    }
  } else if (key == "m") {
    c.columns = parse_number<std::size_t>(key, value);
  } else if (key == "aspect") {
    c.aspect = parse_number<double>(key, value);
  } else if (key == "signal_u") {
    c.signal_u = registry_lookup(key, [&] { return SignalSpec::parse(value); });
  } else if (key == "signal_v") {
    c.signal_v = registry_lookup(key, [&] { return SignalSpec::parse(value); });
  } else if (key == "bins") {
    c.bins = parse_number<int>(key, value);
  } else {
    throw ConfigError("unknown key '" + std::string(key) + "'");
  }
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::sweep: return "sweep";
    case ExperimentKind::equivalence: return "equivalence";
    case ExperimentKind::spectrum: return "spectrum";
    case ExperimentKind::rank_k: return "rank_k";
    case ExperimentKind::rectangular: return "rectangular";
  }
  return "unknown";
}

std::string_view to_string(OutputFormat format) {
  switch (format) {
    case OutputFormat::csv: return "csv";
    case OutputFormat::json: return "json";
    case OutputFormat::plotdata: return "plotdata";
  }
  return "unknown";
}

std::size_t ExperimentConfig::columns_for(std::size_t n) const {
  if (columns) return *columns;
  if (aspect) return static_cast<std::size_t>(std::llround(*aspect * static_cast<double>(n)));
  return n;
}

ExperimentConfig parse_config(std::istream& in, std::optional<ExperimentKind> expected) {
  ExperimentConfig c;
  std::map<std::string, int, std::less<>> seen;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view view = line;
    view = trim(view.substr(0, view.find('#')));
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(number) + ": expected key = value");
    }
    const std::string_view key = trim(view.substr(0, eq));
    const std::string_view value = trim(view.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError("line " + std::to_string(number) + ": empty key or value");
    }
    if (const auto it = seen.find(key); it != seen.end()) {
      throw ConfigError("line " + std::to_string(number) + ": '" + std::string(key) + "' already set on line " +
                        std::to_string(it->second));
    }
    seen.emplace(std::string(key), number);
    try {
      apply(c, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(number) + ": " + e.what());
    }
  }
  if (expected) {
    if (seen.contains("experiment") && c.experiment != *expected) {
      throw ConfigError("config declares experiment '" + std::string(to_string(c.experiment)) + "', expected '" +
                        std::string(to_string(*expected)) + "'");
    }
    c.experiment = *expected;
  }
  if (c.gamma0_grid.empty() && c.experiment == ExperimentKind::spectrum) c.gamma0_grid = {0.0};
  validate(c);
  return c;
}

ExperimentConfig parse_config_text(std::string_view text, std::optional<ExperimentKind> expected) {
  std::istringstream in{std::string(text)};
  return parse_config(in, expected);
}

ExperimentConfig load_config(const std::filesystem::path& path, std::optional<ExperimentKind> expected) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  return parse_config(in, expected);
}

void validate(const ExperimentConfig& c) {
  if (c.n_grid.empty()) throw ConfigError("n_grid is empty");
  if (c.gamma0_grid.empty()) throw ConfigError("gamma0_grid is empty");
  if (std::ranges::any_of(c.n_grid, [](std::size_t n) { return n < 2; })) {
    throw ConfigError("n_grid entries must be >= 2");
  }
  if (std::ranges::any_of(c.gamma0_grid, [](double g) { return !std::isfinite(g); })) {
    throw ConfigError("gamma0_grid entries must be finite");
  }
  if (c.replicas < 1) throw ConfigError("replicas must be >= 1");
  if (!(c.tol > 0.0)) throw ConfigError("tol must be positive");
  if (c.max_iter < 1) throw ConfigError("max_iter must be >= 1");
  if (c.k_max < 1 || c.k_max > kMaxDerivativeOrder) {
    throw ConfigError("k_max must be in [1, " + std::to_string(kMaxDerivativeOrder) + "]");
  }
  if (c.bins < 1) throw ConfigError("bins must be >= 1");
  if (c.rank < 1) throw ConfigError("rank must be >= 1");
  if (!c.spike_weights.empty() && c.spike_weights.size() != c.rank) {
    throw ConfigError("spike_weights must list one weight per spike");
  }
  if (!c.signals.empty() && c.signals.size() != c.rank) {
    throw ConfigError("signals must list one law per spike");
  }
  if (c.rank > 1 && c.experiment != ExperimentKind::rank_k) {
    throw ConfigError("rank > 1 requires experiment = rank_k");
  }
  if (c.columns && c.aspect) throw ConfigError("set at most one of m and aspect");
  if (c.aspect && !(*c.aspect > 0.0)) throw ConfigError("aspect must be positive");
  if (c.experiment == ExperimentKind::rectangular) {
    for (std::size_t n : c.n_grid) {
      if (c.columns_for(n) < n) throw ConfigError("rectangular experiment needs n <= m");
    }
  }
}

}  // namespace nlspike
