#include "nlspike/emit.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <variant>

#include <nlohmann/json.hpp>

namespace nlspike {

namespace {

using json = nlohmann::json;

static_assert(std::is_same_v<std::size_t, std::uint64_t>, "row counters are stored as 64-bit");

template <class Row>
using Member = std::variant<std::uint64_t Row::*, int Row::*, double Row::*, std::string Row::*>;

template <class Row>
struct Column {
  const char* name;
  Member<Row> member;
};

template <class Row>
struct Schema;

template <>
struct Schema<SweepRow> {
  static inline const std::vector<Column<SweepRow>> columns{
      {"n", &SweepRow::n},
      {"gamma0", &SweepRow::gamma0},
      {"replica", &SweepRow::replica},
      {"seed", &SweepRow::seed},
      {"lambda1", &SweepRow::lambda1},
      {"overlap_sq", &SweepRow::overlap_sq},
      {"lambda_pred", &SweepRow::lambda_pred},
      {"overlap_pred", &SweepRow::overlap_pred},
      {"sigma", &SweepRow::sigma},
      {"k_star", &SweepRow::k_star},
      {"wall_time_ms", &SweepRow::wall_time_ms},
      {"status", &SweepRow::status},
  };
  static inline const std::vector<const char*> measured{"lambda1", "overlap_sq"};
  static inline const std::vector<const char*> constant{"lambda_pred", "overlap_pred"};
};

template <>
struct Schema<EquivalenceRow> {
  static inline const std::vector<Column<EquivalenceRow>> columns{
      {"n", &EquivalenceRow::n},
      {"gamma0", &EquivalenceRow::gamma0},
      {"replica", &EquivalenceRow::replica},
      {"seed", &EquivalenceRow::seed},
      {"residual_norm", &EquivalenceRow::residual_norm},
      {"status", &EquivalenceRow::status},
  };
  static inline const std::vector<const char*> measured{"residual_norm"};
  static inline const std::vector<const char*> constant{};
};

template <>
struct Schema<RectangularRow> {
  static inline const std::vector<Column<RectangularRow>> columns{
      {"n", &RectangularRow::n},
      {"m", &RectangularRow::m},
      {"gamma0", &RectangularRow::gamma0},
      {"replica", &RectangularRow::replica},
      {"seed", &RectangularRow::seed},
      {"pairing_defect", &RectangularRow::pairing_defect},
      {"zero_count", &RectangularRow::zero_count},
      {"gram_defect", &RectangularRow::gram_defect},
      {"gram_lambda1", &RectangularRow::gram_lambda1},
      {"overlap_u", &RectangularRow::overlap_u},
      {"overlap_v", &RectangularRow::overlap_v},
      {"status", &RectangularRow::status},
  };
  static inline const std::vector<const char*> measured{"gram_lambda1", "overlap_u", "overlap_v"};
  static inline const std::vector<const char*> constant{};
};

template <class Row>
std::string field_text(const Row& row, const Member<Row>& member) {
  return std::visit(
      [&](auto ptr) -> std::string {
        const auto& v = row.*ptr;
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          return format_double(v);
        } else if constexpr (std::is_same_v<T, std::string>) {
          return v;
        } else {
          return std::to_string(v);
        }
      },
      member);
}

template <class Row>
double field_value(const Row& row, const char* name) {
  for (const auto& c : Schema<Row>::columns) {
    if (std::string_view(c.name) == name) return row.*std::get<double Row::*>(c.member);
  }
  throw std::logic_error("unknown column");
}

template <class Row>
void csv(std::ostream& out, std::span<const Row> rows) {
  const auto& cols = Schema<Row>::columns;
  for (std::size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << cols[c].name;
  out << '\n';
  for (const Row& row : rows) {
    for (std::size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << field_text(row, cols[c].member);
    out << '\n';
  }
}

template <class Row>
void to_json_array(std::ostream& out, std::span<const Row> rows) {
  json array = json::array();
  for (const Row& row : rows) {
    json obj = json::object();
    for (const auto& c : Schema<Row>::columns) {
      std::visit(
          [&](auto ptr) {
            const auto& v = row.*ptr;
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
              obj[c.name] = std::isfinite(v) ? json(v) : json(nullptr);
            } else {
              obj[c.name] = v;
            }
          },
          c.member);
    }
    array.push_back(std::move(obj));
  }
  out << array.dump(1) << '\n';
}

template <class Row>
std::vector<Row> from_json_array(std::istream& in) {
  const json array = json::parse(in);
  if (!array.is_array()) throw std::runtime_error("expected a JSON array of rows");
  std::vector<Row> rows;
  for (const json& obj : array) {
    Row row;
    for (const auto& c : Schema<Row>::columns) {
      const json& v = obj.at(c.name);
      std::visit(
          [&](auto ptr) {
            using T = std::decay_t<decltype(row.*ptr)>;
            if constexpr (std::is_same_v<T, double>) {
              row.*ptr = v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.template get<double>();
            } else {
              row.*ptr = v.template get<T>();
            }
          },
          c.member);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

template <class Row>
void plotdata(std::ostream& out, std::span<const Row> rows) {
  std::size_t i = 0;
  bool first_block = true;
  while (i < rows.size()) {
    const std::size_t n = rows[i].n;
    if (!first_block) out << "\n\n";
    first_block = false;
    out << "# n = " << n << '\n' << "# gamma0";
    for (const char* m : Schema<Row>::measured) out << ' ' << m << "_median " << m << "_q1 " << m << "_q3";
    for (const char* c : Schema<Row>::constant) out << ' ' << c;
    out << " replicas failed\n";
    while (i < rows.size() && rows[i].n == n) {
      const double g = rows[i].gamma0;
      std::size_t j = i;
      std::size_t failed = 0;
      while (j < rows.size() && rows[j].n == n && rows[j].gamma0 == g) {
        if (rows[j].status != kStatusOk) ++failed;
        ++j;
      }
      out << format_double(g);
      for (const char* m : Schema<Row>::measured) {
        std::vector<double> values;
        for (std::size_t r = i; r < j; ++r) values.push_back(field_value(rows[r], m));
        out << ' ' << format_double(quantile(values, 0.5)) << ' ' << format_double(quantile(values, 0.25)) << ' '
            << format_double(quantile(values, 0.75));
      }
      for (const char* c : Schema<Row>::constant) out << ' ' << format_double(field_value(rows[i], c));
      out << ' ' << (j - i) << ' ' << failed << '\n';
      i = j;
    }
  }
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

void write_csv(std::ostream& out, std::span<const SweepRow> rows) { csv(out, rows); }
void write_csv(std::ostream& out, std::span<const EquivalenceRow> rows) { csv(out, rows); }
void write_csv(std::ostream& out, std::span<const RectangularRow> rows) { csv(out, rows); }

void write_json(std::ostream& out, std::span<const SweepRow> rows) { to_json_array(out, rows); }
void write_json(std::ostream& out, std::span<const EquivalenceRow> rows) { to_json_array(out, rows); }
void write_json(std::ostream& out, std::span<const RectangularRow> rows) { to_json_array(out, rows); }

std::vector<SweepRow> read_sweep_json(std::istream& in) { return from_json_array<SweepRow>(in); }
std::vector<EquivalenceRow> read_equivalence_json(std::istream& in) { return from_json_array<EquivalenceRow>(in); }
std::vector<RectangularRow> read_rectangular_json(std::istream& in) { return from_json_array<RectangularRow>(in); }

void write_plotdata(std::ostream& out, std::span<const SweepRow> rows) { plotdata(out, rows); }
void write_plotdata(std::ostream& out, std::span<const EquivalenceRow> rows) { plotdata(out, rows); }
void write_plotdata(std::ostream& out, std::span<const RectangularRow> rows) { plotdata(out, rows); }

void write_histogram_csv(std::ostream& out, const SpectrumHistogram& h) {
  out << "bin_left,bin_right,count,density\n";
  const auto d = h.density();
  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    out << format_double(h.edges[b]) << ',' << format_double(h.edges[b + 1]) << ',' << h.counts[b] << ','
        << format_double(d[b]) << '\n';
  }
}

std::string to_json(const RankReport& report) {
  json j{
      {"n", report.n},
      {"gamma0", report.gamma0},
      {"spikes", report.spikes},
      {"k_star", report.k_star},
      {"expected_rank", report.expected_rank},
      {"numerical_rank", report.numerical_rank},
      {"eigenvalues", report.eigenvalues},
      {"predicted_eigenvalues", report.predicted_eigenvalues},
  };
  j["cross_term_defect"] = report.cross_term_defect ? json(*report.cross_term_defect) : json(nullptr);
  return j.dump(1);
}

}  // namespace nlspike
