#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "nlspike/config.hpp"
#include "nlspike/harness.hpp"
#include "nlspike/spectral.hpp"

namespace nlspike {

/// Shortest decimal string that parses back to the same double; "nan", "inf", "-inf" otherwise.
std::string format_double(double v);

/// Header line, then one line per row in field order.
void write_csv(std::ostream& out, std::span<const SweepRow> rows);
void write_csv(std::ostream& out, std::span<const EquivalenceRow> rows);
void write_csv(std::ostream& out, std::span<const RectangularRow> rows);

/// Array of row objects; NaN is written as null.
void write_json(std::ostream& out, std::span<const SweepRow> rows);
void write_json(std::ostream& out, std::span<const EquivalenceRow> rows);
void write_json(std::ostream& out, std::span<const RectangularRow> rows);

std::vector<SweepRow> read_sweep_json(std::istream& in);
std::vector<EquivalenceRow> read_equivalence_json(std::istream& in);
std::vector<RectangularRow> read_rectangular_json(std::istream& in);

/// One whitespace-separated block per n (blocks separated by two blank lines),
/// one line per gamma_0 with median, first and third quartile of each
/// measured column across replicas.
void write_plotdata(std::ostream& out, std::span<const SweepRow> rows);
void write_plotdata(std::ostream& out, std::span<const EquivalenceRow> rows);
void write_plotdata(std::ostream& out, std::span<const RectangularRow> rows);

template <class Row>
void emit(std::ostream& out, std::span<const Row> rows, OutputFormat format) {
  switch (format) {
    case OutputFormat::csv: write_csv(out, rows); break;
    case OutputFormat::json: write_json(out, rows); break;
    case OutputFormat::plotdata: write_plotdata(out, rows); break;
  }
}

/// Columns bin_left, bin_right, count, density.
void write_histogram_csv(std::ostream& out, const SpectrumHistogram& h);

std::string to_json(const RankReport& report);

}  // namespace nlspike
