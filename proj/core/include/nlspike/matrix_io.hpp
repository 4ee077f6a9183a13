#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "nlspike/types.hpp"

namespace nlspike {

/// Binary layout: three little-endian uint64 words {magic, rows, cols}
/// followed by rows * cols little-endian IEEE-754 doubles in row-major order.
inline constexpr std::uint64_t kMatrixMagic = 0x54414D4B50534C4Eull;  // "NLSPKMAT"

void write_matrix_binary(std::ostream& out, const Matrix& m);
Matrix read_matrix_binary(std::istream& in);

/// Text layout: a "rows cols" line, then one line per row with
/// space-separated values in shortest round-trip form.
void write_matrix_text(std::ostream& out, const Matrix& m);
Matrix read_matrix_text(std::istream& in);

void save_matrix(const std::filesystem::path& path, const Matrix& m, bool binary = true);
Matrix load_matrix(const std::filesystem::path& path, bool binary = true);

}  // namespace nlspike
