#include "nlspike/matrix_io.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace nlspike {

namespace {

std::uint64_t to_little_endian(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    std::uint64_t r = 0;
    for (int b = 0; b < 8; ++b) r |= ((v >> (8 * b)) & 0xFFu) << (8 * (7 - b));
    return r;
  } else {
    return v;
  }
}

void put_word(std::ostream& out, std::uint64_t v) {
  const std::uint64_t le = to_little_endian(v);
  out.write(reinterpret_cast<const char*>(&le), sizeof le);
}

std::uint64_t get_word(std::istream& in) {
  std::uint64_t le = 0;
  in.read(reinterpret_cast<char*>(&le), sizeof le);
  if (!in) throw std::runtime_error("truncated matrix stream");
  return to_little_endian(le);
}

}  // namespace

void write_matrix_binary(std::ostream& out, const Matrix& m) {
  put_word(out, kMatrixMagic);
  put_word(out, static_cast<std::uint64_t>(m.rows()));
  put_word(out, static_cast<std::uint64_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) put_word(out, std::bit_cast<std::uint64_t>(m(i, j)));
  }
  if (!out) throw std::runtime_error("failed writing matrix");
}

Matrix read_matrix_binary(std::istream& in) {
  if (get_word(in) != kMatrixMagic) throw std::runtime_error("not a matrix dump (bad magic)");
  const auto rows = static_cast<Eigen::Index>(get_word(in));
  const auto cols = static_cast<Eigen::Index>(get_word(in));
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = std::bit_cast<double>(get_word(in));
  }
  return m;
}

void write_matrix_text(std::ostream& out, const Matrix& m) {
  out << m.rows() << ' ' << m.cols() << '\n';
  char buf[64];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const auto r = std::to_chars(buf, buf + sizeof buf, m(i, j));
      if (j) out.put(' ');
      out.write(buf, r.ptr - buf);
    }
    out.put('\n');
  }
  if (!out) throw std::runtime_error("failed writing matrix");
}

Matrix read_matrix_text(std::istream& in) {
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  if (!(in >> rows >> cols) || rows < 0 || cols < 0) throw std::runtime_error("bad matrix text header");
  Matrix m(rows, cols);
  std::string token;
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (!(in >> token)) throw std::runtime_error("truncated matrix text");
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
      if (ec != std::errc{} || ptr != token.data() + token.size()) {
        throw std::runtime_error("bad matrix entry '" + token + "'");
      }
      m(i, j) = v;
    }
  }
  return m;
}

void save_matrix(const std::filesystem::path& path, const Matrix& m, bool binary) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  binary ? write_matrix_binary(out, m) : write_matrix_text(out, m);
}

Matrix load_matrix(const std::filesystem::path& path, bool binary) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return binary ? read_matrix_binary(in) : read_matrix_text(in);
}

}  // namespace nlspike
