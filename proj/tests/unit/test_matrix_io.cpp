#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>
#include <sstream>

#include "nlspike/distributions.hpp"
#include "nlspike/matrix_io.hpp"

using namespace nlspike;

TEST(MatrixIo, BinaryRoundTrip) {
  const Matrix m = sample_noise_symmetric(NoiseSpec{}, 7, {1, 2}).topLeftCorner(5, 7);
  std::stringstream buf;
  write_matrix_binary(buf, m);
  EXPECT_EQ(buf.str().size(), 24u + 8u * 35u);
  EXPECT_TRUE(read_matrix_binary(buf) == m);
}

TEST(MatrixIo, BinaryLayout) {
  Matrix m(1, 2);
  m << 1.0, -2.0;
  std::stringstream buf;
  write_matrix_binary(buf, m);
  const std::string bytes = buf.str();
  EXPECT_EQ(bytes.substr(0, 8), "NLSPKMAT");
  EXPECT_EQ(static_cast<unsigned char>(bytes[8]), 1u);
  EXPECT_EQ(static_cast<unsigned char>(bytes[16]), 2u);
  double second = 0.0;
  std::memcpy(&second, bytes.data() + 32, 8);
  EXPECT_EQ(second, -2.0);
}

TEST(MatrixIo, TextRoundTripIsExact) {
  const Matrix m = sample_noise_symmetric(NoiseSpec(NoiseKind::laplace), 6, {3, 3});
  std::stringstream buf;
  write_matrix_text(buf, m);
  EXPECT_TRUE(read_matrix_text(buf) == m);
}

TEST(MatrixIo, Errors) {
  std::stringstream bad("NOTAMATRIX______________");
  EXPECT_THROW(read_matrix_binary(bad), std::runtime_error);
  std::stringstream truncated("2 2\n1 2 3");
  EXPECT_THROW(read_matrix_text(truncated), std::runtime_error);
  std::stringstream junk("1 1\nabc");
  EXPECT_THROW(read_matrix_text(junk), std::runtime_error);
}

TEST(MatrixIo, Files) {
  const auto dir = std::filesystem::temp_directory_path();
  const Matrix m = sample_noise_symmetric(NoiseSpec{}, 4, {5, 5});
  save_matrix(dir / "nlspike_io.bin", m);
  save_matrix(dir / "nlspike_io.txt", m, false);
  EXPECT_TRUE(load_matrix(dir / "nlspike_io.bin") == m);
  EXPECT_TRUE(load_matrix(dir / "nlspike_io.txt", false) == m);
  std::filesystem::remove(dir / "nlspike_io.bin");
  std::filesystem::remove(dir / "nlspike_io.txt");
}
