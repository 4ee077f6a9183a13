#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "nlspike/distributions.hpp"
#include "nlspike/errors.hpp"
#include "nlspike/models.hpp"
#include "nlspike/spectral.hpp"

using namespace nlspike;

namespace {

Matrix wigner(std::size_t n, std::uint64_t seed) {
  return sample_noise_symmetric(NoiseSpec{}, n, {seed, 0}) / std::sqrt(static_cast<double>(n));
}

Matrix with_spectrum(const std::vector<double>& values, std::uint64_t seed) {
  const auto n = static_cast<Eigen::Index>(values.size());
  Matrix g = sample_noise_symmetric(NoiseSpec{}, values.size(), {seed, 1});
  g += Matrix::Identity(n, n) * 0.1;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(Eigen::MatrixXd(g.triangularView<Eigen::Upper>()));
  const Eigen::MatrixXd q = qr.householderQ();
  Eigen::VectorXd d(n);
  for (Eigen::Index i = 0; i < n; ++i) d[i] = values[static_cast<std::size_t>(i)];
  Matrix m = q * d.asDiagonal() * q.transpose();
  return 0.5 * (m + m.transpose()).eval();
}

double dense_max_abs(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Eigen::MatrixXd(m), Eigen::EigenvaluesOnly);
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

TEST(LeadingEigenpair, Diagonal) {
  Matrix m = Matrix::Zero(3, 3);
  m.diagonal() << 3, -5, 1;
  const auto r = leading_eigenpair(m);
  EXPECT_NEAR(r.lambda1, -5.0, 1e-12);
  EXPECT_NEAR(r.v1[1], 1.0, 1e-12);
  EXPECT_NEAR(r.v1.norm(), 1.0, 1e-12);
  EXPECT_FALSE(r.tie);
}

TEST(LeadingEigenpair, RankOne) {
  Vector u = sample_signal(SignalSpec{}, 100, {4, 4});
  u.normalize();
  const Matrix m = 7.0 * u * u.transpose();
  const auto r = leading_eigenpair(m);
  EXPECT_NEAR(r.lambda1, 7.0, 1e-10);
  EXPECT_NEAR(std::abs(r.v1.dot(u)), 1.0, 1e-10);
}

TEST(LeadingEigenpair, WignerEdge) {
  const auto r = leading_eigenpair(wigner(2000, 1));
  EXPECT_NEAR(std::abs(r.lambda1), 2.0, 0.1);
}

TEST(LeadingEigenpair, AgreesWithDenseSolver) {
  std::uint64_t seed = 100;
  for (std::size_t n : {5, 37, 128, 300, 512}) {
    const Matrix w = wigner(n, ++seed);
    const auto r = leading_eigenpair(w);
    EXPECT_NEAR(std::abs(r.lambda1), dense_max_abs(w), 1e-8) << n;
    Vector x = sample_signal(SignalSpec{}, n, {seed, 9});
    const Matrix spiked = w + 3.0 * x * x.transpose() / static_cast<double>(n);
    EXPECT_NEAR(std::abs(leading_eigenpair(spiked).lambda1), dense_max_abs(spiked), 1e-8) << n;
  }
}

TEST(LeadingEigenpair, ResidualContract) {
  const double tol = 1e-10;
  for (std::uint64_t seed : {1, 2, 3}) {
    const Matrix w = wigner(400, seed);
    const auto r = leading_eigenpair(w, tol);
    const double residual = (w * r.v1 - r.lambda1 * r.v1).norm();
    EXPECT_LE(residual, tol * std::abs(r.lambda1) + 1e-12);
    EXPECT_NEAR(r.residual, residual, 1e-12);
  }
}

TEST(LeadingEigenpair, SignConvention) {
  const auto r = leading_eigenpair(wigner(200, 8));
  Eigen::Index at = 0;
  r.v1.cwiseAbs().maxCoeff(&at);
  EXPECT_GT(r.v1[at], 0.0);
}

TEST(LeadingEigenpair, TieReturnsPositiveEnd) {
  Matrix m = Matrix::Zero(4, 4);
  m.diagonal() << -2, 1, 2, 0.5;
  const auto r = leading_eigenpair(m);
  EXPECT_NEAR(r.lambda1, 2.0, 1e-12);
  EXPECT_TRUE(r.tie);
}

TEST(LeadingEigenpair, Errors) {
  Matrix m = Matrix::Zero(3, 3);
  m(0, 1) = 1.0;
  EXPECT_THROW(leading_eigenpair(m), std::invalid_argument);
  EXPECT_THROW(leading_eigenpair(wigner(300, 5), 1e-14, 3), NotConverged);
}

TEST(OperatorNorm, Examples) {
  EXPECT_EQ(operator_norm(Matrix::Zero(6, 6)), 0.0);
  EXPECT_NEAR(operator_norm(Matrix::Identity(6, 6)), 1.0, 1e-14);
  EXPECT_NEAR(operator_norm(with_spectrum({-4, 1, 2}, 3)), 4.0, 1e-10);
}

TEST(Overlap, AlignedAndOrthogonal) {
  const Vector x = sample_signal(SignalSpec{}, 50, {7, 7});
  for (int k = 1; k <= 3; ++k) {
    const Vector xk = x.array().pow(k).matrix().normalized();
    EXPECT_NEAR(overlap(xk, x, k), 1.0, 1e-12);
    Vector e = Vector::Zero(50);
    e[0] = xk[1];
    e[1] = -xk[0];
    e.normalize();
    EXPECT_NEAR(overlap(e, x, k), 0.0, 1e-15);
  }
  EXPECT_THROW(overlap(x, Vector::Zero(50), 2), std::invalid_argument);
  EXPECT_THROW(overlap(x, Vector::Ones(10), 1), std::invalid_argument);
}

TEST(Overlap, UniformSphereMean) {
  const std::size_t n = 1000;
  const Vector x = sample_signal(SignalSpec{}, n, {2, 2});
  std::vector<double> values;
  for (std::uint64_t d = 0; d < 200; ++d) {
    const Vector v = sample_signal(SignalSpec{}, n, {3, d}).normalized();
    values.push_back(overlap(v, x, 2));
  }
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / 200;
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  const double se = std::sqrt(var / 199 / 200);
  EXPECT_NEAR(mean, 1.0 / n, 3 * se);
}

TEST(FullSpectrum, Examples) {
  Matrix d = Matrix::Zero(3, 3);
  d.diagonal() << 2, 3, 1;
  EXPECT_EQ(full_spectrum(d), (std::vector<double>{1, 2, 3}));
  Matrix s(2, 2);
  s << 0, 1, 1, 0;
  const auto v = full_spectrum(s);
  EXPECT_NEAR(v[0], -1.0, 1e-15);
  EXPECT_NEAR(v[1], 1.0, 1e-15);
}

TEST(FullSpectrum, TraceAndFrobenius) {
  for (std::size_t n : {50, 200}) {
    const Matrix m = wigner(n, 11);
    const auto v = full_spectrum(m);
    EXPECT_NEAR(std::accumulate(v.begin(), v.end(), 0.0), m.trace(), 1e-9);
    double sq = 0.0;
    for (double x : v) sq += x * x;
    EXPECT_NEAR(sq, m.squaredNorm(), 1e-8 * m.squaredNorm());
    EXPECT_TRUE(std::is_sorted(v.begin(), v.end()));
  }
}

TEST(FullSpectrum, Cap) {
  EXPECT_THROW(full_spectrum(Matrix::Zero(10, 10), 5), std::invalid_argument);
  EXPECT_THROW(full_spectrum(Matrix::Zero(2, 3)), std::invalid_argument);
}

TEST(LowRank, ExactForLowRank) {
  const std::size_t n = 120;
  std::vector<Vector> xs;
  for (std::size_t l = 0; l < 2; ++l) xs.push_back(sample_signal(SignalSpec{}, n, SeededStream{12, l}));
  const Matrix p = finite_rank_equivalent(xs, {1.0, -0.6}, 2, 0.8);
  const auto sketch = low_rank_eigenvalues(p, 13, {1, 1});
  const auto dense = full_spectrum(p);
  std::vector<double> top(dense.begin(), dense.end());
  std::sort(top.begin(), top.end(), [](double a, double b) { return std::abs(a) > std::abs(b); });
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(sketch[i], top[i], 1e-10 * std::abs(top[0]));
  EXPECT_EQ(numerical_rank(sketch), 3u);
}

TEST(NumericalRank, Threshold) {
  const std::vector<double> s{10.0, -1.0, 2e-7, 5e-8};
  EXPECT_EQ(numerical_rank(s), 3u);
  EXPECT_EQ(numerical_rank(std::vector<double>{0.0, 0.0}), 0u);
}

TEST(Histogram, CountsAndDensity) {
  const auto values = full_spectrum(wigner(300, 2));
  const auto h = histogram(values, 25);
  EXPECT_EQ(h.n, values.size());
  EXPECT_EQ(std::accumulate(h.counts.begin(), h.counts.end(), std::size_t{0}), values.size());
  ASSERT_EQ(h.edges.size(), 26u);
  for (std::size_t b = 1; b < h.edges.size(); ++b) EXPECT_GT(h.edges[b], h.edges[b - 1]);
  double mass = 0.0;
  const auto d = h.density();
  for (std::size_t b = 0; b < d.size(); ++b) mass += d[b] * (h.edges[b + 1] - h.edges[b]);
  EXPECT_NEAR(mass, 1.0, 1e-12);
  const auto clipped = histogram(values, 10, -1.0, 1.0);
  EXPECT_LT(std::accumulate(clipped.counts.begin(), clipped.counts.end(), std::size_t{0}), values.size());
}

TEST(Semicircle, LawAndDistance) {
  EXPECT_NEAR(semicircle_cdf(-2.0, 1.0), 0.0, 1e-15);
  EXPECT_NEAR(semicircle_cdf(0.0, 1.0), 0.5, 1e-15);
  EXPECT_NEAR(semicircle_cdf(2.0, 1.0), 1.0, 1e-15);
  EXPECT_NEAR(semicircle_density(0.0, 1.0), 1.0 / std::numbers::pi, 1e-15);
  EXPECT_EQ(semicircle_density(2.5, 1.0), 0.0);
  const auto values = full_spectrum(wigner(1000, 4));
  EXPECT_LT(ks_distance_semicircle(values, 1.0), 0.05);
  EXPECT_GT(ks_distance_semicircle(values, 2.0), 0.2);
}
