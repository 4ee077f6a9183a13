#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nlspike/rng.hpp"
#include "nlspike/types.hpp"

namespace nlspike {

inline constexpr double kDefaultSolverTolerance = 1e-10;
inline constexpr int kDefaultSolverIterations = 300;
inline constexpr std::size_t kDenseSolverCap = 4096;

struct EigenResult {
  /// Signed eigenvalue of largest magnitude.
  double lambda1 = 0.0;
  /// Unit eigenvector; its largest-magnitude component is positive.
  Vector v1;
  /// Matrix-vector products spent.
  int iterations = 0;
  /// ||M v1 - lambda1 v1||_2
  double residual = 0.0;
  /// lambda_max and -lambda_min agreed within tolerance; the positive end was returned.
  bool tie = false;
};

/// Leading eigenpair (largest |lambda|) of a symmetric matrix by thick-restart
/// Lanczos with full reorthogonalization. Both spectrum ends live in one
/// Krylov space; the larger in magnitude is returned once its residual is
/// below tol * ||M||. max_iter bounds the total number of matrix-vector
/// products. Throws NotConverged when the budget runs out and
/// std::invalid_argument for non-symmetric input.
EigenResult leading_eigenpair(const Matrix& m, double tol = kDefaultSolverTolerance,
                              int max_iter = kDefaultSolverIterations);

/// |lambda_1|, with the same error contract as leading_eigenpair.
double operator_norm(const Matrix& m, double tol = kDefaultSolverTolerance, int max_iter = kDefaultSolverIterations);

/// <v, x^k / ||x^k||>^2 where x^k is the entrywise power. Throws
/// std::invalid_argument when x^k vanishes or lengths differ.
double overlap(const Vector& v, const Vector& x, int k);

/// All eigenvalues in ascending order (Householder tridiagonalization and
/// divide-and-conquer via LAPACK dsyevd). Throws std::invalid_argument above cap.
std::vector<double> full_spectrum(const Matrix& m, std::size_t cap = kDenseSolverCap);

/// Eigenvalues of a symmetric matrix of low rank, ordered by decreasing
/// magnitude, from a randomized range sketch of width `sketch`. Exact up to
/// rounding whenever rank(m) < sketch.
std::vector<double> low_rank_eigenvalues(const Matrix& m, int sketch, const SeededStream& stream = {});

/// Number of magnitudes above relative_threshold * max magnitude.
std::size_t numerical_rank(std::span<const double> magnitudes, double relative_threshold = 1e-8);

struct SpectrumHistogram {
  std::vector<double> edges;
  std::vector<std::size_t> counts;
  /// Number of eigenvalues binned; equals the sum of counts.
  std::size_t n = 0;

  /// count / (n * width) per bin.
  [[nodiscard]] std::vector<double> density() const;
};

/// Equal-width bins over [min, max] of the values.
SpectrumHistogram histogram(std::span<const double> values, int bins);
/// Equal-width bins over [lo, hi]; values outside are not counted.
SpectrumHistogram histogram(std::span<const double> values, int bins, double lo, double hi);

double semicircle_density(double x, double sigma);
double semicircle_cdf(double x, double sigma);

/// Kolmogorov-Smirnov distance between the empirical law of the values and
/// the semicircle on [-2 sigma, 2 sigma].
double ks_distance_semicircle(std::span<const double> values, double sigma);

}  // namespace nlspike
