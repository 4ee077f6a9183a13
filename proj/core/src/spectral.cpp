#include "nlspike/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include <lapacke.h>

#include "nlspike/errors.hpp"

namespace nlspike {

namespace {

using ColMatrix = Eigen::MatrixXd;

constexpr std::uint64_t kStartSeed = 0x4C414E43ull;  // fixed start vector for reproducibility
constexpr int kRitzKeptPerEnd = 8;

void require_symmetric(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("matrix is not square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < m.cols(); ++j) {
      if (std::abs(m(i, j) - m(j, i)) > 1e-12 * scale) {
        throw std::invalid_argument("matrix is not symmetric within 1e-12");
      }
    }
  }
}

Vector start_vector(Eigen::Index n, std::uint64_t attempt) {
  const CounterRng rng(SeededStream{kStartSeed, attempt});
  Vector q(n);
  for (Eigen::Index i = 0; i < n; ++i) q[i] = rng.normal(static_cast<std::uint64_t>(i), 0);
  return q;
}

// r <- (I - V V^T) r, twice for numerical orthogonality.
void orthogonalize(const ColMatrix& v, Eigen::Index cols, Vector& r) {
  if (cols == 0) return;
  for (int pass = 0; pass < 2; ++pass) {
    const Vector h = v.leftCols(cols).transpose() * r;
    r.noalias() -= v.leftCols(cols) * h;
  }
}

void canonical_sign(Vector& v) {
  Eigen::Index idx = 0;
  v.cwiseAbs().maxCoeff(&idx);
  if (v[idx] < 0.0) v = -v;
}

struct RitzCheck {
  Eigen::VectorXd theta;
  ColMatrix vectors;
  Eigen::Index selected = 0;
  Eigen::Index other = 0;
  bool tie = false;
  double residual_selected = 0.0;
  double residual_other = 0.0;
  double scale = 0.0;
};

RitzCheck ritz_check(const ColMatrix& v, const ColMatrix& w, const ColMatrix& h, Eigen::Index cols, double tol) {
  Eigen::SelfAdjointEigenSolver<ColMatrix> eig(h.topLeftCorner(cols, cols));
  RitzCheck check;
  check.theta = eig.eigenvalues();
  check.vectors = eig.eigenvectors();
  const Eigen::Index lo = 0;
  const Eigen::Index hi = cols - 1;
  const double top = check.theta[hi];
  const double bottom = check.theta[lo];
  check.scale = std::max(std::abs(top), std::abs(bottom));
  if (std::abs(std::abs(top) - std::abs(bottom)) <= tol * check.scale) {
    check.tie = true;
    check.selected = hi;
    check.other = lo;
  } else if (std::abs(top) > std::abs(bottom)) {
    check.selected = hi;
    check.other = lo;
  } else {
    check.selected = lo;
    check.other = hi;
  }
  const auto residual = [&](Eigen::Index idx) {
    const Vector s = check.vectors.col(idx);
    const Vector mv = w.leftCols(cols) * s;
    const Vector vv = v.leftCols(cols) * s;
    return (mv - check.theta[idx] * vv).norm();
  };
  check.residual_selected = residual(check.selected);
  check.residual_other = check.selected == check.other ? check.residual_selected : residual(check.other);
  return check;
}

}  // namespace

EigenResult leading_eigenpair(const Matrix& input, double tol, int max_iter) {
  if (!(tol > 0.0)) throw std::invalid_argument("solver tolerance must be positive");
  if (max_iter < 1) throw std::invalid_argument("iteration budget must be positive");
  require_symmetric(input);
  // Rounding asymmetry stalls the residuals at its own size.
  Matrix symmetrized;
  if (input != input.transpose()) symmetrized = 0.5 * (input + input.transpose());
  const Matrix& m = symmetrized.size() ? symmetrized : input;
  const Eigen::Index n = m.rows();
  if (n == 0) throw std::invalid_argument("empty matrix");

  // Rounding floor on attainable residuals.
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * m.norm();
  const Eigen::Index capacity = std::min<Eigen::Index>(n, std::max(2 * kRitzKeptPerEnd + 8, std::min(max_iter, 200)));

  ColMatrix v(n, capacity);
  ColMatrix w(n, capacity);
  ColMatrix h = ColMatrix::Zero(capacity, capacity);

  Vector q = start_vector(n, 0);
  q.normalize();
  Eigen::Index cols = 0;
  int matvecs = 0;
  std::uint64_t restarts_with_fresh_direction = 0;
  Eigen::Index last_check = 0;

  while (true) {
    v.col(cols) = q;
    w.col(cols).noalias() = m * q;
    ++matvecs;
    const Vector projections = v.leftCols(cols + 1).transpose() * w.col(cols);
    h.block(0, cols, cols + 1, 1) = projections;
    h.block(cols, 0, 1, cols + 1) = projections.transpose();
    ++cols;

    Vector r = w.col(cols - 1);
    orthogonalize(v, cols, r);
    const double beta = r.norm();

    const bool full = cols == capacity;
    const bool exhausted = matvecs >= max_iter;
    const double approx_scale = h.topLeftCorner(cols, cols).cwiseAbs().maxCoeff();
    const bool breakdown = beta <= 1e-13 * std::max(approx_scale, std::numeric_limits<double>::min());
    const bool due = cols - last_check >= std::max<Eigen::Index>(1, cols / 10);

    if (full || exhausted || breakdown || due || cols == n) {
      last_check = cols;
      const RitzCheck check = ritz_check(v, w, h, cols, tol);
      const double threshold = std::max(tol * check.scale, floor);
      const bool selected_ok = check.residual_selected <= threshold;
      const bool other_ok = check.residual_other <= std::max(std::sqrt(tol) * check.scale, floor) ||
                            std::abs(check.theta[check.other]) + check.residual_other <
                                std::abs(check.theta[check.selected]);
      if (selected_ok && (other_ok || cols == n)) {
        EigenResult result;
        result.lambda1 = check.theta[check.selected];
        result.v1 = v.leftCols(cols) * check.vectors.col(check.selected);
        const double norm = result.v1.norm();
        result.v1 /= norm;
        canonical_sign(result.v1);
        result.residual = (m * result.v1 - result.lambda1 * result.v1).norm();
        result.iterations = matvecs;
        result.tie = check.tie;
        return result;
      }
      if (exhausted) {
        throw NotConverged("Lanczos did not converge in " + std::to_string(max_iter) +
                           " matrix-vector products (residual " + std::to_string(check.residual_selected) + ")");
      }
      if (full) {
        // Thick restart: keep the extreme Ritz vectors of both ends; the
        // residual direction r stays orthogonal to all of them.
        std::vector<Eigen::Index> keep;
        const Eigen::Index per_end = std::min<Eigen::Index>(kRitzKeptPerEnd, cols / 2);
        for (Eigen::Index i = 0; i < per_end; ++i) keep.push_back(i);
        for (Eigen::Index i = cols - per_end; i < cols; ++i) keep.push_back(i);
        const auto kept = static_cast<Eigen::Index>(keep.size());
        ColMatrix s(cols, kept);
        for (Eigen::Index c = 0; c < kept; ++c) s.col(c) = check.vectors.col(keep[c]);
        const ColMatrix new_v = v.leftCols(cols) * s;
        const ColMatrix new_w = w.leftCols(cols) * s;
        v.leftCols(kept) = new_v;
        w.leftCols(kept) = new_w;
        h.setZero();
        h.topLeftCorner(kept, kept) = new_v.transpose() * new_w;
        h.topLeftCorner(kept, kept) = 0.5 * (h.topLeftCorner(kept, kept) + h.topLeftCorner(kept, kept).transpose()).eval();
        cols = kept;
        last_check = cols;
        orthogonalize(v, cols, r);
      }
    }

    double r_norm = r.norm();
    if (cols == n) {
      // Entire space spanned; the check above accepted unless tolerance is
      // below rounding, in which case nothing more can be gained.
      throw NotConverged("Lanczos exhausted the full space without meeting the tolerance");
    }
    if (breakdown || r_norm <= 1e-13 * std::max(approx_scale, std::numeric_limits<double>::min())) {
      // Invariant subspace: continue with a fresh direction.
      r = start_vector(n, ++restarts_with_fresh_direction);
      orthogonalize(v, cols, r);
      r_norm = r.norm();
    }
    q = r / r_norm;
  }
}

double operator_norm(const Matrix& m, double tol, int max_iter) {
  return std::abs(leading_eigenpair(m, tol, max_iter).lambda1);
}

double overlap(const Vector& v, const Vector& x, int k) {
  if (k < 1) throw std::invalid_argument("overlap power must be >= 1");
  if (v.size() != x.size()) throw std::invalid_argument("overlap vectors differ in length");
  const Vector target = x.array().pow(k).matrix();
  const double norm = target.norm();
  if (norm == 0.0) throw std::invalid_argument("x^k is the zero vector");
  const double c = v.dot(target) / (norm * v.norm());
  return std::min(1.0, c * c);
}

std::vector<double> full_spectrum(const Matrix& m, std::size_t cap) {
  if (m.rows() != m.cols()) throw std::invalid_argument("matrix is not square");
  const auto n = static_cast<std::size_t>(m.rows());
  if (n > cap) {
    throw std::invalid_argument("dense eigensolver capped at n = " + std::to_string(cap) + " (got " +
                                std::to_string(n) + ")");
  }
  if (n == 0) return {};
  ColMatrix a = m;
  std::vector<double> eigenvalues(n);
  const auto info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'U', static_cast<lapack_int>(n), a.data(),
                                   static_cast<lapack_int>(n), eigenvalues.data());
  if (info != 0) throw NotConverged("dsyevd failed with info = " + std::to_string(info));
  return eigenvalues;
}

std::vector<double> low_rank_eigenvalues(const Matrix& m, int sketch, const SeededStream& stream) {
  if (m.rows() != m.cols()) throw std::invalid_argument("matrix is not square");
  const Eigen::Index n = m.rows();
  const Eigen::Index width = std::min<Eigen::Index>(n, std::max(1, sketch));
  const CounterRng rng(stream);
  ColMatrix omega(n, width);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < width; ++j) omega(i, j) = rng.normal(i, j);
  }
  const ColMatrix range = m * omega;
  const ColMatrix basis = Eigen::HouseholderQR<ColMatrix>(range).householderQ() * ColMatrix::Identity(n, width);
  ColMatrix projected = basis.transpose() * (m * basis);
  projected = 0.5 * (projected + projected.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<ColMatrix> eig(projected, Eigen::EigenvaluesOnly);
  std::vector<double> values(eig.eigenvalues().data(), eig.eigenvalues().data() + width);
  std::sort(values.begin(), values.end(), [](double a, double b) { return std::abs(a) > std::abs(b); });
  return values;
}

std::size_t numerical_rank(std::span<const double> magnitudes, double relative_threshold) {
  double top = 0.0;
  for (double s : magnitudes) top = std::max(top, std::abs(s));
  if (top == 0.0) return 0;
  return static_cast<std::size_t>(std::count_if(magnitudes.begin(), magnitudes.end(), [&](double s) {
    return std::abs(s) > relative_threshold * top;
  }));
}

std::vector<double> SpectrumHistogram::density() const {
  std::vector<double> d(counts.size(), 0.0);
  if (n == 0) return d;
  for (std::size_t b = 0; b < counts.size(); ++b) {
    d[b] = static_cast<double>(counts[b]) / (static_cast<double>(n) * (edges[b + 1] - edges[b]));
  }
  return d;
}

SpectrumHistogram histogram(std::span<const double> values, int bins) {
  if (values.empty()) throw std::invalid_argument("cannot bin an empty spectrum");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  double a = *lo;
  double b = *hi;
  if (a == b) {
    a -= 0.5;
    b += 0.5;
  }
  return histogram(values, bins, a, b);
}

SpectrumHistogram histogram(std::span<const double> values, int bins, double lo, double hi) {
  if (bins < 1) throw std::invalid_argument("bin count must be positive");
  if (!(lo < hi)) throw std::invalid_argument("histogram range must satisfy lo < hi");
  SpectrumHistogram out;
  out.edges.resize(static_cast<std::size_t>(bins) + 1);
  const double width = (hi - lo) / bins;
  for (int b = 0; b <= bins; ++b) out.edges[b] = lo + width * b;
  out.edges.back() = hi;
  out.counts.assign(static_cast<std::size_t>(bins), 0);
  for (double x : values) {
    if (x < lo || x > hi) continue;
    auto b = static_cast<std::size_t>((x - lo) / width);
    b = std::min(b, static_cast<std::size_t>(bins) - 1);
    // Guard against rounding at interior edges.
    while (b > 0 && x < out.edges[b]) --b;
    while (b + 1 < out.counts.size() && x >= out.edges[b + 1]) ++b;
    ++out.counts[b];
    ++out.n;
  }
  return out;
}

double semicircle_density(double x, double sigma) {
  const double r2 = 4.0 * sigma * sigma - x * x;
  return r2 <= 0.0 ? 0.0 : std::sqrt(r2) / (2.0 * std::numbers::pi * sigma * sigma);
}

double semicircle_cdf(double x, double sigma) {
  const double edge = 2.0 * sigma;
  if (x <= -edge) return 0.0;
  if (x >= edge) return 1.0;
  return 0.5 + x * std::sqrt(edge * edge - x * x) / (4.0 * std::numbers::pi * sigma * sigma) +
         std::asin(x / edge) / std::numbers::pi;
}

double ks_distance_semicircle(std::span<const double> values, double sigma) {
  if (values.empty()) throw std::invalid_argument("empty spectrum");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double cdf = semicircle_cdf(sorted[i], sigma);
    d = std::max({d, std::abs((i + 1) / n - cdf), std::abs(i / n - cdf)});
  }
  return d;
}

}  // namespace nlspike
