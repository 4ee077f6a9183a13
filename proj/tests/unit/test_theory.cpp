#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "nlspike/errors.hpp"
#include "nlspike/models.hpp"
#include "nlspike/spectral.hpp"
#include "nlspike/theory.hpp"

using namespace nlspike;

namespace {

const NoiseSpec kGauss;
const SignalSpec kGaussSignal;
const double kSqrt2OverPi = std::sqrt(2.0 / std::numbers::pi);

// Root of g(x) = 0 on [lo, hi] by bisection; g increasing.
template <class G>
double bisect(G g, double lo, double hi) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST(Bbp, EigenvalueExamples) {
  EXPECT_DOUBLE_EQ(bbp_eigenvalue(2.0, 1.0), 2.5);
  EXPECT_DOUBLE_EQ(bbp_eigenvalue(0.5, 1.0), 2.0);
  EXPECT_DOUBLE_EQ(bbp_eigenvalue(-2.0, 1.0), -2.5);
  EXPECT_DOUBLE_EQ(bbp_eigenvalue(0.0, 0.7), 1.4);
  EXPECT_DOUBLE_EQ(bbp_eigenvalue(-0.3, 1.0), -2.0);
  EXPECT_THROW(bbp_eigenvalue(1.0, 0.0), std::invalid_argument);
}

TEST(Bbp, OverlapExamples) {
  EXPECT_DOUBLE_EQ(bbp_overlap(2.0, 1.0), 0.75);
  EXPECT_DOUBLE_EQ(bbp_overlap(0.9, 1.0), 0.0);
  for (double s : {0.3, 1.0, 4.0}) EXPECT_DOUBLE_EQ(bbp_overlap(s, s), 0.0);
  EXPECT_THROW(bbp_overlap(1.0, -1.0), std::invalid_argument);
}

TEST(Bbp, ContinuityAtThreshold) {
  for (double s : {0.5, 1.0, 2.0}) {
    EXPECT_NEAR(bbp_eigenvalue(s + 1e-6, s), 2 * s, 1e-5);
    EXPECT_NEAR(bbp_eigenvalue(s - 1e-6, s), 2 * s, 1e-5);
    EXPECT_NEAR(bbp_overlap(s + 1e-6, s), 0.0, 1e-5);
  }
}

TEST(Bbp, Monotone) {
  double prev_l = -1.0;
  double prev_m = -1.0;
  for (double g = 0.01; g < 5.0; g += 0.01) {
    const double l = bbp_eigenvalue(g, 1.0);
    const double m = bbp_overlap(g, 1.0);
    EXPECT_GE(l, prev_l);
    EXPECT_GE(m, prev_m);
    EXPECT_EQ(m, bbp_overlap(-g, 1.0));
    prev_l = l;
    prev_m = m;
  }
}

TEST(Bbp, ScaleCovariance) {
  for (double g : {-3.0, -0.4, 0.2, 1.0, 2.7}) {
    for (double c : {0.1, 2.0, 7.5}) {
      EXPECT_NEAR(bbp_eigenvalue(c * g, c * 1.3), c * bbp_eigenvalue(g, 1.3), 1e-12 * c);
    }
  }
}

TEST(RelevantGamma, Examples) {
  EXPECT_EQ(relevant_gamma(1.7, 12345, 1), 1.7);
  EXPECT_DOUBLE_EQ(relevant_gamma(1.0, 16, 2), 2.0);
  EXPECT_NEAR(relevant_gamma(1.0, 8, 3), 2.0, 1e-15);
  EXPECT_THROW(relevant_gamma(1.0, 8, 0), std::invalid_argument);
  EXPECT_THROW(relevant_gamma(1.0, 0, 2), std::invalid_argument);
}

TEST(EffectiveSpike, Examples) {
  const auto id = info_index(Nonlinearity::identity(), kGauss);
  EXPECT_NEAR(effective_spike(1.3, id, kGaussSignal), 1.3, 1e-14);
  const auto abs = info_index(Nonlinearity::abs(), kGauss);
  EXPECT_NEAR(effective_spike(1.2, abs, kGaussSignal), 1.44 * kSqrt2OverPi / 2 * 3, 1e-12);
  const auto cubic = info_index(Nonlinearity::polynomial({0, -3, 0, 1}), kGauss);
  EXPECT_NEAR(effective_spike(0.7, cubic, kGaussSignal), 15 * 0.343, 1e-11);
  const auto none = info_index(Nonlinearity::hermite(5), kGauss, 3);
  EXPECT_THROW(effective_spike(1.0, none, kGaussSignal), IndexNotDetected);
}

TEST(Predict, Examples) {
  const auto classic = predict(2.0, Nonlinearity::identity(), kGauss, kGaussSignal);
  EXPECT_NEAR(classic.lambda_limit, 2.5, 1e-14);
  EXPECT_NEAR(classic.overlap_limit, 0.75, 1e-14);
  EXPECT_TRUE(classic.supercritical);

  const double sigma = std::sqrt(1 - 2 / std::numbers::pi);
  const auto sub = predict(0.4, Nonlinearity::abs(), kGauss, kGaussSignal);
  EXPECT_NEAR(sub.lambda_limit, 2 * sigma, 1e-12);
  EXPECT_EQ(sub.overlap_limit, 0.0);
  EXPECT_FALSE(sub.supercritical);
}

TEST(Predict, CriticalGamma) {
  const auto abs = info_index(Nonlinearity::abs(), kGauss);
  const double closed = std::sqrt(2 * abs.sigma / (3 * kSqrt2OverPi));
  const double root = bisect([&](double g) { return effective_spike(g, abs, kGaussSignal) - abs.sigma; }, 0.0, 5.0);
  EXPECT_NEAR(critical_gamma0(abs, kGaussSignal), closed, 1e-12);
  EXPECT_NEAR(critical_gamma0(abs, kGaussSignal), root, 1e-12);
  EXPECT_TRUE(predict(closed * (1 + 1e-9), abs, kGaussSignal).supercritical);
  EXPECT_FALSE(predict(closed * (1 - 1e-9), abs, kGaussSignal).supercritical);

  const auto cubic = info_index(Nonlinearity::polynomial({0, -3, 0, 1}), kGauss);
  EXPECT_NEAR(critical_gamma0(cubic, kGaussSignal), std::cbrt(std::sqrt(6.0) / 15.0), 1e-12);
}

TEST(Predict, Invariants) {
  const Nonlinearity fs[] = {Nonlinearity::abs(), Nonlinearity::tanh(), Nonlinearity::relu(), Nonlinearity::hermite(3)};
  for (const auto& f : fs) {
    const auto report = info_index(f, kGauss);
    for (double g = -2.0; g <= 2.0; g += 0.05) {
      const auto p = predict(g, report, kGaussSignal);
      EXPECT_EQ(p.supercritical, std::abs(p.effective_spike) >= p.sigma);
      if (!p.supercritical) {
        EXPECT_EQ(p.overlap_limit, 0.0);
        EXPECT_DOUBLE_EQ(std::abs(p.lambda_limit), 2 * p.sigma);
      }
      EXPECT_GE(std::abs(p.lambda_limit), 2 * p.sigma * (1 - 1e-15));
      EXPECT_GE(p.overlap_limit, 0.0);
      EXPECT_LE(p.overlap_limit, 1.0);
    }
  }
}

TEST(Predict, ClassicalConsistency) {
  const auto id = info_index(Nonlinearity::identity(), kGauss);
  for (const auto& s : {SignalSpec(SignalKind::gaussian), SignalSpec(SignalKind::rademacher),
                        SignalSpec(SignalKind::uniform_sym)}) {
    for (double g : {0.3, 1.0, 1.7, 3.0}) {
      const auto p = predict(g, id, s);
      EXPECT_NEAR(p.lambda_limit, bbp_eigenvalue(g * moment(s, 2), 1.0), 1e-14);
      EXPECT_NEAR(p.overlap_limit, bbp_overlap(g * moment(s, 2), 1.0), 1e-14);
    }
  }
}

TEST(RankK, CountFormula) {
  EXPECT_EQ(finite_rank_count(1, 5), 1u);
  EXPECT_EQ(finite_rank_count(2, 2), 3u);
  EXPECT_EQ(finite_rank_count(3, 2), 6u);
  EXPECT_EQ(finite_rank_count(2, 3), 4u);
  EXPECT_EQ(finite_rank_count(4, 3), 20u);
  EXPECT_THROW(finite_rank_count(0, 2), std::invalid_argument);
}

TEST(RankK, SingleSpikeReducesToRankOne) {
  const auto abs = info_index(Nonlinearity::abs(), kGauss);
  for (double g : {0.4, 1.2}) {
    const auto k = predict_rank_k({g}, abs, {kGaussSignal});
    const auto p = predict(g, abs, kGaussSignal);
    EXPECT_NEAR(k.lambda_limit, p.lambda_limit, 1e-12);
    EXPECT_NEAR(k.overlap_limit, p.overlap_limit, 1e-12);
    ASSERT_EQ(k.perturbation_eigenvalues.size(), 1u);
    EXPECT_NEAR(k.perturbation_eigenvalues[0], p.effective_spike, 1e-12);
  }
}

TEST(RankK, PerturbationEigenvaluesMatchLargeN) {
  const auto abs = info_index(Nonlinearity::abs(), kGauss);
  const std::size_t n = 3000;
  const std::vector<double> g0{1.2, 0.8};
  std::vector<Vector> xs;
  std::vector<double> gammas;
  for (std::size_t l = 0; l < 2; ++l) {
    xs.push_back(sample_signal(kGaussSignal, n, SeededStream{31, l}));
    gammas.push_back(relevant_gamma(g0[l], n, 2));
  }
  const auto empirical = low_rank_eigenvalues(finite_rank_equivalent(xs, gammas, 2, abs.theta[2]), 13, {1, 2});
  const auto predicted = predict_rank_k(g0, abs, {kGaussSignal, kGaussSignal}).perturbation_eigenvalues;
  ASSERT_EQ(predicted.size(), 3u);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(empirical[i], predicted[i], 0.08 * std::abs(predicted[0])) << i;
}
