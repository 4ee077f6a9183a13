#include <gtest/gtest.h>

#include <cmath>

#include "nlspike/hermite.hpp"
#include "nlspike/nonlinearity.hpp"

using namespace nlspike;

TEST(Hermite, Examples) {
  EXPECT_EQ(hermite_polynomial(0, 3.7), 1.0);
  EXPECT_EQ(hermite_polynomial(1, 3.7), 3.7);
  EXPECT_EQ(hermite_polynomial(2, 0.0), -1.0);
  EXPECT_EQ(hermite_polynomial(3, 2.0), 2.0);
  EXPECT_NEAR(hermite_polynomial(4, 1.5), std::pow(1.5, 4) - 6 * 1.5 * 1.5 + 3, 1e-14);
}

TEST(Hermite, OrderCap) {
  EXPECT_NO_THROW(hermite_polynomial(kMaxHermiteOrder, 1.0));
  EXPECT_THROW(hermite_polynomial(kMaxHermiteOrder + 1, 1.0), std::domain_error);
  EXPECT_THROW(hermite_polynomial(-1, 1.0), std::domain_error);
}

TEST(Nonlinearity, Evaluation) {
  EXPECT_EQ(Nonlinearity::abs()(-2.5), 2.5);
  EXPECT_EQ(Nonlinearity::sign()(-0.1), -1.0);
  EXPECT_EQ(Nonlinearity::sign()(0.0), 0.0);
  EXPECT_EQ(Nonlinearity::relu()(-1.0), 0.0);
  EXPECT_EQ(Nonlinearity::relu()(2.0), 2.0);
  EXPECT_EQ(Nonlinearity::polynomial({0, -3, 0, 1})(2.0), 2.0);
  EXPECT_EQ(Nonlinearity::hermite(3)(2.0), 2.0);
  EXPECT_EQ(Nonlinearity::shifted(Nonlinearity::abs(), 1.0)(-3.0), 2.0);
}

TEST(Nonlinearity, DerivativesMatchFiniteDifferences) {
  const Nonlinearity fs[] = {Nonlinearity::tanh(), Nonlinearity::hermite(5), Nonlinearity::polynomial({1, -2, 0.5, 3}),
                             Nonlinearity::shifted(Nonlinearity::tanh(), 0.4), Nonlinearity::identity()};
  const double h = 1e-5;
  for (const auto& f : fs) {
    for (int k = 1; k <= 4; ++k) {
      for (double x : {-1.3, 0.2, 0.9}) {
        const double fd = (f.derivative(k - 1, x + h) - f.derivative(k - 1, x - h)) / (2 * h);
        EXPECT_NEAR(f.derivative(k, x), fd, 1e-5 * std::max(1.0, std::abs(fd))) << f.name() << " k=" << k;
      }
    }
  }
}

TEST(Nonlinearity, TanhHighOrderAtZero) {
  // tanh'''(0) = -2, tanh^(5)(0) = 16
  EXPECT_NEAR(Nonlinearity::tanh().derivative(3, 0.0), -2.0, 1e-14);
  EXPECT_NEAR(Nonlinearity::tanh().derivative(5, 0.0), 16.0, 1e-13);
}

TEST(Nonlinearity, KinkedHaveNoDerivatives) {
  for (const auto& f : {Nonlinearity::abs(), Nonlinearity::sign(), Nonlinearity::relu()}) {
    EXPECT_EQ(f.derivative_order_available(), 0);
    EXPECT_THROW(static_cast<void>(f.derivative(1, 0.5)), std::domain_error);
    EXPECT_EQ(f.breakpoints(), std::vector<double>{0.0});
  }
  EXPECT_EQ(Nonlinearity::shifted(Nonlinearity::relu(), 0.5).breakpoints(), std::vector<double>{-0.5});
  EXPECT_TRUE(Nonlinearity::tanh().breakpoints().empty());
}

TEST(Nonlinearity, ParseAndNameRoundTrip) {
  for (const char* name : {"identity", "abs", "sign", "relu", "tanh", "he3", "poly:0,-3,0,1", "shift:0.5:abs"}) {
    const auto f = Nonlinearity::parse(name);
    EXPECT_EQ(f.name(), name);
    EXPECT_EQ(Nonlinearity::parse(f.name()).name(), f.name());
  }
  EXPECT_EQ(Nonlinearity::parse("hermite:4").name(), "he4");
  EXPECT_EQ(Nonlinearity::parse("linear").kind(), NonlinearityKind::identity);
  EXPECT_THROW(Nonlinearity::parse("softplus"), std::invalid_argument);
  EXPECT_THROW(Nonlinearity::parse("poly:1,x"), std::invalid_argument);
}

TEST(Nonlinearity, PolynomialValidation) {
  EXPECT_THROW(Nonlinearity::polynomial({1.0, NAN}), std::invalid_argument);
  EXPECT_EQ(Nonlinearity::polynomial({2.0, 0.0, 0.0}).polynomial_coefficients().size(), 1u);
  EXPECT_EQ(Nonlinearity::polynomial({2.0}).derivative(1, 3.0), 0.0);
}
