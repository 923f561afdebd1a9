#include <cmath>

#include <gtest/gtest.h>

#include "germflow/errors.hpp"
#include "germflow/polynomial.hpp"
#include "support/generators.hpp"

namespace germflow {
namespace {

using testing::for_all_cases;
using testing::random_point;
using testing::random_polynomial;

Polynomial pitchfork() {
  return Polynomial(2, {Monomial{{3, 0}, 1.0}, Monomial{{1, 1}, -1.0}});
}

TEST(Polynomial, EvaluatesPitchfork) {
  const std::vector<double> u{0.5, 0.2};
  EXPECT_DOUBLE_EQ(pitchfork().evaluate(u), 0.125 - 0.1);
  EXPECT_EQ(pitchfork().degree(), 3);
  EXPECT_EQ(pitchfork().min_degree(), 2);
}

TEST(Polynomial, CombinesLikeTermsAndDropsZeros) {
  const Polynomial p(2, {Monomial{{1, 0}, 1.0}, Monomial{{1, 0}, -1.0}, Monomial{{0, 2}, 3.0}});
  ASSERT_EQ(p.terms().size(), 1u);
  EXPECT_DOUBLE_EQ(p.terms()[0].coefficient, 3.0);
  EXPECT_TRUE((p - p).is_zero());
}

TEST(Polynomial, RejectsWrongArity) {
  const std::vector<double> u{1.0};
  EXPECT_THROW(pitchfork().evaluate(u), DimensionError);
  EXPECT_THROW(Polynomial(2, {Monomial{{1}, 1.0}}), DimensionError);
}

TEST(Polynomial, DerivativeOfPitchfork) {
  const Polynomial dx = pitchfork().derivative(0);
  EXPECT_EQ(dx, Polynomial(2, {Monomial{{2, 0}, 3.0}, Monomial{{0, 1}, -1.0}}));
  EXPECT_EQ(pitchfork().derivative(1), Polynomial(2, {Monomial{{1, 0}, -1.0}}));
}

TEST(Polynomial, MagnitudeBoundsValue) {
  const std::vector<double> u{0.3, 0.27};
  EXPECT_LE(std::abs(pitchfork().evaluate(u)), pitchfork().magnitude(u));
  EXPECT_DOUBLE_EQ(pitchfork().magnitude(u), 0.027 + 0.081);
}

TEST(Polynomial, TruncationKeepsLowDegrees) {
  const Polynomial t = pitchfork().truncated(2);
  EXPECT_EQ(t, Polynomial(2, {Monomial{{1, 1}, -1.0}}));
  EXPECT_TRUE(pitchfork().truncated(1).is_zero());
}

TEST(Polynomial, ProductOfLinearFactors) {
  const Polynomial x = Polynomial::variable(2, 0);
  const Polynomial y = Polynomial::variable(2, 1);
  const Polynomial prod = (x + y) * (x - y);
  EXPECT_EQ(prod, x * x - y * y);
}

// Derivatives agree with central differences.
TEST(PolynomialProperty, DerivativeMatchesCentralDifference) {
  for_all_cases(200, 11, [](std::size_t i, CounterRng& rng) {
    const std::size_t m = testing::pick(rng, 1, 4);
    const Polynomial p = random_polynomial(m, 5, 5, rng);
    Eigen::VectorXd u = random_point(m, rng);
    const std::size_t j = testing::pick(rng, 0, m - 1);
    const double h = 1e-5;
    Eigen::VectorXd up = u, dn = u;
    up[j] += h;
    dn[j] -= h;
    const double fd = (p.evaluate(as_span(up)) - p.evaluate(as_span(dn))) / (2 * h);
    EXPECT_NEAR(p.derivative(j).evaluate(as_span(u)), fd, 1e-6 * (1 + std::abs(fd))) << "case " << i;
  });
}

// p(a + h) = (shifted p)(h) for every h.
TEST(PolynomialProperty, ShiftIsTranslation) {
  for_all_cases(200, 12, [](std::size_t i, CounterRng& rng) {
    const std::size_t m = testing::pick(rng, 1, 4);
    const Polynomial p = random_polynomial(m, 6, 6, rng);
    const Eigen::VectorXd a = random_point(m, rng);
    const Eigen::VectorXd h = random_point(m, rng, 0.5);
    const Eigen::VectorXd ah = a + h;
    const double direct = p.evaluate(as_span(ah));
    EXPECT_NEAR(p.shifted(as_span(a)).evaluate(as_span(h)), direct, 1e-11 * (1 + p.magnitude(as_span(ah))))
        << "case " << i;
  });
}

TEST(PolynomialProperty, ProductEvaluatesToProduct) {
  for_all_cases(100, 13, [](std::size_t i, CounterRng& rng) {
    const Polynomial p = random_polynomial(3, 4, 4, rng);
    const Polynomial q = random_polynomial(3, 4, 4, rng);
    const Eigen::VectorXd u = random_point(3, rng);
    EXPECT_NEAR((p * q).evaluate(as_span(u)), p.evaluate(as_span(u)) * q.evaluate(as_span(u)), 1e-12)
        << "case " << i;
  });
}

}  // namespace
}  // namespace germflow
