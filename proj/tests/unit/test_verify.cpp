#include <cmath>

#include <gtest/gtest.h>

#include "germflow/random.hpp"
#include "germflow/verify/lemma_suite.hpp"
#include "germflow/verify/oracles.hpp"

namespace germflow::verify {
namespace {

TEST(Oracles, LeastSquaresResidualOfOrthogonalRows) {
  Eigen::MatrixXd d(2, 3);
  d << 1, 0, 0, 0, 2, 0;
  EXPECT_NEAR(least_squares_residual(d, 1), 2.0, 1e-15);
  EXPECT_NEAR(oracle_pseudo_distance(d), 1.0, 1e-15);
}

TEST(Oracles, ResidualOfDependentRowIsZero) {
  Eigen::MatrixXd d(2, 2);
  d << 1, 2, 2, 4;
  EXPECT_NEAR(least_squares_residual(d, 0), 0.0, 1e-14);
}

TEST(Oracles, MinNormRightInverse) {
  Eigen::MatrixXd d(1, 2);
  d << 3, 4;
  const Eigen::MatrixXd x = min_norm_right_inverse(d);
  EXPECT_NEAR(x(0, 0), 0.12, 1e-15);
  EXPECT_NEAR(x(1, 0), 0.16, 1e-15);
}

TEST(Oracles, GramDeterminantAndCofactor) {
  Eigen::MatrixXd d(2, 2);
  d << 1, 1, 0, 2;
  // Gram = [[2, 2], [2, 4]], det 4, cofactors 4 and 2.
  EXPECT_NEAR(gram_determinant_qr(d), 4.0, 1e-14);
  EXPECT_NEAR(gram_cofactor_qr(d, 0), 4.0, 1e-14);
  EXPECT_NEAR(gram_cofactor_qr(d, 1), 2.0, 1e-14);
}

TEST(Oracles, PowerIterationNorm) {
  Eigen::MatrixXd a(2, 2);
  a << 3, 0, 4, 5;
  EXPECT_NEAR(power_iteration_norm(a), std::sqrt(45.0), 1e-10);
}

TEST(LemmaSuites, AllPassAtTheirTolerances) {
  for (const auto& suite : run_lemma_suites(42)) {
    EXPECT_TRUE(suite.passed()) << suite.name << " worst " << suite.worst;
    EXPECT_LE(suite.worst, suite.tolerance) << suite.name;
  }
}

TEST(LemmaSuites, InstanceCounts) {
  EXPECT_EQ(oracle_equivalence_suite(200, 1).instances, 200u);
  EXPECT_EQ(pseudoinverse_identity_suite(100, 1).instances, 100u);
  EXPECT_EQ(submatrix_norm_suite(1000, 1).instances, 1000u);
}

TEST(LemmaSuites, EmptySuiteDoesNotPass) { EXPECT_FALSE(kappa_pinv_suite(0, 1).passed()); }

}  // namespace
}  // namespace germflow::verify
