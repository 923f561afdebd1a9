#include "germflow/verify/lemma_suite.hpp"

#include <algorithm>
#include <cmath>

#include "germflow/kuo.hpp"
#include "germflow/linalg.hpp"
#include "germflow/random.hpp"
#include "germflow/verify/oracles.hpp"

namespace germflow::verify {

namespace {

Eigen::Index uniform_index(CounterRng& rng, Eigen::Index lo, Eigen::Index hi) {
  return lo + static_cast<Eigen::Index>(rng.next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
}

void record(SuiteResult& result, double error) {
  result.worst = std::max(result.worst, error);
  if (!(error <= result.tolerance)) ++result.failures;
}

}  // namespace

SuiteResult oracle_equivalence_suite(std::size_t instances, std::uint64_t seed, double tol) {
  SuiteResult result{"pseudo-distance vs least squares", instances, 0, 0.0, tol};
  for (std::size_t k = 0; k < instances; ++k) {
    CounterRng rng(seed, k);
    const Eigen::Index p = uniform_index(rng, 1, 4);
    const Eigen::Index n = uniform_index(rng, 2, 8);
    const Eigen::MatrixXd d = random_gaussian(p, n, rng);
    const double ours = kuo_vectors(d).pseudo_distance();
    const double oracle = oracle_pseudo_distance(d);
    if (p > n) {
      // Rows are dependent: both must report a vanishing distance.
      record(result, std::max(ours, oracle) / d.norm());
    } else {
      record(result, std::abs(ours - oracle) / oracle);
    }
  }
  return result;
}

SuiteResult pseudoinverse_identity_suite(std::size_t instances, std::uint64_t seed, double tol) {
  SuiteResult result{"N_j / ||N_j||^2 = column j of D^+", instances, 0, 0.0, tol};
  for (std::size_t k = 0; k < instances; ++k) {
    CounterRng rng(seed, k);
    const Eigen::MatrixXd d = random_gaussian(3, 6, rng);
    const KuoVectors kv = kuo_vectors(d);
    const Eigen::MatrixXd pinv = min_norm_right_inverse(d);
    double error = 0.0;
    for (Eigen::Index j = 0; j < d.rows(); ++j) {
      const Eigen::VectorXd lhs =
          kv.normals.row(j).transpose() / (kv.normal_norms[j] * kv.normal_norms[j]);
      error = std::max(error, (lhs - pinv.col(j)).norm() / pinv.col(j).norm());
    }
    record(result, error);
  }
  return result;
}

SuiteResult kappa_pinv_suite(std::size_t instances, std::uint64_t seed, double tol) {
  SuiteResult result{"kappa(A) ||A^+|| = 1", instances, 0, 0.0, tol};
  for (std::size_t k = 0; k < instances; ++k) {
    CounterRng rng(seed, k);
    const Eigen::Index p = uniform_index(rng, 1, 4);
    const Eigen::Index m = uniform_index(rng, p, 8);
    const Eigen::MatrixXd a = random_gaussian(p, m, rng);
    const double pinv_norm = power_iteration_norm(min_norm_right_inverse(a), 2000);
    record(result, std::abs(kappa(a) * pinv_norm - 1.0));
  }
  return result;
}

SuiteResult cofactor_norm_suite(std::size_t instances, std::uint64_t seed, double tol) {
  SuiteResult result{"||N_j||^2 = det / A_jj", instances, 0, 0.0, tol};
  for (std::size_t k = 0; k < instances; ++k) {
    CounterRng rng(seed, k);
    const Eigen::Index p = uniform_index(rng, 1, 4);
    const Eigen::Index n = uniform_index(rng, p, 8);
    const Eigen::MatrixXd d = random_gaussian(p, n, rng);
    const KuoVectors kv = kuo_vectors(d);
    const double det = gram_determinant_qr(d);
    double error = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      const double expected = det / gram_cofactor_qr(d, j);
      error = std::max(error, std::abs(kv.normal_norms[j] * kv.normal_norms[j] - expected) / expected);
    }
    record(result, error);
  }
  return result;
}

SuiteResult submatrix_norm_suite(std::size_t instances, std::uint64_t seed, double tol) {
  SuiteResult result{"block norm <= full norm", instances, 0, 0.0, tol};
  for (std::size_t k = 0; k < instances; ++k) {
    CounterRng rng(seed, k);
    const Eigen::Index rows = uniform_index(rng, 2, 8);
    const Eigen::Index cols = uniform_index(rng, 2, 8);
    const Eigen::MatrixXd a = random_gaussian(rows, cols, rng);
    const BlockPartition part{uniform_index(rng, 1, rows - 1), uniform_index(rng, 1, cols - 1)};
    const SubmatrixNormCheck check = submatrix_norm_property(a, part, tol);
    // Independent full norm: the library value must agree with power iteration.
    const double oracle_full = power_iteration_norm(a, 5000);
    const bool agrees = std::abs(oracle_full - check.full_norm) <= 1e-6 * check.full_norm;
    const double excess = check.max_block_norm - check.full_norm;
    result.worst = std::max(result.worst, excess);
    if (!check.holds || !agrees || excess > tol) ++result.failures;
  }
  return result;
}

std::vector<SuiteResult> run_lemma_suites(std::uint64_t seed) {
  return {oracle_equivalence_suite(200, seed), pseudoinverse_identity_suite(100, seed),
          kappa_pinv_suite(200, seed), cofactor_norm_suite(200, seed),
          submatrix_norm_suite(1000, seed)};
}

}  // namespace germflow::verify
