#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace germflow::verify {

struct SuiteResult {
  std::string name;
  std::size_t instances = 0;
  std::size_t failures = 0;
  double worst = 0.0;
  double tolerance = 0.0;

  bool passed() const { return instances > 0 && failures == 0; }
};

// Kuo pseudo-distance against the least-squares oracle on random (p, n) in
// {1..4} x {2..8}; relative error.
SuiteResult oracle_equivalence_suite(std::size_t instances, std::uint64_t seed, double tol = 1e-8);

// N_j / ||N_j||^2 against minimum-norm right inverses on random 3 x 6 systems.
SuiteResult pseudoinverse_identity_suite(std::size_t instances, std::uint64_t seed, double tol = 1e-9);

// |kappa(A) ||A^+|| - 1| on random full-row-rank matrices.
SuiteResult kappa_pinv_suite(std::size_t instances, std::uint64_t seed, double tol = 1e-8);

// ||N_j||^2 against det(Gram) / A_jj computed from QR factors; relative error.
SuiteResult cofactor_norm_suite(std::size_t instances, std::uint64_t seed, double tol = 1e-8);

// Block norms of random matrices under random 2 x 2 partitions never exceed
// the norm of the whole matrix (power-iteration norms).
SuiteResult submatrix_norm_suite(std::size_t instances, std::uint64_t seed, double tol = 1e-12);

std::vector<SuiteResult> run_lemma_suites(std::uint64_t seed);

}  // namespace germflow::verify
