#pragma once

#include <cstddef>

#include <Eigen/Dense>

namespace germflow {

struct PseudoInverse {
  Eigen::MatrixXd matrix;
  double condition_number = 0.0;
};

// A^+ = A^T (A A^T)^-1 for a p x m matrix of full row rank; throws
// RankDeficientError otherwise.
PseudoInverse pseudo_inverse(const Eigen::MatrixXd& a);

// inf over unit alpha of ||alpha^T A||: the p-th singular value, zero when p > m.
double kappa(const Eigen::MatrixXd& a);

double operator_norm(const Eigen::MatrixXd& a);

// Cofactor matrix C_ij = (-1)^(i+j) det(minor_ij).
Eigen::MatrixXd cofactor_matrix(const Eigen::MatrixXd& a);

struct BlockPartition {
  Eigen::Index row_split = 0;
  Eigen::Index col_split = 0;
};

struct SubmatrixNormCheck {
  bool holds = true;
  double full_norm = 0.0;
  double max_block_norm = 0.0;
};

// Every block of a 2x2 partition has operator norm at most ||A|| + tol.
SubmatrixNormCheck submatrix_norm_property(const Eigen::MatrixXd& a, BlockPartition partition,
                                           double tol = 1e-12);

}  // namespace germflow
