#pragma once

#include <cstddef>
#include <cstdint>

#include <Eigen/Dense>

namespace germflow {
class CounterRng;
}

// Reference computations that share no code path with the library routines
// they are compared against.
namespace germflow::verify {

Eigen::MatrixXd random_gaussian(Eigen::Index rows, Eigen::Index cols, CounterRng& rng);

// Distance from row j to the span of the other rows, by a QR least-squares solve.
double least_squares_residual(const Eigen::MatrixXd& rows, Eigen::Index j);
double oracle_pseudo_distance(const Eigen::MatrixXd& rows);

// Column j is the minimum-norm solution of D x = e_j (complete orthogonal decomposition).
Eigen::MatrixXd min_norm_right_inverse(const Eigen::MatrixXd& d);

// det(D D^T) and its (j, j) cofactor from QR factors of D^T.
double gram_determinant_qr(const Eigen::MatrixXd& d);
double gram_cofactor_qr(const Eigen::MatrixXd& d, Eigen::Index j);

// Largest singular value by power iteration on A^T A.
double power_iteration_norm(const Eigen::MatrixXd& a, std::size_t iterations = 500);

}  // namespace germflow::verify
