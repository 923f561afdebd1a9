#include "germflow/verify/oracles.hpp"

#include <cmath>

#include "germflow/random.hpp"

namespace germflow::verify {

Eigen::MatrixXd random_gaussian(Eigen::Index rows, Eigen::Index cols, CounterRng& rng) {
  Eigen::MatrixXd a(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) a(i, j) = rng.normal();
  return a;
}

double least_squares_residual(const Eigen::MatrixXd& rows, Eigen::Index j) {
  const Eigen::Index p = rows.rows();
  const Eigen::VectorXd target = rows.row(j).transpose();
  if (p == 1) return target.norm();
  Eigen::MatrixXd others(rows.cols(), p - 1);
  for (Eigen::Index i = 0, k = 0; i < p; ++i)
    if (i != j) others.col(k++) = rows.row(i).transpose();
  const Eigen::VectorXd coeffs = others.colPivHouseholderQr().solve(target);
  return (target - others * coeffs).norm();
}

double oracle_pseudo_distance(const Eigen::MatrixXd& rows) {
  double best = least_squares_residual(rows, 0);
  for (Eigen::Index j = 1; j < rows.rows(); ++j) best = std::min(best, least_squares_residual(rows, j));
  return best;
}

Eigen::MatrixXd min_norm_right_inverse(const Eigen::MatrixXd& d) {
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(d);
  return cod.solve(Eigen::MatrixXd::Identity(d.rows(), d.rows()));
}

double gram_determinant_qr(const Eigen::MatrixXd& d) {
  const Eigen::MatrixXd dt = d.transpose();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(dt);
  const Eigen::MatrixXd r = qr.matrixQR().topRows(d.rows()).triangularView<Eigen::Upper>();
  double det = 1.0;
  for (Eigen::Index i = 0; i < d.rows(); ++i) det *= r(i, i) * r(i, i);
  return det;
}

double gram_cofactor_qr(const Eigen::MatrixXd& d, Eigen::Index j) {
  if (d.rows() == 1) return 1.0;
  Eigen::MatrixXd reduced(d.rows() - 1, d.cols());
  for (Eigen::Index i = 0, k = 0; i < d.rows(); ++i)
    if (i != j) reduced.row(k++) = d.row(i);
  return gram_determinant_qr(reduced);
}

double power_iteration_norm(const Eigen::MatrixXd& a, std::size_t iterations) {
  if (a.size() == 0) return 0.0;
  const Eigen::MatrixXd ata = a.transpose() * a;
  Eigen::VectorXd v = Eigen::VectorXd::Ones(a.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] += 0.1 * static_cast<double>(i);
  v.normalize();
  double lambda = 0.0;
  for (std::size_t k = 0; k < iterations; ++k) {
    Eigen::VectorXd w = ata * v;
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    lambda = v.dot(w);
    v = w / norm;
  }
  // Rayleigh quotient of the final iterate.
  lambda = v.dot(ata * v);
  return std::sqrt(std::max(lambda, 0.0));
}

}  // namespace germflow::verify
