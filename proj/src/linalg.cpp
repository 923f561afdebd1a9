#include "germflow/linalg.hpp"

#include <algorithm>

#include "germflow/errors.hpp"

namespace germflow {

namespace {
constexpr double kRankTol = 1e-12;

Eigen::VectorXd singular_values(const Eigen::MatrixXd& a) {
  if (a.size() == 0) return Eigen::VectorXd();
  return Eigen::JacobiSVD<Eigen::MatrixXd>(a).singularValues();
}
}  // namespace

PseudoInverse pseudo_inverse(const Eigen::MatrixXd& a) {
  if (a.rows() == 0 || a.cols() == 0) throw DimensionError("pseudo_inverse: empty matrix");
  if (a.rows() > a.cols()) throw RankDeficientError("more rows than columns: no full row rank", 0.0);
  const Eigen::VectorXd sv = singular_values(a);
  const double smax = sv[0];
  const double smin = sv[sv.size() - 1];
  if (smax == 0.0 || smin <= kRankTol * smax)
    throw RankDeficientError("matrix is rank deficient", smin);
  const Eigen::MatrixXd gram = a * a.transpose();
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success) throw RankDeficientError("Gram matrix is not positive definite", smin);
  PseudoInverse out;
  out.matrix = a.transpose() * llt.solve(Eigen::MatrixXd::Identity(a.rows(), a.rows()));
  out.condition_number = smax / smin;
  return out;
}

double kappa(const Eigen::MatrixXd& a) {
  if (a.rows() == 0) throw DimensionError("kappa: empty matrix");
  if (a.rows() > a.cols()) return 0.0;
  const Eigen::VectorXd sv = singular_values(a);
  return sv[sv.size() - 1];
}

double operator_norm(const Eigen::MatrixXd& a) {
  if (a.size() == 0) return 0.0;
  return singular_values(a)[0];
}

Eigen::MatrixXd cofactor_matrix(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw DimensionError("cofactor_matrix: matrix is not square");
  const Eigen::Index p = a.rows();
  Eigen::MatrixXd c(p, p);
  if (p == 1) {
    c(0, 0) = 1.0;
    return c;
  }
  Eigen::MatrixXd minor(p - 1, p - 1);
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = 0; j < p; ++j) {
      for (Eigen::Index r = 0, mr = 0; r < p; ++r) {
        if (r == i) continue;
        for (Eigen::Index s = 0, ms = 0; s < p; ++s) {
          if (s == j) continue;
          minor(mr, ms++) = a(r, s);
        }
        ++mr;
      }
      c(i, j) = ((i + j) % 2 == 0 ? 1.0 : -1.0) * minor.determinant();
    }
  return c;
}

SubmatrixNormCheck submatrix_norm_property(const Eigen::MatrixXd& a, BlockPartition partition,
                                           double tol) {
  const Eigen::Index r = partition.row_split;
  const Eigen::Index c = partition.col_split;
  if (r < 0 || r > a.rows() || c < 0 || c > a.cols())
    throw DimensionError("submatrix_norm_property: partition out of range");
  SubmatrixNormCheck out;
  out.full_norm = operator_norm(a);
  const Eigen::Index rows2 = a.rows() - r;
  const Eigen::Index cols2 = a.cols() - c;
  for (const Eigen::MatrixXd& block :
       {Eigen::MatrixXd(a.topLeftCorner(r, c)), Eigen::MatrixXd(a.topRightCorner(r, cols2)),
        Eigen::MatrixXd(a.bottomLeftCorner(rows2, c)),
        Eigen::MatrixXd(a.bottomRightCorner(rows2, cols2))})
    out.max_block_norm = std::max(out.max_block_norm, operator_norm(block));
  out.holds = out.max_block_norm <= out.full_norm + tol;
  return out;
}

}  // namespace germflow
