#include "fxtcore/matrix_analysis.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace fxt {

double min_nonzero_singular_value(const Eigen::MatrixXd& M, RankTolerance tol) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  const double thresh = tol.rel_tol * smax;
  double smin = -1.0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > thresh && sv(i) > 0.0) smin = sv(i);
  }
  if (smin < 0.0) throw AllZeroMatrix("min_nonzero_singular_value: rank 0");
  return smin;
}

namespace {

int numeric_rank(const Eigen::VectorXd& sv, double rel_tol) {
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  const double thresh = rel_tol * smax;
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > thresh && sv(i) > 0.0) ++r;
  return r;
}

}  // namespace

SubspaceSplit split_row_null(const Eigen::MatrixXd& M, const Eigen::VectorXd& w,
                             RankTolerance tol) {
  if (w.size() != M.cols())
    throw DimensionMismatch("split_row_null: dim(w) != cols(M)");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
  const int r = numeric_rank(svd.singularValues(), tol.rel_tol);
  const Eigen::MatrixXd V = svd.matrixV();
  SubspaceSplit out;
  // Rowspace of M is spanned by the first r right-singular vectors.
  const Eigen::MatrixXd Vr = V.leftCols(r);
  out.row_part = Vr * (Vr.transpose() * w);
  out.null_part = w - out.row_part;
  return out;
}

Eigen::MatrixXd nullspace_basis(const Eigen::MatrixXd& M, RankTolerance tol) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
  const int r = numeric_rank(svd.singularValues(), tol.rel_tol);
  return svd.matrixV().rightCols(M.cols() - r);
}

bool nullspace_constant(const Eigen::MatrixXd& M1, const Eigen::MatrixXd& M2,
                        RankTolerance tol) {
  if (M1.cols() != M2.cols())
    throw DimensionMismatch("nullspace_constant: column count mismatch");
  const Eigen::MatrixXd N1 = nullspace_basis(M1, tol);
  const Eigen::MatrixXd N2 = nullspace_basis(M2, tol);
  if (N1.cols() != N2.cols()) return false;
  if (N1.cols() == 0) return true;  // both trivial
  // Principal angles: arccos of the singular values of N1^T N2.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(N1.transpose() * N2);
  const double cmin = svd.singularValues().minCoeff();
  const double angle = std::acos(std::clamp(cmin, -1.0, 1.0));
  return angle < 1e-6;
}

}  // namespace fxt
