#include "sketchy/linalg.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <limits>
#include <stdexcept>
#include <string>

namespace sketchy {

QRResult thin_qr(const Eigen::Ref<const Matrix>& A) {
  if (A.rows() < A.cols())
    throw std::invalid_argument("thin_qr: rows (" + std::to_string(A.rows()) +
                                ") < cols (" + std::to_string(A.cols()) + ")");
  require_finite(A, "thin_qr");

  Eigen::HouseholderQR<Matrix> qr(A);
  QRResult out;
  out.Q = qr.householderQ() * Matrix::Identity(A.rows(), A.cols());
  out.R = qr.matrixQR()
              .topRows(A.cols())
              .template triangularView<Eigen::Upper>();
  for (Index j = 0; j < out.R.rows(); ++j) {
    if (out.R(j, j) < 0) {
      out.R.row(j) = -out.R.row(j);
      out.Q.col(j) = -out.Q.col(j);
    }
  }
  return out;
}

SVDResult svd(const Eigen::Ref<const Matrix>& A) {
  require_finite(A, "svd");
  Eigen::BDCSVD<Matrix> solver(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SVDResult out;
  out.U = solver.matrixU();
  out.sigma = solver.singularValues();
  out.V = solver.matrixV();
  return out;
}

SVDResult svd(const Eigen::Ref<const Matrix>& A, Index r) {
  const Index rank_limit = std::min(A.rows(), A.cols());
  if (r < 0 || r > rank_limit)
    throw std::invalid_argument("svd: r (" + std::to_string(r) +
                                ") out of range [0, " +
                                std::to_string(rank_limit) + "]");
  SVDResult full = svd(A);
  SVDResult out;
  out.U = full.U.leftCols(r);
  out.sigma = full.sigma.head(r);
  out.V = full.V.leftCols(r);
  return out;
}

Scalar default_pinv_tolerance(Index rows, Index cols) {
  return static_cast<Scalar>(std::max(rows, cols)) *
         std::numeric_limits<Scalar>::epsilon();
}

Matrix pseudo_inverse(const Eigen::Ref<const Matrix>& A, Scalar tol,
                      Index* rank_out) {
  require_finite(A, "pseudo_inverse");
  if (A.size() == 0 || A.isZero(0)) {
    if (rank_out) *rank_out = 0;
    return Matrix::Zero(A.cols(), A.rows());
  }
  const SVDResult f = svd(A);
  const Scalar cutoff = tol * f.sigma(0);
  Index rank = 0;
  Vector inv = Vector::Zero(f.sigma.size());
  for (Index i = 0; i < f.sigma.size(); ++i) {
    if (f.sigma(i) > cutoff) {
      inv(i) = Scalar(1) / f.sigma(i);
      ++rank;
    }
  }
  if (rank_out) *rank_out = rank;
  return f.V.leftCols(rank) * inv.head(rank).asDiagonal() *
         f.U.leftCols(rank).transpose();
}

Matrix pseudo_inverse(const Eigen::Ref<const Matrix>& A) {
  return pseudo_inverse(A, default_pinv_tolerance(A.rows(), A.cols()));
}

Matrix submatrix(const Eigen::Ref<const Matrix>& A,
                 const std::optional<IndexSet>& row_set,
                 const std::optional<IndexSet>& col_set) {
  // Indices are sorted, so checking the last one suffices.
  if (row_set && row_set->size() > 0 &&
      (*row_set)[row_set->size() - 1] >= A.rows())
    throw std::invalid_argument("submatrix: row index " +
                                std::to_string((*row_set)[row_set->size() - 1]) +
                                " >= rows " + std::to_string(A.rows()));
  if (col_set && col_set->size() > 0 &&
      (*col_set)[col_set->size() - 1] >= A.cols())
    throw std::invalid_argument("submatrix: col index " +
                                std::to_string((*col_set)[col_set->size() - 1]) +
                                " >= cols " + std::to_string(A.cols()));

  const Index out_rows = row_set ? row_set->size() : A.rows();
  const Index out_cols = col_set ? col_set->size() : A.cols();
  Matrix out(out_rows, out_cols);
  for (Index j = 0; j < out_cols; ++j) {
    const Index src_col = col_set ? (*col_set)[j] : j;
    if (row_set) {
      for (Index i = 0; i < out_rows; ++i)
        out(i, j) = A((*row_set)[i], src_col);
    } else {
      out.col(j) = A.col(src_col);
    }
  }
  return out;
}

}  // namespace sketchy
