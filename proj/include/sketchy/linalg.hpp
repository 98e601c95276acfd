#ifndef SKETCHY_LINALG_HPP_
#define SKETCHY_LINALG_HPP_

#include <optional>

#include "sketchy/types.hpp"

namespace sketchy {

struct QRResult {
  Matrix Q;  // rows x cols, orthonormal columns
  Matrix R;  // cols x cols, upper triangular, nonnegative diagonal
};

struct SVDResult {
  Matrix U;
  Vector sigma;  // nonincreasing, nonnegative
  Matrix V;
};

/// Thin (economy) QR with the diagonal of R forced nonnegative, which makes
/// Q and R unique for full-column-rank input. Requires rows >= cols.
QRResult thin_qr(const Eigen::Ref<const Matrix>& A);

/// Thin SVD, singular values in nonincreasing order.
SVDResult svd(const Eigen::Ref<const Matrix>& A);

/// Leading-r truncation of the thin SVD. Requires r <= min(rows, cols).
SVDResult svd(const Eigen::Ref<const Matrix>& A, Index r);

/// Moore-Penrose pseudo-inverse via SVD. Singular values at or below
/// tol * sigma_max are treated as zero. `rank_out`, when given, receives
/// the numerical rank at that cutoff.
Matrix pseudo_inverse(const Eigen::Ref<const Matrix>& A, Scalar tol,
                      Index* rank_out = nullptr);

/// Pseudo-inverse with the standard cutoff max(rows, cols) * eps.
Matrix pseudo_inverse(const Eigen::Ref<const Matrix>& A);

Scalar default_pinv_tolerance(Index rows, Index cols);

/// Rows/columns of A gathered in index order; an absent set selects all.
Matrix submatrix(const Eigen::Ref<const Matrix>& A,
                 const std::optional<IndexSet>& row_set,
                 const std::optional<IndexSet>& col_set);

}  // namespace sketchy

#endif  // SKETCHY_LINALG_HPP_
