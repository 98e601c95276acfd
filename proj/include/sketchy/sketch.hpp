#ifndef SKETCHY_SKETCH_HPP_
#define SKETCHY_SKETCH_HPP_

#include <cstdint>
#include <memory>
#include <string>

#include "sketchy/linalg.hpp"
#include "sketchy/random.hpp"
#include "sketchy/types.hpp"

namespace sketchy {

enum class MapKind { gaussian, sparse_sign };

const char* to_string(MapKind kind);
MapKind map_kind_from_string(const std::string& name);

/// Parameters of the sketch pipelines. k and s default to 4r+1 and 2k+1,
/// and q defaults to p, when left at zero.
struct SketchConfig {
  Index r = 0;
  Index k = 0;
  Index s = 0;
  double p = 1.0;
  double q = 0.0;
  MapKind map_kind = MapKind::gaussian;
  std::uint64_t seed = 0;
  Index sparse_nnz_per_col = 8;
  /// When set, the core sample counts m', n' are chosen from the measured
  /// row-norm incoherence of Q and P instead of the ratio q.
  bool adaptive_core_sampling = false;

  SketchConfig resolved() const;

  Index row_samples(Index M) const;        // m  = ceil(p*M)
  Index col_samples(Index N) const;        // n  = ceil(p*N)
  Index core_row_samples(Index M) const;   // m' = ceil(q*M)
  Index core_col_samples(Index N) const;   // n' = ceil(q*N)

  /// Throws std::invalid_argument naming the violated inequality.
  void validate(Index M, Index N) const;
};

/// Read access to a matrix by sampled rows, sampled columns, and sampled
/// intersection blocks, so a subsampled sketch never touches the rest.
class MatrixAccessor {
 public:
  virtual ~MatrixAccessor() = default;
  virtual Index rows() const = 0;
  virtual Index cols() const = 0;
  virtual Matrix row_block(const IndexSet& rows) const = 0;
  virtual Matrix col_block(const IndexSet& cols) const = 0;
  virtual Matrix block(const IndexSet& rows, const IndexSet& cols) const = 0;
  /// Contiguous column range [j0, j0+count); used for blockwise error sweeps.
  virtual Matrix col_range(Index j0, Index count) const = 0;
};

/// Accessor over an in-memory dense matrix (not owned).
class DenseAccessor final : public MatrixAccessor {
 public:
  explicit DenseAccessor(const Matrix& A) : A_(A) {}
  Index rows() const override { return A_.rows(); }
  Index cols() const override { return A_.cols(); }
  Matrix row_block(const IndexSet& rows) const override;
  Matrix col_block(const IndexSet& cols) const override;
  Matrix block(const IndexSet& rows, const IndexSet& cols) const override;
  Matrix col_range(Index j0, Index count) const override;

 private:
  const Matrix& A_;
};

/// The three sketches with their index sets. The core maps Phi and Psi are
/// retained because the core solve needs them; the range maps are discarded
/// once X and Y are formed.
struct CoreSketch {
  Matrix X;  // k x N
  Matrix Y;  // M x k
  Matrix Z;  // s x s
  IndexSet delta, theta, delta_prime, theta_prime;
  Matrix phi;  // s x m'
  Matrix psi;  // s x n'
  SketchConfig config;
  Index M = 0, N = 0;
};

/// Initial approximation A ~= Q C P^T.
struct ApproxFactors {
  Matrix Q;  // M x k, orthonormal columns
  Matrix C;  // k x k
  Matrix P;  // N x k, orthonormal columns
  /// Set when a core pseudo-inverse fell below its rank tolerance; the
  /// factorization is still returned (the event has probability zero in
  /// exact arithmetic, so it is flagged rather than fatal).
  bool core_rank_deficient = false;
  std::string warning;
};

/// Rank-r result in factored SVD form.
struct RankRFactors {
  Matrix U;      // M x r
  Vector sigma;  // r, nonincreasing
  Matrix V;      // N x r
};

/// Wall-clock seconds per pipeline phase.
struct PhaseTimes {
  double sketch = 0;
  double qr = 0;
  double core = 0;
  double truncate = 0;
  double total() const { return sketch + qr + core + truncate; }
};

CoreSketch build_core_sketches(const MatrixAccessor& A,
                               const SketchConfig& config);
CoreSketch build_core_sketches(const Matrix& A, const SketchConfig& config);

/// Same contract with all index sets forced full (p = q = 1); the reference
/// path the subsampled method is compared against.
CoreSketch build_full_sketches(const MatrixAccessor& A, SketchConfig config);
CoreSketch build_full_sketches(const Matrix& A, SketchConfig config);

/// QR of the range sketches and the core solve
///   C = (Phi Q(delta',:))^+  Z  ((Psi P(theta',:))^+)^T.
ApproxFactors recover(const CoreSketch& sk, PhaseTimes* times = nullptr);

/// Best rank-r truncation of C, folded into the output factors.
RankRFactors truncate(const ApproxFactors& factors, Index r);

RankRFactors sketchy_core_svd(const MatrixAccessor& A,
                              const SketchConfig& config,
                              PhaseTimes* times = nullptr);
RankRFactors sketchy_core_svd(const Matrix& A, const SketchConfig& config,
                              PhaseTimes* times = nullptr);

RankRFactors sketchy_svd(const MatrixAccessor& A, const SketchConfig& config,
                         PhaseTimes* times = nullptr);
RankRFactors sketchy_svd(const Matrix& A, const SketchConfig& config,
                         PhaseTimes* times = nullptr);

}  // namespace sketchy

#endif  // SKETCHY_SKETCH_HPP_
