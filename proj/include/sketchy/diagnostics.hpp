#ifndef SKETCHY_DIAGNOSTICS_HPP_
#define SKETCHY_DIAGNOSTICS_HPP_

#include "sketchy/sketch.hpp"
#include "sketchy/types.hpp"

namespace sketchy {

/// Singular spectrum with tail-norm accessors.
struct SpectrumSummary {
  Vector singular_values;  // nonincreasing, nonnegative

  static SpectrumSummary from_singular_values(const Vector& sigma);
  static SpectrumSummary of(const Matrix& A);  // via full SVD

  Scalar total_fro() const;         // ||A||_F
  Scalar tail_fro(Index r) const;   // sqrt(sum_{i>r} sigma_i^2)
  Scalar tail_op(Index r) const;    // sigma_{r+1} (0 past the end)
};

struct IncoherenceStats {
  Scalar mu = 0;        // row coherence of the leading left subspace
  Scalar nu = 0;        // column-side analog
  Scalar mu_prime = 0;  // row coherence of the computed basis Q at scale k
  Scalar nu_prime = 0;  // same for P
};

struct SampleFloor {
  Scalar required = 0;
  Index actual = 0;
  bool satisfied = false;
};

/// Constants and bound values of the range/core error guarantees.
struct TheoryReport {
  Scalar C1 = 0, C2 = 0;        // range capture constants
  Scalar Cqsk = 0;              // core solve constant C(q, s, k)
  Scalar C3 = 0, C4 = 0;        // initial approximation constants
  Scalar bound_range = 0;       // (C1+1)*tail_fro + C2*tail_op
  Scalar bound_initial = 0;     // C3*tail_fro + C4*tail_op
  Scalar bound_final = 0;       // (2*C3+1)*tail_fro + 2*C4*tail_op
  Scalar probability_floor_range = 0;  // 1 - 4/r^3 - 4/k^3
  Scalar probability_floor_core = 0;   // 1 - 4/k^3 - 6/s^3
  SampleFloor floor_m, floor_n, floor_m_prime, floor_n_prime;
};

/// scree(r) = sum_{i>r} sigma_i^2 / sum_i sigma_i^2 for r = 0..len.
Vector scree_curve(const Vector& sigma);

/// err = ||U diag(sigma) V^T - A||_F^2 / ||A||_F^2, accumulated over column
/// blocks so no second M x N buffer is materialized.
Scalar approx_error(const MatrixAccessor& A, const RankRFactors& approx);
Scalar approx_error(const Matrix& A, const RankRFactors& approx);

/// Tight coherence of an orthonormal basis at the given rank scale:
/// (rows / rank_scale) * max_i ||row i||^2, always in [1, rows].
Scalar incoherence(const Eigen::Ref<const Matrix>& basis, Index rank_scale);

IncoherenceStats measure_incoherence(const Matrix& A, Index r,
                                     const ApproxFactors& factors);

/// Peak signal-to-noise ratio in dB after sign alignment; +infinity when the
/// vectors agree exactly (up to sign).
Scalar psnr(const Vector& truth, const Vector& estimate);

/// Constants only; requires k >= r+4, s >= k+4, and 0 < p <= q <= 1.
TheoryReport theory_constants(double p, double q, Index s, Index k, Index r);

/// Full report: constants, bound values for the given spectrum, probability
/// floors, and the four sample-count floors for an M x N input.
TheoryReport evaluate_bounds(const SpectrumSummary& spectrum,
                             const IncoherenceStats& inc,
                             const SketchConfig& config, Index M, Index N);

/// Outcome of a repeated-trial check.
struct PassRate {
  int trials = 0;
  int pass_lower = 0;  // lower singular-value bound held
  int pass_upper = 0;  // upper singular-value bound held
  int pass_both = 0;
  double lower_rate() const { return trials ? double(pass_lower) / trials : 0; }
  double upper_rate() const { return trials ? double(pass_upper) / trials : 0; }
  double both_rate() const { return trials ? double(pass_both) / trials : 0; }
};

/// Row-subsampling of an incoherent orthonormal basis keeps its singular
/// values within [sqrt(n/6N), sqrt(13n/6N)]: empirical rate over trials.
PassRate check_lemma1(const Matrix& V1, Index n, int trials,
                      RandomStream& rng);

struct InequalityPair {
  Scalar lhs = 0;
  Scalar rhs = 0;
  bool degenerate = false;  // the full-row-rank hypothesis failed numerically
  bool holds(Scalar rel_slack = 1e-12) const {
    return degenerate || lhs <= rhs * (1 + rel_slack) + rel_slack;
  }
};

/// Deterministic range-capture bound
///   ||A - QQ^T A||_F^2 <= ||S2||_F^2 + ||S2 W2 W1^+||_F^2
/// for Q from the QR of A(:,theta) * omega^T; returns both sides.
InequalityPair check_lemma3(const Matrix& A, Index r, const IndexSet& theta,
                            const Matrix& omega);

/// Tail bound on ||G^+||_2 for a k x r standard Gaussian G: empirical
/// violation rate of e*sqrt(k)/(k-r+1) * k^{3/(k-r+1)}; expected <= 1/k^3.
PassRate check_lemma4(Index k, Index r, int trials, RandomStream& rng);
Scalar lemma4_bound(Index k, Index r);

/// Relative deviation of the Monte Carlo mean of ||S G T||_F^2 from
/// ||S||_F^2 * ||T||_F^2 over standard Gaussian G.
Scalar check_lemma5(const Matrix& S, const Matrix& T, int trials,
                    RandomStream& rng);

struct ResidualReport {
  Scalar residual = 0;
  bool degenerate = false;
};

/// Exact decomposition of the core-solve error C - Q^T A P into its three
/// projection terms; the relative residual is ~0 for pipeline-consistent
/// inputs and grows under any perturbation of the core sketch.
ResidualReport check_lemma7(const Matrix& A, const ApproxFactors& factors,
                            const CoreSketch& sk);

struct CoverageReport {
  int trials = 0;
  int range_pass = 0;    // Theorem-1 inequality held
  int initial_pass = 0;  // initial-approximation bound held (given range)
  int final_pass = 0;    // final rank-r bound held (given range)
  TheoryReport theory;
  double range_rate() const { return trials ? double(range_pass) / trials : 0; }
  double initial_rate() const {
    return range_pass ? double(initial_pass) / range_pass : 0;
  }
  double final_rate() const {
    return range_pass ? double(final_pass) / range_pass : 0;
  }
};

/// Monte Carlo coverage of the Theorem-1 range bound and the Theorem-2
/// initial/final bounds over repeated pipeline runs with distinct seeds.
CoverageReport check_theorem_coverage(const Matrix& A,
                                      const SketchConfig& config, int trials,
                                      std::uint64_t seed);

}  // namespace sketchy

#endif  // SKETCHY_DIAGNOSTICS_HPP_
