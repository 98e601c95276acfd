#include "sketchy/diagnostics.hpp"

#include <Eigen/QR>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace sketchy {

namespace {

constexpr double kE = 2.718281828459045235;

Matrix orthogonal_complement(const Matrix& Q) {
  const Index M = Q.rows(), k = Q.cols();
  Eigen::HouseholderQR<Matrix> qr(Q);
  const Matrix full = qr.householderQ() * Matrix::Identity(M, M);
  return full.rightCols(M - k);
}

}  // namespace

SpectrumSummary SpectrumSummary::from_singular_values(const Vector& sigma) {
  for (Index i = 0; i < sigma.size(); ++i) {
    if (!(sigma(i) >= 0))
      throw std::invalid_argument("SpectrumSummary: negative singular value");
    if (i > 0 && sigma(i) > sigma(i - 1) * (1 + 1e-12))
      throw std::invalid_argument(
          "SpectrumSummary: singular values not nonincreasing");
  }
  SpectrumSummary out;
  out.singular_values = sigma;
  return out;
}

SpectrumSummary SpectrumSummary::of(const Matrix& A) {
  return from_singular_values(svd(A).sigma);
}

Scalar SpectrumSummary::total_fro() const { return tail_fro(0); }

Scalar SpectrumSummary::tail_fro(Index r) const {
  if (r < 0) throw std::invalid_argument("tail_fro: r must be nonnegative");
  Scalar sum = 0;
  for (Index i = singular_values.size() - 1; i >= r; --i)
    sum += singular_values(i) * singular_values(i);
  return std::sqrt(sum);
}

Scalar SpectrumSummary::tail_op(Index r) const {
  if (r < 0) throw std::invalid_argument("tail_op: r must be nonnegative");
  return r < singular_values.size() ? singular_values(r) : Scalar(0);
}

Vector scree_curve(const Vector& sigma) {
  const Index len = sigma.size();
  for (Index i = 0; i < len; ++i) {
    if (!(sigma(i) >= 0))
      throw std::invalid_argument("scree_curve: negative singular value");
    if (i > 0 && sigma(i) > sigma(i - 1) * (1 + 1e-12))
      throw std::invalid_argument("scree_curve: values not nonincreasing");
  }
  Vector curve(len + 1);
  // Suffix sums from the back keep the small tail terms accurate.
  Scalar acc = 0;
  curve(len) = 0;
  for (Index i = len - 1; i >= 0; --i) {
    acc += sigma(i) * sigma(i);
    curve(i) = acc;
  }
  if (acc <= 0)
    throw std::invalid_argument("scree_curve: all-zero spectrum");
  curve /= acc;
  curve(0) = 1;  // exact by definition
  return curve;
}

Scalar approx_error(const MatrixAccessor& A, const RankRFactors& approx) {
  const Index M = A.rows(), N = A.cols();
  if (approx.U.rows() != M || approx.V.rows() != N ||
      approx.U.cols() != approx.sigma.size() ||
      approx.V.cols() != approx.sigma.size())
    throw std::invalid_argument("approx_error: factor shapes incompatible");

  const Matrix scaled = approx.U * approx.sigma.asDiagonal();  // M x r
  constexpr Index kBlock = 512;
  Scalar num = 0, den = 0;
  for (Index j0 = 0; j0 < N; j0 += kBlock) {
    const Index b = std::min(kBlock, N - j0);
    const Matrix block = A.col_range(j0, b);
    num += (scaled * approx.V.middleRows(j0, b).transpose() - block)
               .squaredNorm();
    den += block.squaredNorm();
  }
  if (den <= 0)
    throw std::invalid_argument("approx_error: zero input matrix");
  return num / den;
}

Scalar approx_error(const Matrix& A, const RankRFactors& approx) {
  return approx_error(DenseAccessor(A), approx);
}

Scalar incoherence(const Eigen::Ref<const Matrix>& basis, Index rank_scale) {
  if (rank_scale < 1)
    throw std::invalid_argument("incoherence: rank_scale must be positive");
  const Index M = basis.rows(), c = basis.cols();
  if (c < 1 || M < c)
    throw std::invalid_argument("incoherence: need rows >= cols >= 1");
  const Matrix gram = basis.transpose() * basis;
  if ((gram - Matrix::Identity(c, c)).norm() > 1e-8)
    throw std::invalid_argument("incoherence: basis not orthonormal");
  const Scalar max_row_sq = basis.rowwise().squaredNorm().maxCoeff();
  return static_cast<Scalar>(M) / static_cast<Scalar>(rank_scale) * max_row_sq;
}

IncoherenceStats measure_incoherence(const Matrix& A, Index r,
                                     const ApproxFactors& factors) {
  const SVDResult f = svd(A);
  IncoherenceStats out;
  out.mu = incoherence(f.U.leftCols(r), r);
  out.nu = incoherence(f.V.leftCols(r), r);
  out.mu_prime = incoherence(factors.Q, factors.Q.cols());
  out.nu_prime = incoherence(factors.P, factors.P.cols());
  return out;
}

Scalar psnr(const Vector& truth, const Vector& estimate) {
  if (truth.size() != estimate.size())
    throw std::invalid_argument("psnr: length mismatch (" +
                                std::to_string(truth.size()) + " vs " +
                                std::to_string(estimate.size()) + ")");
  const Scalar peak = truth.cwiseAbs().maxCoeff();
  if (peak <= 0)
    throw std::invalid_argument("psnr: truth is identically zero");
  // Singular vectors are sign-ambiguous; align before comparing.
  const Vector aligned =
      truth.dot(estimate) < 0 ? Vector(-estimate) : estimate;
  const Scalar mse = (truth - aligned).squaredNorm() /
                     static_cast<Scalar>(truth.size());
  if (mse == 0) return std::numeric_limits<Scalar>::infinity();
  return 20.0 * std::log10(peak / std::sqrt(mse));
}

TheoryReport theory_constants(double p, double q, Index s, Index k, Index r) {
  auto fail = [](const std::string& msg) {
    throw std::invalid_argument("theory_constants: violated " + msg);
  };
  if (r < 1) fail("r >= 1");
  if (k < r + 4)
    fail("k >= r+4 (k=" + std::to_string(k) + ", r=" + std::to_string(r) +
         ")");
  if (s < k + 4)
    fail("s >= k+4 (s=" + std::to_string(s) + ", k=" + std::to_string(k) +
         ")");
  if (!(p > 0 && p <= 1)) fail("0 < p <= 1");
  if (!(q > 0 && q <= 1)) fail("0 < q <= 1");
  if (!(p <= q)) fail("p <= q");

  const double kk = static_cast<double>(k);
  const double ss = static_cast<double>(s);
  const double gap_k = static_cast<double>(k - r + 1);
  const double gap_s = static_cast<double>(s - k + 1);
  const double k_pow = std::pow(kk, 3.0 / gap_k);

  TheoryReport rep;
  rep.C1 = std::sqrt(6.0 * kE * kE / p) * (kk / gap_k) * k_pow;
  rep.C2 = std::sqrt(36.0 * kE * kE / p) * std::sqrt(kk * std::log(kk)) /
           gap_k * k_pow;
  const double root = std::sqrt(ss) + std::sqrt(6.0 * std::log(ss));
  rep.Cqsk = (6.0 * kE * kE / q) * std::pow(ss, 1.0 + 6.0 / gap_s) /
             (gap_s * gap_s) * root * root;
  const double shared = std::sqrt(3.0) * rep.Cqsk + std::sqrt(2.0);
  rep.C3 = rep.C1 * shared;
  rep.C4 = rep.C2 * shared;

  const double rr = static_cast<double>(r);
  rep.probability_floor_range = 1.0 - 4.0 / (rr * rr * rr) - 4.0 / (kk * kk * kk);
  rep.probability_floor_core = 1.0 - 4.0 / (kk * kk * kk) - 6.0 / (ss * ss * ss);
  return rep;
}

TheoryReport evaluate_bounds(const SpectrumSummary& spectrum,
                             const IncoherenceStats& inc,
                             const SketchConfig& config, Index M, Index N) {
  const SketchConfig cfg = config.resolved();
  TheoryReport rep = theory_constants(cfg.p, cfg.q, cfg.s, cfg.k, cfg.r);

  const Scalar tail_f = spectrum.tail_fro(cfg.r);
  const Scalar tail_2 = spectrum.tail_op(cfg.r);
  rep.bound_range = (rep.C1 + 1) * tail_f + rep.C2 * tail_2;
  rep.bound_initial = rep.C3 * tail_f + rep.C4 * tail_2;
  rep.bound_final = (2 * rep.C3 + 1) * tail_f + 2 * rep.C4 * tail_2;

  const double log_r = std::log(static_cast<double>(cfg.r));
  const double log_k = std::log(static_cast<double>(cfg.k));
  auto floor_of = [](Scalar required, Index actual) {
    SampleFloor f;
    f.required = required;
    f.actual = actual;
    f.satisfied = static_cast<Scalar>(actual) >= required;
    return f;
  };
  rep.floor_m = floor_of(8 * inc.mu * cfg.r * log_r, cfg.row_samples(M));
  rep.floor_n = floor_of(8 * inc.nu * cfg.r * log_r, cfg.col_samples(N));
  rep.floor_m_prime =
      floor_of(8 * inc.mu_prime * cfg.k * log_k, cfg.core_row_samples(M));
  rep.floor_n_prime =
      floor_of(8 * inc.nu_prime * cfg.k * log_k, cfg.core_col_samples(N));
  return rep;
}

PassRate check_lemma1(const Matrix& V1, Index n, int trials,
                      RandomStream& rng) {
  const Index N = V1.rows(), r = V1.cols();
  if (n > N)
    throw std::invalid_argument("check_lemma1: n (" + std::to_string(n) +
                                ") > N (" + std::to_string(N) + ")");
  if (n < 1 || trials < 1)
    throw std::invalid_argument("check_lemma1: n and trials must be positive");
  // Orthonormality is a hypothesis of the bound, not something to silently
  // renormalize.
  incoherence(V1, r);

  const Scalar lower = std::sqrt(static_cast<Scalar>(n) / (6.0 * N));
  const Scalar upper = std::sqrt(13.0 * static_cast<Scalar>(n) / (6.0 * N));

  PassRate rate;
  rate.trials = trials;
  for (int t = 0; t < trials; ++t) {
    const IndexSet theta = sample_without_replacement(n, N, rng);
    const Vector sigma = svd(submatrix(V1, theta, std::nullopt)).sigma;
    const Scalar smallest = (n >= r) ? sigma(r - 1) : Scalar(0);
    const Scalar largest = sigma(0);
    const bool lo_ok = smallest >= lower;
    const bool hi_ok = largest <= upper;
    rate.pass_lower += lo_ok;
    rate.pass_upper += hi_ok;
    rate.pass_both += (lo_ok && hi_ok);
  }
  return rate;
}

InequalityPair check_lemma3(const Matrix& A, Index r, const IndexSet& theta,
                            const Matrix& omega) {
  const Index N = A.cols();
  const Index ell = std::min(A.rows(), N);
  if (r < 1 || r >= ell)
    throw std::invalid_argument("check_lemma3: need 1 <= r < min(M, N)");
  if (theta.population() != N)
    throw std::invalid_argument("check_lemma3: theta population must be N");
  if (omega.cols() != theta.size())
    throw std::invalid_argument(
        "check_lemma3: omega cols must match |theta|");

  const SVDResult f = svd(A);
  const Matrix V1_rows = submatrix(f.V.leftCols(r), theta, std::nullopt);
  const Matrix V2_rows =
      submatrix(f.V.rightCols(ell - r), theta, std::nullopt);
  const Matrix omega1 = V1_rows.transpose() * omega.transpose();  // r x k
  const Matrix omega2 = V2_rows.transpose() * omega.transpose();

  InequalityPair out;
  const Vector s1 = svd(omega1).sigma;
  if (s1(s1.size() - 1) <=
      default_pinv_tolerance(omega1.rows(), omega1.cols()) * s1(0)) {
    out.degenerate = true;
    return out;
  }

  const Matrix Y = submatrix(A, std::nullopt, theta) * omega.transpose();
  const Matrix Q = thin_qr(Y).Q;
  out.lhs = (A - Q * (Q.transpose() * A)).squaredNorm();

  const Vector tail = f.sigma.tail(ell - r);
  out.rhs = tail.squaredNorm() +
            (tail.asDiagonal() * omega2 * pseudo_inverse(omega1))
                .squaredNorm();
  return out;
}

Scalar lemma4_bound(Index k, Index r) {
  const double gap = static_cast<double>(k - r + 1);
  return kE * std::sqrt(static_cast<double>(k)) / gap *
         std::pow(static_cast<double>(k), 3.0 / gap);
}

PassRate check_lemma4(Index k, Index r, int trials, RandomStream& rng) {
  if (r < 1)
    throw std::invalid_argument("check_lemma4: r must be positive");
  if (k < r + 4)
    throw std::invalid_argument("check_lemma4: requires k >= r+4");
  if (trials < 1)
    throw std::invalid_argument("check_lemma4: trials must be positive");

  const Scalar bound = lemma4_bound(k, r);
  PassRate rate;
  rate.trials = trials;
  for (int t = 0; t < trials; ++t) {
    const Vector sigma = svd(gaussian_map(k, r, rng)).sigma;
    const Scalar pinv_norm = Scalar(1) / sigma(sigma.size() - 1);
    const bool ok = pinv_norm <= bound;
    rate.pass_lower += ok;
    rate.pass_upper += ok;
    rate.pass_both += ok;
  }
  return rate;
}

Scalar check_lemma5(const Matrix& S, const Matrix& T, int trials,
                    RandomStream& rng) {
  if (trials < 1)
    throw std::invalid_argument("check_lemma5: trials must be positive");
  const Scalar target = S.squaredNorm() * T.squaredNorm();
  if (target <= 0)
    throw std::invalid_argument("check_lemma5: S and T must be nonzero");

  // Compensated summation keeps the mean stable over many trials.
  Scalar sum = 0, comp = 0;
  for (int t = 0; t < trials; ++t) {
    const Matrix G = gaussian_map(S.cols(), T.rows(), rng);
    const Scalar value = (S * G * T).squaredNorm();
    const Scalar y = value - comp;
    const Scalar next = sum + y;
    comp = (next - sum) - y;
    sum = next;
  }
  const Scalar mean = sum / trials;
  return std::abs(mean - target) / target;
}

ResidualReport check_lemma7(const Matrix& A, const ApproxFactors& factors,
                            const CoreSketch& sk) {
  const Matrix& Q = factors.Q;
  const Matrix& P = factors.P;
  const Index k = Q.cols();

  const Matrix Q_perp = orthogonal_complement(Q);
  const Matrix P_perp = orthogonal_complement(P);

  const Matrix phi1 = sk.phi * submatrix(Q, sk.delta_prime, std::nullopt);
  const Matrix phi2 = sk.phi * submatrix(Q_perp, sk.delta_prime, std::nullopt);
  const Matrix psi1 = sk.psi * submatrix(P, sk.theta_prime, std::nullopt);
  const Matrix psi2 = sk.psi * submatrix(P_perp, sk.theta_prime, std::nullopt);

  ResidualReport out;
  Index rank_phi1 = 0, rank_psi1 = 0;
  const Matrix phi1_pinv = pseudo_inverse(
      phi1, default_pinv_tolerance(phi1.rows(), phi1.cols()), &rank_phi1);
  const Matrix psi1_pinv = pseudo_inverse(
      psi1, default_pinv_tolerance(psi1.rows(), psi1.cols()), &rank_psi1);
  if (rank_phi1 < k || rank_psi1 < k) {
    out.degenerate = true;
    return out;
  }

  const Matrix AP = A * P;
  const Matrix QtA = Q.transpose() * A;
  const Matrix lhs = factors.C - QtA * P;

  const Matrix left_mix = phi1_pinv * phi2;                          // k x (M-k)
  const Matrix right_mix = psi2.transpose() * psi1_pinv.transpose();  // (N-k) x k
  const Matrix term1 = left_mix * (Q_perp.transpose() * AP);
  const Matrix term2 = (QtA * P_perp) * right_mix;
  const Matrix term3 =
      left_mix * (Q_perp.transpose() * A * P_perp) * right_mix;

  const Scalar denom =
      std::max(factors.C.norm(), std::numeric_limits<Scalar>::epsilon());
  out.residual = (lhs - (term1 + term2 + term3)).norm() / denom;
  return out;
}

CoverageReport check_theorem_coverage(const Matrix& A,
                                      const SketchConfig& config, int trials,
                                      std::uint64_t seed) {
  if (trials < 1)
    throw std::invalid_argument(
        "check_theorem_coverage: trials must be positive");
  const SketchConfig cfg = config.resolved();
  cfg.validate(A.rows(), A.cols());

  const SpectrumSummary spectrum = SpectrumSummary::of(A);

  CoverageReport report;
  report.trials = trials;

  bool theory_ready = false;
  for (int t = 0; t < trials; ++t) {
    SketchConfig trial_cfg = cfg;
    trial_cfg.seed = RandomStream(seed, static_cast<std::uint64_t>(t)).next_u64();

    const CoreSketch sk = build_core_sketches(A, trial_cfg);
    const ApproxFactors factors = recover(sk);
    if (!theory_ready) {
      // Incoherence of Q, P varies little across trials; measure it once.
      const IncoherenceStats inc = measure_incoherence(A, cfg.r, factors);
      report.theory = evaluate_bounds(spectrum, inc, cfg, A.rows(), A.cols());
      theory_ready = true;
    }

    const Scalar err_q = (A - factors.Q * (factors.Q.transpose() * A)).norm();
    const Scalar err_p = (A - (A * factors.P) * factors.P.transpose()).norm();
    const bool range_ok =
        std::max(err_q, err_p) <= report.theory.bound_range;
    report.range_pass += range_ok;
    if (!range_ok) continue;  // the core bounds are conditioned on this event

    const Scalar err_initial =
        (A - factors.Q * factors.C * factors.P.transpose()).norm();
    report.initial_pass += (err_initial <= report.theory.bound_initial);

    const RankRFactors final = truncate(factors, cfg.r);
    const Scalar err_final =
        (A - final.U * final.sigma.asDiagonal() * final.V.transpose()).norm();
    report.final_pass += (err_final <= report.theory.bound_final);
  }
  return report;
}

}  // namespace sketchy
