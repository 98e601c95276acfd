#include "sketchy/sketch.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "sketchy/diagnostics.hpp"

namespace sketchy {

namespace {

// Substream ids for the independent random draws of one pipeline run.
enum StreamId : std::uint64_t {
  kDeltaStream = 0,
  kThetaStream = 1,
  kDeltaPrimeStream = 2,
  kThetaPrimeStream = 3,
  kGammaStream = 4,
  kOmegaStream = 5,
  kPhiStream = 6,
  kPsiStream = 7,
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

Matrix draw_map(MapKind kind, Index rows, Index cols, Index nnz_per_col,
                RandomStream& rng) {
  switch (kind) {
    case MapKind::gaussian:
      return gaussian_map(rows, cols, rng);
    case MapKind::sparse_sign:
      return sparse_sign_map(rows, cols, std::min(nnz_per_col, rows), rng);
  }
  throw std::invalid_argument("draw_map: unknown map kind");
}

Index ratio_count(double ratio, Index dim) {
  // The nudge keeps ceil(0.4 * 400) at 160 despite 0.4 rounding up in
  // binary; it never drops a count below the exact rational ceiling.
  const auto raw = static_cast<Index>(
      std::ceil(ratio * static_cast<double>(dim) - 1e-9));
  return std::min(std::max<Index>(raw, 1), dim);
}

}  // namespace

const char* to_string(MapKind kind) {
  return kind == MapKind::gaussian ? "gaussian" : "sparse-sign";
}

MapKind map_kind_from_string(const std::string& name) {
  if (name == "gaussian") return MapKind::gaussian;
  if (name == "sparse-sign" || name == "sparse_sign")
    return MapKind::sparse_sign;
  throw std::invalid_argument("unknown map kind: " + name);
}

SketchConfig SketchConfig::resolved() const {
  SketchConfig out = *this;
  if (out.k == 0) out.k = 4 * out.r + 1;
  if (out.s == 0) out.s = 2 * out.k + 1;
  if (out.q == 0.0) out.q = out.p;
  return out;
}

Index SketchConfig::row_samples(Index M) const { return ratio_count(p, M); }
Index SketchConfig::col_samples(Index N) const { return ratio_count(p, N); }
Index SketchConfig::core_row_samples(Index M) const {
  return ratio_count(q, M);
}
Index SketchConfig::core_col_samples(Index N) const {
  return ratio_count(q, N);
}

void SketchConfig::validate(Index M, Index N) const {
  const SketchConfig c = resolved();
  auto fail = [](const std::string& msg) {
    throw std::invalid_argument("SketchConfig: violated " + msg);
  };
  if (M < 1 || N < 1) fail("M >= 1 and N >= 1");
  if (c.r < 1) fail("r >= 1");
  if (!(c.p > 0.0 && c.p <= 1.0)) fail("0 < p <= 1");
  if (!(c.q > 0.0 && c.q <= 1.0)) fail("0 < q <= 1");
  if (!(c.p <= c.q))
    fail("p <= q (p=" + std::to_string(c.p) + ", q=" + std::to_string(c.q) +
         ")");
  if (!(c.r <= c.k))
    fail("r <= k (r=" + std::to_string(c.r) + ", k=" + std::to_string(c.k) +
         ")");
  if (!(c.k <= c.s))
    fail("k <= s (k=" + std::to_string(c.k) + ", s=" + std::to_string(c.s) +
         ")");
  const Index m = c.row_samples(M), n = c.col_samples(N);
  const Index mp = c.core_row_samples(M), np = c.core_col_samples(N);
  if (!(c.s <= std::min(m, n)))
    fail("s <= min(m, n) (s=" + std::to_string(c.s) +
         ", min=" + std::to_string(std::min(m, n)) + ")");
  if (!(static_cast<double>(c.s) <=
        c.p * static_cast<double>(std::min(M, N))))
    fail("p * min(M, N) >= s (p=" + std::to_string(c.p) +
         ", min=" + std::to_string(std::min(M, N)) +
         ", s=" + std::to_string(c.s) + ")");
  if (!c.adaptive_core_sampling && !(c.s <= std::min(mp, np)))
    fail("s <= min(m', n') (s=" + std::to_string(c.s) +
         ", min=" + std::to_string(std::min(mp, np)) + ")");
  if (map_kind == MapKind::sparse_sign && sparse_nnz_per_col < 1)
    fail("sparse_nnz_per_col >= 1");
}

Matrix DenseAccessor::row_block(const IndexSet& rows) const {
  return submatrix(A_, rows, std::nullopt);
}

Matrix DenseAccessor::col_block(const IndexSet& cols) const {
  return submatrix(A_, std::nullopt, cols);
}

Matrix DenseAccessor::block(const IndexSet& rows, const IndexSet& cols) const {
  return submatrix(A_, rows, cols);
}

Matrix DenseAccessor::col_range(Index j0, Index count) const {
  return A_.middleCols(j0, count);
}

CoreSketch build_core_sketches(const MatrixAccessor& A,
                               const SketchConfig& config) {
  const Index M = A.rows(), N = A.cols();
  config.validate(M, N);
  const SketchConfig cfg = config.resolved();

  const Index m = cfg.row_samples(M);
  const Index n = cfg.col_samples(N);

  RandomStream root(cfg.seed);
  auto rs_delta = root.substream(kDeltaStream);
  auto rs_theta = root.substream(kThetaStream);
  auto rs_gamma = root.substream(kGammaStream);
  auto rs_omega = root.substream(kOmegaStream);

  CoreSketch sk;
  sk.config = cfg;
  sk.M = M;
  sk.N = N;

  sk.delta = sample_without_replacement(m, M, rs_delta);
  sk.theta = sample_without_replacement(n, N, rs_theta);

  const Matrix gamma =
      draw_map(cfg.map_kind, cfg.k, m, cfg.sparse_nnz_per_col, rs_gamma);
  const Matrix omega =
      draw_map(cfg.map_kind, cfg.k, n, cfg.sparse_nnz_per_col, rs_omega);

  sk.X.noalias() = gamma * A.row_block(sk.delta);
  sk.Y.noalias() = A.col_block(sk.theta) * omega.transpose();

  Index m_prime = cfg.core_row_samples(M);
  Index n_prime = cfg.core_col_samples(N);
  if (cfg.adaptive_core_sampling) {
    // Size the core samples from the measured row-norm spread of the
    // computed bases, clamped so the core solve stays feasible.
    const Matrix Q = thin_qr(sk.Y).Q;
    const Matrix P = thin_qr(sk.X.transpose()).Q;
    const Scalar mu_prime = incoherence(Q, cfg.k);
    const Scalar nu_prime = incoherence(P, cfg.k);
    const double logk = std::log(static_cast<double>(cfg.k));
    m_prime = std::min<Index>(
        M, std::max<Index>(cfg.s, static_cast<Index>(std::ceil(
                                      8.0 * mu_prime * cfg.k * logk))));
    n_prime = std::min<Index>(
        N, std::max<Index>(cfg.s, static_cast<Index>(std::ceil(
                                      8.0 * nu_prime * cfg.k * logk))));
  }

  auto rs_delta_prime = root.substream(kDeltaPrimeStream);
  auto rs_theta_prime = root.substream(kThetaPrimeStream);
  auto rs_phi = root.substream(kPhiStream);
  auto rs_psi = root.substream(kPsiStream);

  sk.delta_prime = sample_without_replacement(m_prime, M, rs_delta_prime);
  sk.theta_prime = sample_without_replacement(n_prime, N, rs_theta_prime);
  sk.phi =
      draw_map(cfg.map_kind, cfg.s, m_prime, cfg.sparse_nnz_per_col, rs_phi);
  sk.psi =
      draw_map(cfg.map_kind, cfg.s, n_prime, cfg.sparse_nnz_per_col, rs_psi);

  sk.Z.noalias() =
      sk.phi * A.block(sk.delta_prime, sk.theta_prime) * sk.psi.transpose();
  return sk;
}

CoreSketch build_core_sketches(const Matrix& A, const SketchConfig& config) {
  require_finite(A, "build_core_sketches");
  return build_core_sketches(DenseAccessor(A), config);
}

CoreSketch build_full_sketches(const MatrixAccessor& A, SketchConfig config) {
  config.p = 1.0;
  config.q = 1.0;
  config.adaptive_core_sampling = false;
  return build_core_sketches(A, config);
}

CoreSketch build_full_sketches(const Matrix& A, SketchConfig config) {
  require_finite(A, "build_full_sketches");
  return build_full_sketches(DenseAccessor(A), std::move(config));
}

ApproxFactors recover(const CoreSketch& sk, PhaseTimes* times) {
  auto t0 = std::chrono::steady_clock::now();
  ApproxFactors out;
  out.P = thin_qr(sk.X.transpose()).Q;  // N x k
  out.Q = thin_qr(sk.Y).Q;              // M x k
  if (times) times->qr += seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  const Matrix q_rows = submatrix(out.Q, sk.delta_prime, std::nullopt);
  const Matrix p_rows = submatrix(out.P, sk.theta_prime, std::nullopt);
  const Matrix left = sk.phi * q_rows;   // s x k
  const Matrix right = sk.psi * p_rows;  // s x k

  Index left_rank = 0, right_rank = 0;
  const Matrix left_pinv = pseudo_inverse(
      left, default_pinv_tolerance(left.rows(), left.cols()), &left_rank);
  const Matrix right_pinv = pseudo_inverse(
      right, default_pinv_tolerance(right.rows(), right.cols()), &right_rank);
  out.C.noalias() = left_pinv * sk.Z * right_pinv.transpose();

  if (left_rank < sk.config.k || right_rank < sk.config.k) {
    out.core_rank_deficient = true;
    out.warning = "core solve numerically rank-deficient (phi*Q rank " +
                  std::to_string(left_rank) + ", psi*P rank " +
                  std::to_string(right_rank) + ", k " +
                  std::to_string(sk.config.k) + ")";
  }
  if (times) times->core += seconds_since(t0);
  return out;
}

RankRFactors truncate(const ApproxFactors& factors, Index r) {
  const Index k = factors.C.rows();
  if (r < 0 || r > k)
    throw std::invalid_argument("truncate: r (" + std::to_string(r) +
                                ") exceeds k (" + std::to_string(k) + ")");
  const SVDResult core = svd(factors.C, r);
  RankRFactors out;
  out.U.noalias() = factors.Q * core.U;
  out.sigma = core.sigma;
  out.V.noalias() = factors.P * core.V;
  return out;
}

RankRFactors sketchy_core_svd(const MatrixAccessor& A,
                              const SketchConfig& config, PhaseTimes* times) {
  PhaseTimes local;
  PhaseTimes* pt = times ? times : &local;

  auto t0 = std::chrono::steady_clock::now();
  const CoreSketch sk = build_core_sketches(A, config);
  pt->sketch += seconds_since(t0);

  const ApproxFactors factors = recover(sk, pt);

  t0 = std::chrono::steady_clock::now();
  RankRFactors out = truncate(factors, sk.config.r);
  pt->truncate += seconds_since(t0);
  return out;
}

RankRFactors sketchy_core_svd(const Matrix& A, const SketchConfig& config,
                              PhaseTimes* times) {
  require_finite(A, "sketchy_core_svd");
  return sketchy_core_svd(DenseAccessor(A), config, times);
}

RankRFactors sketchy_svd(const MatrixAccessor& A, const SketchConfig& config,
                         PhaseTimes* times) {
  SketchConfig full = config;
  full.p = 1.0;
  full.q = 1.0;
  full.adaptive_core_sampling = false;
  return sketchy_core_svd(A, full, times);
}

RankRFactors sketchy_svd(const Matrix& A, const SketchConfig& config,
                         PhaseTimes* times) {
  require_finite(A, "sketchy_svd");
  return sketchy_svd(DenseAccessor(A), config, times);
}

}  // namespace sketchy
