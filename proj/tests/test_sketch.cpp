#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sketchy/diagnostics.hpp"
#include "sketchy/sketch.hpp"
#include "sketchy/synth.hpp"

using namespace sketchy;

namespace {

Matrix exact_rank_matrix(Index M, Index N, Index r, std::uint64_t seed) {
  SynthSpec spec;
  spec.M = M;
  spec.N = N;
  spec.family = SpectrumFamily::lowrank_noise;
  spec.rank = r;
  spec.noise = 0;
  spec.spectrum_length = r;
  spec.seed = seed;
  return generate(spec);
}

SketchConfig desk_config(Index r, Index k, Index s, double p, double q,
                         std::uint64_t seed) {
  SketchConfig cfg;
  cfg.r = r;
  cfg.k = k;
  cfg.s = s;
  cfg.p = p;
  cfg.q = q;
  cfg.seed = seed;
  return cfg;
}

// Accessor that records which index sets were requested.
class RecordingAccessor final : public MatrixAccessor {
 public:
  explicit RecordingAccessor(const Matrix& A) : inner_(A) {}
  Index rows() const override { return inner_.rows(); }
  Index cols() const override { return inner_.cols(); }
  Matrix row_block(const IndexSet& rows) const override {
    row_requests.push_back(rows);
    return inner_.row_block(rows);
  }
  Matrix col_block(const IndexSet& cols) const override {
    col_requests.push_back(cols);
    return inner_.col_block(cols);
  }
  Matrix block(const IndexSet& rows, const IndexSet& cols) const override {
    block_requests.push_back({rows, cols});
    return inner_.block(rows, cols);
  }
  Matrix col_range(Index j0, Index count) const override {
    return inner_.col_range(j0, count);
  }

  mutable std::vector<IndexSet> row_requests;
  mutable std::vector<IndexSet> col_requests;
  mutable std::vector<std::pair<IndexSet, IndexSet>> block_requests;

 private:
  DenseAccessor inner_;
};

}  // namespace

TEST_CASE("config defaults follow k=4r+1, s=2k+1, q=p") {
  SketchConfig cfg;
  cfg.r = 20;
  cfg.p = 0.4;
  const SketchConfig resolved = cfg.resolved();
  CHECK(resolved.k == 81);
  CHECK(resolved.s == 163);
  CHECK(resolved.q == 0.4);
}

TEST_CASE("config validation names the violated inequality") {
  SketchConfig cfg = desk_config(5, 4, 10, 0.5, 0.5, 0);
  CHECK_THROWS_WITH_AS(cfg.validate(100, 100),
                       doctest::Contains("r <= k"), std::invalid_argument);

  cfg = desk_config(5, 21, 11, 0.5, 0.5, 0);
  CHECK_THROWS_WITH_AS(cfg.validate(100, 100),
                       doctest::Contains("k <= s"), std::invalid_argument);

  cfg = desk_config(5, 21, 43, 0.2, 0.2, 0);
  CHECK_THROWS_WITH_AS(cfg.validate(100, 100),
                       doctest::Contains("s <= min(m, n)"),
                       std::invalid_argument);

  cfg = desk_config(5, 21, 43, 0.9, 0.5, 0);
  CHECK_THROWS_WITH_AS(cfg.validate(100, 100), doctest::Contains("p <= q"),
                       std::invalid_argument);

  cfg = desk_config(5, 21, 43, 1.5, 1.5, 0);
  CHECK_THROWS_WITH_AS(cfg.validate(100, 100), doctest::Contains("0 < p <= 1"),
                       std::invalid_argument);
}

TEST_CASE("k at least min(M,N) is rejected with defaulted s") {
  SketchConfig cfg;
  cfg.r = 10;
  cfg.k = 60;  // min(M, N) = 60 below; s defaults to 121
  cfg.p = 1.0;
  CHECK_THROWS_AS(cfg.validate(100, 60), std::invalid_argument);
}

TEST_CASE("sketch shapes follow the sample counts") {
  const Matrix A = exact_rank_matrix(100, 80, 4, 1);
  const SketchConfig cfg = desk_config(4, 10, 21, 0.5, 0.5, 7);
  const CoreSketch sk = build_core_sketches(A, cfg);
  CHECK(sk.X.rows() == 10);
  CHECK(sk.X.cols() == 80);
  CHECK(sk.Y.rows() == 100);
  CHECK(sk.Y.cols() == 10);
  CHECK(sk.Z.rows() == 21);
  CHECK(sk.Z.cols() == 21);
  CHECK(sk.delta.size() == 50);
  CHECK(sk.theta.size() == 40);
  CHECK(sk.delta_prime.size() == 50);
  CHECK(sk.theta_prime.size() == 40);
  CHECK(sk.phi.rows() == 21);
  CHECK(sk.phi.cols() == 50);
  CHECK(sk.psi.rows() == 21);
  CHECK(sk.psi.cols() == 40);
}

TEST_CASE("p=q=1 uses full index sets and matches build_full_sketches") {
  const Matrix A = exact_rank_matrix(40, 30, 3, 2);
  const SketchConfig cfg = desk_config(3, 9, 19, 1.0, 1.0, 11);
  const CoreSketch a = build_core_sketches(A, cfg);
  CHECK(a.delta.is_full());
  CHECK(a.theta.is_full());
  CHECK(a.delta_prime.is_full());
  CHECK(a.theta_prime.is_full());

  const CoreSketch b = build_full_sketches(A, cfg);
  CHECK((a.X - b.X).norm() == 0.0);
  CHECK((a.Y - b.Y).norm() == 0.0);
  CHECK((a.Z - b.Z).norm() == 0.0);
  CHECK((a.phi - b.phi).norm() == 0.0);
  CHECK(a.delta == b.delta);
}

TEST_CASE("subsampled build touches only the sampled data") {
  const Matrix A = exact_rank_matrix(60, 50, 3, 3);
  const SketchConfig cfg = desk_config(3, 9, 19, 0.5, 0.6, 13);
  RecordingAccessor accessor(A);
  const CoreSketch sk = build_core_sketches(accessor, cfg);
  REQUIRE(accessor.row_requests.size() == 1);
  REQUIRE(accessor.col_requests.size() == 1);
  REQUIRE(accessor.block_requests.size() == 1);
  CHECK(accessor.row_requests[0] == sk.delta);
  CHECK(accessor.col_requests[0] == sk.theta);
  CHECK(accessor.block_requests[0].first == sk.delta_prime);
  CHECK(accessor.block_requests[0].second == sk.theta_prime);
  CHECK(sk.delta.size() == 30);
  CHECK(sk.theta.size() == 25);
  CHECK(sk.delta_prime.size() == 36);
  CHECK(sk.theta_prime.size() == 30);
}

TEST_CASE("recover yields orthonormal factors and the boxed core solve") {
  const Matrix A = exact_rank_matrix(50, 40, 4, 4);
  const SketchConfig cfg = desk_config(4, 9, 19, 0.6, 0.6, 17);
  const CoreSketch sk = build_core_sketches(A, cfg);
  const ApproxFactors f = recover(sk);
  CHECK((f.Q.transpose() * f.Q - Matrix::Identity(9, 9)).norm() <= 1e-10);
  CHECK((f.P.transpose() * f.P - Matrix::Identity(9, 9)).norm() <= 1e-10);
  CHECK_FALSE(f.core_rank_deficient);

  // oracle: recompute C directly from the definition
  const Matrix left = sk.phi * submatrix(f.Q, sk.delta_prime, std::nullopt);
  const Matrix right = sk.psi * submatrix(f.P, sk.theta_prime, std::nullopt);
  const Matrix expect =
      pseudo_inverse(left) * sk.Z * pseudo_inverse(right).transpose();
  CHECK((f.C - expect).norm() <= 1e-12 * expect.norm());
}

TEST_CASE("exact rank-r input is recovered to machine precision") {
  const Matrix A = exact_rank_matrix(100, 80, 5, 5);
  // k = 4r+1, s = 2k+1 defaults with p = q = 0.4 keep s <= min(m, n)
  SketchConfig cfg;
  cfg.r = 5;
  cfg.k = 13;
  cfg.s = 27;
  cfg.p = 0.4;
  cfg.q = 0.4;
  cfg.seed = 23;
  const RankRFactors out = sketchy_core_svd(A, cfg);
  CHECK(approx_error(A, out) <= 1e-10);
}

TEST_CASE("recover reconstructs a rank-k matrix at p=q=1") {
  const Matrix A = exact_rank_matrix(30, 25, 9, 6);
  const SketchConfig cfg = desk_config(9, 9, 19, 1.0, 1.0, 29);
  const CoreSketch sk = build_core_sketches(A, cfg);
  const ApproxFactors f = recover(sk);
  CHECK((f.Q * f.C * f.P.transpose() - A).norm() / A.norm() <= 1e-10);
}

TEST_CASE("truncate keeps the leading singular values of C") {
  ApproxFactors f;
  f.Q = Matrix::Identity(5, 3);
  f.P = Matrix::Identity(4, 3);
  f.C = Matrix::Zero(3, 3);
  f.C.diagonal() << 5, 3, 1;
  const RankRFactors out = truncate(f, 2);
  REQUIRE(out.sigma.size() == 2);
  CHECK(out.sigma(0) == doctest::Approx(5.0));
  CHECK(out.sigma(1) == doctest::Approx(3.0));
  CHECK(out.U.rows() == 5);
  CHECK(out.V.rows() == 4);
}

TEST_CASE("truncate at r=k is lossless") {
  const Matrix A = exact_rank_matrix(30, 20, 6, 7);
  const SketchConfig cfg = desk_config(6, 7, 15, 1.0, 1.0, 31);
  const ApproxFactors f = recover(build_core_sketches(A, cfg));
  const RankRFactors out = truncate(f, 7);
  const Matrix lhs = out.U * out.sigma.asDiagonal() * out.V.transpose();
  const Matrix rhs = f.Q * f.C * f.P.transpose();
  CHECK((lhs - rhs).norm() <= 1e-10 * f.C.norm());
}

TEST_CASE("truncate matches the Eckart-Young tail on C") {
  RandomStream rng(37);
  ApproxFactors f;
  f.Q = thin_qr(gaussian_map(40, 8, rng)).Q;
  f.P = thin_qr(gaussian_map(35, 8, rng)).Q;
  f.C = gaussian_map(8, 8, rng);
  const Vector sigma = svd(f.C).sigma;
  for (Index r = 1; r <= 8; ++r) {
    const RankRFactors out = truncate(f, r);
    const double gap = (f.Q * f.C * f.P.transpose() -
                        out.U * out.sigma.asDiagonal() * out.V.transpose())
                           .norm();
    const double tail = std::sqrt(sigma.tail(8 - r).squaredNorm());
    CHECK(gap == doctest::Approx(tail).epsilon(1e-10).scale(sigma(0)));
  }
}

TEST_CASE("truncate rejects r beyond k") {
  ApproxFactors f;
  f.Q = Matrix::Identity(4, 2);
  f.P = Matrix::Identity(4, 2);
  f.C = Matrix::Identity(2, 2);
  CHECK_THROWS_AS(truncate(f, 3), std::invalid_argument);
}

TEST_CASE("truncation error against the initial approximation is monotone") {
  // For fixed (Q, C, P) the gap ||QCP^T - Q[[C]]_r P^T||_F is the
  // Eckart-Young tail of C, nonincreasing in r. The distance to A itself
  // is not monotone in general: the trailing directions of C carry
  // core-solve noise, and keeping more of them can move away from A.
  const Matrix A = generate(calibrated_spec(60, 50, 5, 0.1, 0, 0, 41));
  const SketchConfig cfg = desk_config(5, 11, 23, 1.0, 1.0, 43);
  const ApproxFactors f = recover(build_core_sketches(A, cfg));
  const Matrix initial = f.Q * f.C * f.P.transpose();
  double prev = std::numeric_limits<double>::infinity();
  for (Index r = 1; r <= 11; ++r) {
    const RankRFactors out = truncate(f, r);
    const double gap =
        (initial - out.U * out.sigma.asDiagonal() * out.V.transpose()).norm();
    CHECK(gap <= prev * (1 + 1e-12) + 1e-14);
    prev = gap;
  }
}

TEST_CASE("p=q=1 subsampled path equals the full path bitwise") {
  const Matrix A = generate(calibrated_spec(45, 35, 4, 0.05, 0, 0, 47));
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    SketchConfig cfg = desk_config(4, 9, 19, 1.0, 1.0, seed);
    const RankRFactors a = sketchy_core_svd(A, cfg);
    const RankRFactors b = sketchy_svd(A, cfg);
    CHECK((a.U - b.U).norm() == 0.0);
    CHECK((a.sigma - b.sigma).norm() == 0.0);
    CHECK((a.V - b.V).norm() == 0.0);
  }
}

TEST_CASE("pipelines are deterministic in the seed") {
  const Matrix A = generate(calibrated_spec(50, 40, 4, 0.08, 0, 0, 53));
  const SketchConfig cfg = desk_config(4, 9, 19, 0.6, 0.6, 59);
  const RankRFactors a = sketchy_core_svd(A, cfg);
  const RankRFactors b = sketchy_core_svd(A, cfg);
  CHECK((a.U - b.U).norm() == 0.0);
  CHECK((a.sigma - b.sigma).norm() == 0.0);
  CHECK((a.V - b.V).norm() == 0.0);
}

TEST_CASE("final error obeys the triangle relation to the initial error") {
  const Matrix A = generate(calibrated_spec(60, 45, 5, 0.1, 0, 0, 61));
  const SketchConfig cfg = desk_config(5, 11, 23, 0.8, 0.8, 67);
  const CoreSketch sk = build_core_sketches(A, cfg);
  const ApproxFactors f = recover(sk);
  const RankRFactors out = truncate(f, cfg.r);

  const double initial = (A - f.Q * f.C * f.P.transpose()).norm();
  const double final_err =
      (A - out.U * out.sigma.asDiagonal() * out.V.transpose()).norm();
  const Vector sigma = svd(A).sigma;
  const double tail = std::sqrt(sigma.tail(sigma.size() - cfg.r).squaredNorm());
  CHECK(final_err <= 2 * initial + tail + 1e-12 * A.norm());
}

TEST_CASE("adaptive core sampling sizes the intersection from the bases") {
  const Matrix A = generate(calibrated_spec(200, 150, 4, 0.05, 0, 0, 71));
  SketchConfig cfg = desk_config(4, 9, 19, 0.5, 0.5, 73);
  cfg.adaptive_core_sampling = true;
  const CoreSketch sk = build_core_sketches(A, cfg);
  CHECK(sk.delta_prime.size() >= 19);  // never below s
  const RankRFactors out = truncate(recover(sk), cfg.r);
  CHECK(approx_error(A, out) < 1.0);
}

TEST_CASE("phase times are recorded for every stage") {
  const Matrix A = exact_rank_matrix(80, 60, 4, 8);
  SketchConfig cfg = desk_config(4, 9, 19, 0.5, 0.5, 79);
  PhaseTimes times;
  (void)sketchy_core_svd(A, cfg, &times);
  CHECK(times.sketch > 0);
  CHECK(times.qr > 0);
  CHECK(times.core > 0);
  CHECK(times.truncate > 0);
  CHECK(times.total() > 0);
}

TEST_CASE("sparse-sign maps drive the pipeline to the same recovery") {
  const Matrix A = exact_rank_matrix(100, 80, 5, 10);
  SketchConfig cfg;
  cfg.r = 5;
  cfg.k = 13;
  cfg.s = 27;
  cfg.p = 0.4;
  cfg.q = 0.4;
  cfg.seed = 87;
  cfg.map_kind = MapKind::sparse_sign;
  const RankRFactors out = sketchy_core_svd(A, cfg);
  CHECK(approx_error(A, out) <= 1e-10);
}

TEST_CASE("infeasible config is rejected through the pipeline entry") {
  const Matrix A = exact_rank_matrix(40, 30, 3, 9);
  SketchConfig cfg = desk_config(3, 9, 19, 0.2, 0.2, 83);  // s > min(m, n)
  CHECK_THROWS_AS(sketchy_core_svd(A, cfg), std::invalid_argument);
}
