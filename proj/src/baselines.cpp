#include "sketchy/baselines.hpp"

#include <stdexcept>

namespace sketchy {

namespace {

// Lift hat{A} = L * mid * R^T (L, R orthonormal columns) into rank-r
// factored SVD form; orthonormality of the outputs is inherited.
RankRFactors factored(const Matrix& L, const Matrix& mid, const Matrix& R,
                      Index r) {
  const SVDResult f = svd(mid, r);
  RankRFactors out;
  out.U.noalias() = L * f.U;
  out.sigma = f.sigma;
  out.V.noalias() = R * f.V;
  return out;
}

Vector diagonal_pinv(const Vector& sigma) {
  Vector inv = Vector::Zero(sigma.size());
  if (sigma.size() == 0 || sigma(0) <= 0) return inv;
  const Scalar cutoff =
      default_pinv_tolerance(sigma.size(), sigma.size()) * sigma(0);
  for (Index i = 0; i < sigma.size(); ++i)
    if (sigma(i) > cutoff) inv(i) = Scalar(1) / sigma(i);
  return inv;
}

RankRFactors run_hmt(const Matrix& A, const Matrix& gamma, const Matrix& omega,
                     Index r) {
  const Matrix X = gamma * A;            // k x N
  const Matrix Y = A * omega.transpose();  // M x k
  const Matrix P = svd(X.transpose(), r).U;  // N x r
  const Matrix Q = svd(Y, r).U;              // M x r
  const Matrix c1 =
      Q.transpose() * Y * pseudo_inverse(omega * P).transpose();
  const Matrix c2 = pseudo_inverse(gamma * Q) * (X * P);
  return factored(Q, (c1 + c2) / 2, P, r);
}

RankRFactors run_woodruff(const Matrix& A, const Matrix& gamma,
                          const Matrix& omega, Index r) {
  const Matrix X = gamma * A;
  const Matrix Q = thin_qr(A * omega.transpose()).Q;  // M x k
  const QRResult ut = thin_qr(gamma * Q);             // k x k
  const SVDResult w = svd(ut.Q.transpose() * X, r);
  const Matrix mid =
      pseudo_inverse(ut.R) * w.U * w.sigma.asDiagonal();  // k x r
  return factored(Q, mid, w.V, r);
}

RankRFactors run_cohen(const Matrix& A, const Matrix& gamma,
                       const Matrix& omega, Index r) {
  const Matrix X = gamma * A;
  const Matrix V = svd(A * omega.transpose(), r).U;  // M x r
  const QRResult ut = thin_qr(gamma * V);            // k x r
  const SVDResult w = svd(ut.Q.transpose() * X, r);
  const Matrix mid =
      pseudo_inverse(ut.R) * w.U * w.sigma.asDiagonal();  // r x r
  return factored(V, mid, w.V, r);
}

RankRFactors run_boutsidis(const Matrix& A, const Matrix& gamma,
                           const Matrix& omega, const Matrix& phi,
                           const Matrix& psi, Index r) {
  const Matrix X = gamma * A;
  const Matrix Y = A * omega.transpose();
  const Matrix Z = phi * A * psi.transpose();  // s x s
  const Matrix P = thin_qr(X.transpose()).Q;   // N x k
  const Matrix Q = thin_qr(Y).Q;               // M x k
  const SVDResult left = svd(phi * Q);         // s x k
  const SVDResult right = svd(psi * P);        // s x k
  const SVDResult core =
      svd(left.U.transpose() * Z * right.U, r);  // k x k -> rank r
  const Matrix mid = left.V * diagonal_pinv(left.sigma).asDiagonal() *
                     core.U * core.sigma.asDiagonal() * core.V.transpose() *
                     diagonal_pinv(right.sigma).asDiagonal() *
                     right.V.transpose();  // k x k
  return factored(Q, mid, P, r);
}

RankRFactors run_tropp17(const Matrix& A, const Matrix& gamma,
                         const Matrix& omega, Index r) {
  const Matrix X = gamma * A;
  const Matrix Q = thin_qr(A * omega.transpose()).Q;  // M x k
  const SVDResult w = svd(pseudo_inverse(gamma * Q) * X, r);
  return factored(Q, w.U * w.sigma.asDiagonal(), w.V, r);
}

}  // namespace

const char* to_string(BaselineMethod method) {
  switch (method) {
    case BaselineMethod::hmt: return "hmt";
    case BaselineMethod::woodruff: return "woodruff";
    case BaselineMethod::cohen: return "cohen";
    case BaselineMethod::boutsidis: return "boutsidis";
    case BaselineMethod::tropp17: return "tropp17";
  }
  throw std::invalid_argument("unknown baseline method");
}

BaselineMethod baseline_from_string(const std::string& name) {
  if (name == "hmt") return BaselineMethod::hmt;
  if (name == "woodruff") return BaselineMethod::woodruff;
  if (name == "cohen") return BaselineMethod::cohen;
  if (name == "boutsidis") return BaselineMethod::boutsidis;
  if (name == "tropp17") return BaselineMethod::tropp17;
  throw std::invalid_argument("unknown baseline method: " + name);
}

RankRFactors baseline_approx(const Matrix& A, BaselineMethod method, Index r,
                             Index k, Index s, RandomStream& rng) {
  require_finite(A, "baseline_approx");
  const Index M = A.rows(), N = A.cols();
  if (r < 1 || r > k || k > s || s > std::min(M, N))
    throw std::invalid_argument(
        "baseline_approx: need 1 <= r <= k <= s <= min(M, N)");

  // Advance the caller's stream so repeated calls get fresh maps, then draw
  // each map from its own substream.
  RandomStream root(rng.next_u64());
  auto rs_gamma = root.substream(0);
  auto rs_omega = root.substream(1);
  const Matrix gamma = gaussian_map(k, M, rs_gamma);
  const Matrix omega = gaussian_map(k, N, rs_omega);

  switch (method) {
    case BaselineMethod::hmt:
      return run_hmt(A, gamma, omega, r);
    case BaselineMethod::woodruff:
      return run_woodruff(A, gamma, omega, r);
    case BaselineMethod::cohen:
      return run_cohen(A, gamma, omega, r);
    case BaselineMethod::boutsidis: {
      auto rs_phi = root.substream(2);
      auto rs_psi = root.substream(3);
      const Matrix phi = gaussian_map(s, M, rs_phi);
      const Matrix psi = gaussian_map(s, N, rs_psi);
      return run_boutsidis(A, gamma, omega, phi, psi, r);
    }
    case BaselineMethod::tropp17:
      return run_tropp17(A, gamma, omega, r);
  }
  throw std::invalid_argument("unknown baseline method");
}

}  // namespace sketchy
