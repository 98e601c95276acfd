#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sketchy/linalg.hpp"
#include "sketchy/random.hpp"

using namespace sketchy;

namespace {

Matrix random_matrix(Index rows, Index cols, std::uint64_t seed) {
  RandomStream rng(seed);
  return gaussian_map(rows, cols, rng);
}

Matrix rank_deficient(Index rows, Index cols, Index rank, std::uint64_t seed) {
  RandomStream rng(seed);
  return gaussian_map(rows, rank, rng) * gaussian_map(rank, cols, rng);
}

}  // namespace

TEST_CASE("thin_qr of the identity") {
  const Matrix I = Matrix::Identity(4, 4);
  const QRResult qr = thin_qr(I);
  CHECK((qr.Q - I).norm() <= 1e-14);
  CHECK((qr.R - I).norm() <= 1e-14);
}

TEST_CASE("thin_qr of a single column uses the positive-diagonal convention") {
  Matrix a(2, 1);
  a << 3, 4;
  const QRResult qr = thin_qr(a);
  CHECK(qr.Q(0, 0) == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(qr.Q(1, 0) == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(qr.R(0, 0) == doctest::Approx(5.0).epsilon(1e-14));
}

TEST_CASE("thin_qr reconstructs and is orthonormal") {
  const Matrix A = random_matrix(20, 6, 1);
  const QRResult qr = thin_qr(A);
  CHECK((qr.Q.transpose() * qr.Q - Matrix::Identity(6, 6)).norm() <= 1e-12);
  CHECK((qr.Q * qr.R - A).norm() / A.norm() <= 1e-12);
  for (Index j = 0; j < 6; ++j) {
    CHECK(qr.R(j, j) >= 0);
    for (Index i = j + 1; i < 6; ++i) CHECK(qr.R(i, j) == 0.0);
  }
}

TEST_CASE("thin_qr determinism makes repeated runs identical") {
  const Matrix A = random_matrix(15, 5, 2);
  const QRResult a = thin_qr(A), b = thin_qr(A);
  CHECK((a.Q - b.Q).norm() == 0.0);
  CHECK((a.R - b.R).norm() == 0.0);
}

TEST_CASE("thin_qr tolerates rank deficiency") {
  const Matrix A = rank_deficient(12, 5, 2, 3);
  const QRResult qr = thin_qr(A);
  CHECK((qr.Q.transpose() * qr.Q - Matrix::Identity(5, 5)).norm() <= 1e-12);
  CHECK((qr.Q * qr.R - A).norm() / A.norm() <= 1e-12);
}

TEST_CASE("thin_qr rejects wide input") {
  CHECK_THROWS_AS(thin_qr(Matrix::Zero(3, 5)), std::invalid_argument);
}

TEST_CASE("svd of a diagonal matrix truncates correctly") {
  Matrix d = Matrix::Zero(3, 3);
  d.diagonal() << 3, 2, 1;
  const SVDResult f = svd(d, 2);
  REQUIRE(f.sigma.size() == 2);
  CHECK(f.sigma(0) == doctest::Approx(3.0));
  CHECK(f.sigma(1) == doctest::Approx(2.0));
}

TEST_CASE("svd of the zero matrix") {
  const SVDResult f = svd(Matrix::Zero(4, 3));
  CHECK(f.sigma.maxCoeff() == 0.0);
}

TEST_CASE("svd reconstructs with orthonormal factors") {
  const Matrix A = random_matrix(15, 10, 4);
  const SVDResult f = svd(A);
  CHECK((f.U.transpose() * f.U - Matrix::Identity(10, 10)).norm() <= 1e-12);
  CHECK((f.V.transpose() * f.V - Matrix::Identity(10, 10)).norm() <= 1e-12);
  CHECK((f.U * f.sigma.asDiagonal() * f.V.transpose() - A).norm() / A.norm() <=
        1e-12);
  for (Index i = 1; i < f.sigma.size(); ++i)
    CHECK(f.sigma(i) <= f.sigma(i - 1));
}

TEST_CASE("svd satisfies Eckart-Young at every rank") {
  const Matrix A = random_matrix(12, 9, 5);
  const SVDResult f = svd(A);
  for (Index r = 0; r <= 9; ++r) {
    const Matrix approx = f.U.leftCols(r) * f.sigma.head(r).asDiagonal() *
                          f.V.leftCols(r).transpose();
    const double tail = f.sigma.tail(9 - r).squaredNorm();
    CHECK((A - approx).squaredNorm() ==
          doctest::Approx(tail).epsilon(1e-10).scale(A.squaredNorm()));
  }
}

TEST_CASE("svd rejects out-of-range rank") {
  CHECK_THROWS_AS(svd(Matrix::Zero(4, 3), 5), std::invalid_argument);
}

TEST_CASE("pseudo_inverse of a diagonal matrix") {
  Matrix d = Matrix::Zero(2, 2);
  d.diagonal() << 2, 4;
  const Matrix pinv = pseudo_inverse(d);
  CHECK(pinv(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(pinv(1, 1) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(std::abs(pinv(0, 1)) <= 1e-15);
}

TEST_CASE("pseudo_inverse of the zero matrix is the zero transpose") {
  const Matrix pinv = pseudo_inverse(Matrix::Zero(3, 2));
  CHECK(pinv.rows() == 2);
  CHECK(pinv.cols() == 3);
  CHECK(pinv.norm() == 0.0);
}

TEST_CASE("pseudo_inverse satisfies the Moore-Penrose conditions") {
  auto check_mp = [](const Matrix& G, double tol) {
    const Matrix Gp = pseudo_inverse(G);
    const double scale = std::max(G.norm(), 1.0);
    CHECK((G * Gp * G - G).norm() <= tol * scale);
    CHECK((Gp * G * Gp - Gp).norm() <= tol * std::max(Gp.norm(), 1.0));
    CHECK((G * Gp - (G * Gp).transpose()).norm() <= tol * scale);
    CHECK((Gp * G - (Gp * G).transpose()).norm() <= tol * scale);
  };
  check_mp(random_matrix(4, 9, 6), 1e-12);       // full row rank
  check_mp(random_matrix(9, 4, 7), 1e-12);       // full column rank
  check_mp(rank_deficient(8, 6, 3, 8), 1e-10);   // rank deficient
  check_mp(Matrix::Zero(3, 3), 1e-10);           // zero
}

TEST_CASE("pseudo_inverse residual on a full-row-rank wide matrix") {
  const Matrix G = random_matrix(4, 9, 9);
  const Matrix Gp = pseudo_inverse(G);
  CHECK((G * Gp * G - G).norm() / G.norm() <= 1e-12);
}

TEST_CASE("submatrix gathers rows and columns in order") {
  const Matrix I = Matrix::Identity(3, 3);
  const Matrix rows02 = submatrix(I, IndexSet({0, 2}, 3), std::nullopt);
  REQUIRE(rows02.rows() == 2);
  CHECK(rows02(0, 0) == 1.0);
  CHECK(rows02(1, 2) == 1.0);

  const Matrix A = random_matrix(6, 6, 10);
  CHECK((submatrix(A, std::nullopt, std::nullopt) - A).norm() == 0.0);

  const IndexSet r({1, 3}, 6), c({0, 5}, 6);
  const Matrix picked = submatrix(A, r, c);
  // naive gather oracle
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j) CHECK(picked(i, j) == A(r[i], c[j]));
}

TEST_CASE("submatrix rejects out-of-range indices") {
  const Matrix A = Matrix::Zero(3, 3);
  CHECK_THROWS_AS(submatrix(A, IndexSet({0, 3}, 4), std::nullopt),
                  std::invalid_argument);
  CHECK_THROWS_AS(submatrix(A, std::nullopt, IndexSet({5}, 6)),
                  std::invalid_argument);
}
