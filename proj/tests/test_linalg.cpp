#include "netctl/linalg.hpp"

#include <doctest.h>

#include <Eigen/QR>

#include "test_helpers.hpp"

using namespace netctl;
using test::penrose_violation;
using test::random_matrix;
using test::random_rank;

namespace {

Matrix random_orthogonal(Index n, Rng& rng) {
  Eigen::HouseholderQR<Matrix> qr(random_matrix(n, n, rng));
  return qr.householderQ() * Matrix::Identity(n, n);
}

// Assembles u * diag(sigma) * v^T from fresh orthogonal factors, so tests can
// prescribe an exact spectrum.
Matrix with_spectrum(Index rows, Index cols, const Vector& sigma, Rng& rng) {
  Matrix u = random_orthogonal(rows, rng).leftCols(sigma.size());
  Matrix v = random_orthogonal(cols, rng).leftCols(sigma.size());
  return u * sigma.asDiagonal() * v.transpose();
}

}  // namespace

TEST_SUITE_BEGIN("linalg");

TEST_CASE("pinv of a diagonal matrix inverts the nonzero entries") {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 2.0;
  Matrix p = pinv(d);
  CHECK(p(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(p(0, 1) == doctest::Approx(0.0));
  CHECK(p(1, 0) == doctest::Approx(0.0));
  CHECK(p(1, 1) == doctest::Approx(0.0));
}

TEST_CASE("pinv of an orthogonal matrix is its transpose") {
  Rng rng = make_rng({11, 1});
  Matrix q = random_orthogonal(6, rng);
  CHECK((pinv(q) - q.transpose()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("pinv satisfies the four Penrose identities on rank-deficient input") {
  Rng rng = make_rng({11, 2});
  Matrix m = random_rank(5, 3, 2, rng);
  CHECK(penrose_violation(m, pinv(m)) < 1e-10);
}

TEST_CASE("relative truncation keeps small singular values that eps drops") {
  Rng rng = make_rng({11, 3});
  Vector sigma(2);
  sigma << 1e3, 1e-4;
  Matrix m = with_spectrum(4, 4, sigma, rng);

  // 1e-4 is far above the relative cut 1e-8 * 1e3, so pinv inverts it...
  Matrix p_rel = pinv(m);
  CHECK(p_rel.cwiseAbs().maxCoeff() > 1e3);

  // ...while an absolute threshold of 1e-3 zeroes it.
  Matrix p_abs = pinv_eps(m, 1e-3);
  CHECK(p_abs.cwiseAbs().maxCoeff() < 1.0);

  // The eps variant behaves like a pseudoinverse of the truncated matrix:
  // m * p_abs * m keeps only the dominant direction, so the difference from m
  // is exactly the dropped rank-one term of size 1e-4.
  Matrix truncated = m * p_abs * m;
  CHECK((truncated - m).norm() == doctest::Approx(1e-4).epsilon(1e-6));
}

TEST_CASE("pinv_eps with eps below sigma_min matches pinv") {
  Rng rng = make_rng({11, 4});
  Matrix m = random_matrix(5, 7, rng);
  CHECK((pinv_eps(m, 1e-12) - pinv(m)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("pinv_apply agrees with the materialized pseudoinverse") {
  Rng rng = make_rng({11, 5});
  Matrix m = random_rank(6, 9, 4, rng);
  Matrix rhs = random_matrix(6, 3, rng);
  CHECK((pinv_apply(m, rhs) - pinv(m) * rhs).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("kernel_basis spans the kernel with orthonormal columns") {
  Rng rng = make_rng({11, 6});
  Matrix m = random_matrix(3, 7, rng);  // full row rank with probability 1
  Matrix k = kernel_basis(m);
  REQUIRE(k.rows() == 7);
  REQUIRE(k.cols() == 4);
  CHECK((m * k).norm() <= 1e-8);
  CHECK((k.transpose() * k - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() <
        1e-12);
}

TEST_CASE("kernel_basis of a zero matrix is a full orthonormal basis") {
  Matrix z = Matrix::Zero(4, 4);
  Matrix k = kernel_basis(z);
  REQUIRE(k.cols() == 4);
  CHECK((k.transpose() * k - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() <
        1e-12);
}

TEST_CASE("kernel_basis of a full-column-rank matrix has zero columns") {
  Rng rng = make_rng({11, 7});
  Matrix m = random_matrix(9, 4, rng);
  CHECK(kernel_basis(m).cols() == 0);
}

TEST_CASE("empty matrices round-trip through pinv and kernel_basis") {
  Matrix e(0, 3);
  Matrix p = pinv(e);
  CHECK(p.rows() == 3);
  CHECK(p.cols() == 0);
  Matrix k = kernel_basis(e);
  CHECK(k.rows() == 3);
  CHECK(k.cols() == 3);
  CHECK((k.transpose() * k - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() <
        1e-14);
}

TEST_CASE("svd reconstructs the input and rejects non-finite entries") {
  Rng rng = make_rng({11, 8});
  Matrix m = random_matrix(8, 5, rng);
  SvdFactorization f = svd(m);
  CHECK((f.u * f.sigma.asDiagonal() * f.v.transpose() - m)
            .cwiseAbs()
            .maxCoeff() < 1e-12);

  Matrix bad = m;
  bad(2, 2) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(svd(bad), InvalidInputError);
}

TEST_CASE("sqrt_psd squares back to the input and clamps tiny negatives") {
  Rng rng = make_rng({11, 9});
  Matrix g = random_matrix(5, 3, rng);
  Matrix s = g * g.transpose();  // PSD, rank 3
  Matrix r = sqrt_psd(s);
  CHECK((r * r - s).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((r - r.transpose()).cwiseAbs().maxCoeff() < 1e-12);

  Matrix indefinite = s;
  indefinite(0, 0) -= 10.0 * s.cwiseAbs().maxCoeff();
  CHECK_THROWS_AS(sqrt_psd(indefinite), InvalidWeightError);
}

TEST_CASE("stacked_sqrt_factor on identity weights stacks Y over 2U") {
  Matrix id = Matrix::Identity(2, 2);
  Matrix l = stacked_sqrt_factor(id, 4.0 * id, id, id);
  REQUIRE(l.rows() == 4);
  REQUIRE(l.cols() == 2);
  CHECK((l.topRows(2) - id).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((l.bottomRows(2) - 2.0 * id).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("stacked_sqrt_factor reproduces the weighted Gram matrix") {
  Rng rng = make_rng({11, 10});
  Matrix gq = random_matrix(4, 4, rng);
  Matrix q = gq * gq.transpose();  // PSD
  Matrix gr = random_matrix(3, 3, rng);
  Matrix r = gr * gr.transpose() + Matrix::Identity(3, 3);  // PD
  Matrix y = random_matrix(4, 6, rng);
  Matrix u = random_matrix(3, 6, rng);
  Matrix l = stacked_sqrt_factor(q, r, y, u);
  Matrix gram = y.transpose() * q * y + u.transpose() * r * u;
  CHECK((l.transpose() * l - gram).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("stacked_sqrt_factor rejects invalid weights") {
  Rng rng = make_rng({11, 11});
  Matrix y = random_matrix(2, 4, rng);
  Matrix u = random_matrix(3, 4, rng);
  Matrix q = Matrix::Identity(2, 2);

  Matrix r_singular = Matrix::Zero(3, 3);
  r_singular(0, 0) = 1.0;  // rank one, not PD
  CHECK_THROWS_AS(stacked_sqrt_factor(q, r_singular, y, u),
                  InvalidWeightError);

  Matrix q_asym = q;
  q_asym(0, 1) = 0.5;  // symmetric part only on one side
  CHECK_THROWS_AS(stacked_sqrt_factor(q_asym, Matrix::Identity(3, 3), y, u),
                  InvalidWeightError);
}

TEST_CASE("stacked_sqrt_factor accepts an empty trajectory block") {
  Rng rng = make_rng({11, 12});
  Matrix u = random_matrix(3, 5, rng);
  Matrix l = stacked_sqrt_factor(Matrix(0, 0), Matrix::Identity(3, 3),
                                 Matrix(0, 5), u);
  CHECK((l - u).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("pseudoinverse properties hold across random shapes and ranks") {
  Rng rng = make_rng({11, 13});
  std::uniform_int_distribution<Index> dim(1, 12);
  for (int trial = 0; trial < 200; ++trial) {
    const Index rows = dim(rng);
    const Index cols = dim(rng);
    const Index r = std::uniform_int_distribution<Index>(
        0, std::min(rows, cols))(rng);
    Matrix m = r == 0 ? Matrix::Zero(rows, cols)
                      : random_rank(rows, cols, r, rng);
    Matrix p = pinv(m);
    CAPTURE(trial);
    CHECK(penrose_violation(m, p) < 1e-9);

    Matrix k = kernel_basis(m);
    CHECK(k.cols() + svd(m).rank() == cols);
    if (k.cols() > 0) {
      CHECK((m * k).cwiseAbs().maxCoeff() < 1e-9);
    }
  }
}

TEST_SUITE_END();
