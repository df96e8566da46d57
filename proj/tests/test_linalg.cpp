#include <catch_amalgamated.hpp>

#include "qmeter/qmeter.hpp"

using namespace qmeter;

namespace {

Matrix random_hermitian(Rng& rng, int d) {
  const Matrix g = rng.ginibre(d, d);
  return (g + g.adjoint()) / 2.0;
}

}  // namespace

TEST_CASE("tensor product uses the row-major block convention", "[linalg]") {
  Matrix a(2, 2), b(2, 2);
  a << 1, 2, 3, 4;
  b << 0, 5, 6, 7;
  const Matrix c = tensor(a, b);
  REQUIRE(c.rows() == 4);
  REQUIRE(c.cols() == 4);
  // (A (x) B)(i1*2+i2, j1*2+j2) = A(i1,j1) B(i2,j2)
  REQUIRE(c(0, 1) == Complex(5, 0));
  REQUIRE(c(1, 0) == Complex(6, 0));
  REQUIRE(c(2, 1) == Complex(15, 0));
  REQUIRE(c(3, 3) == Complex(28, 0));

  const Vector u = tensor(basis_vector(2, 1), basis_vector(3, 0));
  REQUIRE(u.size() == 6);
  REQUIRE(u(3) == Complex(1, 0));
}

TEST_CASE("partial trace recovers Kronecker factors", "[linalg]") {
  Rng rng(11);
  const Matrix a = random_hermitian(rng, 3);
  const Matrix b = random_hermitian(rng, 2);
  const Matrix ab = tensor(a, b);
  REQUIRE(max_abs(partial_trace(ab, 3, 2, Keep::first) - b.trace() * a) < 1e-12);
  REQUIRE(max_abs(partial_trace(ab, 3, 2, Keep::second) - a.trace() * b) < 1e-12);
  REQUIRE_THROWS_AS(partial_trace(ab, 4, 2, Keep::first), shape_error);
}

TEST_CASE("extend_apply matches the explicit Kronecker action", "[linalg]") {
  Rng rng(12);
  const Matrix k = rng.ginibre(3, 2);
  const Vector psi = rng.pure_vector(2 * 4);
  const Vector direct = tensor(k, identity(4)) * psi;
  REQUIRE((extend_apply(k, psi, 4) - direct).norm() < 1e-12);
}

TEST_CASE("hermitian eigendecomposition reconstructs and orders", "[linalg]") {
  Rng rng(13);
  const Matrix a = random_hermitian(rng, 5);
  const HermitianSpectrum s = eig_hermitian(a);
  Matrix rebuilt = Matrix::Zero(5, 5);
  for (int j = 0; j < 5; ++j)
    rebuilt += s.eigenvalues(j) * s.eigenvectors.col(j) * s.eigenvectors.col(j).adjoint();
  REQUIRE(max_abs(rebuilt - a) < tol::eig_residual * 10);
  for (int j = 0; j + 1 < 5; ++j) REQUIRE(s.eigenvalues(j) >= s.eigenvalues(j + 1));
  REQUIRE(max_abs(s.eigenvectors.adjoint() * s.eigenvectors - identity(5)) < 1e-12);

  // phase fix: the dominant component of each column is real nonnegative
  for (int j = 0; j < 5; ++j) {
    int arg = 0;
    Real best = -1;
    for (int i = 0; i < 5; ++i)
      if (std::abs(s.eigenvectors(i, j)) > best) {
        best = std::abs(s.eigenvectors(i, j));
        arg = i;
      }
    REQUIRE(s.eigenvectors(arg, j).imag() == Catch::Approx(0.0).margin(1e-14));
    REQUIRE(s.eigenvectors(arg, j).real() >= 0.0);
  }

  REQUIRE_THROWS_AS(eig_hermitian(rng.ginibre(3, 3)), precondition_error);
}

TEST_CASE("eta endpoints and maximum", "[linalg]") {
  REQUIRE(eta(0.0) == 0.0);
  REQUIRE(eta(-0.5) == 0.0);
  REQUIRE(eta(1.0) == 0.0);
  REQUIRE(eta(std::exp(-1.0)) == Catch::Approx(std::exp(-1.0)).epsilon(1e-14));
}

TEST_CASE("sine distance ignores scale and phase", "[linalg]") {
  Rng rng(14);
  const Vector v = rng.pure_vector(4);
  const Vector w = Complex(0, 2.5) * v;
  REQUIRE(sine_distance(v, w) < 1e-12);

  Vector o = rng.pure_vector(4);
  o -= v * (v.dot(o));  // Gram-Schmidt against v
  o.normalize();
  REQUIRE(sine_distance(v, o) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("operator norm is the largest singular value", "[linalg]") {
  Matrix n(2, 2);
  n << 0, 2, 0, 0;
  REQUIRE(operator_norm(n) == Catch::Approx(2.0).margin(1e-13));
  REQUIRE(operator_norm(identity(3)) == Catch::Approx(1.0).margin(1e-13));
}

TEST_CASE("haar isometries are isometries and reproducible", "[linalg]") {
  Rng rng(15);
  const Matrix v = rng.haar_isometry(8, 3);
  REQUIRE(max_abs(v.adjoint() * v - identity(3)) < 1e-12);

  Rng again(15);
  REQUIRE(max_abs(again.haar_isometry(8, 3) - v) == 0.0);

  REQUIRE_THROWS_AS(rng.haar_isometry(2, 3), shape_error);
}

TEST_CASE("vectorize is row-major", "[linalg]") {
  Matrix a(2, 2);
  a << 1, 2, 3, 4;
  const Vector v = vectorize(a);
  REQUIRE(v(1) == Complex(2, 0));
  REQUIRE(v(2) == Complex(3, 0));
}
