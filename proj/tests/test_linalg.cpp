#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qtherm/linalg.hpp"
#include "qtherm/pauli.hpp"
#include "test_support.hpp"

using namespace qtherm;
using qtherm::testing::random_complex;
using qtherm::testing::random_hermitian;

TEST_CASE("eig_hermitian: identity has a flat unit spectrum") {
  const auto es = eig_hermitian(Matrix::Identity(2, 2));
  CHECK(es.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(es.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("eig_hermitian: pauli-z spectrum is {-1, +1} ascending") {
  const auto es = eig_hermitian(pauli_z());
  CHECK(es.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(es.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("eig_hermitian: seeded 4x4 reconstruction oracle") {
  std::mt19937_64 rng(42);
  const Matrix a = random_hermitian(4, rng);
  const auto es = eig_hermitian(a);
  CHECK(max_abs(es.reconstruct() - a) <= 1e-10);
}

TEST_CASE("eig_hermitian: rejects non-Hermitian input") {
  Matrix a(2, 2);
  a << 1.0, Complex(0.0, 1.0), Complex(0.0, 1.0), 1.0;
  CHECK_THROWS_AS(eig_hermitian(a, 1e-12), NotHermitian);
}

TEST_CASE("eig_hermitian: reconstruction and orthonormality over random "
          "matrices, d in 2..8") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 120; ++trial) {
    const Index d = 2 + static_cast<Index>(trial % 7);
    const Matrix a = random_hermitian(d, rng);
    const auto es = eig_hermitian(a);
    CHECK(max_abs(es.reconstruct() - a) <= 1e-10);
    CHECK(max_abs(es.eigenvectors.adjoint() * es.eigenvectors -
                  Matrix::Identity(d, d)) <= 1e-12);
    for (Index i = 1; i < d; ++i) {
      CHECK(es.eigenvalues[i] >= es.eigenvalues[i - 1]);
    }
  }
}

TEST_CASE("matrix function: exp of the zero matrix is the identity") {
  const Matrix e = exp_hermitian(Matrix::Zero(3, 3));
  CHECK(max_abs(e - Matrix::Identity(3, 3)) <= 1e-14);
}

TEST_CASE("matrix function: log of diag(1/2, 1/2)") {
  Matrix a = 0.5 * Matrix::Identity(2, 2);
  const Matrix l = log_psd(a);
  CHECK(max_abs(l - (-std::log(2.0)) * Matrix::Identity(2, 2)) <= 1e-14);
}

TEST_CASE("matrix function: rank-1 projector entropy term vanishes under "
          "the clamp convention") {
  CVector psi(2);
  psi << std::sqrt(0.5), std::sqrt(0.5);
  const Matrix p = psi * psi.adjoint();
  const Matrix l = log_psd(p);
  const double tr = (p * l).trace().real();  // 1*log(1) + 0*log(clamp)
  CHECK(std::abs(tr) <= 1e-12);
}

TEST_CASE("matrix function: genuinely negative eigenvalue is a domain error") {
  Matrix a(2, 2);
  a << 1.0, 0.0, 0.0, -0.5;
  CHECK_THROWS_AS(log_psd(a), DomainError);
}

TEST_CASE("matrix function: exp agrees with a truncated Taylor oracle") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    const Index d = 2 + static_cast<Index>(trial % 5);
    Matrix a = random_hermitian(d, rng);
    a /= std::max(1.0, max_abs(a) * static_cast<double>(d));  // ||a|| <= 1
    Matrix taylor = Matrix::Identity(d, d);
    Matrix power = Matrix::Identity(d, d);
    for (int k = 1; k <= 24; ++k) {
      power = (power * a).eval() / static_cast<double>(k);
      taylor += power;
    }
    CHECK(max_abs(exp_hermitian(a) - taylor) <= 1e-10);
  }
}

TEST_CASE("tensor_product: identity times identity") {
  const Matrix t =
      tensor_product(Matrix::Identity(2, 2), Matrix::Identity(2, 2));
  CHECK(max_abs(t - Matrix::Identity(4, 4)) == 0.0);
}

TEST_CASE("tensor_product: shape law") {
  std::mt19937_64 rng(3);
  const Matrix a = random_complex(2, 2, rng);
  const Matrix b = random_complex(3, 3, rng);
  const Matrix t = tensor_product(a, b);
  CHECK(t.rows() == 6);
  CHECK(t.cols() == 6);
}

TEST_CASE("tensor_product: element-wise index-formula oracle") {
  std::mt19937_64 rng(5);
  const Matrix a = random_complex(3, 2, rng);
  const Matrix b = random_complex(2, 4, rng);
  const Matrix t = tensor_product(a, b);
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      for (Index k = 0; k < b.rows(); ++k) {
        for (Index l = 0; l < b.cols(); ++l) {
          const Complex expected = a(i, j) * b(k, l);
          CHECK(std::abs(t(i * b.rows() + k, j * b.cols() + l) - expected) <=
                1e-15);
        }
      }
    }
  }
}

TEST_CASE("partial_trace: product state recovers the first factor") {
  std::mt19937_64 rng(9);
  const Matrix rho_a = qtherm::testing::random_density(2, rng);
  const Matrix rho_b = qtherm::testing::random_density(3, rng);
  const Matrix joint = tensor_product(rho_a, rho_b);
  const Matrix traced = partial_trace(joint, {2, 3}, {0});
  CHECK(max_abs(traced - rho_a) <= 1e-14);
}

TEST_CASE("partial_trace: Bell state reduces to the maximally mixed qubit") {
  CVector bell(4);
  bell << std::sqrt(0.5), 0.0, 0.0, std::sqrt(0.5);
  const Matrix rho = bell * bell.adjoint();
  for (int side = 0; side < 2; ++side) {
    const Matrix red = partial_trace(rho, {2, 2}, {side});
    CHECK(max_abs(red - 0.5 * Matrix::Identity(2, 2)) <= 1e-14);
  }
}

TEST_CASE("partial_trace: explicit double-index summation oracle") {
  std::mt19937_64 rng(13);
  const Matrix rho = qtherm::testing::random_density(4, rng);
  const Matrix traced = partial_trace(rho, {2, 2}, {0});
  Matrix oracle = Matrix::Zero(2, 2);
  for (Index i = 0; i < 2; ++i) {
    for (Index j = 0; j < 2; ++j) {
      for (Index k = 0; k < 2; ++k) {
        oracle(i, j) += rho(2 * i + k, 2 * j + k);
      }
    }
  }
  CHECK(max_abs(traced - oracle) <= 1e-14);
  CHECK(std::abs(traced.trace() - rho.trace()) <= 1e-13);
}

TEST_CASE("partial_trace: dimension mismatch raises") {
  std::mt19937_64 rng(1);
  const Matrix rho = qtherm::testing::random_density(4, rng);
  CHECK_THROWS_AS(partial_trace(rho, {2, 3}, {0}), DimensionMismatch);
}

TEST_CASE("partial_trace and tensor_product are mutually consistent") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const Index da = 2 + static_cast<Index>(trial % 3);
    const Index db = 2 + static_cast<Index>((trial / 3) % 3);
    const Matrix a = random_complex(da, da, rng);
    const Matrix b = random_complex(db, db, rng);
    const Matrix joint = tensor_product(a, b);
    const Matrix back = partial_trace(joint, {da, db}, {0});
    CHECK(max_abs(back - (a * b.trace()).eval()) <= 1e-13);
  }
}

TEST_CASE("commutator: self-commutator vanishes, Pauli algebra holds") {
  std::mt19937_64 rng(19);
  const Matrix a = random_complex(4, 4, rng);
  CHECK(max_abs(commutator(a, a)) == 0.0);
  const Matrix c = commutator(pauli_x(), pauli_y());
  CHECK(max_abs(c - Complex(0.0, 2.0) * pauli_z()) <= 1e-15);
}

TEST_CASE("commutator: mismatched dimensions raise") {
  std::mt19937_64 rng(2);
  const Matrix a = random_complex(2, 2, rng);
  const Matrix b = random_complex(3, 3, rng);
  CHECK_THROWS_AS(commutator(a, b), DimensionMismatch);
}

TEST_CASE("commutator: traceless, and tr{[A,B] C} is cyclic-invariant") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    const Index d = 2 + static_cast<Index>(trial % 6);
    const Matrix a = random_complex(d, d, rng) / std::sqrt(double(d));
    const Matrix b = random_complex(d, d, rng) / std::sqrt(double(d));
    const Matrix c = random_complex(d, d, rng) / std::sqrt(double(d));
    CHECK(std::abs(commutator(a, b).trace()) <= 1e-13);

    // tr{[A,B] C} under cyclic permutation of the product.
    const Complex t1 = (commutator(a, b) * c).trace();
    const Complex t2 = (c * commutator(a, b)).trace();
    CHECK(std::abs(t1 - t2) <= 1e-12);
    CHECK(std::abs((a * b * c).trace() - (b * c * a).trace()) <= 1e-12);
    CHECK(std::abs((a * b * c).trace() - (c * a * b).trace()) <= 1e-12);
  }
}
