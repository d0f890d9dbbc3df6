#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qtherm/hilbert.hpp"
#include "qtherm/pauli.hpp"
#include "test_support.hpp"

using namespace qtherm;
namespace qt = qtherm::testing;

namespace {

HamiltonianSpec qubit_z(double gap) {
  return HamiltonianSpec::constant(SpaceLayout({2}), 0.5 * gap * pauli_z());
}

}  // namespace

TEST_CASE("make_pure: basis state, plus state, normalization") {
  const SpaceLayout layout({2});
  CVector basis(2);
  basis << 1.0, 0.0;
  const DensityMatrix rho = make_pure(layout, basis);
  CHECK(std::abs(rho.matrix()(0, 0) - 1.0) <= 1e-15);
  CHECK(std::abs(rho.matrix()(1, 1)) <= 1e-15);

  CVector plus(2);
  plus << 1.0, 1.0;
  const DensityMatrix rho_plus = make_pure(layout, plus);
  CHECK(max_abs(rho_plus.matrix() - 0.5 * Matrix::Ones(2, 2)) <= 1e-15);

  CVector scaled(2);
  scaled << 2.0, 0.0;
  CHECK(max_abs(make_pure(layout, scaled).matrix() - rho.matrix()) <= 1e-15);

  CHECK_THROWS_AS(make_pure(layout, CVector::Zero(2)), ZeroVector);
}

TEST_CASE("make_pure: any pure state has zero entropy") {
  std::mt19937_64 rng(101);
  const SpaceLayout layout({2, 2});
  for (int trial = 0; trial < 20; ++trial) {
    const DensityMatrix rho =
        make_pure(layout, qt::random_complex(4, 1, rng).col(0));
    CHECK(von_neumann_entropy(rho).nats() <= 1e-12);
  }
}

TEST_CASE("gibbs_state: infinite-temperature limit is maximally mixed") {
  const DensityMatrix rho = gibbs_state(qubit_z(1.0), 0.0, 1e6);
  CHECK(max_abs(rho.matrix() - 0.5 * Matrix::Identity(2, 2)) <= 1e-5);
}

TEST_CASE("gibbs_state: zero-temperature limit is the ground projector") {
  const DensityMatrix rho = gibbs_state(qubit_z(1.0), 0.0, 1e-6);
  // Ground state of +Z/2 is the -1 eigenstate, basis index 1.
  Matrix ground = Matrix::Zero(2, 2);
  ground(1, 1) = 1.0;
  CHECK(max_abs(rho.matrix() - ground) <= 1e-6);
}

TEST_CASE("gibbs_state: gap 1 at temperature 1 populates 1/(1+e)") {
  const DensityMatrix rho = gibbs_state(qubit_z(1.0), 0.0, 1.0);
  const double excited = rho.matrix()(0, 0).real();
  CHECK(excited == doctest::Approx(1.0 / (1.0 + std::exp(1.0))).epsilon(1e-12));
}

TEST_CASE("gibbs_state: rejects nonpositive temperature") {
  CHECK_THROWS_AS(gibbs_state(qubit_z(1.0), 0.0, 0.0), NonPositiveTemperature);
  CHECK_THROWS_AS(gibbs_state(qubit_z(1.0), 0.0, -1.0),
                  NonPositiveTemperature);
}

TEST_CASE("gibbs_state: commutes with its Hamiltonian at any temperature") {
  std::mt19937_64 rng(31);
  for (double temperature : {0.1, 0.5, 1.0, 3.0, 50.0}) {
    const Matrix h = qt::random_hermitian(4, rng);
    const HamiltonianSpec spec =
        HamiltonianSpec::constant(SpaceLayout({4}), h);
    const DensityMatrix rho = gibbs_state(spec, 0.0, temperature);
    CHECK(max_abs(commutator(rho.matrix(), h)) <= 1e-10);
  }
}

TEST_CASE("gibbs_state: populations are Boltzmann-ordered") {
  std::mt19937_64 rng(33);
  const Matrix h = qt::random_hermitian(5, rng);
  const auto es = eig_hermitian(h);
  const DensityMatrix rho = gibbs_state(
      HamiltonianSpec::constant(SpaceLayout({5}), h), 0.0, 0.8);
  double previous = 2.0;
  for (Index i = 0; i < 5; ++i) {  // ascending energy, descending population
    const double population =
        (es.eigenvectors.col(i).adjoint() * rho.matrix() *
         es.eigenvectors.col(i))(0, 0)
            .real();
    CHECK(population <= previous + 1e-12);
    previous = population;
  }
}

TEST_CASE("von_neumann_entropy: maximally mixed and two-level oracle") {
  const SpaceLayout layout({2, 2});
  const DensityMatrix mixed(layout, 0.25 * Matrix::Identity(4, 4));
  CHECK(von_neumann_entropy(mixed).nats() ==
        doctest::Approx(std::log(4.0)).epsilon(1e-14));

  const double p = 1.0 / (1.0 + std::exp(1.0));
  Matrix diag = Matrix::Zero(2, 2);
  diag(0, 0) = p;
  diag(1, 1) = 1.0 - p;
  const double expected = -p * std::log(p) - (1.0 - p) * std::log(1.0 - p);
  CHECK(von_neumann_entropy(DensityMatrix(SpaceLayout({2}), diag)).nats() ==
        doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("von_neumann_entropy: invariant under unitary conjugation") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 30; ++trial) {
    const Index d = 2 + static_cast<Index>(trial % 5);
    const SpaceLayout layout({d});
    const DensityMatrix rho = qt::random_state(layout, rng);
    const Matrix u = qt::random_unitary(d, rng);
    const DensityMatrix rotated(
        layout, u * rho.matrix() * u.adjoint());
    CHECK(std::abs(von_neumann_entropy(rotated).nats() -
                   von_neumann_entropy(rho).nats()) <= 1e-11);
  }
}

TEST_CASE("von_neumann_entropy: subadditivity on random bipartite states") {
  std::mt19937_64 rng(41);
  const SpaceLayout layout({2, 2});
  for (int trial = 0; trial < 50; ++trial) {
    const DensityMatrix rho = qt::random_state(layout, rng);
    const double s_ab = von_neumann_entropy(rho).nats();
    const double s_a = von_neumann_entropy(rho.reduced({0})).nats();
    const double s_b = von_neumann_entropy(rho.reduced({1})).nats();
    CHECK(s_ab <= s_a + s_b + 1e-10);
  }
}

TEST_CASE("DensityMatrix: constructor invariants hold for random inputs") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 40; ++trial) {
    const Index d = 2 + static_cast<Index>(trial % 4);
    CHECK_NOTHROW(qt::random_state(SpaceLayout({d}), rng));
  }
  // Trace off by more than the tolerance is rejected.
  CHECK_THROWS_AS(
      DensityMatrix(SpaceLayout({2}), 0.6 * Matrix::Identity(2, 2)),
      DomainError);
  // Non-Hermitian input is rejected.
  Matrix skew(2, 2);
  skew << 0.5, 0.1, -0.1, 0.5;
  CHECK_THROWS_AS(DensityMatrix(SpaceLayout({2}), skew), NotHermitian);
}

TEST_CASE("correlation_entropy: product state carries none") {
  std::mt19937_64 rng(47);
  const Matrix a = qt::random_density(2, rng);
  const Matrix b = qt::random_density(2, rng);
  const DensityMatrix joint(SpaceLayout({2, 2}), tensor_product(a, b));
  CHECK(std::abs(correlation_entropy(joint, {0})) <= 1e-12);
}

TEST_CASE("correlation_entropy: Bell state stores -2 log 2") {
  CVector bell(4);
  bell << std::sqrt(0.5), 0.0, 0.0, std::sqrt(0.5);
  const DensityMatrix rho = make_pure(SpaceLayout({2, 2}), bell);
  CHECK(correlation_entropy(rho, {0}) ==
        doctest::Approx(-2.0 * std::log(2.0)).epsilon(1e-11));
}

TEST_CASE("correlation_entropy: classical mixture stores -log 2") {
  Matrix rho = Matrix::Zero(4, 4);
  rho(0, 0) = 0.5;  // |00><00|
  rho(3, 3) = 0.5;  // |11><11|
  const DensityMatrix state(SpaceLayout({2, 2}), rho);
  CHECK(correlation_entropy(state, {0}) ==
        doctest::Approx(-std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("correlation_entropy: bad splits raise") {
  std::mt19937_64 rng(53);
  const DensityMatrix rho = qt::random_state(SpaceLayout({2, 2}), rng);
  CHECK_THROWS_AS(correlation_entropy(rho, {}), BadSplit);
  CHECK_THROWS_AS(correlation_entropy(rho, {0, 1}), BadSplit);
  CHECK_THROWS_AS(correlation_entropy(rho, {2}), BadSplit);
}

TEST_CASE("correlation_entropy: never positive on random states") {
  std::mt19937_64 rng(59);
  const SpaceLayout layout({2, 2});
  for (int trial = 0; trial < 50; ++trial) {
    CHECK(correlation_entropy(qt::random_state(layout, rng), {0}) <= 1e-10);
  }
}
