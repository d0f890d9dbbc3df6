#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qtherm/dynamics.hpp"
#include "qtherm/pauli.hpp"
#include "test_support.hpp"

using namespace qtherm;
namespace qt = qtherm::testing;

namespace {

Generator closed_qubit(double gap) {
  return Generator(
      HamiltonianSpec::constant(SpaceLayout({2}), 0.5 * gap * pauli_z()), {});
}

Generator damped_qubit(double gap, double gamma) {
  std::vector<DissipationChannel> channels;
  channels.push_back(DissipationChannel::constant(gamma, sigma_minus()));
  return Generator(
      HamiltonianSpec::constant(SpaceLayout({2}), 0.5 * gap * pauli_z()),
      std::move(channels));
}

Matrix excited_projector() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1.0;
  return m;
}

Matrix ground_projector() {
  Matrix m = Matrix::Zero(2, 2);
  m(1, 1) = 1.0;
  return m;
}

}  // namespace

TEST_CASE("lindblad_rhs: stationary state of a closed commuting pair") {
  const Generator gen = closed_qubit(1.0);
  const DensityMatrix rho = gibbs_state(gen.hamiltonian(), 0.0, 1.0);
  CHECK(max_abs(lindblad_rhs(gen, 0.0, rho)) <= 1e-15);
}

TEST_CASE("lindblad_rhs: closed limit reduces to -i[H, rho]") {
  std::mt19937_64 rng(61);
  const Generator gen = closed_qubit(1.0);
  const DensityMatrix rho = qt::random_state(SpaceLayout({2}), rng);
  const Matrix expected =
      Complex(0.0, -1.0) *
      commutator(gen.hamiltonian().at(0.0), rho.matrix());
  CHECK(max_abs(lindblad_rhs(gen, 0.0, rho) - expected) <= 1e-15);
}

TEST_CASE("lindblad_rhs: amplitude damping operator-algebra oracle") {
  const double gamma = 0.7;
  const Generator gen = damped_qubit(1.0, gamma);
  const DensityMatrix rho(SpaceLayout({2}), excited_projector());
  // L rho L^dag = |g><g|, {L^dag L, rho} = 2 |e><e|, H term commutes.
  const Matrix expected = gamma * (ground_projector() - excited_projector());
  CHECK(max_abs(lindblad_rhs(gen, 0.0, rho) - expected) <= 1e-14);
}

TEST_CASE("lindblad_rhs: traceless and Hermitian for random generators") {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 40; ++trial) {
    const Index d = 2 + static_cast<Index>(trial % 3);
    const SpaceLayout layout({d});
    Matrix l = qt::random_complex(d, d, rng);
    l -= (l.trace() / static_cast<double>(d)) * Matrix::Identity(d, d);
    l /= std::sqrt(l.squaredNorm());
    std::vector<DissipationChannel> channels;
    const double gamma = (trial % 5 == 0) ? -0.3 : 0.8;  // negative admitted
    channels.push_back(DissipationChannel::constant(gamma, l));
    const Generator gen(
        HamiltonianSpec::constant(layout, qt::random_hermitian(d, rng)),
        std::move(channels));
    const DensityMatrix rho = qt::random_state(layout, rng);
    const Matrix rhs = lindblad_rhs(gen, 0.0, rho);
    CHECK(std::abs(rhs.trace()) <= 1e-12);
    CHECK(hermiticity_defect(rhs) <= 1e-12);
  }
}

TEST_CASE("validate_dissipator_basis: normalized Pauli set passes") {
  const double inv = 1.0 / std::sqrt(2.0);
  const DissipatorBasisReport report = validate_dissipator_basis(
      {inv * pauli_x(), inv * pauli_y(), inv * pauli_z()}, 1e-12);
  CHECK(report.pass);
  CHECK(report.max_trace_norm <= 1e-12);
  CHECK(report.max_gram_deviation <= 1e-12);
}

TEST_CASE("validate_dissipator_basis: identity fails the trace condition") {
  const DissipatorBasisReport report = validate_dissipator_basis(
      {(1.0 / std::sqrt(2.0)) * Matrix::Identity(2, 2)}, 1e-12);
  CHECK_FALSE(report.pass);
  CHECK(report.max_trace_norm > 1.0);
}

TEST_CASE("validate_dissipator_basis: duplicates fail the Gram condition") {
  const Matrix op = (1.0 / std::sqrt(2.0)) * pauli_x();
  const DissipatorBasisReport report =
      validate_dissipator_basis({op, op}, 1e-12);
  CHECK_FALSE(report.pass);
  CHECK(report.max_gram_deviation == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("DissipationChannel: rejects traced or unnormalized operators") {
  CHECK_THROWS_AS(DissipationChannel::constant(1.0, Matrix::Identity(2, 2)),
                  ConfigError);
  CHECK_THROWS_AS(DissipationChannel::constant(1.0, 2.0 * sigma_minus()),
                  ConfigError);
}

TEST_CASE("Generator: caps the channel count at d^2 - 1") {
  std::vector<DissipationChannel> channels;
  const double inv = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < 4; ++i) {
    channels.push_back(DissipationChannel::constant(
        0.1, i % 2 == 0 ? inv * pauli_x() : inv * pauli_y()));
  }
  CHECK_THROWS_AS(
      Generator(HamiltonianSpec::constant(SpaceLayout({2}),
                                          0.5 * pauli_z()),
                std::move(channels)),
      ConfigError);
}

TEST_CASE("step_rk4: null generator leaves the state untouched") {
  std::mt19937_64 rng(71);
  const SpaceLayout layout({2});
  const Generator gen(
      HamiltonianSpec(layout, {}), {});
  const DensityMatrix rho = qt::random_state(layout, rng);
  const DensityMatrix next = step_rk4(gen, 0.0, rho, 1e-2);
  CHECK(max_abs(next.matrix() - rho.matrix()) <= 1e-16);
}

TEST_CASE("step_rk4: fourth-order convergence against the exact propagator") {
  const Generator gen = closed_qubit(2.0);
  // Mixed state with coherences so the commutator drives real dynamics.
  Matrix rho0 = Matrix::Zero(2, 2);
  rho0 << 0.5, Complex(0.3, 0.1), Complex(0.3, -0.1), 0.5;
  const DensityMatrix initial(SpaceLayout({2}), rho0);

  const Matrix h = gen.hamiltonian().at(0.0);
  const double t_end = 1.0;
  auto exact_at = [&](double t) {
    const Matrix u = hermitian_matrix_function(
        (t * h).eval(), [](double x) { return std::cos(x); });
    const Matrix v = hermitian_matrix_function(
        (t * h).eval(), [](double x) { return std::sin(x); });
    const Matrix prop = u - Complex(0.0, 1.0) * v;  // exp(-i H t)
    return (prop * rho0 * prop.adjoint()).eval();
  };

  std::vector<double> errors;
  for (const double h_step : {0.05, 0.025, 0.0125}) {
    DensityMatrix rho = initial;
    const long n = std::lround(t_end / h_step);
    for (long i = 0; i < n; ++i) {
      rho = step_rk4(gen, static_cast<double>(i) * h_step, rho, h_step);
    }
    errors.push_back(max_abs(rho.matrix() - exact_at(t_end)));
  }
  for (std::size_t i = 1; i < errors.size(); ++i) {
    const double ratio = errors[i - 1] / errors[i];
    CHECK(ratio >= 16.0 * 0.8);
    CHECK(ratio <= 16.0 * 1.2);
  }
}

TEST_CASE("step_rk4: trace deviation before renormalization stays tiny") {
  std::mt19937_64 rng(73);
  const Generator gen = damped_qubit(1.0, 1.0);
  DensityMatrix rho = qt::random_state(SpaceLayout({2}), rng);
  // The step renormalizes; the recorded correction bounds the raw deviation.
  Trajectory traj = propagate(gen, rho, 0.0, 0.1, 1e-3);
  CHECK(traj.cumulative_trace_correction / 100.0 <= 1e-10);
}

TEST_CASE("step_rk4: rejects a positivity-violating step") {
  // A strongly negative rate drives the state out of the positive cone.
  std::vector<DissipationChannel> channels;
  channels.push_back(DissipationChannel::constant(-40.0, sigma_minus()));
  const Generator gen(
      HamiltonianSpec::constant(SpaceLayout({2}), 0.5 * pauli_z()),
      std::move(channels));
  Matrix nearly_pure = Matrix::Zero(2, 2);
  nearly_pure(0, 0) = 0.999;
  nearly_pure(1, 1) = 0.001;
  const DensityMatrix rho(SpaceLayout({2}), nearly_pure);
  CHECK_THROWS_AS(step_rk4(gen, 0.0, rho, 0.05), StepRejected);
}

TEST_CASE("propagate: empty interval returns the single initial sample") {
  std::mt19937_64 rng(79);
  const Generator gen = closed_qubit(1.0);
  const DensityMatrix rho = qt::random_state(SpaceLayout({2}), rng);
  const Trajectory traj = propagate(gen, rho, 2.0, 2.0, 1e-3);
  CHECK(traj.size() == 1);
  CHECK(traj.times[0] == 2.0);
  CHECK(max_abs(traj.states[0].matrix() - rho.matrix()) == 0.0);
}

TEST_CASE("propagate: closed two-qubit exchange keeps the total entropy") {
  const SpaceLayout layout({2, 2});
  std::vector<HamiltonianTerm> terms;
  terms.push_back({[](double) { return 0.5; },
                   pauli_string("ZI", layout),
                   {0}});
  terms.push_back({[](double) { return 0.5; },
                   pauli_string("IZ", layout),
                   {1}});
  terms.push_back({[](double) { return 0.2; },
                   pauli_string("XX", layout),
                   {0, 1}});
  terms.push_back({[](double) { return 0.2; },
                   pauli_string("YY", layout),
                   {0, 1}});
  const Generator gen(HamiltonianSpec(layout, std::move(terms)), {});

  // |10>: first qubit excited, second in the ground state.
  CVector amplitudes = CVector::Zero(4);
  amplitudes[1] = 1.0;  // index 0b01: excited(+Z) x ground(-Z)
  const DensityMatrix rho0 = make_pure(layout, amplitudes);

  const Trajectory traj = propagate(gen, rho0, 0.0, 5.0, 1e-3);
  const double s0 = von_neumann_entropy(traj.states.front(), 1e-11).nats();
  double drift = 0.0, swing = 0.0;
  for (const auto& state : traj.states) {
    drift = std::max(
        drift, std::abs(von_neumann_entropy(state, 1e-11).nats() - s0));
    swing = std::max(
        swing, von_neumann_entropy(state.reduced({0}), 1e-11).nats());
  }
  CHECK(drift <= 1e-8);
  CHECK(swing > 0.3);  // subsystem entropies really oscillate
}

TEST_CASE("propagate: amplitude damping matches the closed-form decay") {
  const double gamma = 0.8;
  const Generator gen = damped_qubit(1.0, gamma);
  const DensityMatrix rho0(SpaceLayout({2}), excited_projector());
  const Trajectory traj = propagate(gen, rho0, 0.0, 3.0, 1e-3);
  for (std::size_t i = 0; i < traj.size(); i += 250) {
    const double expected = std::exp(-gamma * traj.times[i]);
    CHECK(std::abs(traj.states[i].matrix()(0, 0).real() - expected) <= 1e-6);
  }
}

TEST_CASE("propagate: Gibbs state is a fixed point of detailed balance") {
  const double gap = 1.0, temperature = 0.7, gamma = 0.9;
  std::vector<DissipationChannel> channels;
  channels.push_back(DissipationChannel::constant(gamma, sigma_minus()));
  channels.push_back(DissipationChannel::constant(
      gamma * std::exp(-gap / temperature), sigma_plus()));
  const Generator gen(
      HamiltonianSpec::constant(SpaceLayout({2}), 0.5 * gap * pauli_z()),
      std::move(channels));
  const DensityMatrix gibbs =
      gibbs_state(gen.hamiltonian(), 0.0, temperature);
  CHECK(max_abs(lindblad_rhs(gen, 0.0, gibbs)) <= 1e-10);
}
