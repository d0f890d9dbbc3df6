#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qtherm/hilbert.hpp"

// Local-in-time master equation
//
//   drho/dt = -i [H(t), rho]
//           + sum_k gamma_k(t) (L_k rho L_k^dag - 1/2 {L_k^dag L_k, rho})
//
// with traceless, Hilbert-Schmidt-normalized jump operators L_k, plus a
// fixed-step RK4 propagator. Negative rates are admitted (non-Markovian
// regimes) but flagged; positivity of the state is then only monitored.

namespace qtherm {

/// One dissipation channel: a rate function gamma_k(t) and an operator
/// function L_k(t). Operators must be traceless with unit Hilbert-Schmidt
/// norm at the sampled validation times.
class DissipationChannel {
 public:
  DissipationChannel(std::function<double(double)> rate,
                     std::function<Matrix(double)> op,
                     const std::vector<double>& validation_times = {0.0},
                     double basis_tol = 1e-10);

  /// Channel with a constant rate and constant operator.
  static DissipationChannel constant(double rate, Matrix op,
                                     double basis_tol = 1e-10);

  double rate(double t) const { return rate_(t); }
  Matrix op(double t) const { return op_(t); }
  Index dim() const { return dim_; }

 private:
  std::function<double(double)> rate_;
  std::function<Matrix(double)> op_;
  Index dim_;
};

/// Generator of the master equation: Hamiltonian plus channels.
class Generator {
 public:
  Generator(HamiltonianSpec h, std::vector<DissipationChannel> channels);

  const HamiltonianSpec& hamiltonian() const { return h_; }
  const std::vector<DissipationChannel>& channels() const { return channels_; }
  const SpaceLayout& layout() const { return h_.layout(); }
  Index dim() const { return h_.dim(); }
  bool is_closed() const { return channels_.empty(); }

 private:
  HamiltonianSpec h_;
  std::vector<DissipationChannel> channels_;
};

/// Dissipative part D(rho) at time t.
Matrix dissipator(const Generator& gen, double t, const Matrix& rho);

/// Full right-hand side -i[H(t), rho] + D(rho). Traceless and Hermitian up
/// to roundoff for Hermitian input.
Matrix lindblad_rhs(const Generator& gen, double t, const DensityMatrix& rho);

/// Per-operator report of the traceless/orthonormality conditions
/// tr{L_k} = 0 and tr{L_j^dag L_k} = delta_jk.
struct DissipatorBasisReport {
  std::vector<double> trace_norms;  // |tr L_k| per operator
  std::vector<std::vector<double>> gram_deviations;  // |tr{L_j^dag L_k} - d_jk|
  double max_trace_norm = 0.0;
  double max_gram_deviation = 0.0;
  bool pass = false;
  std::string describe() const;
};

DissipatorBasisReport validate_dissipator_basis(const std::vector<Matrix>& ops,
                                                double tol);

/// Integration knobs. The defaults match the shipped scenarios.
struct StepOptions {
  double positivity_floor = -1e-6;  // reject a step below this eigenvalue
  double state_psd_tol = -1e-6;     // tolerance used to rebuild states
  double state_trace_tol = 1e-8;
};

/// Uniform-step trajectory of states, endpoints included. The cumulative
/// Hermitization and trace corrections applied during stepping are recorded
/// so entropy evaluations downstream can be trusted.
struct Trajectory {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
  double h_step = 0.0;
  double cumulative_hermiticity_correction = 0.0;
  double cumulative_trace_correction = 0.0;
  double min_eigenvalue_seen = 1.0;

  std::size_t size() const { return times.size(); }
};

/// One classical RK4 update of size h_step. The result is re-Hermitized and
/// trace-renormalized; a minimum eigenvalue below the positivity floor
/// raises StepRejected.
DensityMatrix step_rk4(const Generator& gen, double t, const DensityMatrix& rho,
                       double h_step, const StepOptions& opt = StepOptions{});

/// Propagate from t0 to t1 with uniform steps of (approximately) h_step.
/// The step count is the nearest integer of (t1-t0)/h_step, so both
/// endpoints land exactly on samples.
Trajectory propagate(const Generator& gen, const DensityMatrix& rho0,
                     double t0, double t1, double h_step,
                     const StepOptions& opt = StepOptions{});

}  // namespace qtherm
