#include "qtherm/dynamics.hpp"

#include <cmath>
#include <sstream>

namespace qtherm {

namespace {

double min_eigenvalue(const Matrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian,
                                               Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

}  // namespace

DissipationChannel::DissipationChannel(
    std::function<double(double)> rate, std::function<Matrix(double)> op,
    const std::vector<double>& validation_times, double basis_tol)
    : rate_(std::move(rate)), op_(std::move(op)), dim_(0) {
  if (!rate_ || !op_) {
    throw ConfigError("DissipationChannel: missing rate or operator function");
  }
  for (double t : validation_times) {
    const Matrix l = op_(t);
    if (l.rows() != l.cols()) {
      throw DimensionMismatch("DissipationChannel: operator not square");
    }
    if (dim_ == 0) dim_ = l.rows();
    if (l.rows() != dim_) {
      throw DimensionMismatch("DissipationChannel: operator dim changed in t");
    }
    const double trace_norm = std::abs(l.trace());
    if (trace_norm > basis_tol) {
      std::ostringstream os;
      os << "DissipationChannel: |tr L| = " << trace_norm << " at t = " << t;
      throw ConfigError(os.str());
    }
    const double hs_defect = std::abs(l.squaredNorm() - 1.0);
    if (hs_defect > basis_tol) {
      std::ostringstream os;
      os << "DissipationChannel: Hilbert-Schmidt norm deviates by "
         << hs_defect << " at t = " << t;
      throw ConfigError(os.str());
    }
  }
  if (dim_ == 0) {
    throw ConfigError("DissipationChannel: no validation times given");
  }
}

DissipationChannel DissipationChannel::constant(double rate, Matrix op,
                                                double basis_tol) {
  return DissipationChannel([rate](double) { return rate; },
                            [op = std::move(op)](double) { return op; },
                            {0.0}, basis_tol);
}

Generator::Generator(HamiltonianSpec h, std::vector<DissipationChannel> channels)
    : h_(std::move(h)), channels_(std::move(channels)) {
  const Index d = h_.dim();
  for (const auto& channel : channels_) {
    if (channel.dim() != d) {
      throw DimensionMismatch("Generator: channel dimension mismatch");
    }
  }
  if (static_cast<Index>(channels_.size()) > d * d - 1) {
    throw ConfigError("Generator: more channels than d^2 - 1");
  }
}

Matrix dissipator(const Generator& gen, double t, const Matrix& rho) {
  Matrix d = Matrix::Zero(rho.rows(), rho.cols());
  for (const auto& channel : gen.channels()) {
    const double gamma = channel.rate(t);
    if (gamma == 0.0) continue;
    const Matrix l = channel.op(t);
    const Matrix ldag_l = l.adjoint() * l;
    d += gamma * (l * rho * l.adjoint() - 0.5 * anticommutator(ldag_l, rho));
  }
  return d;
}

Matrix lindblad_rhs(const Generator& gen, double t, const DensityMatrix& rho) {
  if (!(rho.layout() == gen.layout())) {
    throw DimensionMismatch("lindblad_rhs: state layout does not match");
  }
  const Matrix h = gen.hamiltonian().at(t);
  return Complex(0.0, -1.0) * commutator(h, rho.matrix()) +
         dissipator(gen, t, rho.matrix());
}

std::string DissipatorBasisReport::describe() const {
  std::ostringstream os;
  os << (pass ? "pass" : "fail") << ": max |tr L| = " << max_trace_norm
     << ", max Gram deviation = " << max_gram_deviation;
  return os.str();
}

DissipatorBasisReport validate_dissipator_basis(const std::vector<Matrix>& ops,
                                                double tol) {
  DissipatorBasisReport report;
  const std::size_t n = ops.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (ops[k].rows() != ops[k].cols() || ops[k].rows() != ops[0].rows()) {
      throw DimensionMismatch("validate_dissipator_basis: dims differ");
    }
    const double trace_norm = std::abs(ops[k].trace());
    report.trace_norms.push_back(trace_norm);
    report.max_trace_norm = std::max(report.max_trace_norm, trace_norm);
  }
  report.gram_deviations.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      const Complex gram = (ops[j].adjoint() * ops[k]).trace();
      const double target = (j == k) ? 1.0 : 0.0;
      report.gram_deviations[j][k] = std::abs(gram - target);
      report.max_gram_deviation =
          std::max(report.max_gram_deviation, report.gram_deviations[j][k]);
    }
  }
  report.pass =
      report.max_trace_norm <= tol && report.max_gram_deviation <= tol;
  return report;
}

namespace {

struct StepResult {
  Matrix state;
  double hermiticity_correction;
  double trace_correction;
  double min_eig;
};

StepResult rk4_step_raw(const Generator& gen, double t, const Matrix& rho,
                        double h) {
  auto rhs = [&gen](double tt, const Matrix& m) {
    const Matrix ham = gen.hamiltonian().at(tt);
    return (Complex(0.0, -1.0) * commutator(ham, m) + dissipator(gen, tt, m))
        .eval();
  };
  const Matrix k1 = rhs(t, rho);
  const Matrix k2 = rhs(t + 0.5 * h, rho + 0.5 * h * k1);
  const Matrix k3 = rhs(t + 0.5 * h, rho + 0.5 * h * k2);
  const Matrix k4 = rhs(t + h, rho + h * k3);
  Matrix next = rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

  StepResult out;
  const Matrix hermitized = 0.5 * (next + next.adjoint().eval());
  out.hermiticity_correction = max_abs(next - hermitized);
  const double trace = hermitized.trace().real();
  out.trace_correction = std::abs(trace - 1.0);
  out.state = hermitized / trace;
  out.min_eig = min_eigenvalue(out.state);
  return out;
}

}  // namespace

DensityMatrix step_rk4(const Generator& gen, double t, const DensityMatrix& rho,
                       double h_step, const StepOptions& opt) {
  if (!(h_step > 0.0)) {
    throw ConfigError("step_rk4: h_step must be positive");
  }
  StepResult res = rk4_step_raw(gen, t, rho.matrix(), h_step);
  if (res.min_eig < opt.positivity_floor) {
    std::ostringstream os;
    os << "step_rk4: minimum eigenvalue " << res.min_eig
       << " fell below the positivity floor at t = " << t + h_step;
    throw StepRejected(os.str(), t + h_step);
  }
  StateTolerances tol;
  tol.min_eigenvalue = opt.state_psd_tol;
  tol.trace = opt.state_trace_tol;
  return DensityMatrix(rho.layout(), std::move(res.state), tol);
}

Trajectory propagate(const Generator& gen, const DensityMatrix& rho0,
                     double t0, double t1, double h_step,
                     const StepOptions& opt) {
  if (!(t1 >= t0)) {
    throw ConfigError("propagate: t1 must not precede t0");
  }
  if (!(h_step > 0.0)) {
    throw ConfigError("propagate: h_step must be positive");
  }
  if (!(rho0.layout() == gen.layout())) {
    throw DimensionMismatch("propagate: state layout does not match");
  }

  Trajectory traj;
  if (t1 == t0) {
    traj.times.push_back(t0);
    traj.states.push_back(rho0);
    traj.h_step = h_step;
    return traj;
  }

  const long n_steps =
      std::max(1L, std::lround((t1 - t0) / h_step));
  const double h = (t1 - t0) / static_cast<double>(n_steps);
  traj.h_step = h;
  traj.times.reserve(n_steps + 1);
  traj.states.reserve(n_steps + 1);
  traj.times.push_back(t0);
  traj.states.push_back(rho0);

  StateTolerances tol;
  tol.min_eigenvalue = opt.state_psd_tol;
  tol.trace = opt.state_trace_tol;

  Matrix current = rho0.matrix();
  for (long i = 0; i < n_steps; ++i) {
    const double t = t0 + static_cast<double>(i) * h;
    StepResult res = rk4_step_raw(gen, t, current, h);
    if (res.min_eig < opt.positivity_floor) {
      std::ostringstream os;
      os << "propagate: minimum eigenvalue " << res.min_eig
         << " fell below the positivity floor at t = " << t + h;
      throw StepRejected(os.str(), t + h);
    }
    traj.cumulative_hermiticity_correction += res.hermiticity_correction;
    traj.cumulative_trace_correction += res.trace_correction;
    traj.min_eigenvalue_seen = std::min(traj.min_eigenvalue_seen, res.min_eig);
    current = std::move(res.state);
    traj.times.push_back(t0 + static_cast<double>(i + 1) * h);
    traj.states.emplace_back(rho0.layout(), current, tol);
  }
  return traj;
}

}  // namespace qtherm
