#include "qtherm/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qtherm {

DensityMatrix::DensityMatrix(SpaceLayout layout, Matrix matrix,
                             const StateTolerances& tol)
    : layout_(std::move(layout)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() ||
      matrix_.rows() != layout_.total_dim()) {
    throw DimensionMismatch("DensityMatrix: matrix does not match layout");
  }
  if (!matrix_.allFinite()) {
    throw DomainError("DensityMatrix: non-finite entries");
  }
  const double hdef = hermiticity_defect(matrix_);
  if (hdef > tol.hermiticity) {
    std::ostringstream os;
    os << "DensityMatrix: Hermiticity defect " << hdef;
    throw NotHermitian(os.str());
  }
  const double trace_defect = std::abs(matrix_.trace() - Complex(1.0, 0.0));
  if (trace_defect > tol.trace) {
    std::ostringstream os;
    os << "DensityMatrix: trace deviates from 1 by " << trace_defect;
    throw DomainError(os.str());
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(
      (0.5 * (matrix_ + matrix_.adjoint().eval())).eval(),
      Eigen::EigenvaluesOnly);
  const double min_eig = solver.eigenvalues().minCoeff();
  if (min_eig < tol.min_eigenvalue) {
    std::ostringstream os;
    os << "DensityMatrix: minimum eigenvalue " << min_eig << " below "
       << tol.min_eigenvalue;
    throw DomainError(os.str());
  }
}

DensityMatrix DensityMatrix::reduced(const std::vector<int>& keep) const {
  Matrix red = partial_trace(matrix_, layout_.subsystem_dims, keep);
  std::vector<Index> dims;
  std::vector<int> sorted = keep;
  std::sort(sorted.begin(), sorted.end());
  for (int k : sorted) dims.push_back(layout_.subsystem_dims[k]);
  // Partial traces of a valid state stay valid; reuse the relaxed positivity
  // bound so integration-tolerance states pass through unchanged.
  StateTolerances tol;
  tol.min_eigenvalue = -1e-6;
  tol.trace = 1e-8;
  return DensityMatrix(SpaceLayout(dims), std::move(red), tol);
}

HamiltonianSpec::HamiltonianSpec(SpaceLayout layout,
                                 std::vector<HamiltonianTerm> terms,
                                 double hermiticity_tol)
    : layout_(std::move(layout)), terms_(std::move(terms)) {
  const Index d = layout_.total_dim();
  for (const auto& term : terms_) {
    if (term.op.rows() != d || term.op.cols() != d) {
      throw DimensionMismatch("HamiltonianSpec: term dimension mismatch");
    }
    if (hermiticity_defect(term.op) > hermiticity_tol) {
      throw NotHermitian("HamiltonianSpec: term operator not Hermitian");
    }
    if (!term.coefficient) {
      throw ConfigError("HamiltonianSpec: term has no coefficient function");
    }
    for (int s : term.support) {
      if (s < 0 || s >= layout_.subsystem_count()) {
        throw DimensionMismatch("HamiltonianSpec: support index out of range");
      }
    }
  }
}

Matrix HamiltonianSpec::at(double t) const {
  Matrix h = Matrix::Zero(dim(), dim());
  for (const auto& term : terms_) {
    h += term.coefficient(t) * term.op;
  }
  return h;
}

Matrix HamiltonianSpec::time_derivative(double t, double fd_step) const {
  Matrix h = Matrix::Zero(dim(), dim());
  for (const auto& term : terms_) {
    const double rate =
        (term.coefficient(t + fd_step) - term.coefficient(t - fd_step)) /
        (2.0 * fd_step);
    h += rate * term.op;
  }
  return h;
}

Matrix HamiltonianSpec::local_part(double t,
                                   const std::vector<int>& subsystems) const {
  Matrix h = Matrix::Zero(dim(), dim());
  for (const auto& term : terms_) {
    const bool inside = std::all_of(
        term.support.begin(), term.support.end(), [&](int s) {
          return std::find(subsystems.begin(), subsystems.end(), s) !=
                 subsystems.end();
        });
    if (inside) h += term.coefficient(t) * term.op;
  }
  return h;
}

HamiltonianSpec HamiltonianSpec::constant(SpaceLayout layout, Matrix h) {
  std::vector<int> all(layout.subsystem_count());
  for (int s = 0; s < layout.subsystem_count(); ++s) all[s] = s;
  std::vector<HamiltonianTerm> terms;
  terms.push_back({[](double) { return 1.0; }, std::move(h), all});
  return HamiltonianSpec(std::move(layout), std::move(terms));
}

EntropyValue::EntropyValue(double nats, Index total_dim) : nats_(nats) {
  const double upper = std::log(static_cast<double>(total_dim)) + 1e-9;
  if (nats_ < -1e-9 || nats_ > upper) {
    std::ostringstream os;
    os << "EntropyValue: " << nats_ << " outside [0, log(" << total_dim
       << ")]";
    throw DomainError(os.str());
  }
  nats_ = std::max(nats_, 0.0);
}

DensityMatrix make_pure(const SpaceLayout& layout, const CVector& amplitudes) {
  if (amplitudes.size() != layout.total_dim()) {
    throw DimensionMismatch("make_pure: amplitude count does not match layout");
  }
  const double norm = amplitudes.norm();
  if (norm <= 0.0 || !std::isfinite(norm)) {
    throw ZeroVector("make_pure: amplitude vector has zero norm");
  }
  CVector psi = amplitudes / norm;
  return DensityMatrix(layout, psi * psi.adjoint());
}

DensityMatrix gibbs_state(const HamiltonianSpec& h, double t,
                          double temperature) {
  if (!(temperature > 0.0)) {
    throw NonPositiveTemperature("gibbs_state: temperature must be positive");
  }
  HermitianEigenSystem es = eig_hermitian(h.at(t));
  const double ground = es.eigenvalues.minCoeff();
  RealVector weights(es.eigenvalues.size());
  for (Index i = 0; i < weights.size(); ++i) {
    weights[i] = std::exp(-(es.eigenvalues[i] - ground) / temperature);
  }
  weights /= weights.sum();
  Matrix rho =
      es.eigenvectors * weights.asDiagonal() * es.eigenvectors.adjoint();
  return DensityMatrix(h.layout(), std::move(rho));
}

EntropyValue von_neumann_entropy(const DensityMatrix& rho, double zero_clamp) {
  HermitianEigenSystem es = eig_hermitian(rho.matrix());
  double s = 0.0;
  for (Index i = 0; i < es.eigenvalues.size(); ++i) {
    const double lam = es.eigenvalues[i];
    if (lam < -zero_clamp) {
      throw DomainError("von_neumann_entropy: negative eigenvalue");
    }
    if (lam > zero_clamp) s -= lam * std::log(lam);
  }
  return EntropyValue(s, rho.dim());
}

std::vector<int> split_complement(const std::vector<int>& split,
                                  int subsystem_count) {
  if (split.empty()) throw BadSplit("split is empty");
  std::vector<char> in(subsystem_count, 0);
  for (int s : split) {
    if (s < 0 || s >= subsystem_count) {
      throw BadSplit("split index out of range");
    }
    if (in[s]) throw BadSplit("split index repeated");
    in[s] = 1;
  }
  std::vector<int> rest;
  for (int s = 0; s < subsystem_count; ++s) {
    if (!in[s]) rest.push_back(s);
  }
  if (rest.empty()) throw BadSplit("split covers the whole system");
  return rest;
}

double correlation_entropy(const DensityMatrix& rho_ab,
                           const std::vector<int>& split, double zero_clamp) {
  if (rho_ab.layout().subsystem_count() < 2) {
    throw BadSplit("correlation_entropy: layout has fewer than 2 subsystems");
  }
  const std::vector<int> rest =
      split_complement(split, rho_ab.layout().subsystem_count());
  const double s_ab = von_neumann_entropy(rho_ab, zero_clamp).nats();
  const double s_a = von_neumann_entropy(rho_ab.reduced(split), zero_clamp).nats();
  const double s_b = von_neumann_entropy(rho_ab.reduced(rest), zero_clamp).nats();
  return s_ab - s_a - s_b;
}

}  // namespace qtherm
