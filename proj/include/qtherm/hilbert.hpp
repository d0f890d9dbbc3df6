#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "qtherm/linalg.hpp"

// Quantum states, Hamiltonians and entropy functionals on composite Hilbert
// spaces. Units: hbar = 1, k_B = 1, energies in units of a reference
// frequency omega_0 = 1, entropies in nats.

namespace qtherm {

/// Tensor-factor structure of a Hilbert space.
struct SpaceLayout {
  std::vector<Index> subsystem_dims;

  SpaceLayout() = default;
  SpaceLayout(std::initializer_list<Index> dims) : subsystem_dims(dims) {
    validate();
  }
  explicit SpaceLayout(std::vector<Index> dims)
      : subsystem_dims(std::move(dims)) {
    validate();
  }

  Index total_dim() const {
    Index d = 1;
    for (Index s : subsystem_dims) d *= s;
    return d;
  }
  int subsystem_count() const {
    return static_cast<int>(subsystem_dims.size());
  }
  bool operator==(const SpaceLayout& other) const {
    return subsystem_dims == other.subsystem_dims;
  }

 private:
  void validate() const {
    if (subsystem_dims.empty()) {
      throw DimensionMismatch("SpaceLayout: no subsystems");
    }
    for (Index d : subsystem_dims) {
      if (d <= 0) throw DimensionMismatch("SpaceLayout: nonpositive dim");
    }
  }
};

/// Validation tolerances for density matrices. Integration loops relax the
/// positivity bound; everything else keeps the defaults.
struct StateTolerances {
  double hermiticity = 1e-12;
  double trace = 1e-12;
  double min_eigenvalue = -1e-10;
};

/// Unit-trace positive-semidefinite Hermitian operator on a composite space.
class DensityMatrix {
 public:
  DensityMatrix(SpaceLayout layout, Matrix matrix,
                const StateTolerances& tol = StateTolerances{});

  const SpaceLayout& layout() const { return layout_; }
  const Matrix& matrix() const { return matrix_; }
  Index dim() const { return matrix_.rows(); }

  /// Reduced state of the subsystems listed in `keep`.
  DensityMatrix reduced(const std::vector<int>& keep) const;

 private:
  SpaceLayout layout_;
  Matrix matrix_;
};

/// One additive term of a Hamiltonian: a real time-dependent coefficient,
/// a constant Hermitian operator, and the subsystems the operator acts on
/// nontrivially (used to attribute subsystem energies).
struct HamiltonianTerm {
  std::function<double(double)> coefficient;
  Matrix op;
  std::vector<int> support;
};

/// Time-dependent Hermitian operator assembled from weighted terms,
/// H(t) = sum_i c_i(t) O_i.
class HamiltonianSpec {
 public:
  HamiltonianSpec(SpaceLayout layout, std::vector<HamiltonianTerm> terms,
                  double hermiticity_tol = kDefaultHermitianTol);

  const SpaceLayout& layout() const { return layout_; }
  const std::vector<HamiltonianTerm>& terms() const { return terms_; }
  Index dim() const { return layout_.total_dim(); }

  /// H(t).
  Matrix at(double t) const;

  /// dH/dt at t, with each coefficient differentiated by a centered finite
  /// difference of step `fd_step`.
  Matrix time_derivative(double t, double fd_step = 1e-6) const;

  /// Sum of the terms whose support lies inside `subsystems`, as a full
  /// Hilbert-space operator.
  Matrix local_part(double t, const std::vector<int>& subsystems) const;

  /// Convenience: time-independent Hamiltonian from a single matrix acting
  /// on all subsystems.
  static HamiltonianSpec constant(SpaceLayout layout, Matrix h);

 private:
  SpaceLayout layout_;
  std::vector<HamiltonianTerm> terms_;
};

/// Von Neumann entropy in nats; guaranteed inside [0, log(d)] up to noise.
class EntropyValue {
 public:
  EntropyValue(double nats, Index total_dim);
  double nats() const { return nats_; }

 private:
  double nats_;
};

/// Normalized projector |psi><psi| from an (unnormalized) amplitude vector.
DensityMatrix make_pure(const SpaceLayout& layout, const CVector& amplitudes);

/// Thermal state exp(-H(t)/T)/Z. The spectrum is shifted by its minimum
/// before exponentiation so arbitrarily small temperatures stay finite.
DensityMatrix gibbs_state(const HamiltonianSpec& h, double t,
                          double temperature);

/// S(rho) = -sum_i lambda_i log(lambda_i), with 0*log(0) = 0.
EntropyValue von_neumann_entropy(const DensityMatrix& rho,
                                 double zero_clamp = kDefaultZeroClamp);

/// S_C = S(AB) - S(A) - S(B) for the bipartition (`split`, complement).
/// Always <= 0 up to numerical noise (it is minus the mutual information).
double correlation_entropy(const DensityMatrix& rho_ab,
                           const std::vector<int>& split,
                           double zero_clamp = kDefaultZeroClamp);

/// Complement of `split` inside a layout with `subsystem_count` factors.
/// Throws BadSplit unless `split` is a proper nonempty subset.
std::vector<int> split_complement(const std::vector<int>& split,
                                  int subsystem_count);

}  // namespace qtherm
