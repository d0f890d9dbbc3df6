#pragma once

#include <vector>

#include "qtherm/errors.hpp"

// Work accounting for erasing a mixed ensemble by separation, isothermal
// compression and a free unitary reset. Only the compression step moves the
// ledgers: compressing species i from volume V to p_i V costs
// w_i = p_i log(p_i) per particle (<= 0, work done on the gas with the
// compression sign), the entropy changes by the same amount, and the
// recovered entropy of the initial ensemble is -sum_i p_i log(p_i).
// Units: k_B T = 1, work and entropy per particle unless stated.

namespace qtherm {

struct ErasureSpec {
  std::vector<double> probabilities;  // normalized, each >= 0
  long n_atoms = 1;
  double temperature = 1.0;
  double volume = 1.0;

  void validate(double norm_tol = 1e-12) const;
};

struct ErasureReport {
  // Semi-permeable separation and the final unitary reset are free; the
  // fields are kept so the three-step accounting reads off the report.
  double separation_work = 0.0;
  double separation_heat = 0.0;
  double reset_work = 0.0;

  std::vector<double> work_per_species;   // p_i log(p_i), per particle
  double work_per_particle = 0.0;         // sum of the above
  double entropy_change_per_particle = 0.0;
  double recovered_entropy = 0.0;          // -sum p_i log p_i, nats
  double work_total = 0.0;                 // n_atoms-scaled
  double entropy_change_total = 0.0;
};

ErasureReport erasure_accounting(const ErasureSpec& spec);

}  // namespace qtherm
