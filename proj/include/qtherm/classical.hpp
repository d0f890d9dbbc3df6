#pragma once

#include <vector>

#include "qtherm/errors.hpp"

// Finite-heat-capacity two-body comparator. Heat moves quasi-statically in
// small parcels from the hotter to the colder body; each parcel changes the
// entropies by +-dq/T at the pre-step temperatures, and the interior
// production dq (1/T_cold - 1/T_hot) is nonnegative, vanishing exactly at
// equal temperatures. Units: k_B = 1.

namespace qtherm {

/// Body with constant heat capacity. The boundary temperature tracks the
/// bulk temperature (quasi-static contact).
struct ClassicalBody {
  double heat_capacity = 1.0;
  double bulk_temperature = 1.0;
  double boundary_temperature = 1.0;

  static ClassicalBody make(double heat_capacity, double temperature);
};

/// Per-parcel entropy bookkeeping.
struct ClassicalLedger {
  double delta_e_s_a = 0.0;  // exterior entropy change of body A
  double delta_e_s_b = 0.0;
  double delta_i_s_total = 0.0;  // interior production of the pair, >= 0
  double heat_transferred = 0.0;  // magnitude of the parcel
};

/// Move one parcel of heat |dq| from the hotter body to the colder one
/// (direction auto-oriented), update both temperatures, and return the
/// ledger of the step.
ClassicalLedger exchange_step(ClassicalBody& a, ClassicalBody& b, double dq);

/// Step until the temperature gap falls below dq/min(C) or max_steps is
/// reached. Returns the per-step ledgers; empty when already equilibrated.
std::vector<ClassicalLedger> run_equilibration(ClassicalBody& a,
                                               ClassicalBody& b, double dq,
                                               long max_steps);

}  // namespace qtherm
