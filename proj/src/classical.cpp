#include "qtherm/classical.hpp"

#include <algorithm>
#include <cmath>

namespace qtherm {

ClassicalBody ClassicalBody::make(double heat_capacity, double temperature) {
  if (!(heat_capacity > 0.0) || !std::isfinite(heat_capacity)) {
    throw DomainError("ClassicalBody: heat capacity must be positive");
  }
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw NonPositiveTemperature("ClassicalBody: temperature must be positive");
  }
  return ClassicalBody{heat_capacity, temperature, temperature};
}

ClassicalLedger exchange_step(ClassicalBody& a, ClassicalBody& b, double dq) {
  dq = std::abs(dq);
  ClassicalBody& hot = (a.bulk_temperature >= b.bulk_temperature) ? a : b;
  ClassicalBody& cold = (a.bulk_temperature >= b.bulk_temperature) ? b : a;

  ClassicalLedger ledger;
  ledger.heat_transferred = dq;
  const double ds_hot = -dq / hot.bulk_temperature;
  const double ds_cold = dq / cold.bulk_temperature;
  ledger.delta_e_s_a = (&hot == &a) ? ds_hot : ds_cold;
  ledger.delta_e_s_b = (&hot == &b) ? ds_hot : ds_cold;
  ledger.delta_i_s_total = ds_hot + ds_cold;

  hot.bulk_temperature -= dq / hot.heat_capacity;
  cold.bulk_temperature += dq / cold.heat_capacity;
  hot.boundary_temperature = hot.bulk_temperature;
  cold.boundary_temperature = cold.bulk_temperature;
  if (!(hot.bulk_temperature > 0.0)) {
    throw NonPositiveTemperature(
        "exchange_step: parcel too large, temperature went nonpositive");
  }
  return ledger;
}

std::vector<ClassicalLedger> run_equilibration(ClassicalBody& a,
                                               ClassicalBody& b, double dq,
                                               long max_steps) {
  if (!(dq > 0.0)) throw DomainError("run_equilibration: dq must be positive");
  if (max_steps <= 0) {
    throw DomainError("run_equilibration: max_steps must be positive");
  }
  const double gap_floor =
      dq / std::min(a.heat_capacity, b.heat_capacity);
  std::vector<ClassicalLedger> ledgers;
  for (long step = 0; step < max_steps; ++step) {
    if (std::abs(a.bulk_temperature - b.bulk_temperature) < gap_floor) break;
    ledgers.push_back(exchange_step(a, b, dq));
  }
  return ledgers;
}

}  // namespace qtherm
