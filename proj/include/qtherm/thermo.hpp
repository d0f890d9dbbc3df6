#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "qtherm/dynamics.hpp"

// Thermodynamic bookkeeping along master-equation trajectories.
//
// The entropy rate dS/dt = -tr{rhodot ln rho} splits into
//
//   interior:  tr{i [H(t), rho] ln rho}   (vanishes identically: rho and
//                                          ln rho commute, so the cyclic
//                                          trace kills the term)
//   exterior: -tr{D(rho) ln rho}
//
// and the ledger records both, the Alicki heat/work split
// dQ = tr{rhodot H}, dW = tr{rho dH/dt}, the conventional entropy
// production dS/dt - (dQ/dt)/T_bath kept for comparison, and the
// generalized temperature T(t) = (dQ/dt)/(dS/dt).
//
// Sign convention: heat and work are positive when they increase the
// system energy, making the first law a plain sum.

namespace qtherm {

inline constexpr double kDefaultRateFloor = 1e-9;

/// Per-time-step ledger record.
struct ThermoSample {
  double t = 0.0;
  double entropy = 0.0;        // S(rho), nats
  double interior_rate = 0.0;  // tr{i[H,rho] ln rho}, nats/time
  double exterior_rate = 0.0;  // -tr{D(rho) ln rho}, nats/time
  double heat_rate = 0.0;      // tr{rhodot H}
  double work_rate = 0.0;      // tr{rho dH/dt}
  double energy = 0.0;         // tr{rho H}
  std::optional<double> generalized_temperature;  // unset where dS/dt ~ 0
  std::optional<double> conventional_ep_rate;     // unset without a bath
};

/// Subsystem-resolved record for bipartite runs. Rates are centered finite
/// differences of the sampled entropies; heats integrate the local
/// Hamiltonian terms only, so interaction energy is never attributed to a
/// subsystem (it is reported in `unallocated_energy` instead).
struct BipartiteLedgerSample {
  double t = 0.0;
  double s_a = 0.0, s_b = 0.0, s_ab = 0.0;
  double s_c = 0.0;  // s_ab - s_a - s_b, <= 0 up to noise
  double dsa_dt = 0.0, dsb_dt = 0.0, dsc_dt = 0.0;
  double heat_rate_a = 0.0, heat_rate_b = 0.0;
  double q_a = 0.0, q_b = 0.0;  // cumulative
  std::optional<double> t_a, t_b;
  std::optional<double> eq12a_residual;  // dS_C/dt + qA/T_A + qB/T_B
  double unallocated_energy = 0.0;
};

/// Cycle accounting over a hot and a cold stroke. `efficiency` is the
/// integral form 1 - |int T_c dS| / int T_h dS evaluated as a
/// Riemann-Stieltjes sum in S; `efficiency_heat_ratio` uses the directly
/// integrated heats. Both are reported together with their discrepancy.
struct EngineCycleReport {
  double heat_hot = 0.0;   // direct integral of the hot-stroke heat rate
  double heat_cold = 0.0;  // likewise, signed (negative when released)
  double net_work = 0.0;   // work done on the system over both strokes
  double tds_hot = 0.0;    // int T(t) dS over the hot stroke
  double tds_cold = 0.0;
  double efficiency = 0.0;
  double efficiency_heat_ratio = 0.0;
  double form_discrepancy = 0.0;
  double first_law_residual = 0.0;  // heat_hot + heat_cold + net_work
};

/// Knobs for ledger assembly. The zero clamp is slightly wider than the
/// linalg default so integration roundoff in near-singular states cannot
/// abort the entropy evaluation.
struct LedgerOptions {
  std::optional<double> bath_temperature;   // enables the conventional ledger
  double rate_floor = kDefaultRateFloor;    // below it, T(t) is undefined
  double zero_clamp = 1e-11;
  double hdot_fd_step = 1e-6;
  bool smooth_temperature_rates = true;     // 3-point average before T(t)
  double interior_rate_bound = 1e-10;       // runtime assertion
  bool verify_invariants = true;
};

/// (interior, exterior) entropy rates at one instant.
std::pair<double, double> entropy_rate_split(
    const Generator& gen, double t, const DensityMatrix& rho,
    double zero_clamp = kDefaultZeroClamp);

struct EnergyRates {
  double heat_rate = 0.0;
  double work_rate = 0.0;
  double energy_rate = 0.0;  // heat_rate + work_rate
};

/// Alicki split of the energy flow at one instant.
EnergyRates energy_ledger_rate(const Generator& gen, double t,
                               const DensityMatrix& rho,
                               double hdot_fd_step = 1e-6);

/// Conventional entropy production rate dS/dt - (dQ/dt)/T_bath. Reported
/// as computed; no sign is asserted.
double conventional_entropy_production_rate(
    const Generator& gen, double t, const DensityMatrix& rho,
    double bath_temperature, double zero_clamp = kDefaultZeroClamp);

/// T(t) = dQ_dt / dS_dt where |dS_dt| >= rate_floor, otherwise unset
/// (covers the adiabatic case dQ = dS = 0). The sign is reported as
/// computed.
std::optional<double> generalized_temperature(
    double dS_dt, double dQ_dt, double rate_floor = kDefaultRateFloor);

/// Full per-sample ledger along a trajectory. Verifies the interior-rate
/// bound and the closure of analytic rates against finite differences of
/// the sampled entropy (tolerance max(1e-6, 10 h^2)) unless disabled.
std::vector<ThermoSample> thermo_ledger(const Generator& gen,
                                        const Trajectory& traj,
                                        const LedgerOptions& opt = {});

/// Subsystem-resolved ledger for the bipartition (`split`, complement).
/// For closed runs the sum rule dS_A + dS_B + dS_C = 0 is verified per
/// sample (tolerance max(1e-6, 10 h^2)) unless disabled.
std::vector<BipartiteLedgerSample> bipartite_ledger(
    const Generator& gen, const Trajectory& traj, const std::vector<int>& split,
    const LedgerOptions& opt = {});

/// Cycle report from the two stroke sample lists. Throws NonPositiveHotHeat
/// unless the hot stroke absorbs heat.
EngineCycleReport engine_efficiency(const std::vector<ThermoSample>& hot_stroke,
                                    const std::vector<ThermoSample>& cold_stroke);

}  // namespace qtherm
