#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qtherm/classical.hpp"
#include "qtherm/erasure.hpp"
#include "qtherm/thermo.hpp"

// Config-driven scenario runner. A scenario is a JSON document naming one
// of the shipped kinds, the Hilbert-space layout, Hamiltonian terms as
// (coefficient, Pauli-string) pairs, dissipation channels as (operator
// label, rate, optional bath temperature) triples, the integration window
// and the output paths. Identical config and seed produce byte-identical
// CSV output on one platform.

namespace qtherm {

enum class ScenarioKind {
  ClosedBipartiteExchange,
  QubitThermalBath,
  EngineCycle,
  ClassicalComparator,
  Erasure,
};

std::string to_string(ScenarioKind kind);

struct HamiltonianTermConfig {
  double coefficient = 0.0;
  std::string pauli;
};

struct ChannelConfig {
  std::string op;
  double rate = 0.0;
  std::optional<double> bath_temperature;
};

struct IntegrationConfig {
  double t0 = 0.0;
  double t1 = 0.0;
  double h_step = 0.0;
};

struct EngineParams {
  double temperature_hot = 2.0;
  double temperature_cold = 0.5;
  double omega_hot = 2.0;
  double omega_cold = 1.0;
  double gamma = 2.0;
  double contact_time = 15.0;
  double ramp_time = 5.0;
  double edge_time = 1.0;  // smooth switching width of the bath contacts
};

struct ClassicalParams {
  double heat_capacity_a = 1.0;
  double heat_capacity_b = 1.0;
  double temperature_a = 300.0;
  double temperature_b = 400.0;
  double dq = 1e-3;
  long max_steps = 1000000;
};

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::ClosedBipartiteExchange;
  std::vector<Index> layout_dims;
  std::vector<HamiltonianTermConfig> hamiltonian;
  std::vector<ChannelConfig> channels;
  IntegrationConfig integration;

  // Kind-specific parameters (from the "params" object).
  std::vector<double> initial_temperatures;  // closed-bipartite-exchange
  std::vector<int> split;                    // bipartite split, default {0}
  std::vector<double> initial_populations;   // qubit-thermal-bath
  EngineParams engine;
  ClassicalParams classical;
  ErasureSpec erasure;

  std::string csv_name;
  std::string summary_name;
  std::uint64_t seed = 0;

  static ScenarioConfig from_json_text(const std::string& text);
  static ScenarioConfig from_json_file(const std::string& path);
};

/// Scalar run summary mirroring the invariants of the ledgers it ran.
struct RunSummary {
  ScenarioKind kind = ScenarioKind::ClosedBipartiteExchange;
  std::uint64_t seed = 0;
  double wall_clock_seconds = 0.0;

  std::optional<double> max_abs_interior_rate;
  std::optional<double> ledger_closure_residual_max;
  std::optional<double> entropy_drift_max;  // |S(t) - S(t0)| along the run
  std::optional<double> sum_rule_residual_max;    // bipartite, Eq. 10a
  std::optional<double> eq12a_residual_max;
  std::optional<double> unallocated_energy_max;
  std::optional<double> conventional_ep_min;
  std::optional<double> conventional_ep_max;
  std::optional<double> efficiency;             // engine, integral form
  std::optional<double> efficiency_heat_ratio;  // engine, direct heats
  std::optional<double> efficiency_discrepancy;
  std::optional<double> first_law_residual;
  std::optional<double> cumulative_hermiticity_correction;
  std::optional<double> cumulative_trace_correction;
  std::optional<double> min_eigenvalue_seen;
  std::optional<long> steps;
  std::optional<bool> markovian;

  // classical comparator
  std::optional<double> classical_delta_i_s;
  std::optional<double> classical_closed_form;
  std::optional<double> classical_error;
  std::optional<double> classical_min_step_production;

  // erasure
  std::optional<double> erasure_recovered_entropy;
  std::optional<double> erasure_work_per_particle;
  std::optional<double> erasure_entropy_cross_check;  // vs diag(p) entropy

  std::string csv_path;
  std::string summary_path;

  std::string to_json_text() const;
};

/// Run a scenario and write its CSV trajectory and JSON summary under
/// `out_dir` (created if missing).
RunSummary run_scenario(const ScenarioConfig& config,
                        const std::string& out_dir);

/// Structural and Lindblad-basis validation without running.
struct ScenarioValidation {
  DissipatorBasisReport basis;
  bool markovian = true;
  bool has_channels = false;
  std::string text;
};

ScenarioValidation validate_scenario(const ScenarioConfig& config);

/// One line per shipped scenario kind.
void list_scenarios(std::ostream& os);

/// Write ThermoSample rows as CSV with 17 significant digits, LF line
/// endings, undefined values as empty fields.
void emit_trajectory(const std::vector<ThermoSample>& samples,
                     const std::string& path);

/// Bipartite variant: appends the subsystem columns to each row.
void emit_trajectory(const std::vector<ThermoSample>& samples,
                     const std::vector<BipartiteLedgerSample>& subsystem,
                     const std::string& path);

}  // namespace qtherm
