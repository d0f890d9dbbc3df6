#include "qtherm/scenario.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "qtherm/pauli.hpp"

namespace qtherm {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void config_fail(const std::string& path, const std::string& why) {
  throw ConfigError(path + ": " + why);
}

const json& require_field(const json& j, const char* key,
                          const std::string& path) {
  if (!j.is_object()) config_fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) config_fail(path + "." + key, "missing field");
  return *it;
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) config_fail(path, "expected a number");
  return j.get<double>();
}

double number_field(const json& j, const char* key, const std::string& path) {
  return as_number(require_field(j, key, path), path + "." + key);
}

double number_field_or(const json& j, const char* key, const std::string& path,
                       double fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return as_number(j.at(key), path + "." + key);
}

std::string string_field(const json& j, const char* key,
                         const std::string& path) {
  const json& f = require_field(j, key, path);
  if (!f.is_string()) config_fail(path + "." + key, "expected a string");
  return f.get<std::string>();
}

ScenarioKind parse_kind(const std::string& text) {
  if (text == "closed-bipartite-exchange") {
    return ScenarioKind::ClosedBipartiteExchange;
  }
  if (text == "qubit-thermal-bath") return ScenarioKind::QubitThermalBath;
  if (text == "engine-cycle") return ScenarioKind::EngineCycle;
  if (text == "classical-comparator") return ScenarioKind::ClassicalComparator;
  if (text == "erasure") return ScenarioKind::Erasure;
  config_fail("kind", "unknown scenario kind \"" + text + "\"");
}

bool is_quantum(ScenarioKind kind) {
  return kind == ScenarioKind::ClosedBipartiteExchange ||
         kind == ScenarioKind::QubitThermalBath ||
         kind == ScenarioKind::EngineCycle;
}

double smoothstep01(double x) {
  x = std::clamp(x, 0.0, 1.0);
  return x * x * (3.0 - 2.0 * x);
}

// C^1 bump that is 0 outside [a, b], 1 in the interior, with smooth edges
// of width `edge` just inside the interval.
double smooth_window(double t, double a, double b, double edge) {
  if (t <= a || t >= b) return 0.0;
  return smoothstep01((t - a) / edge) * smoothstep01((b - t) / edge);
}

}  // namespace

std::string to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::ClosedBipartiteExchange:
      return "closed-bipartite-exchange";
    case ScenarioKind::QubitThermalBath:
      return "qubit-thermal-bath";
    case ScenarioKind::EngineCycle:
      return "engine-cycle";
    case ScenarioKind::ClassicalComparator:
      return "classical-comparator";
    case ScenarioKind::Erasure:
      return "erasure";
  }
  return "unknown";
}

ScenarioConfig ScenarioConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) config_fail("config", "top level must be an object");

  ScenarioConfig cfg;
  cfg.kind = parse_kind(string_field(j, "kind", "config"));

  if (is_quantum(cfg.kind)) {
    const json& layout = require_field(j, "layout", "config");
    if (!layout.is_array() || layout.empty()) {
      config_fail("layout", "expected a nonempty array of dimensions");
    }
    for (std::size_t i = 0; i < layout.size(); ++i) {
      const double d = as_number(layout[i], "layout[" + std::to_string(i) + "]");
      if (d < 2 || d != std::floor(d)) {
        config_fail("layout[" + std::to_string(i) + "]",
                    "dimension must be an integer >= 2");
      }
      cfg.layout_dims.push_back(static_cast<Index>(d));
    }

    if (j.contains("hamiltonian")) {
      const json& ham = j.at("hamiltonian");
      if (!ham.is_array()) config_fail("hamiltonian", "expected an array");
      for (std::size_t i = 0; i < ham.size(); ++i) {
        const std::string path = "hamiltonian[" + std::to_string(i) + "]";
        HamiltonianTermConfig term;
        term.coefficient = number_field(ham[i], "coeff", path);
        term.pauli = string_field(ham[i], "pauli", path);
        if (term.pauli.size() != cfg.layout_dims.size()) {
          config_fail(path + ".pauli", "length does not match layout");
        }
        if (term.pauli.find_first_not_of('I') == std::string::npos) {
          config_fail(path + ".pauli", "identity string carries no dynamics");
        }
        cfg.hamiltonian.push_back(std::move(term));
      }
    }

    if (j.contains("channels")) {
      const json& channels = j.at("channels");
      if (!channels.is_array()) config_fail("channels", "expected an array");
      for (std::size_t i = 0; i < channels.size(); ++i) {
        const std::string path = "channels[" + std::to_string(i) + "]";
        ChannelConfig channel;
        channel.op = string_field(channels[i], "op", path);
        if (channel.op.size() != cfg.layout_dims.size()) {
          config_fail(path + ".op", "length does not match layout");
        }
        channel.rate = number_field(channels[i], "rate", path);
        if (channels[i].contains("bath_temperature")) {
          channel.bath_temperature = as_number(
              channels[i].at("bath_temperature"), path + ".bath_temperature");
          if (!(*channel.bath_temperature > 0.0)) {
            config_fail(path + ".bath_temperature", "must be positive");
          }
        }
        cfg.channels.push_back(std::move(channel));
      }
    }

    const bool needs_window = cfg.kind != ScenarioKind::EngineCycle;
    const json& integ = require_field(j, "integration", "config");
    cfg.integration.h_step = number_field(integ, "h_step", "integration");
    if (!(cfg.integration.h_step > 0.0)) {
      config_fail("integration.h_step", "must be positive");
    }
    if (needs_window) {
      cfg.integration.t0 = number_field(integ, "t0", "integration");
      cfg.integration.t1 = number_field(integ, "t1", "integration");
      if (!(cfg.integration.t1 > cfg.integration.t0)) {
        config_fail("integration.t1", "must exceed t0");
      }
    }
  }

  const json params = j.contains("params") ? j.at("params") : json::object();
  switch (cfg.kind) {
    case ScenarioKind::ClosedBipartiteExchange: {
      const json& temps = require_field(params, "initial_temperatures", "params");
      if (!temps.is_array() || temps.size() != cfg.layout_dims.size()) {
        config_fail("params.initial_temperatures",
                    "expected one temperature per subsystem");
      }
      for (std::size_t i = 0; i < temps.size(); ++i) {
        const double t = as_number(
            temps[i], "params.initial_temperatures[" + std::to_string(i) + "]");
        if (!(t > 0.0)) {
          config_fail("params.initial_temperatures[" + std::to_string(i) + "]",
                      "must be positive");
        }
        cfg.initial_temperatures.push_back(t);
      }
      if (params.contains("split")) {
        const json& split = params.at("split");
        if (!split.is_array() || split.empty()) {
          config_fail("params.split", "expected a nonempty array");
        }
        for (const auto& v : split) {
          cfg.split.push_back(static_cast<int>(as_number(v, "params.split")));
        }
      } else {
        cfg.split = {0};
      }
      if (!cfg.channels.empty()) {
        config_fail("channels", "closed-bipartite-exchange takes no channels");
      }
      break;
    }
    case ScenarioKind::QubitThermalBath: {
      const json& pops = require_field(params, "initial_populations", "params");
      Index dim = 1;
      for (Index d : cfg.layout_dims) dim *= d;
      if (!pops.is_array() || static_cast<Index>(pops.size()) != dim) {
        config_fail("params.initial_populations",
                    "expected one population per basis state");
      }
      double sum = 0.0;
      for (std::size_t i = 0; i < pops.size(); ++i) {
        const double p = as_number(
            pops[i], "params.initial_populations[" + std::to_string(i) + "]");
        if (p < 0.0) {
          config_fail("params.initial_populations[" + std::to_string(i) + "]",
                      "must be >= 0");
        }
        cfg.initial_populations.push_back(p);
        sum += p;
      }
      if (std::abs(sum - 1.0) > 1e-9) {
        config_fail("params.initial_populations", "must sum to 1");
      }
      break;
    }
    case ScenarioKind::EngineCycle: {
      if (cfg.layout_dims != std::vector<Index>{2}) {
        config_fail("layout", "engine-cycle runs on a single qubit");
      }
      if (!cfg.hamiltonian.empty() || !cfg.channels.empty()) {
        config_fail("hamiltonian",
                    "engine-cycle builds its Hamiltonian and channels from "
                    "params");
      }
      EngineParams& e = cfg.engine;
      e.temperature_hot = number_field(params, "T_hot", "params");
      e.temperature_cold = number_field(params, "T_cold", "params");
      e.omega_hot = number_field(params, "omega_hot", "params");
      e.omega_cold = number_field(params, "omega_cold", "params");
      e.gamma = number_field(params, "gamma", "params");
      e.contact_time = number_field(params, "contact_time", "params");
      e.ramp_time = number_field(params, "ramp_time", "params");
      e.edge_time = number_field_or(params, "edge_time", "params", 1.0);
      if (!(e.temperature_hot > 0.0) || !(e.temperature_cold > 0.0)) {
        config_fail("params.T_hot", "temperatures must be positive");
      }
      if (!(e.contact_time > 0.0) || !(e.ramp_time > 0.0) ||
          !(e.edge_time > 0.0) || e.contact_time < 2.0 * e.edge_time) {
        config_fail("params.contact_time",
                    "stroke durations must be positive with contact_time >= "
                    "2 * edge_time");
      }
      break;
    }
    case ScenarioKind::ClassicalComparator: {
      ClassicalParams& c = cfg.classical;
      c.heat_capacity_a = number_field(params, "heat_capacity_a", "params");
      c.heat_capacity_b = number_field(params, "heat_capacity_b", "params");
      c.temperature_a = number_field(params, "temperature_a", "params");
      c.temperature_b = number_field(params, "temperature_b", "params");
      c.dq = number_field(params, "dq", "params");
      c.max_steps =
          static_cast<long>(number_field_or(params, "max_steps", "params", 1e6));
      if (!(c.dq > 0.0)) config_fail("params.dq", "must be positive");
      if (c.max_steps <= 0) config_fail("params.max_steps", "must be positive");
      break;
    }
    case ScenarioKind::Erasure: {
      const json& probs = require_field(params, "probabilities", "params");
      if (!probs.is_array() || probs.empty()) {
        config_fail("params.probabilities", "expected a nonempty array");
      }
      for (std::size_t i = 0; i < probs.size(); ++i) {
        cfg.erasure.probabilities.push_back(as_number(
            probs[i], "params.probabilities[" + std::to_string(i) + "]"));
      }
      cfg.erasure.n_atoms =
          static_cast<long>(number_field_or(params, "n_atoms", "params", 1.0));
      cfg.erasure.temperature =
          number_field_or(params, "temperature", "params", 1.0);
      cfg.erasure.volume = number_field_or(params, "volume", "params", 1.0);
      try {
        cfg.erasure.validate();
      } catch (const Error& e) {
        config_fail("params.probabilities", e.what());
      }
      break;
    }
  }

  const std::string kind_name = to_string(cfg.kind);
  cfg.csv_name = kind_name + ".csv";
  cfg.summary_name = kind_name + "_summary.json";
  if (j.contains("output")) {
    const json& out = j.at("output");
    if (!out.is_object()) config_fail("output", "expected an object");
    if (out.contains("csv")) cfg.csv_name = string_field(out, "csv", "output");
    if (out.contains("summary")) {
      cfg.summary_name = string_field(out, "summary", "output");
    }
  }
  if (j.contains("seed")) {
    cfg.seed = static_cast<std::uint64_t>(as_number(j.at("seed"), "seed"));
  }
  return cfg;
}

ScenarioConfig ScenarioConfig::from_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_json_text(buffer.str());
}

namespace {

// --- assembly of quantum scenarios --------------------------------------

HamiltonianSpec build_hamiltonian(const ScenarioConfig& cfg,
                                  const SpaceLayout& layout) {
  std::vector<HamiltonianTerm> terms;
  for (const auto& tc : cfg.hamiltonian) {
    terms.push_back({[c = tc.coefficient](double) { return c; },
                     pauli_string(tc.pauli, layout),
                     pauli_string_support(tc.pauli)});
  }
  return HamiltonianSpec(layout, std::move(terms));
}

std::vector<DissipationChannel> build_channels(const ScenarioConfig& cfg,
                                               const SpaceLayout& layout) {
  std::vector<DissipationChannel> channels;
  for (std::size_t i = 0; i < cfg.channels.size(); ++i) {
    Matrix op = pauli_string(cfg.channels[i].op, layout);
    op /= std::sqrt(op.squaredNorm());  // Hilbert-Schmidt normalization
    try {
      channels.push_back(
          DissipationChannel::constant(cfg.channels[i].rate, std::move(op)));
    } catch (const Error& e) {
      config_fail("channels[" + std::to_string(i) + "]", e.what());
    }
  }
  return channels;
}

// Gibbs product state with per-subsystem temperatures built from the
// strictly local Hamiltonian terms.
DensityMatrix build_gibbs_product(const HamiltonianSpec& h,
                                  const std::vector<double>& temperatures) {
  const SpaceLayout& layout = h.layout();
  Matrix product = Matrix::Identity(1, 1);
  for (int s = 0; s < layout.subsystem_count(); ++s) {
    const Index d = layout.subsystem_dims[s];
    double dim_rest = 1.0;
    for (int r = 0; r < layout.subsystem_count(); ++r) {
      if (r != s) dim_rest *= static_cast<double>(layout.subsystem_dims[r]);
    }
    const Matrix local_full = h.local_part(0.0, {s});
    const Matrix local =
        partial_trace(local_full, layout.subsystem_dims, {s}) / dim_rest;
    const DensityMatrix sub = gibbs_state(
        HamiltonianSpec::constant(SpaceLayout({d}), local), 0.0,
        temperatures[s]);
    product = tensor_product(product, sub.matrix());
  }
  return DensityMatrix(layout, std::move(product));
}

struct EngineTimeline {
  double contact, ramp, edge;
  double hot1_end() const { return contact; }
  double expand_end() const { return contact + ramp; }
  double cold_end() const { return expand_end() + contact; }
  double compress_end() const { return cold_end() + ramp; }
  double total() const { return compress_end() + contact; }
};

Generator build_engine_generator(const EngineParams& e) {
  const EngineTimeline tl{e.contact_time, e.ramp_time, e.edge_time};
  const SpaceLayout layout({2});

  auto omega = [e, tl](double t) {
    if (t <= tl.hot1_end()) return e.omega_hot;
    if (t < tl.expand_end()) {
      return e.omega_hot + (e.omega_cold - e.omega_hot) *
                               smoothstep01((t - tl.hot1_end()) / tl.ramp);
    }
    if (t <= tl.cold_end()) return e.omega_cold;
    if (t < tl.compress_end()) {
      return e.omega_cold + (e.omega_hot - e.omega_cold) *
                                smoothstep01((t - tl.cold_end()) / tl.ramp);
    }
    return e.omega_hot;
  };
  std::vector<HamiltonianTerm> terms;
  terms.push_back(
      {[omega](double t) { return 0.5 * omega(t); }, pauli_z(), {0}});
  HamiltonianSpec h(layout, std::move(terms));

  auto gamma_hot = [e, tl](double t) {
    return e.gamma * (smooth_window(t, 0.0, tl.hot1_end(), tl.edge) +
                      smooth_window(t, tl.compress_end(), tl.total(), tl.edge));
  };
  auto gamma_cold = [e, tl](double t) {
    return e.gamma * smooth_window(t, tl.expand_end(), tl.cold_end(), tl.edge);
  };
  const double boltzmann_hot = std::exp(-e.omega_hot / e.temperature_hot);
  const double boltzmann_cold = std::exp(-e.omega_cold / e.temperature_cold);

  // The contact windows never overlap, so both baths share one lowering and
  // one raising channel with gated rates, staying inside the d^2 - 1 cap.
  std::vector<DissipationChannel> channels;
  auto constant_op = [](const Matrix& m) {
    return [m](double) { return m; };
  };
  channels.emplace_back(
      [gamma_hot, gamma_cold](double t) { return gamma_hot(t) + gamma_cold(t); },
      constant_op(sigma_minus()));
  channels.emplace_back(
      [gamma_hot, gamma_cold, boltzmann_hot, boltzmann_cold](double t) {
        return gamma_hot(t) * boltzmann_hot + gamma_cold(t) * boltzmann_cold;
      },
      constant_op(sigma_plus()));
  return Generator(std::move(h), std::move(channels));
}

// --- emission ------------------------------------------------------------

void append_value(std::string& line, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  line += buf;
}

void append_value(std::string& line, const std::optional<double>& v) {
  if (v) append_value(line, *v);
}

class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) throw IoError("cannot open output file: " + path);
  }
  void row(const std::string& line) {
    out_ << line << '\n';
    if (!out_) throw IoError("write failed");
  }
  void close() {
    out_.close();
    if (!out_) throw IoError("close failed");
  }

 private:
  std::ofstream out_;
};

constexpr const char* kScalarHeader =
    "t,S,diS_dt,deS_dt,dQ_dt,dW_dt,E,T_gen,conv_ep_rate";
constexpr const char* kBipartiteHeader =
    ",S_A,S_B,S_AB,S_C,Q_A,Q_B,T_gen_A,T_gen_B";

std::string scalar_row(const ThermoSample& s) {
  std::string line;
  append_value(line, s.t);
  line += ',';
  append_value(line, s.entropy);
  line += ',';
  append_value(line, s.interior_rate);
  line += ',';
  append_value(line, s.exterior_rate);
  line += ',';
  append_value(line, s.heat_rate);
  line += ',';
  append_value(line, s.work_rate);
  line += ',';
  append_value(line, s.energy);
  line += ',';
  append_value(line, s.generalized_temperature);
  line += ',';
  append_value(line, s.conventional_ep_rate);
  return line;
}

}  // namespace

void emit_trajectory(const std::vector<ThermoSample>& samples,
                     const std::string& path) {
  if (samples.empty()) throw IoError("emit_trajectory: no samples");
  CsvWriter csv(path);
  csv.row(kScalarHeader);
  for (const auto& s : samples) csv.row(scalar_row(s));
  csv.close();
}

void emit_trajectory(const std::vector<ThermoSample>& samples,
                     const std::vector<BipartiteLedgerSample>& subsystem,
                     const std::string& path) {
  if (samples.empty()) throw IoError("emit_trajectory: no samples");
  if (samples.size() != subsystem.size()) {
    throw DimensionMismatch("emit_trajectory: sample lists differ in length");
  }
  CsvWriter csv(path);
  csv.row(std::string(kScalarHeader) + kBipartiteHeader);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    std::string line = scalar_row(samples[i]);
    const auto& b = subsystem[i];
    line += ',';
    append_value(line, b.s_a);
    line += ',';
    append_value(line, b.s_b);
    line += ',';
    append_value(line, b.s_ab);
    line += ',';
    append_value(line, b.s_c);
    line += ',';
    append_value(line, b.q_a);
    line += ',';
    append_value(line, b.q_b);
    line += ',';
    append_value(line, b.t_a);
    line += ',';
    append_value(line, b.t_b);
    csv.row(line);
  }
  csv.close();
}

namespace {

// --- per-kind runs -------------------------------------------------------

double closure_residual_max(const std::vector<ThermoSample>& samples) {
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < samples.size(); ++i) {
    const double fd = (samples[i + 1].entropy - samples[i - 1].entropy) /
                      (samples[i + 1].t - samples[i - 1].t);
    worst = std::max(
        worst,
        std::abs(fd - (samples[i].interior_rate + samples[i].exterior_rate)));
  }
  return worst;
}

void fill_quantum_summary(RunSummary& summary,
                          const std::vector<ThermoSample>& samples,
                          const Trajectory& traj) {
  double max_interior = 0.0, drift = 0.0;
  for (const auto& s : samples) {
    max_interior = std::max(max_interior, std::abs(s.interior_rate));
    drift = std::max(drift, std::abs(s.entropy - samples.front().entropy));
  }
  summary.max_abs_interior_rate = max_interior;
  summary.entropy_drift_max = drift;
  summary.ledger_closure_residual_max = closure_residual_max(samples);
  summary.steps = static_cast<long>(traj.size()) - 1;
  summary.cumulative_hermiticity_correction =
      traj.cumulative_hermiticity_correction;
  summary.cumulative_trace_correction = traj.cumulative_trace_correction;
  summary.min_eigenvalue_seen = traj.min_eigenvalue_seen;
}

bool generator_markovian(const Generator& gen, double t0, double t1) {
  for (int i = 0; i <= 32; ++i) {
    const double t = t0 + (t1 - t0) * static_cast<double>(i) / 32.0;
    for (const auto& channel : gen.channels()) {
      if (channel.rate(t) < 0.0) return false;
    }
  }
  return true;
}

void run_closed_bipartite_exchange(const ScenarioConfig& cfg,
                                   const std::string& csv_path,
                                   RunSummary& summary) {
  const SpaceLayout layout(cfg.layout_dims);
  Generator gen(build_hamiltonian(cfg, layout), {});
  const DensityMatrix rho0 =
      build_gibbs_product(gen.hamiltonian(), cfg.initial_temperatures);
  const Trajectory traj = propagate(gen, rho0, cfg.integration.t0,
                                    cfg.integration.t1, cfg.integration.h_step);

  LedgerOptions opt;
  const std::vector<ThermoSample> samples = thermo_ledger(gen, traj, opt);
  const std::vector<BipartiteLedgerSample> bip =
      bipartite_ledger(gen, traj, cfg.split, opt);

  fill_quantum_summary(summary, samples, traj);
  summary.markovian = true;
  double sum_rule = 0.0, eq12a = 0.0, unallocated = 0.0;
  bool any_eq12a = false;
  for (const auto& b : bip) {
    sum_rule = std::max(sum_rule, std::abs(b.dsa_dt + b.dsb_dt + b.dsc_dt));
    unallocated = std::max(unallocated, std::abs(b.unallocated_energy));
    if (b.eq12a_residual) {
      eq12a = std::max(eq12a, std::abs(*b.eq12a_residual));
      any_eq12a = true;
    }
  }
  summary.sum_rule_residual_max = sum_rule;
  summary.unallocated_energy_max = unallocated;
  if (any_eq12a) summary.eq12a_residual_max = eq12a;
  emit_trajectory(samples, bip, csv_path);
}

void run_qubit_thermal_bath(const ScenarioConfig& cfg,
                            const std::string& csv_path, RunSummary& summary) {
  const SpaceLayout layout(cfg.layout_dims);
  Generator gen(build_hamiltonian(cfg, layout), build_channels(cfg, layout));

  const Index dim = layout.total_dim();
  Matrix rho = Matrix::Zero(dim, dim);
  for (Index i = 0; i < dim; ++i) {
    rho(i, i) = cfg.initial_populations[static_cast<std::size_t>(i)];
  }
  const DensityMatrix rho0(layout, std::move(rho));

  const Trajectory traj = propagate(gen, rho0, cfg.integration.t0,
                                    cfg.integration.t1, cfg.integration.h_step);

  LedgerOptions opt;
  for (const auto& channel : cfg.channels) {
    if (channel.bath_temperature) {
      opt.bath_temperature = channel.bath_temperature;
      break;
    }
  }
  const std::vector<ThermoSample> samples = thermo_ledger(gen, traj, opt);
  fill_quantum_summary(summary, samples, traj);
  summary.markovian =
      generator_markovian(gen, cfg.integration.t0, cfg.integration.t1);
  if (opt.bath_temperature) {
    double lo = samples.front().conventional_ep_rate.value();
    double hi = lo;
    for (const auto& s : samples) {
      lo = std::min(lo, *s.conventional_ep_rate);
      hi = std::max(hi, *s.conventional_ep_rate);
    }
    summary.conventional_ep_min = lo;
    summary.conventional_ep_max = hi;
  }
  emit_trajectory(samples, csv_path);
}

void run_engine_cycle(const ScenarioConfig& cfg, const std::string& csv_path,
                      RunSummary& summary) {
  const EngineParams& e = cfg.engine;
  const EngineTimeline tl{e.contact_time, e.ramp_time, e.edge_time};
  Generator gen = build_engine_generator(e);

  // Start right after a compression stroke: cold-contact populations at the
  // hot gap, so the first contact absorbs heat.
  const double p_excited_cold =
      1.0 / (1.0 + std::exp(e.omega_cold / e.temperature_cold));
  Matrix rho = Matrix::Zero(2, 2);
  rho(0, 0) = p_excited_cold;
  rho(1, 1) = 1.0 - p_excited_cold;
  const DensityMatrix rho0(SpaceLayout({2}), std::move(rho));

  const Trajectory traj =
      propagate(gen, rho0, 0.0, tl.total(), cfg.integration.h_step);
  LedgerOptions opt;
  const std::vector<ThermoSample> samples = thermo_ledger(gen, traj, opt);
  fill_quantum_summary(summary, samples, traj);
  summary.markovian = true;

  // The two strokes tile one full cycle (expansion start to the end of the
  // second hot contact), so their heats and works close the first law.
  auto index_at = [&](double t) {
    return static_cast<std::size_t>(
        std::lround((t - traj.times.front()) / traj.h_step));
  };
  const std::vector<ThermoSample> cold_stroke(
      samples.begin() + index_at(tl.hot1_end()),
      samples.begin() + index_at(tl.cold_end()) + 1);
  const std::vector<ThermoSample> hot_stroke(
      samples.begin() + index_at(tl.cold_end()),
      samples.end());
  const EngineCycleReport report = engine_efficiency(hot_stroke, cold_stroke);
  summary.efficiency = report.efficiency;
  summary.efficiency_heat_ratio = report.efficiency_heat_ratio;
  summary.efficiency_discrepancy = report.form_discrepancy;
  summary.first_law_residual = report.first_law_residual;
  emit_trajectory(samples, csv_path);
}

void run_classical_comparator(const ScenarioConfig& cfg,
                              const std::string& csv_path,
                              RunSummary& summary) {
  const ClassicalParams& p = cfg.classical;
  ClassicalBody a = ClassicalBody::make(p.heat_capacity_a, p.temperature_a);
  ClassicalBody b = ClassicalBody::make(p.heat_capacity_b, p.temperature_b);
  const double t_final =
      (p.heat_capacity_a * p.temperature_a + p.heat_capacity_b * p.temperature_b) /
      (p.heat_capacity_a + p.heat_capacity_b);
  const double closed_form =
      p.heat_capacity_a * std::log(t_final / p.temperature_a) +
      p.heat_capacity_b * std::log(t_final / p.temperature_b);

  CsvWriter csv(csv_path);
  csv.row("step,T_A,T_B,dQ,deS_A,deS_B,diS_step,diS_cum");
  double cumulative = 0.0;
  double min_step = 0.0;
  bool first = true;
  long step = 0;
  const double gap_floor =
      p.dq / std::min(p.heat_capacity_a, p.heat_capacity_b);
  while (step < p.max_steps &&
         std::abs(a.bulk_temperature - b.bulk_temperature) >= gap_floor) {
    const ClassicalLedger ledger = exchange_step(a, b, p.dq);
    cumulative += ledger.delta_i_s_total;
    min_step = first ? ledger.delta_i_s_total
                     : std::min(min_step, ledger.delta_i_s_total);
    first = false;
    ++step;
    std::string line;
    append_value(line, static_cast<double>(step));
    line += ',';
    append_value(line, a.bulk_temperature);
    line += ',';
    append_value(line, b.bulk_temperature);
    line += ',';
    append_value(line, ledger.heat_transferred);
    line += ',';
    append_value(line, ledger.delta_e_s_a);
    line += ',';
    append_value(line, ledger.delta_e_s_b);
    line += ',';
    append_value(line, ledger.delta_i_s_total);
    line += ',';
    append_value(line, cumulative);
    csv.row(line);
  }
  csv.close();
  summary.steps = step;
  summary.classical_delta_i_s = cumulative;
  summary.classical_closed_form = closed_form;
  summary.classical_error = std::abs(cumulative - closed_form);
  summary.classical_min_step_production = first ? 0.0 : min_step;
}

void run_erasure(const ScenarioConfig& cfg, const std::string& csv_path,
                 RunSummary& summary) {
  const ErasureReport report = erasure_accounting(cfg.erasure);

  CsvWriter csv(csv_path);
  csv.row("species,p,work_per_particle");
  for (std::size_t i = 0; i < cfg.erasure.probabilities.size(); ++i) {
    std::string line;
    append_value(line, static_cast<double>(i));
    line += ',';
    append_value(line, cfg.erasure.probabilities[i]);
    line += ',';
    append_value(line, report.work_per_species[i]);
    csv.row(line);
  }
  csv.close();

  // Cross-check the operational entropy against the spectral formula on
  // the diagonal state with the same populations.
  const std::size_t m = cfg.erasure.probabilities.size();
  Matrix diag = Matrix::Zero(static_cast<Index>(m), static_cast<Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    diag(static_cast<Index>(i), static_cast<Index>(i)) =
        cfg.erasure.probabilities[i];
  }
  const double spectral =
      von_neumann_entropy(
          DensityMatrix(SpaceLayout({static_cast<Index>(m)}), diag))
          .nats();

  summary.erasure_recovered_entropy = report.recovered_entropy;
  summary.erasure_work_per_particle = report.work_per_particle;
  summary.erasure_entropy_cross_check =
      std::abs(report.recovered_entropy - spectral);
}

}  // namespace

std::string RunSummary::to_json_text() const {
  ordered_json j;
  j["kind"] = to_string(kind);
  j["seed"] = seed;
  j["wall_clock_seconds"] = wall_clock_seconds;
  auto put = [&j](const char* key, const auto& opt) {
    if (opt) j[key] = *opt;
  };
  put("max_abs_interior_rate", max_abs_interior_rate);
  put("ledger_closure_residual_max", ledger_closure_residual_max);
  put("entropy_drift_max", entropy_drift_max);
  put("sum_rule_residual_max", sum_rule_residual_max);
  put("eq12a_residual_max", eq12a_residual_max);
  put("unallocated_energy_max", unallocated_energy_max);
  put("conventional_ep_min", conventional_ep_min);
  put("conventional_ep_max", conventional_ep_max);
  put("efficiency", efficiency);
  put("efficiency_heat_ratio", efficiency_heat_ratio);
  put("efficiency_discrepancy", efficiency_discrepancy);
  put("first_law_residual", first_law_residual);
  put("cumulative_hermiticity_correction", cumulative_hermiticity_correction);
  put("cumulative_trace_correction", cumulative_trace_correction);
  put("min_eigenvalue_seen", min_eigenvalue_seen);
  put("steps", steps);
  put("markovian", markovian);
  put("classical_delta_i_s", classical_delta_i_s);
  put("classical_closed_form", classical_closed_form);
  put("classical_error", classical_error);
  put("classical_min_step_production", classical_min_step_production);
  put("erasure_recovered_entropy", erasure_recovered_entropy);
  put("erasure_work_per_particle", erasure_work_per_particle);
  put("erasure_entropy_cross_check", erasure_entropy_cross_check);
  j["outputs"] = {{"csv", csv_path}, {"summary", summary_path}};
  return j.dump(2) + "\n";
}

RunSummary run_scenario(const ScenarioConfig& config,
                        const std::string& out_dir) {
  namespace fs = std::filesystem;
  const auto start = std::chrono::steady_clock::now();

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory: " + out_dir);

  RunSummary summary;
  summary.kind = config.kind;
  summary.seed = config.seed;
  summary.csv_path = (fs::path(out_dir) / config.csv_name).string();
  summary.summary_path = (fs::path(out_dir) / config.summary_name).string();

  switch (config.kind) {
    case ScenarioKind::ClosedBipartiteExchange:
      run_closed_bipartite_exchange(config, summary.csv_path, summary);
      break;
    case ScenarioKind::QubitThermalBath:
      run_qubit_thermal_bath(config, summary.csv_path, summary);
      break;
    case ScenarioKind::EngineCycle:
      run_engine_cycle(config, summary.csv_path, summary);
      break;
    case ScenarioKind::ClassicalComparator:
      run_classical_comparator(config, summary.csv_path, summary);
      break;
    case ScenarioKind::Erasure:
      run_erasure(config, summary.csv_path, summary);
      break;
  }

  summary.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  std::ofstream out(summary.summary_path, std::ios::binary);
  if (!out) throw IoError("cannot open summary file: " + summary.summary_path);
  out << summary.to_json_text();
  if (!out) throw IoError("summary write failed");
  return summary;
}

ScenarioValidation validate_scenario(const ScenarioConfig& config) {
  ScenarioValidation v;
  std::ostringstream text;
  text << "kind: " << to_string(config.kind) << "\n";

  if (is_quantum(config.kind)) {
    const SpaceLayout layout(config.layout_dims);
    Generator gen = config.kind == ScenarioKind::EngineCycle
                        ? build_engine_generator(config.engine)
                        : Generator(build_hamiltonian(config, layout),
                                    build_channels(config, layout));
    v.has_channels = !gen.channels().empty();
    const double t_probe = config.integration.t0;
    if (v.has_channels) {
      std::vector<Matrix> ops;
      for (const auto& channel : gen.channels()) {
        ops.push_back(channel.op(t_probe));
      }
      v.basis = validate_dissipator_basis(ops, 1e-10);
      text << "dissipator basis: " << v.basis.describe() << "\n";
      const double t1 = config.kind == ScenarioKind::EngineCycle
                            ? EngineTimeline{config.engine.contact_time,
                                             config.engine.ramp_time,
                                             config.engine.edge_time}
                                  .total()
                            : config.integration.t1;
      v.markovian = generator_markovian(gen, config.integration.t0, t1);
      text << "rates: " << (v.markovian ? "nonnegative (Markovian regime)"
                                        : "negative at some sampled times "
                                          "(non-Markovian regime; positivity "
                                          "only monitored)")
           << "\n";
    } else {
      v.basis.pass = true;
      text << "closed evolution (no channels)\n";
    }
  } else {
    v.basis.pass = true;
    text << "non-quantum comparator scenario\n";
  }
  text << "config: ok\n";
  v.text = text.str();
  return v;
}

void list_scenarios(std::ostream& os) {
  os << "closed-bipartite-exchange  two coupled subsystems under closed "
        "evolution; subsystem and correlation entropy ledger\n"
     << "qubit-thermal-bath         qubit relaxing in a detailed-balance "
        "bath; conventional entropy-production column enabled\n"
     << "engine-cycle               two-bath qubit cycle with unitary "
        "(de)compression strokes; efficiency report\n"
     << "classical-comparator       finite-heat-capacity two-body "
        "equilibration with the classical entropy split\n"
     << "erasure                    ensemble erasure work accounting "
        "(separation, compression, reset)\n";
}

}  // namespace qtherm
