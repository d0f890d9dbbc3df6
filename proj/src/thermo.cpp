#include "qtherm/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qtherm {

namespace {

// 3-point moving average; two-point at the ends.
std::vector<double> smooth3(const std::vector<double>& r) {
  const std::size_t n = r.size();
  if (n < 3) return r;
  std::vector<double> out(n);
  out[0] = 0.5 * (r[0] + r[1]);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    out[i] = (r[i - 1] + r[i] + r[i + 1]) / 3.0;
  }
  out[n - 1] = 0.5 * (r[n - 2] + r[n - 1]);
  return out;
}

// Centered finite differences, one-sided at the ends. All series that feed
// the sum rule use this same stencil so their discretization errors cancel.
std::vector<double> finite_difference(const std::vector<double>& values,
                                      const std::vector<double>& times) {
  const std::size_t n = values.size();
  std::vector<double> out(n, 0.0);
  if (n < 2) return out;
  out[0] = (values[1] - values[0]) / (times[1] - times[0]);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    out[i] = (values[i + 1] - values[i - 1]) / (times[i + 1] - times[i - 1]);
  }
  out[n - 1] =
      (values[n - 1] - values[n - 2]) / (times[n - 1] - times[n - 2]);
  return out;
}

std::vector<double> cumulative_trapezoid(const std::vector<double>& rate,
                                         const std::vector<double>& times) {
  std::vector<double> out(rate.size(), 0.0);
  for (std::size_t i = 1; i < rate.size(); ++i) {
    out[i] = out[i - 1] +
             0.5 * (rate[i - 1] + rate[i]) * (times[i] - times[i - 1]);
  }
  return out;
}

double closure_tolerance(double h_step) {
  return std::max(1e-6, 10.0 * h_step * h_step);
}

}  // namespace

std::pair<double, double> entropy_rate_split(const Generator& gen, double t,
                                             const DensityMatrix& rho,
                                             double zero_clamp) {
  if (!(rho.layout() == gen.layout())) {
    throw DimensionMismatch("entropy_rate_split: layout mismatch");
  }
  const Matrix log_rho = log_psd(rho.matrix(), zero_clamp);
  const Matrix h = gen.hamiltonian().at(t);
  const double interior =
      (Complex(0.0, 1.0) * (commutator(h, rho.matrix()) * log_rho).trace())
          .real();
  const double exterior =
      -(dissipator(gen, t, rho.matrix()) * log_rho).trace().real();
  return {interior, exterior};
}

EnergyRates energy_ledger_rate(const Generator& gen, double t,
                               const DensityMatrix& rho, double hdot_fd_step) {
  if (!(rho.layout() == gen.layout())) {
    throw DimensionMismatch("energy_ledger_rate: layout mismatch");
  }
  const Matrix h = gen.hamiltonian().at(t);
  const Matrix hdot = gen.hamiltonian().time_derivative(t, hdot_fd_step);
  const Matrix rhodot = lindblad_rhs(gen, t, rho);
  EnergyRates rates;
  rates.heat_rate = (rhodot * h).trace().real();
  rates.work_rate = (rho.matrix() * hdot).trace().real();
  rates.energy_rate = rates.heat_rate + rates.work_rate;
  return rates;
}

double conventional_entropy_production_rate(const Generator& gen, double t,
                                            const DensityMatrix& rho,
                                            double bath_temperature,
                                            double zero_clamp) {
  if (!(bath_temperature > 0.0)) {
    throw NonPositiveTemperature(
        "conventional_entropy_production_rate: bath temperature must be "
        "positive");
  }
  const auto [interior, exterior] = entropy_rate_split(gen, t, rho, zero_clamp);
  const EnergyRates rates = energy_ledger_rate(gen, t, rho);
  return (interior + exterior) - rates.heat_rate / bath_temperature;
}

std::optional<double> generalized_temperature(double dS_dt, double dQ_dt,
                                              double rate_floor) {
  if (std::abs(dS_dt) < rate_floor) return std::nullopt;
  return dQ_dt / dS_dt;
}

std::vector<ThermoSample> thermo_ledger(const Generator& gen,
                                        const Trajectory& traj,
                                        const LedgerOptions& opt) {
  const std::size_t n = traj.size();
  std::vector<ThermoSample> samples(n);
  std::vector<double> entropy_rates(n), heat_rates(n);

  for (std::size_t i = 0; i < n; ++i) {
    ThermoSample& s = samples[i];
    s.t = traj.times[i];
    const DensityMatrix& rho = traj.states[i];
    s.entropy = von_neumann_entropy(rho, opt.zero_clamp).nats();
    const auto [interior, exterior] =
        entropy_rate_split(gen, s.t, rho, opt.zero_clamp);
    s.interior_rate = interior;
    s.exterior_rate = exterior;
    if (opt.verify_invariants &&
        std::abs(interior) > opt.interior_rate_bound) {
      std::ostringstream os;
      os << "thermo_ledger: interior entropy rate " << interior
         << " exceeds bound " << opt.interior_rate_bound << " at t = " << s.t;
      throw Error(os.str());
    }
    const EnergyRates rates =
        energy_ledger_rate(gen, s.t, rho, opt.hdot_fd_step);
    s.heat_rate = rates.heat_rate;
    s.work_rate = rates.work_rate;
    s.energy = (rho.matrix() * gen.hamiltonian().at(s.t)).trace().real();
    if (opt.bath_temperature) {
      s.conventional_ep_rate =
          (interior + exterior) - rates.heat_rate / *opt.bath_temperature;
    }
    entropy_rates[i] = interior + exterior;
    heat_rates[i] = rates.heat_rate;
  }

  const std::vector<double> s_rate_for_t =
      opt.smooth_temperature_rates ? smooth3(entropy_rates) : entropy_rates;
  const std::vector<double> q_rate_for_t =
      opt.smooth_temperature_rates ? smooth3(heat_rates) : heat_rates;
  for (std::size_t i = 0; i < n; ++i) {
    samples[i].generalized_temperature =
        generalized_temperature(s_rate_for_t[i], q_rate_for_t[i],
                                opt.rate_floor);
  }

  if (opt.verify_invariants && n >= 3) {
    const double tol = closure_tolerance(traj.h_step);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double fd = (samples[i + 1].entropy - samples[i - 1].entropy) /
                        (traj.times[i + 1] - traj.times[i - 1]);
      const double residual = std::abs(fd - entropy_rates[i]);
      if (residual > tol) {
        std::ostringstream os;
        os << "thermo_ledger: entropy ledger closure residual " << residual
           << " exceeds " << tol << " at t = " << samples[i].t;
        throw Error(os.str());
      }
    }
  }
  return samples;
}

std::vector<BipartiteLedgerSample> bipartite_ledger(
    const Generator& gen, const Trajectory& traj, const std::vector<int>& split,
    const LedgerOptions& opt) {
  const SpaceLayout& layout = gen.layout();
  if (layout.subsystem_count() < 2) {
    throw BadSplit("bipartite_ledger: layout has fewer than 2 subsystems");
  }
  const std::vector<int> rest =
      split_complement(split, layout.subsystem_count());
  const std::size_t n = traj.size();

  double dim_b = 1.0, dim_a = 1.0;
  for (int s : rest) dim_b *= static_cast<double>(layout.subsystem_dims[s]);
  for (int s : split) dim_a *= static_cast<double>(layout.subsystem_dims[s]);

  std::vector<BipartiteLedgerSample> samples(n);
  std::vector<double> sa(n), sb(n), sab(n), sc(n), qa_rate(n), qb_rate(n);

  for (std::size_t i = 0; i < n; ++i) {
    const double t = traj.times[i];
    const DensityMatrix& rho = traj.states[i];
    const DensityMatrix rho_a = rho.reduced(split);
    const DensityMatrix rho_b = rho.reduced(rest);
    sa[i] = von_neumann_entropy(rho_a, opt.zero_clamp).nats();
    sb[i] = von_neumann_entropy(rho_b, opt.zero_clamp).nats();
    sab[i] = von_neumann_entropy(rho, opt.zero_clamp).nats();
    sc[i] = sab[i] - sa[i] - sb[i];

    // Subsystem heat from the local Hamiltonian terms only. A term with
    // support inside A factorizes as (op_A x I_B), so tracing out B and
    // dividing by dim(B) recovers op_A on the reduced space.
    const Matrix rhodot = lindblad_rhs(gen, t, rho);
    const Matrix h_a_full = gen.hamiltonian().local_part(t, split);
    const Matrix h_b_full = gen.hamiltonian().local_part(t, rest);
    const Matrix rhodot_a =
        partial_trace(rhodot, layout.subsystem_dims, split);
    const Matrix rhodot_b = partial_trace(rhodot, layout.subsystem_dims, rest);
    const Matrix h_a =
        partial_trace(h_a_full, layout.subsystem_dims, split) / dim_b;
    const Matrix h_b =
        partial_trace(h_b_full, layout.subsystem_dims, rest) / dim_a;
    qa_rate[i] = (rhodot_a * h_a).trace().real();
    qb_rate[i] = (rhodot_b * h_b).trace().real();

    const Matrix h_full = gen.hamiltonian().at(t);
    samples[i].unallocated_energy =
        (rho.matrix() * (h_full - h_a_full - h_b_full)).trace().real();
    samples[i].t = t;
    samples[i].s_a = sa[i];
    samples[i].s_b = sb[i];
    samples[i].s_ab = sab[i];
    samples[i].s_c = sc[i];
    samples[i].heat_rate_a = qa_rate[i];
    samples[i].heat_rate_b = qb_rate[i];
  }

  const std::vector<double> dsa = finite_difference(sa, traj.times);
  const std::vector<double> dsb = finite_difference(sb, traj.times);
  const std::vector<double> dsc = finite_difference(sc, traj.times);
  const std::vector<double> q_a = cumulative_trapezoid(qa_rate, traj.times);
  const std::vector<double> q_b = cumulative_trapezoid(qb_rate, traj.times);

  const std::vector<double> dsa_s =
      opt.smooth_temperature_rates ? smooth3(dsa) : dsa;
  const std::vector<double> dsb_s =
      opt.smooth_temperature_rates ? smooth3(dsb) : dsb;
  const std::vector<double> qa_s =
      opt.smooth_temperature_rates ? smooth3(qa_rate) : qa_rate;
  const std::vector<double> qb_s =
      opt.smooth_temperature_rates ? smooth3(qb_rate) : qb_rate;

  for (std::size_t i = 0; i < n; ++i) {
    BipartiteLedgerSample& s = samples[i];
    s.dsa_dt = dsa[i];
    s.dsb_dt = dsb[i];
    s.dsc_dt = dsc[i];
    s.q_a = q_a[i];
    s.q_b = q_b[i];
    s.t_a = generalized_temperature(dsa_s[i], qa_s[i], opt.rate_floor);
    s.t_b = generalized_temperature(dsb_s[i], qb_s[i], opt.rate_floor);
    if (s.t_a && s.t_b) {
      s.eq12a_residual =
          s.dsc_dt + qa_rate[i] / *s.t_a + qb_rate[i] / *s.t_b;
    }
  }

  if (opt.verify_invariants && gen.is_closed() && n >= 2) {
    const double tol = closure_tolerance(traj.h_step);
    for (std::size_t i = 0; i < n; ++i) {
      const double residual =
          std::abs(samples[i].dsa_dt + samples[i].dsb_dt + samples[i].dsc_dt);
      if (residual > tol) {
        std::ostringstream os;
        os << "bipartite_ledger: closed-system sum rule residual " << residual
           << " exceeds " << tol << " at t = " << samples[i].t;
        throw Error(os.str());
      }
    }
  }
  return samples;
}

namespace {

double trapezoid_rate(const std::vector<ThermoSample>& stroke,
                      double ThermoSample::*member) {
  double acc = 0.0;
  for (std::size_t i = 1; i < stroke.size(); ++i) {
    acc += 0.5 * (stroke[i - 1].*member + stroke[i].*member) *
           (stroke[i].t - stroke[i - 1].t);
  }
  return acc;
}

// Riemann-Stieltjes sum of T dS over segments with defined temperatures.
// Segments where T(t) is undefined carry |dS/dt| below the rate floor, so
// skipping them loses only floor-level contributions.
double stieltjes_t_ds(const std::vector<ThermoSample>& stroke) {
  double acc = 0.0;
  for (std::size_t i = 1; i < stroke.size(); ++i) {
    const auto& lo = stroke[i - 1];
    const auto& hi = stroke[i];
    if (lo.generalized_temperature && hi.generalized_temperature) {
      acc += 0.5 *
             (*lo.generalized_temperature + *hi.generalized_temperature) *
             (hi.entropy - lo.entropy);
    }
  }
  return acc;
}

}  // namespace

EngineCycleReport engine_efficiency(const std::vector<ThermoSample>& hot_stroke,
                                    const std::vector<ThermoSample>& cold_stroke) {
  if (hot_stroke.size() < 2 || cold_stroke.size() < 2) {
    throw ConfigError("engine_efficiency: each stroke needs >= 2 samples");
  }
  EngineCycleReport report;
  report.heat_hot = trapezoid_rate(hot_stroke, &ThermoSample::heat_rate);
  report.heat_cold = trapezoid_rate(cold_stroke, &ThermoSample::heat_rate);
  report.net_work = trapezoid_rate(hot_stroke, &ThermoSample::work_rate) +
                    trapezoid_rate(cold_stroke, &ThermoSample::work_rate);
  if (!(report.heat_hot > 0.0)) {
    std::ostringstream os;
    os << "engine_efficiency: hot stroke heat " << report.heat_hot
       << " is not positive";
    throw NonPositiveHotHeat(os.str());
  }
  report.tds_hot = stieltjes_t_ds(hot_stroke);
  report.tds_cold = stieltjes_t_ds(cold_stroke);
  report.efficiency = 1.0 - std::abs(report.tds_cold) / report.tds_hot;
  report.efficiency_heat_ratio =
      1.0 - std::abs(report.heat_cold) / report.heat_hot;
  report.form_discrepancy =
      std::abs(report.efficiency - report.efficiency_heat_ratio);
  report.first_law_residual =
      report.heat_hot + report.heat_cold + report.net_work;
  return report;
}

}  // namespace qtherm
