#include "qtherm/erasure.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace qtherm {

void ErasureSpec::validate(double norm_tol) const {
  if (probabilities.empty()) {
    throw BadDistribution("ErasureSpec: empty distribution");
  }
  double sum = 0.0;
  for (double p : probabilities) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw BadDistribution("ErasureSpec: probabilities must be >= 0");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > norm_tol) {
    std::ostringstream os;
    os << "ErasureSpec: probabilities sum to " << sum;
    throw BadDistribution(os.str());
  }
  if (n_atoms <= 0) throw BadDistribution("ErasureSpec: n_atoms must be > 0");
  if (!(temperature > 0.0)) {
    throw NonPositiveTemperature("ErasureSpec: temperature must be positive");
  }
  if (!(volume > 0.0)) throw BadDistribution("ErasureSpec: volume must be > 0");
}

ErasureReport erasure_accounting(const ErasureSpec& spec) {
  spec.validate();
  ErasureReport report;
  report.work_per_species.reserve(spec.probabilities.size());
  for (double p : spec.probabilities) {
    // 0 log 0 -> 0: an absent species needs no compression.
    const double w = (p > 0.0) ? p * std::log(p) : 0.0;
    report.work_per_species.push_back(w);
    report.work_per_particle += w;
  }
  report.entropy_change_per_particle = report.work_per_particle;
  report.recovered_entropy = -report.entropy_change_per_particle;
  report.work_total =
      static_cast<double>(spec.n_atoms) * report.work_per_particle;
  report.entropy_change_total =
      static_cast<double>(spec.n_atoms) * report.entropy_change_per_particle;
  return report;
}

}  // namespace qtherm
