#include "negosim/trust.hpp"

#include <cmath>
#include <stdexcept>

namespace negosim {

LikelihoodTable LikelihoodTable::defaults() {
  LikelihoodTable t;
  auto& coop = t.counts[static_cast<int>(DriverType::Cooperative)];
  auto& non = t.counts[static_cast<int>(DriverType::NonCooperative)];
  coop[static_cast<int>(HvAction::Decelerate)] = 4.0;
  coop[static_cast<int>(HvAction::Maintain)] = 4.0;
  coop[static_cast<int>(HvAction::Accelerate)] = 2.0;
  non[static_cast<int>(HvAction::Decelerate)] = 1.0;
  non[static_cast<int>(HvAction::Maintain)] = 4.0;
  non[static_cast<int>(HvAction::Accelerate)] = 5.0;
  return t;
}

double LikelihoodTable::probability(HvAction a, DriverType t) const {
  const auto& row = counts[static_cast<int>(t)];
  const double total = row[0] + row[1] + row[2];
  if (!(total > 0.0))
    throw std::invalid_argument("likelihood table: empty type row");
  return row[static_cast<int>(a)] / total;
}

TrustBelief make_belief(double tau0, const LikelihoodTable& table,
                        bool update_counts) {
  if (!(tau0 >= 0.0 && tau0 <= 1.0))
    throw std::invalid_argument("trust: tau0 outside [0, 1]");
  for (const auto& row : table.counts)
    for (double c : row)
      if (!(c >= 0.0) || !std::isfinite(c))
        throw std::invalid_argument("trust: negative or non-finite count");
  TrustBelief b;
  b.tau = tau0;
  b.tau_initial = tau0;
  b.table = table;
  b.update_counts = update_counts;
  return b;
}

HvAction classify_action(double accel, double accel_threshold) {
  if (!std::isfinite(accel))
    throw std::invalid_argument("classify_action: non-finite acceleration");
  if (!(accel_threshold > 0.0))
    throw std::invalid_argument("classify_action: threshold must be positive");
  if (accel < -accel_threshold) return HvAction::Decelerate;
  if (accel > accel_threshold) return HvAction::Accelerate;
  return HvAction::Maintain;
}

double deceleration_ratio(const std::vector<std::pair<int, HvAction>>& actions,
                          int T) {
  if (actions.empty())
    throw std::invalid_argument("deceleration_ratio: empty action sequence");
  double num = 0.0;
  double den = 0.0;
  for (const auto& [t, a] : actions) {
    if (t > T)
      throw std::invalid_argument(
          "deceleration_ratio: step index past the final index");
    const double w = std::exp(-static_cast<double>(T - t));
    den += w;
    if (a == HvAction::Decelerate) num += w;
  }
  return num / den;
}

DriverType classify_driver_type(
    const std::vector<std::pair<int, HvAction>>& actions, int T,
    double rho_c) {
  return deceleration_ratio(actions, T) >= rho_c ? DriverType::Cooperative
                                                 : DriverType::NonCooperative;
}

void update_trust(TrustBelief& belief, int t, HvAction label,
                  double raw_accel) {
  // Likelihoods are taken before this observation touches the counts.
  const double p_c = belief.table.probability(label, DriverType::Cooperative);
  const double p_n =
      belief.table.probability(label, DriverType::NonCooperative);

  const double tau = belief.tau;
  double posterior = tau;
  if (tau > 0.0 && tau < 1.0) {
    const double num = tau * p_c;
    const double den = num + (1.0 - tau) * p_n;
    // Both likelihoods zero would divide 0/0; keep the prior in that case.
    if (den > 0.0) posterior = num / den;
  }
  belief.tau = posterior;
  belief.observed.push_back({t, label, raw_accel});

  if (belief.update_counts) {
    // The observation is split between the type rows by the posterior
    // responsibility it earned.
    auto& coop = belief.table.counts[static_cast<int>(DriverType::Cooperative)];
    auto& non =
        belief.table.counts[static_cast<int>(DriverType::NonCooperative)];
    coop[static_cast<int>(label)] += posterior;
    non[static_cast<int>(label)] += 1.0 - posterior;
  }
}

double estimate_prior(const std::vector<DriverType>& labels) {
  if (labels.empty())
    throw std::invalid_argument("estimate_prior: no labeled drivers");
  int conservative = 0;
  for (DriverType t : labels)
    if (t == DriverType::Cooperative) ++conservative;
  return static_cast<double>(conservative) / static_cast<double>(labels.size());
}

}  // namespace negosim
