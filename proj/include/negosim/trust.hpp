#pragma once

#include "negosim/types.hpp"

#include <utility>
#include <vector>

namespace negosim {

// Pseudo-count table: P(action | type) = count / row sum.
struct LikelihoodTable {
  // [type][action], indexed by the enum values.
  std::array<std::array<double, 3>, 2> counts;

  static LikelihoodTable defaults();
  double probability(HvAction a, DriverType t) const;
};

struct TrustObservation {
  int t = 0;           // step index
  HvAction label = HvAction::Maintain;
  double raw_accel = 0.0;  // m/s^2 as observed
};

struct TrustBelief {
  double tau = 0.5;        // P(follower is cooperative)
  double tau_initial = 0.5;
  LikelihoodTable table = LikelihoodTable::defaults();
  bool update_counts = true;  // responsibility-weighted pseudo-count updates
  std::vector<TrustObservation> observed;
};

TrustBelief make_belief(double tau0, const LikelihoodTable& table,
                        bool update_counts = true);

// Threshold classification of one longitudinal acceleration. Boundary values
// fall to Maintain. Non-finite input throws.
HvAction classify_action(double accel, double accel_threshold = 1.0);

// Recency-weighted deceleration share: each step t in [.., T] carries weight
// exp(-(T - t)); the driver is Cooperative when the weighted share of
// Decelerate steps reaches `rho_c`.
double deceleration_ratio(const std::vector<std::pair<int, HvAction>>& actions,
                          int T);
DriverType classify_driver_type(
    const std::vector<std::pair<int, HvAction>>& actions, int T,
    double rho_c = 0.5);

// Posterior over the two types after one observation, evaluated with the
// likelihoods as they stand before the observation is folded into the counts.
// tau exactly 0 or 1 is absorbing.
void update_trust(TrustBelief& belief, int t, HvAction label, double raw_accel);

// Fraction of drivers labeled conservative; used as the initial tau.
double estimate_prior(const std::vector<DriverType>& labels);

}  // namespace negosim
