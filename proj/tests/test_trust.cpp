#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "negosim/trust.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

using namespace negosim;

namespace {

// Table with P(Dec | coop) = 0.6 and P(Dec | noncoop) = 0.2.
LikelihoodTable sharp_table() {
  LikelihoodTable t;
  t.counts[0] = {2.0, 2.0, 6.0};  // cooperative: maintain, accelerate, decelerate
  t.counts[1] = {3.0, 5.0, 2.0};  // non-cooperative
  return t;
}

}  // namespace

TEST_CASE("default likelihood seeds") {
  const LikelihoodTable t = LikelihoodTable::defaults();
  CHECK(t.probability(HvAction::Decelerate, DriverType::Cooperative) ==
        doctest::Approx(0.4).epsilon(1e-12));
  CHECK(t.probability(HvAction::Accelerate, DriverType::Cooperative) ==
        doctest::Approx(0.2).epsilon(1e-12));
  CHECK(t.probability(HvAction::Maintain, DriverType::Cooperative) ==
        doctest::Approx(0.4).epsilon(1e-12));
  CHECK(t.probability(HvAction::Decelerate, DriverType::NonCooperative) ==
        doctest::Approx(0.1).epsilon(1e-12));
  CHECK(t.probability(HvAction::Accelerate, DriverType::NonCooperative) ==
        doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("action classification with a strict threshold") {
  CHECK(classify_action(-1.2) == HvAction::Decelerate);
  CHECK(classify_action(1.2) == HvAction::Accelerate);
  CHECK(classify_action(0.0) == HvAction::Maintain);
  // Boundary values are not beyond the threshold.
  CHECK(classify_action(-1.0) == HvAction::Maintain);
  CHECK(classify_action(1.0) == HvAction::Maintain);
  CHECK(classify_action(-1.0000001) == HvAction::Decelerate);
  CHECK(classify_action(-0.4, 0.3) == HvAction::Decelerate);

  CHECK_THROWS_AS(classify_action(std::numeric_limits<double>::quiet_NaN()),
                  std::invalid_argument);
  CHECK_THROWS_AS(classify_action(std::numeric_limits<double>::infinity()),
                  std::invalid_argument);
  CHECK_THROWS_AS(classify_action(0.5, 0.0), std::invalid_argument);
}

TEST_CASE("single posterior step against the closed form") {
  TrustBelief b = make_belief(0.228, sharp_table(), false);
  update_trust(b, 0, HvAction::Decelerate, -2.0);
  // 0.228 * 0.6 / (0.228 * 0.6 + 0.772 * 0.2)
  CHECK(b.tau == doctest::Approx(0.1368 / 0.2912).epsilon(1e-12));
  CHECK(b.observed.size() == 1);
  CHECK(b.observed[0].raw_accel == -2.0);
}

TEST_CASE("an accelerate observation lowers trust") {
  TrustBelief b = make_belief(0.8, LikelihoodTable::defaults(), false);
  update_trust(b, 0, HvAction::Accelerate, 1.4);
  CHECK(b.tau == doctest::Approx(0.8 * 0.2 / (0.8 * 0.2 + 0.2 * 0.5)));
  CHECK(b.tau < 0.8);
}

TEST_CASE("certainty is absorbing") {
  TrustBelief zero = make_belief(0.0, sharp_table(), true);
  update_trust(zero, 0, HvAction::Decelerate, -2.0);
  update_trust(zero, 1, HvAction::Decelerate, -2.0);
  CHECK(zero.tau == 0.0);

  TrustBelief one = make_belief(1.0, sharp_table(), true);
  update_trust(one, 0, HvAction::Accelerate, 2.0);
  CHECK(one.tau == 1.0);
}

TEST_CASE("zero likelihood under both types keeps the prior") {
  LikelihoodTable t;
  t.counts[0] = {4.0, 0.0, 6.0};
  t.counts[1] = {3.0, 0.0, 2.0};
  TrustBelief b = make_belief(0.37, t, false);
  update_trust(b, 0, HvAction::Accelerate, 1.5);
  CHECK(b.tau == 0.37);
}

TEST_CASE("responsibility-weighted count update") {
  TrustBelief b = make_belief(0.5, sharp_table(), true);
  update_trust(b, 0, HvAction::Decelerate, -2.0);
  const double posterior = 0.5 * 0.6 / (0.5 * 0.6 + 0.5 * 0.2);
  CHECK(b.tau == doctest::Approx(posterior).epsilon(1e-12));
  const int dec = static_cast<int>(HvAction::Decelerate);
  CHECK(b.table.counts[0][dec] == doctest::Approx(6.0 + posterior));
  CHECK(b.table.counts[1][dec] == doctest::Approx(2.0 + (1.0 - posterior)));
  // Other cells untouched.
  CHECK(b.table.counts[0][0] == 2.0);
  CHECK(b.table.counts[1][1] == 5.0);
}

TEST_CASE("counts frozen when updates are disabled") {
  TrustBelief b = make_belief(0.5, sharp_table(), false);
  update_trust(b, 0, HvAction::Decelerate, -2.0);
  CHECK(b.table.counts[0][2] == 6.0);
  CHECK(b.table.counts[1][2] == 2.0);
}

TEST_CASE("likelihoods are read before the observation enters the counts") {
  // Two identical observations: the second posterior must be computed from
  // counts already containing the first observation's responsibility.
  TrustBelief b = make_belief(0.5, sharp_table(), true);
  update_trust(b, 0, HvAction::Decelerate, -2.0);
  update_trust(b, 1, HvAction::Decelerate, -2.0);

  long double tau = 0.5L;
  long double coop[3] = {2.0L, 2.0L, 6.0L};
  long double non[3] = {3.0L, 5.0L, 2.0L};
  for (int i = 0; i < 2; ++i) {
    const long double pc = coop[2] / (coop[0] + coop[1] + coop[2]);
    const long double pn = non[2] / (non[0] + non[1] + non[2]);
    const long double post = tau * pc / (tau * pc + (1.0L - tau) * pn);
    coop[2] += post;
    non[2] += 1.0L - post;
    tau = post;
  }
  CHECK(b.tau == doctest::Approx(static_cast<double>(tau)).epsilon(1e-14));
}

TEST_CASE("belief construction validates its inputs") {
  CHECK_THROWS_AS(make_belief(-0.1, sharp_table(), true),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_belief(1.1, sharp_table(), true), std::invalid_argument);
  LikelihoodTable bad = sharp_table();
  bad.counts[0][1] = -1.0;
  CHECK_THROWS_AS(make_belief(0.5, bad, true), std::invalid_argument);
  LikelihoodTable empty_row = sharp_table();
  empty_row.counts[1] = {0.0, 0.0, 0.0};
  TrustBelief b = make_belief(0.5, empty_row, false);
  CHECK_THROWS_AS(update_trust(b, 0, HvAction::Maintain, 0.0),
                  std::invalid_argument);
}

TEST_CASE("recency-weighted deceleration share, worked example") {
  // Steps 1..3, braking only at the last one:
  // r = 1 / (1 + e^-1 + e^-2).
  std::vector<std::pair<int, HvAction>> obs = {
      {1, HvAction::Maintain}, {2, HvAction::Maintain}, {3, HvAction::Decelerate}};
  const double r = deceleration_ratio(obs, 3);
  const double expected = 1.0 / (1.0 + std::exp(-1.0) + std::exp(-2.0));
  CHECK(r == doctest::Approx(expected).epsilon(1e-12));
  CHECK(r == doctest::Approx(0.6652).epsilon(1e-4));
  CHECK(classify_driver_type(obs, 3) == DriverType::Cooperative);

  // Same mix with the braking step earliest: recency flips the label.
  std::vector<std::pair<int, HvAction>> early = {
      {1, HvAction::Decelerate}, {2, HvAction::Maintain}, {3, HvAction::Maintain}};
  CHECK(classify_driver_type(early, 3) == DriverType::NonCooperative);
}

TEST_CASE("deceleration share edge cases") {
  std::vector<std::pair<int, HvAction>> none = {{1, HvAction::Maintain},
                                                {2, HvAction::Accelerate}};
  CHECK(deceleration_ratio(none, 2) == 0.0);
  CHECK(classify_driver_type(none, 2) == DriverType::NonCooperative);

  std::vector<std::pair<int, HvAction>> all = {{1, HvAction::Decelerate}};
  CHECK(deceleration_ratio(all, 1) == 1.0);

  CHECK_THROWS_AS(deceleration_ratio({}, 3), std::invalid_argument);
  std::vector<std::pair<int, HvAction>> future = {{4, HvAction::Maintain}};
  CHECK_THROWS_AS(deceleration_ratio(future, 3), std::invalid_argument);
}

TEST_CASE("classification threshold is inclusive") {
  // Weighted share exactly at rho_c counts as cooperative.
  std::vector<std::pair<int, HvAction>> obs = {{3, HvAction::Decelerate},
                                               {3, HvAction::Maintain}};
  CHECK(deceleration_ratio(obs, 3) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(classify_driver_type(obs, 3, 0.5) == DriverType::Cooperative);
}

TEST_CASE("prior estimation from labeled drivers") {
  CHECK(estimate_prior({DriverType::Cooperative, DriverType::NonCooperative,
                        DriverType::Cooperative, DriverType::Cooperative}) ==
        doctest::Approx(0.75).epsilon(1e-12));
  CHECK_THROWS_AS(estimate_prior({}), std::invalid_argument);
}
