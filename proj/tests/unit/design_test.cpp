#include "netcs/design.hpp"
#include "netcs/errors.hpp"
#include "netcs/network_model.hpp"
#include "netcs/recovery.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace netcs;

namespace {

// Appends a single-input experiment and refreshes certificates.
void apply(DesignState& state, const Matrix& transfer, std::vector<int> inputs) {
  const ExperimentPlan plan = ExperimentPlan::steps(std::move(inputs));
  state.data.append(steady_response(transfer, plan), plan);
  for (int i : plan.inputs) ++state.usage[i];
  refresh_certificates(state);
}

}  // namespace

TEST(ChooseRandom, FullSetAndErrors) {
  Rng rng(1);
  EXPECT_EQ(choose_random(5, 5, rng), (std::vector<int>{0, 1, 2, 3, 4}));
  EXPECT_THROW(choose_random(5, 0, rng), ParameterError);
  EXPECT_THROW(choose_random(5, 6, rng), ParameterError);
}

TEST(ChooseRandom, Reproducible) {
  Rng a(2024), b(2024);
  for (int t = 0; t < 10; ++t) {
    const auto x = choose_random(20, 4, a);
    EXPECT_EQ(x, choose_random(20, 4, b));
    EXPECT_EQ(x.size(), 4u);
    EXPECT_EQ(std::set<int>(x.begin(), x.end()).size(), 4u);
  }
}

TEST(ChooseRandom, CoversEveryIndexUniformly) {
  Rng rng(3);
  std::vector<int> counts(10, 0);
  const int draws = 20000;
  for (int t = 0; t < draws; ++t)
    for (int i : choose_random(10, 3, rng)) ++counts[i];
  for (int c : counts) EXPECT_NEAR(c, draws * 0.3, draws * 0.3 * 0.05);
}

TEST(ChooseBiased, UniformWhenUsageIsEqual) {
  Rng rng(4);
  const int p = 10;
  const int draws = 10000;
  std::vector<int> counts(p, 0);
  const std::vector<int> usage(p, 3);
  for (int t = 0; t < draws; ++t) ++counts[choose_biased(usage, 1, rng).at(0)];
  double chi2 = 0.0;
  const double expected = static_cast<double>(draws) / p;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  EXPECT_LT(chi2, 21.666);  // chi-square critical value, 9 dof, p = 0.01
}

TEST(ChooseBiased, FavoursTheLeastUsed) {
  Rng rng(5);
  const int p = 10;
  std::vector<int> usage(p, 100);
  usage[0] = 0;
  std::vector<int> counts(p, 0);
  for (int t = 0; t < 1000; ++t) ++counts[choose_biased(usage, 1, rng).at(0)];
  EXPECT_EQ(std::max_element(counts.begin(), counts.end()) - counts.begin(), 0);
  const double expected = 1.0 / (1.0 + (p - 1) / 101.0);
  EXPECT_NEAR(counts[0] / 1000.0, expected, 0.05);
}

TEST(ChooseBiased, FullSetAndErrors) {
  Rng rng(6);
  EXPECT_EQ(choose_biased({5, 0, 9}, 3, rng), (std::vector<int>{0, 1, 2}));
  EXPECT_THROW(choose_biased({0, 0}, 3, rng), ParameterError);
}

TEST(ChooseTargeted, RingPicksAnUnperturbedState) {
  const Network net = ring_network(6);
  const Matrix transfer = steady_transfer(net);
  DesignState state = start_design(net, Strategy::Targeted, 1, 1, 7);
  for (int s = 0; s < 3; ++s) apply(state, transfer, {s});
  ASSERT_FALSE(state.deficient.empty());
  for (const auto& set : state.deficient)
    EXPECT_TRUE(std::any_of(set.begin(), set.end(), [](int s) { return s >= 3; }));
  Rng rng(8);
  const auto pick = choose_targeted(state, rng);
  ASSERT_EQ(pick.size(), 1u);
  EXPECT_GE(pick[0], 3);
}

TEST(ChooseTargeted, TieGoesToTheLowerIndex) {
  const Network net = ring_network(6);
  DesignState state = start_design(net, Strategy::Targeted, 1, 1, 9);
  apply(state, steady_transfer(net), {0});
  state.usage = {1, 0, 0, 0, 0, 0};
  state.deficient = {{5, 3}};
  Rng rng(10);
  EXPECT_EQ(choose_targeted(state, rng), (std::vector<int>{3}));
  state.usage[3] = 2;
  EXPECT_EQ(choose_targeted(state, rng), (std::vector<int>{5}));
}

TEST(ChooseTargeted, FallsBackToBiasedWithoutTargets) {
  const Network net = random_network(8, 2, 0.5, 11);
  DesignState state = start_design(net, Strategy::Targeted, 3, 2, 12);
  apply(state, steady_transfer(net), {0, 1});
  state.deficient.clear();
  Rng a(13), b(13);
  EXPECT_EQ(choose_targeted(state, a), choose_biased(state.usage, 3, b));
}

TEST(ChooseTargeted, FirstRoundIsRandom) {
  const Network net = random_network(8, 2, 0.5, 14);
  const DesignState state = start_design(net, Strategy::Targeted, 3, 2, 15);
  Rng a(16), b(16);
  EXPECT_EQ(choose_targeted(state, a), choose_random(8, 3, b));
}

TEST(RunUntilUnique, RingNeedsEveryExperimentWithSingleInputs) {
  for (Strategy s : {Strategy::Random, Strategy::Biased, Strategy::Targeted}) {
    const DesignOutcome out = run_until_unique(ring_network(6), s, 1, 1, 48, 17);
    EXPECT_TRUE(out.unique) << to_string(s);
    EXPECT_EQ(out.m_required, 6) << to_string(s);
  }
}

TEST(RunUntilUnique, ManyInputsReachTheFloor) {
  const Network net = random_network(20, 2, 0.5, 18);
  const DesignOutcome out = run_until_unique(net, Strategy::Targeted, 15, 2, 20, 19);
  EXPECT_TRUE(out.unique);
  EXPECT_EQ(out.m_required, 5);
}

TEST(RunUntilUnique, BudgetExhausted) {
  const DesignOutcome out = run_until_unique(ring_network(5), Strategy::Random, 1, 1, 1, 20);
  EXPECT_FALSE(out.unique);
  EXPECT_EQ(out.m_required, 1);
  EXPECT_THROW(run_until_unique(ring_network(5), Strategy::Random, 1, 1, 0, 20), ParameterError);
}

TEST(RunUntilUnique, SingleInputsAlwaysNeedAllStates) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Network net = random_network(8, 2, 0.5, 100 + seed);
    for (Strategy s : {Strategy::Random, Strategy::Biased, Strategy::Targeted}) {
      const DesignOutcome out = run_until_unique(net, s, 1, 2, 64, seed);
      EXPECT_TRUE(out.unique);
      EXPECT_EQ(out.m_required, 8) << to_string(s) << " seed " << seed;
    }
  }
}

TEST(RunUntilUnique, TerminalCertificatesHoldIndependently) {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const Network net = random_network(10, 2, 0.5, 200 + seed);
    const Strategy s = static_cast<Strategy>(seed % 3);
    const DesignOutcome out = run_until_unique(net, s, 2 + static_cast<int>(seed % 6), 2, 40, seed);
    ASSERT_TRUE(out.unique);
    EXPECT_GE(out.m_required, 5);
    for (int i = 0; i < 10; ++i) {
      const RowSystem sys = assemble_row_system(out.final_state.data, i);
      EXPECT_TRUE(check_uniqueness(sys.A1, sys.A2, 2).unique()) << "seed " << seed << " row " << i;
    }
  }
}

TEST(RunUntilUnique, StateInvariants) {
  const Network net = random_network(10, 2, 0.5, 300);
  for (Strategy s : {Strategy::Random, Strategy::Biased, Strategy::Targeted}) {
    const DesignOutcome out = run_until_unique(net, s, 4, 2, 30, 301);
    const DesignState& st = out.final_state;
    EXPECT_EQ(static_cast<int>(st.history.size()), st.m());
    for (const auto& round : st.history) {
      EXPECT_EQ(round.inputs.size(), 4u);
      EXPECT_EQ(std::set<int>(round.inputs.begin(), round.inputs.end()).size(), 4u);
      EXPECT_EQ(round.magnitudes.size(), 4u);
      for (double m : round.magnitudes) {
        EXPECT_GE(m, 0.5);
        EXPECT_LE(m, 1.5);
      }
    }
    for (int i = 0; i < 10; ++i) {
      int support = 0;
      for (int j = 0; j < st.m(); ++j) support += st.data.U(i, j) != 0.0 ? 1 : 0;
      EXPECT_EQ(st.usage[i], support);
    }
    std::set<std::vector<int>> distinct;
    for (const auto& round : st.history) distinct.insert(round.inputs);
    EXPECT_EQ(distinct.size(), st.history.size());
  }
}

TEST(RunUntilUnique, Deterministic) {
  const Network net = random_network(12, 2, 0.5, 400);
  for (Strategy s : {Strategy::Random, Strategy::Biased, Strategy::Targeted}) {
    const DesignOutcome a = run_until_unique(net, s, 3, 2, 36, 401);
    const DesignOutcome b = run_until_unique(net, s, 3, 2, 36, 401);
    ASSERT_EQ(a.final_state.history.size(), b.final_state.history.size());
    for (size_t r = 0; r < a.final_state.history.size(); ++r) {
      EXPECT_EQ(a.final_state.history[r].inputs, b.final_state.history[r].inputs);
      EXPECT_EQ(a.final_state.history[r].magnitudes, b.final_state.history[r].magnitudes);
      EXPECT_EQ(a.final_state.history[r].row_unique, b.final_state.history[r].row_unique);
    }
    EXPECT_EQ(a.final_state.data.Y, b.final_state.data.Y);
  }
}

TEST(Strategy, StringRoundTrip) {
  for (Strategy s : {Strategy::Random, Strategy::Biased, Strategy::Targeted})
    EXPECT_EQ(strategy_from_string(to_string(s)), s);
  EXPECT_THROW(strategy_from_string("greedy"), ParameterError);
}
