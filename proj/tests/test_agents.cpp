#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "generators.hpp"
#include "oracles.hpp"
#include "vdsim/equilibrium.hpp"
#include "vdsim/error.hpp"
#include "vdsim/invariance.hpp"
#include "vdsim/policy.hpp"

using namespace vdsim;

namespace {

std::vector<double> uniform_values(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<> u(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

}  // namespace

TEST(LastStrike, Examples) {
  const std::vector<double> high{0.1, 0.2, 0.8, 0.3, 0.4, 0.5};
  EXPECT_EQ(last_strike_decision(Side::kDefense, high, 0.6), Decision::kStrike);
  const std::vector<double> low{0.1, 0.2, 0.4, 0.3, 0.4, 0.2};
  EXPECT_EQ(last_strike_decision(Side::kDefense, low, 0.9), Decision::kPass);
  const std::vector<double> tie{0.5, 0.5, 0.5, 0.5, 0.5, 0.5};
  EXPECT_EQ(last_strike_decision(Side::kDefense, tie, 0.5), Decision::kPass);
  EXPECT_EQ(last_strike_decision(Side::kProsecution, tie, 0.5), Decision::kPass);
  EXPECT_EQ(last_strike_decision(Side::kProsecution, low, 0.15),
            Decision::kStrike);
  EXPECT_EQ(last_strike_decision(Side::kProsecution, low, 0.05),
            Decision::kPass);
}

TEST(LastStrike, WrongSeatCount) {
  const std::vector<double> five(5, 0.5);
  EXPECT_THROW(last_strike_decision(Side::kDefense, five, 0.5), ConfigError);
}

TEST(GreedyRank, Examples) {
  const std::vector<double> suffix{0.9, 0.1, 0.2, 0.3};
  EXPECT_EQ(greedy_rank_decide(Side::kDefense, 0, suffix), Decision::kPass);
  EXPECT_EQ(greedy_rank_decide(Side::kDefense, 1, suffix), Decision::kStrike);
  EXPECT_EQ(greedy_rank_decide(Side::kProsecution, 1, suffix), Decision::kPass);
  const std::vector<double> flat(5, 0.4);
  for (int s = 0; s <= 5; ++s) {
    EXPECT_EQ(greedy_rank_decide(Side::kDefense, s, flat), Decision::kPass);
    EXPECT_EQ(greedy_rank_decide(Side::kProsecution, s, flat), Decision::kPass);
  }
}

TEST(GreedyRank, QuantileBoundary) {
  // Candidate ranks second worst of five for the defense.
  const std::vector<double> suffix{0.7, 0.1, 0.9, 0.2, 0.3};
  EXPECT_EQ(greedy_rank_decide(Side::kDefense, 1, suffix), Decision::kPass);
  EXPECT_EQ(greedy_rank_decide(Side::kDefense, 2, suffix), Decision::kStrike);
}

TEST(GreedyRank, FullBudgetStrikesAllButTheBest) {
  // With a budget covering the whole suffix the rule strikes every
  // candidate that is not the side's best, like AlwaysStrike restricted to
  // the worse jurors.
  std::mt19937_64 rng(3);
  for (int t = 0; t < 200; ++t) {
    const auto v = uniform_values(rng, 8);
    const bool best_for_defense = *std::min_element(v.begin(), v.end()) == v[0];
    EXPECT_EQ(greedy_rank_decide(Side::kDefense, 8, v),
              best_for_defense ? Decision::kPass : Decision::kStrike);
    const bool best_for_pros = *std::max_element(v.begin(), v.end()) == v[0];
    EXPECT_EQ(greedy_rank_decide(Side::kProsecution, 8, v),
              best_for_pros ? Decision::kPass : Decision::kStrike);
  }
}

TEST(Perception, ZeroNoiseIsExact) {
  Rng rng(1);
  EXPECT_EQ(perceive(0.37, 0.0, rng), 0.37);
}

TEST(Perception, NoisyViewsStayInUnitInterval) {
  Rng rng(2);
  for (int i = 0; i < 10000; ++i) {
    const double v = perceive(0.95, 0.3, rng);
    ASSERT_GE(v, 0.0);
    ASSERT_LE(v, 1.0);
  }
}

TEST(Perception, BlindViewIgnoresTruth) {
  Rng a(9), b(9);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(perceive(0.0, StrategyPolicy::kBlind, a),
              perceive(1.0, StrategyPolicy::kBlind, b));
  }
}

TEST(StrategyPolicy, Validation) {
  EXPECT_THROW(StrategyPolicy::greedy_rank(-0.1), ConfigError);
  EXPECT_THROW(StrategyPolicy::reservation(Jpf::identity(), -0.1), ConfigError);
  EXPECT_TRUE(StrategyPolicy::blind_greedy_rank().blind());
}

TEST(FactInvariance, SeparatedPoolsGiveFactInvariantDecisions) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 300; ++t) {
    const auto pool = gen::separated_pool(rng, 20);
    const FSet fset(pool.lo, pool.hi, 11);
    ASSERT_TRUE(is_f_separated(pool.jpfs, fset));
    std::vector<Decision> first;
    for (double f : fset.grid()) {
      std::vector<double> v;
      for (const auto& j : pool.jpfs) v.push_back(j(f));
      std::vector<Decision> d;
      const std::vector<double> six(v.begin(), v.begin() + 6);
      d.push_back(last_strike_decision(Side::kDefense, six, v[6]));
      d.push_back(last_strike_decision(Side::kProsecution, six, v[6]));
      for (std::size_t k = 0; k + 1 < v.size(); ++k) {
        const std::span<const double> suffix(v.data() + k, v.size() - k);
        for (int s = 1; s <= 4; ++s) {
          d.push_back(greedy_rank_decide(Side::kDefense, s, suffix));
          d.push_back(greedy_rank_decide(Side::kProsecution, s, suffix));
        }
      }
      if (first.empty()) {
        first = d;
      } else {
        ASSERT_EQ(d, first) << "pool " << t << " at F = " << f;
      }
    }
  }
}

TEST(SeatingInvariance, RankPoliciesSeatTheSameJuryAcrossTheGrid) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 100; ++t) {
    const auto pool = gen::separated_pool(rng, 18);
    const FSet fset(pool.lo, pool.hi, 11);
    const auto report = seating_invariance_check(
        pool.jpfs, fset, OffenseClass::kFelony, StrategyPolicy::greedy_rank(),
        StrategyPolicy::greedy_rank());
    ASSERT_TRUE(report.invariant) << "pool " << t;
    EXPECT_EQ(report.snapshots.size(), 11u);
  }
}

TEST(SeatingInvariance, CrossingPoolCanBreakInvariance) {
  // Identity against constants: the order flips at F = 0.5.
  std::vector<Jpf> jpfs{Jpf::identity()};
  for (int k = 0; k < 17; ++k) jpfs.push_back(Jpf::constant(0.3 + 0.02 * k));
  const auto report = seating_invariance_check(
      jpfs, FSet(0.0, 1.0, 11), OffenseClass::kFelony,
      StrategyPolicy::greedy_rank(), StrategyPolicy::never_strike());
  EXPECT_FALSE(report.invariant);
}

TEST(SeatingInvariance, RejectsNoisyPolicies) {
  std::mt19937_64 rng(2);
  const auto pool = gen::separated_pool(rng, 18);
  EXPECT_THROW(seating_invariance_check(pool.jpfs, FSet(pool.lo, pool.hi, 11),
                                    OffenseClass::kFelony,
                                    StrategyPolicy::greedy_rank(0.1),
                                    StrategyPolicy::greedy_rank()),
               ConfigError);
}

TEST(Equilibrium, IdenticalJurorsPassEverywhere) {
  const auto model = VerdictModel::independent_votes(6.0, 0.4);
  const std::vector<double> view(14, 0.55);
  EquilibriumSolver solver(GameSpec::common(view, 4, 4, model));
  const auto play = solver.play_out();
  for (auto d : play.decisions) EXPECT_EQ(d, Decision::kPass);
  EXPECT_EQ(play.seated, (std::vector<std::size_t>{0, 1, 2, 3, 4, 5}));
  const std::vector<double> six(6, 0.55);
  EXPECT_DOUBLE_EQ(solver.value(solver.root()).prosecution,
                   conviction_probability(model, six));
}

TEST(Equilibrium, Errors) {
  const auto model = VerdictModel::threshold_unanimity(0.5);
  EXPECT_THROW(EquilibriumSolver(GameSpec::common(std::vector<double>(7, 0.5),
                                                  1, 1, model)),
               ConfigError);
  EXPECT_THROW(EquilibriumSolver(GameSpec::common(std::vector<double>(30, 0.5),
                                                  6, 6, model)),
               ConfigError);
  std::mt19937_64 rng(5);
  auto spec = GameSpec::common(uniform_values(rng, 18), 6, 6,
                               VerdictModel::independent_votes(5.0, 0.5));
  spec.state_budget = 100;
  EXPECT_THROW(solve_equilibrium(spec), ResourceError);
}

TEST(Equilibrium, MatchesExhaustiveEnumerationOnSmallGames) {
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> size(4, 8);
  const std::vector<VerdictModel> models{
      VerdictModel::threshold_unanimity(0.5),
      VerdictModel::smooth_logistic(4.0, 0.5),
      VerdictModel::independent_votes(5.0, 0.4)};
  for (int t = 0; t < 600; ++t) {
    const auto n = static_cast<std::size_t>(size(rng));
    const auto& model = models[t % 3];
    const auto pv = uniform_values(rng, n);
    const auto dv = t % 2 ? pv : uniform_values(rng, n);
    GameSpec spec;
    spec.prosecution_view = pv;
    spec.defense_view = dv;
    spec.prosecution_strikes = 1;
    spec.defense_strikes = 1;
    spec.jury_size = 2;
    spec.model = model;
    const auto got = solve_equilibrium(spec);
    const oracle::GameTree tree(pv, dv, 2, model);
    const auto want = tree.solve(0, {}, 1, 1, true);
    ASSERT_EQ(got.value.prosecution, want.prosecution) << "instance " << t;
    ASSERT_EQ(got.value.defense, want.defense) << "instance " << t;
    ASSERT_EQ(got.root_decision == Decision::kStrike, want.root_strike == 1)
        << "instance " << t;
  }
}

TEST(Equilibrium, BudgetMonotonicity) {
  std::mt19937_64 rng(7);
  const auto model = VerdictModel::independent_votes(6.0, 0.45);
  for (int t = 0; t < 300; ++t) {
    const auto view = uniform_values(rng, 8);
    auto value = [&](int sp, int sd) {
      auto spec = GameSpec::common(view, sp, sd, model, 2);
      return solve_equilibrium(spec).value.prosecution;
    };
    const double base = value(1, 1);
    EXPECT_LE(value(1, 2), base + 1e-15);
    EXPECT_GE(value(2, 1), base - 1e-15);
    EXPECT_LE(value(0, 1), value(0, 0) + 1e-15);
  }
}

TEST(Equilibrium, FinalDefenseDecisionFollowsLastStrikeRule) {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> pick(0, 11);
  const auto model = VerdictModel::independent_votes(8.0, 0.3);
  for (int t = 0; t < 2000; ++t) {
    auto spec = GameSpec::common(uniform_values(rng, 18), 6, 6, model);
    spec.prosecution_view = uniform_values(rng, 18);
    // Candidate at position c with five seated before it and the defense's
    // worst of the six at hand on the candidate.
    const std::size_t c = 5 + static_cast<std::size_t>(pick(rng));
    std::vector<std::size_t> seated(c);
    for (std::size_t k = 0; k < c; ++k) seated[k] = k;
    std::shuffle(seated.begin(), seated.end(), rng);
    seated.resize(5);
    std::sort(seated.begin(), seated.end());
    double worst = 0.0;
    for (auto k : seated) worst = std::max(worst, spec.defense_view[k]);
    spec.defense_view[c] = std::min(1.0, worst + 0.5 * (1.0 - worst) + 1e-3);
    EquilibriumSolver solver(spec);
    GameState s{c, seated, 0, 1, Side::kDefense};
    std::vector<double> six;
    for (auto k : seated) six.push_back(spec.defense_view[k]);
    six.push_back(spec.defense_view[c]);
    ASSERT_EQ(solver.decision(s),
              last_strike_decision(Side::kDefense, six, spec.defense_view[c + 1]))
        << "state " << t;
  }
}

TEST(Equilibrium, PolicyPlaysInsideTheEngine) {
  std::mt19937_64 seed(9);
  JuryPool pool;
  const auto view = uniform_values(seed, 30);
  for (int k = 0; k < 30; ++k) {
    Juror j;
    j.id = k + 1;
    j.jpf = Jpf::constant(view[k]);
    j.perceived_by_defense = view[k];
    j.perceived_by_prosecution = view[k];
    pool.jurors.push_back(j);
  }
  const auto model = VerdictModel::independent_votes(6.0, 0.4);
  Rng rng(1);
  const auto out = run_selection(pool, {}, OffenseClass::kMisdemeanor,
                                 StrategyPolicy::equilibrium(model),
                                 StrategyPolicy::equilibrium(model),
                                 FactIndex(0.5), rng);
  EXPECT_FALSE(out.policy_violation);
  // Same jury as direct equilibrium play on the reachable window.
  EquilibriumSolver solver(GameSpec::common(
      std::vector<double>(view.begin(), view.begin() + 12), 3, 3, model));
  const auto play = solver.play_out();
  std::vector<int> ids;
  for (auto k : play.seated) ids.push_back(static_cast<int>(k) + 1);
  EXPECT_EQ(out.seated, ids);
}

TEST(Equilibrium, FactInvarianceDiagnostic) {
  std::mt19937_64 rng(10);
  const auto pool = gen::separated_pool(rng, 10);
  const auto report = equilibrium_f_invariance(
      pool.jpfs, FSet(pool.lo, pool.hi, 11), 2,
      VerdictModel::independent_votes(6.0, 0.4));
  EXPECT_EQ(report.grid_points, 11u);
  EXPECT_GE(report.distinct_paths, 1u);
  EXPECT_GT(report.modal_share, 0.0);
  EXPECT_LE(report.modal_share, 1.0);
  EXPECT_GE(report.decision_variance, 0.0);
  EXPECT_LE(report.decision_variance, 0.25);
}
