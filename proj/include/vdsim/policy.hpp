#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "vdsim/jpf.hpp"
#include "vdsim/selection.hpp"
#include "vdsim/verdict.hpp"

namespace vdsim {

// Attorney strike behaviour for one side.
//
// noise_sigma is the standard deviation of the perception error added once
// per (juror, side) before clamping to [0,1]. An infinite sigma means the
// side perceives pure noise: its view is drawn Uniform(0,1) independently of
// the juror, which makes every policy predisposition-blind.
struct StrategyPolicy {
  enum class Kind {
    kNeverStrike,
    kAlwaysStrike,
    kGreedyRank,
    kReservation,
    kScripted,
    kEquilibrium,
  };

  Kind kind = Kind::kNeverStrike;
  double noise_sigma = 0.0;

  // kReservation: strike while strikes remain if the candidate's perceived
  // predisposition is worse than reference(F) by more than margin.
  Jpf reference = Jpf::identity();
  double margin = 0.0;

  // kScripted: ids this side strikes whenever it is asked about them.
  std::vector<int> script;

  // kEquilibrium: verdict model the solver optimises against.
  VerdictModel model;
  std::size_t state_budget = 5'000'000;

  static StrategyPolicy never_strike();
  static StrategyPolicy always_strike();
  static StrategyPolicy greedy_rank(double noise_sigma = 0.0);
  static StrategyPolicy blind_greedy_rank();
  static StrategyPolicy reservation(const Jpf& reference, double margin,
                                    double noise_sigma = 0.0);
  static StrategyPolicy scripted(std::vector<int> ids);
  static StrategyPolicy equilibrium(const VerdictModel& model);

  bool blind() const { return noise_sigma == kBlind; }
  std::string describe() const;

  static constexpr double kBlind = std::numeric_limits<double>::infinity();
};

// A side's view of one juror. sigma == 0 returns the true value.
double perceive(double true_value, double sigma, Rng& rng);

// Last-strike rule with a known replacement. The defense strikes
// iff its worst seated juror (the maximum) is strictly above the
// replacement; the prosecution iff the seated minimum is strictly below it.
Decision last_strike_decision(Side side, std::span<const double> seated,
                              double replacement);

// Rank-only quantile rule. suffix[0] is the candidate and the rest are the
// survivors still reachable after it. Strikes iff strikes remain and the
// candidate sits in the side's worst q = strikes_remaining / suffix.size()
// share of the suffix, counting only strictly better jurors (ties pass).
Decision greedy_rank_decide(Side side, int strikes_remaining,
                            std::span<const double> suffix);

std::unique_ptr<StrikePolicy> make_policy(const StrategyPolicy& policy);

// Replays the D (defense) or P (prosecution) marks of a strike sheet.
StrategyPolicy scripted_from_sheet(const StrikeSheet& sheet, Side side);

// Convenience wrapper instantiating fresh per-run policy objects.
SelectionOutcome run_selection(const JuryPool& pool,
                               std::span<const CauseStrike> cause,
                               OffenseClass offense,
                               const StrategyPolicy& defense,
                               const StrategyPolicy& prosecution,
                               FactIndex fact, Rng& rng);

}  // namespace vdsim
