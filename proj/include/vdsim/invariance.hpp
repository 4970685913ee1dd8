#pragma once

#include <span>
#include <vector>

#include "vdsim/jpf.hpp"
#include "vdsim/policy.hpp"

namespace vdsim {

// Builds a pool whose views are the true predispositions j_k(F) for both
// sides (no perception noise). Ids are 1..P in the given order.
JuryPool pool_at(std::span<const Jpf> jpfs, FactIndex f);

// Seated juror ids at the moment of the defense's last decision made with a
// strike in hand, for each fact index on the grid. No cause strikes.
struct LastStrikeSnapshot {
  double fact = 0.0;
  std::vector<int> seated_at_last_defense_decision;
  std::vector<int> final_jury;
};

struct SeatingInvarianceReport {
  bool invariant = true;
  std::vector<LastStrikeSnapshot> snapshots;
};

SeatingInvarianceReport seating_invariance_check(std::span<const Jpf> jpfs,
                                         const FSet& fset,
                                         OffenseClass offense,
                                         const StrategyPolicy& defense,
                                         const StrategyPolicy& prosecution);

}  // namespace vdsim
