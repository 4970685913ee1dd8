#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "vdsim/juror.hpp"
#include "vdsim/rng.hpp"
#include "vdsim/strike_sheet.hpp"

namespace vdsim {

// Marginal for-cause strike rates. Sources are mutually exclusive per juror
// with judge priority, so judge + prosecution + defense must not exceed 1.
struct CauseProbabilities {
  double judge = 0.308;
  double prosecution = 0.027;
  double defense = 0.023;

  void validate() const;
};

enum class CauseSource { kJudge, kProsecution, kDefense };

struct CauseStrike {
  int juror_id = 0;
  CauseSource source = CauseSource::kJudge;

  friend bool operator==(const CauseStrike&, const CauseStrike&) = default;
};

std::vector<CauseStrike> apply_cause_strikes(const JuryPool& pool,
                                             const CauseProbabilities& probs,
                                             Rng& rng);

enum class Decision { kPass, kStrike };

// Everything a side may look at when deciding on the current candidate.
// Both sides see the whole surviving pool.
struct DecisionContext {
  Side side = Side::kDefense;
  std::span<const Juror> pool;
  std::span<const std::size_t> survivors;  // pool indices, in pool order
  std::size_t position = 0;                // candidate's index in survivors
  std::span<const std::size_t> seated;     // survivor indices seated so far
  int prosecution_remaining = 0;
  int defense_remaining = 0;
  int limit = 0;
  std::size_t jury_size = 6;
  FactIndex fact;

  const Juror& candidate() const { return pool[survivors[position]]; }
  const Juror& survivor(std::size_t k) const { return pool[survivors[k]]; }

  int own_remaining() const {
    return side == Side::kDefense ? defense_remaining : prosecution_remaining;
  }
  int opponent_remaining() const {
    return side == Side::kDefense ? prosecution_remaining : defense_remaining;
  }
  std::size_t seats_remaining() const { return jury_size - seated.size(); }

  // Survivors from the candidate on that the protocol can still reach: one
  // per open seat plus one per remaining strike on either side.
  std::size_t reachable() const;
};

class StrikePolicy {
 public:
  virtual ~StrikePolicy() = default;
  virtual Decision decide(const DecisionContext& ctx, Rng& rng) = 0;
};

struct SelectionOutcome {
  std::vector<int> seated;  // juror ids in seating order
  int limit = 0;
  int def_strikes_used = 0;
  int pros_strikes_used = 0;
  bool def_exhausted = false;
  bool pros_exhausted = false;
  CauseCounts cause_counts;
  StrikeSheet sheet;
  // Set when a policy asked to strike with no strikes left; the engine
  // treated the request as a pass.
  bool policy_violation = false;
};

// One-pass peremptory phase. For each surviving candidate in pool order the
// prosecution decides first; if it passes, the defense decides; a candidate
// neither side strikes is seated. Stops once six are seated.
//
// Throws PoolExhausted when fewer than 6 + 2 * limit jurors survive the
// cause strikes.
SelectionOutcome run_selection(const JuryPool& pool,
                               std::span<const CauseStrike> cause,
                               OffenseClass offense, StrikePolicy& defense,
                               StrikePolicy& prosecution, FactIndex fact,
                               Rng& rng);

}  // namespace vdsim
