#include "vdsim/selection.hpp"

#include <algorithm>
#include <string>

#include "vdsim/error.hpp"
#include "vdsim/verdict.hpp"

namespace vdsim {

void CauseProbabilities::validate() const {
  for (double p : {judge, prosecution, defense}) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw ConfigError("cause-strike probabilities must lie in [0,1]");
    }
  }
  if (judge + prosecution + defense > 1.0 + 1e-12) {
    throw ConfigError("cause-strike probabilities must sum to at most 1");
  }
}

std::vector<CauseStrike> apply_cause_strikes(const JuryPool& pool,
                                             const CauseProbabilities& probs,
                                             Rng& rng) {
  probs.validate();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<CauseStrike> struck;
  const double to_pros = probs.judge + probs.prosecution;
  const double to_def = to_pros + probs.defense;
  for (const Juror& j : pool.jurors) {
    const double u = unit(rng);
    if (u < probs.judge) {
      struck.push_back({j.id, CauseSource::kJudge});
    } else if (u < to_pros) {
      struck.push_back({j.id, CauseSource::kProsecution});
    } else if (u < to_def) {
      struck.push_back({j.id, CauseSource::kDefense});
    }
  }
  return struck;
}

std::size_t DecisionContext::reachable() const {
  const std::size_t window =
      seats_remaining() + static_cast<std::size_t>(prosecution_remaining) +
      static_cast<std::size_t>(defense_remaining);
  return std::min(window, survivors.size() - position);
}

SelectionOutcome run_selection(const JuryPool& pool,
                               std::span<const CauseStrike> cause,
                               OffenseClass offense, StrikePolicy& defense,
                               StrikePolicy& prosecution, FactIndex fact,
                               Rng& rng) {
  const std::size_t P = pool.size();
  SelectionOutcome out;
  out.limit = strike_limit(offense);
  out.sheet.entries.resize(P);
  for (std::size_t k = 0; k < P; ++k) {
    out.sheet.entries[k] = {static_cast<int>(k) + 1, Disposition::kNU, 0};
  }

  std::vector<char> removed(P, 0);
  for (const CauseStrike& c : cause) {
    if (c.juror_id < 1 || static_cast<std::size_t>(c.juror_id) > P) {
      throw ConfigError("cause strike names juror " +
                        std::to_string(c.juror_id) + " outside the pool");
    }
    const auto k = static_cast<std::size_t>(c.juror_id - 1);
    if (removed[k]) {
      throw ConfigError("juror " + std::to_string(c.juror_id) +
                        " struck for cause twice");
    }
    removed[k] = 1;
    SheetEntry& e = out.sheet.entries[k];
    switch (c.source) {
      case CauseSource::kJudge:
        e.disposition = Disposition::kJC;
        ++out.cause_counts.judge;
        break;
      case CauseSource::kProsecution:
        e.disposition = Disposition::kPC;
        ++out.cause_counts.prosecution;
        break;
      case CauseSource::kDefense:
        e.disposition = Disposition::kDC;
        ++out.cause_counts.defense;
        break;
    }
  }

  std::vector<std::size_t> survivors;
  survivors.reserve(P);
  for (std::size_t k = 0; k < P; ++k) {
    if (!removed[k]) survivors.push_back(k);
  }
  const std::size_t needed =
      kJurySize + 2 * static_cast<std::size_t>(out.limit);
  if (survivors.size() < needed) {
    throw PoolExhausted("pool exhausted: " + std::to_string(survivors.size()) +
                        " jurors survive cause strikes, " +
                        std::to_string(needed) + " required for " +
                        std::string(to_string(offense)));
  }

  std::vector<std::size_t> seated;
  seated.reserve(kJurySize);
  DecisionContext ctx;
  ctx.pool = pool.jurors;
  ctx.survivors = survivors;
  ctx.limit = out.limit;
  ctx.jury_size = kJurySize;
  ctx.fact = fact;
  int pros_left = out.limit;
  int def_left = out.limit;

  auto ask = [&](Side side, StrikePolicy& policy, int& left) {
    ctx.side = side;
    ctx.seated = seated;
    ctx.prosecution_remaining = pros_left;
    ctx.defense_remaining = def_left;
    if (policy.decide(ctx, rng) != Decision::kStrike) return false;
    if (left == 0) {
      out.policy_violation = true;
      return false;
    }
    --left;
    return true;
  };

  std::size_t pos = 0;
  for (; pos < survivors.size() && seated.size() < kJurySize; ++pos) {
    ctx.position = pos;
    SheetEntry& e = out.sheet.entries[survivors[pos]];
    if (ask(Side::kProsecution, prosecution, pros_left)) {
      e.disposition = Disposition::kP;
      e.ordinal = out.limit - pros_left;
    } else if (ask(Side::kDefense, defense, def_left)) {
      e.disposition = Disposition::kD;
      e.ordinal = out.limit - def_left;
    } else {
      seated.push_back(pos);
      e.disposition = Disposition::kJ;
      e.ordinal = static_cast<int>(seated.size());
      out.seated.push_back(e.juror_id);
    }
  }
  if (seated.size() < kJurySize) {
    throw InvariantViolation("selection ran out of survivors after validation");
  }

  out.pros_strikes_used = out.limit - pros_left;
  out.def_strikes_used = out.limit - def_left;
  out.pros_exhausted = pros_left == 0;
  out.def_exhausted = def_left == 0;
  return out;
}

}  // namespace vdsim
