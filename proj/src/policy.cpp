#include "vdsim/policy.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <unordered_set>

#include "vdsim/equilibrium.hpp"
#include "vdsim/error.hpp"

namespace vdsim {

namespace {

// Larger predispositions are worse for the defense, smaller for the
// prosecution.
bool strictly_worse(Side side, double a, double b) {
  return side == Side::kDefense ? a > b : a < b;
}

class NeverStrikePolicy final : public StrikePolicy {
 public:
  Decision decide(const DecisionContext&, Rng&) override {
    return Decision::kPass;
  }
};

class AlwaysStrikePolicy final : public StrikePolicy {
 public:
  Decision decide(const DecisionContext& ctx, Rng&) override {
    return ctx.own_remaining() > 0 ? Decision::kStrike : Decision::kPass;
  }
};

class GreedyRankPolicy final : public StrikePolicy {
 public:
  Decision decide(const DecisionContext& ctx, Rng&) override {
    const std::size_t len = ctx.reachable();
    suffix_.resize(len);
    for (std::size_t k = 0; k < len; ++k) {
      suffix_[k] = ctx.survivor(ctx.position + k).perceived(ctx.side);
    }
    return greedy_rank_decide(ctx.side, ctx.own_remaining(), suffix_);
  }

 private:
  std::vector<double> suffix_;
};

class ReservationPolicy final : public StrikePolicy {
 public:
  ReservationPolicy(Jpf reference, double margin)
      : reference_(reference), margin_(margin) {}

  Decision decide(const DecisionContext& ctx, Rng&) override {
    if (ctx.own_remaining() <= 0) return Decision::kPass;
    const double gap =
        ctx.candidate().perceived(ctx.side) - reference_(ctx.fact);
    const bool worse =
        ctx.side == Side::kDefense ? gap > margin_ : gap < -margin_;
    return worse ? Decision::kStrike : Decision::kPass;
  }

 private:
  Jpf reference_;
  double margin_;
};

class ScriptedPolicy final : public StrikePolicy {
 public:
  explicit ScriptedPolicy(const std::vector<int>& ids)
      : ids_(ids.begin(), ids.end()) {}

  Decision decide(const DecisionContext& ctx, Rng&) override {
    return ids_.contains(ctx.candidate().id) ? Decision::kStrike
                                            : Decision::kPass;
  }

 private:
  std::unordered_set<int> ids_;
};

// Plays the subgame-perfect strategy of the reachable game. The solver is
// built on first use and its memo lives as long as this policy object.
class EquilibriumPolicy final : public StrikePolicy {
 public:
  EquilibriumPolicy(const VerdictModel& model, std::size_t budget)
      : model_(model), budget_(budget) {}

  Decision decide(const DecisionContext& ctx, Rng&) override {
    if (!solver_) {
      const std::size_t window = std::min(
          ctx.survivors.size(),
          ctx.jury_size + 2 * static_cast<std::size_t>(ctx.limit));
      GameSpec spec;
      spec.prosecution_strikes = ctx.limit;
      spec.defense_strikes = ctx.limit;
      spec.jury_size = ctx.jury_size;
      spec.model = model_;
      spec.state_budget = budget_;
      for (std::size_t k = 0; k < window; ++k) {
        spec.prosecution_view.push_back(
            ctx.survivor(k).perceived(Side::kProsecution));
        spec.defense_view.push_back(ctx.survivor(k).perceived(Side::kDefense));
      }
      solver_.emplace(std::move(spec));
    }
    if (ctx.own_remaining() <= 0) return Decision::kPass;
    GameState s;
    s.candidate = ctx.position;
    s.seated.assign(ctx.seated.begin(), ctx.seated.end());
    s.prosecution_remaining = ctx.prosecution_remaining;
    s.defense_remaining = ctx.defense_remaining;
    s.mover = ctx.side;
    return solver_->decision(s);
  }

 private:
  VerdictModel model_;
  std::size_t budget_;
  std::optional<EquilibriumSolver> solver_;
};

void check_sigma(double sigma) {
  if (!(sigma >= 0.0)) {
    throw ConfigError("perception noise sigma must be >= 0");
  }
}

}  // namespace

StrategyPolicy StrategyPolicy::never_strike() { return {}; }

StrategyPolicy StrategyPolicy::always_strike() {
  StrategyPolicy p;
  p.kind = Kind::kAlwaysStrike;
  return p;
}

StrategyPolicy StrategyPolicy::greedy_rank(double noise_sigma) {
  check_sigma(noise_sigma);
  StrategyPolicy p;
  p.kind = Kind::kGreedyRank;
  p.noise_sigma = noise_sigma;
  return p;
}

StrategyPolicy StrategyPolicy::blind_greedy_rank() {
  return greedy_rank(kBlind);
}

StrategyPolicy StrategyPolicy::reservation(const Jpf& reference, double margin,
                                           double noise_sigma) {
  check_sigma(noise_sigma);
  if (!(margin >= 0.0)) throw ConfigError("reservation margin must be >= 0");
  StrategyPolicy p;
  p.kind = Kind::kReservation;
  p.reference = reference;
  p.margin = margin;
  p.noise_sigma = noise_sigma;
  return p;
}

StrategyPolicy StrategyPolicy::scripted(std::vector<int> ids) {
  StrategyPolicy p;
  p.kind = Kind::kScripted;
  p.script = std::move(ids);
  return p;
}

StrategyPolicy StrategyPolicy::equilibrium(const VerdictModel& model) {
  StrategyPolicy p;
  p.kind = Kind::kEquilibrium;
  p.model = model;
  return p;
}

std::string StrategyPolicy::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::kNeverStrike:
      os << "NeverStrike";
      break;
    case Kind::kAlwaysStrike:
      os << "AlwaysStrike";
      break;
    case Kind::kGreedyRank:
      os << "GreedyRank";
      break;
    case Kind::kReservation:
      os << "Reservation(" << reference.describe() << ", margin=" << margin
         << ")";
      break;
    case Kind::kScripted:
      os << "Scripted(" << script.size() << " ids)";
      break;
    case Kind::kEquilibrium:
      os << "Equilibrium(" << model.describe() << ")";
      break;
  }
  if (blind()) {
    os << " sigma=inf";
  } else if (noise_sigma > 0.0) {
    os << " sigma=" << noise_sigma;
  }
  return os.str();
}

double perceive(double true_value, double sigma, Rng& rng) {
  if (sigma == 0.0) return true_value;
  if (std::isinf(sigma)) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  }
  std::normal_distribution<double> noise(0.0, sigma);
  return std::clamp(true_value + noise(rng), 0.0, 1.0);
}

Decision last_strike_decision(Side side, std::span<const double> seated,
                              double replacement) {
  if (seated.size() != kJurySize) {
    throw ConfigError("last_strike_decision expects " +
                      std::to_string(kJurySize) + " seated jurors");
  }
  if (side == Side::kDefense) {
    const double worst = *std::max_element(seated.begin(), seated.end());
    return worst > replacement ? Decision::kStrike : Decision::kPass;
  }
  const double worst = *std::min_element(seated.begin(), seated.end());
  return worst < replacement ? Decision::kStrike : Decision::kPass;
}

Decision greedy_rank_decide(Side side, int strikes_remaining,
                            std::span<const double> suffix) {
  if (strikes_remaining <= 0 || suffix.empty()) return Decision::kPass;
  const double c = suffix.front();
  std::size_t better = 0;
  for (std::size_t k = 1; k < suffix.size(); ++k) {
    if (strictly_worse(side, c, suffix[k])) ++better;
  }
  const std::size_t s = static_cast<std::size_t>(strikes_remaining);
  // Worst q-quantile with q = s / len: at most s - 1 jurors in the suffix are
  // as bad as or worse than the candidate, i.e. better >= len - s.
  if (better >= 1 && better + s >= suffix.size()) return Decision::kStrike;
  return Decision::kPass;
}

std::unique_ptr<StrikePolicy> make_policy(const StrategyPolicy& policy) {
  switch (policy.kind) {
    case StrategyPolicy::Kind::kNeverStrike:
      return std::make_unique<NeverStrikePolicy>();
    case StrategyPolicy::Kind::kAlwaysStrike:
      return std::make_unique<AlwaysStrikePolicy>();
    case StrategyPolicy::Kind::kGreedyRank:
      return std::make_unique<GreedyRankPolicy>();
    case StrategyPolicy::Kind::kReservation:
      return std::make_unique<ReservationPolicy>(policy.reference,
                                                 policy.margin);
    case StrategyPolicy::Kind::kScripted:
      return std::make_unique<ScriptedPolicy>(policy.script);
    case StrategyPolicy::Kind::kEquilibrium:
      return std::make_unique<EquilibriumPolicy>(policy.model,
                                                 policy.state_budget);
  }
  throw InvariantViolation("unknown policy kind");
}

StrategyPolicy scripted_from_sheet(const StrikeSheet& sheet, Side side) {
  const Disposition mark =
      side == Side::kDefense ? Disposition::kD : Disposition::kP;
  std::vector<int> ids;
  for (const SheetEntry& e : sheet.entries) {
    if (e.disposition == mark) ids.push_back(e.juror_id);
  }
  return StrategyPolicy::scripted(std::move(ids));
}

SelectionOutcome run_selection(const JuryPool& pool,
                               std::span<const CauseStrike> cause,
                               OffenseClass offense,
                               const StrategyPolicy& defense,
                               const StrategyPolicy& prosecution,
                               FactIndex fact, Rng& rng) {
  auto def = make_policy(defense);
  auto pros = make_policy(prosecution);
  return run_selection(pool, cause, offense, *def, *pros, fact, rng);
}

}  // namespace vdsim
