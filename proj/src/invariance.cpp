#include "vdsim/invariance.hpp"

#include "vdsim/error.hpp"

namespace vdsim {

namespace {

// Forwards to a policy and remembers the seated set whenever the defense is
// asked with a strike in hand.
class RecordingPolicy final : public StrikePolicy {
 public:
  explicit RecordingPolicy(std::unique_ptr<StrikePolicy> inner)
      : inner_(std::move(inner)) {}

  Decision decide(const DecisionContext& ctx, Rng& rng) override {
    if (ctx.own_remaining() > 0) {
      last_.clear();
      for (std::size_t k : ctx.seated) last_.push_back(ctx.survivor(k).id);
    }
    return inner_->decide(ctx, rng);
  }

  const std::vector<int>& last() const { return last_; }

 private:
  std::unique_ptr<StrikePolicy> inner_;
  std::vector<int> last_;
};

}  // namespace

JuryPool pool_at(std::span<const Jpf> jpfs, FactIndex f) {
  JuryPool pool;
  pool.jurors.reserve(jpfs.size());
  int id = 0;
  for (const Jpf& j : jpfs) {
    Juror juror;
    juror.id = ++id;
    juror.jpf = j;
    juror.perceived_by_defense = j(f);
    juror.perceived_by_prosecution = juror.perceived_by_defense;
    pool.jurors.push_back(juror);
  }
  return pool;
}

SeatingInvarianceReport seating_invariance_check(std::span<const Jpf> jpfs,
                                         const FSet& fset,
                                         OffenseClass offense,
                                         const StrategyPolicy& defense,
                                         const StrategyPolicy& prosecution) {
  if (defense.noise_sigma != 0.0 || prosecution.noise_sigma != 0.0) {
    throw ConfigError("seating_invariance_check requires noiseless policies");
  }
  SeatingInvarianceReport report;
  for (double f : fset.grid()) {
    const FactIndex fact(f);
    const JuryPool pool = pool_at(jpfs, fact);
    RecordingPolicy def(make_policy(defense));
    auto pros = make_policy(prosecution);
    Rng rng(0);
    const SelectionOutcome out =
        run_selection(pool, {}, offense, def, *pros, fact, rng);
    report.snapshots.push_back({f, def.last(), out.seated});
  }
  for (const auto& s : report.snapshots) {
    if (s.seated_at_last_defense_decision !=
            report.snapshots.front().seated_at_last_defense_decision ||
        s.final_jury != report.snapshots.front().final_jury) {
      report.invariant = false;
    }
  }
  return report;
}

}  // namespace vdsim
