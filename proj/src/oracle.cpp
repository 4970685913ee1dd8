// Reference computation of the exhaustion contrast that shares only the JPF
// and verdict primitives with the simulation engine. Populations, cause
// strikes and the strike protocol are rebuilt here from the configuration,
// and each case contributes its expected conviction probability rather than
// a sampled verdict.

#include <algorithm>
#include <cmath>
#include <random>

#include "vdsim/error.hpp"
#include "vdsim/experiment.hpp"
#include "vdsim/rng.hpp"
#include "vdsim/verdict.hpp"

namespace vdsim {
namespace {

struct Candidate {
  double truth = 0.0;
  double view[2] = {0.0, 0.0};  // indexed by side: 0 prosecution, 1 defense
};

int side_slot(Side s) { return s == Side::kDefense ? 1 : 0; }

class OraclePolicy {
 public:
  OraclePolicy(const StrategyPolicy& p, Side side) : p_(p), side_(side) {
    switch (p.kind) {
      case StrategyPolicy::Kind::kNeverStrike:
      case StrategyPolicy::Kind::kAlwaysStrike:
      case StrategyPolicy::Kind::kGreedyRank:
      case StrategyPolicy::Kind::kReservation:
        break;
      default:
        throw ConfigError("oracle supports never_strike, always_strike, "
                          "greedy_rank and reservation policies only");
    }
  }

  // `rest` holds the views of the reachable survivors after the candidate.
  bool strike(double candidate, const std::vector<double>& rest, int left,
              double fact) const {
    if (left <= 0) return false;
    const bool defense = side_ == Side::kDefense;
    switch (p_.kind) {
      case StrategyPolicy::Kind::kNeverStrike:
        return false;
      case StrategyPolicy::Kind::kAlwaysStrike:
        return true;
      case StrategyPolicy::Kind::kGreedyRank: {
        long better = 0;
        for (double v : rest) better += defense ? v < candidate : v > candidate;
        const long len = static_cast<long>(rest.size()) + 1;
        return better >= 1 && len - better <= left;
      }
      case StrategyPolicy::Kind::kReservation: {
        const double ref = p_.reference(fact);
        return defense ? candidate > ref + p_.margin
                       : candidate < ref - p_.margin;
      }
      default:
        return false;
    }
  }

 private:
  const StrategyPolicy& p_;
  Side side_;
};

double observe(double truth, double sigma, Rng& rng) {
  if (sigma == 0.0) return truth;
  if (std::isinf(sigma)) return std::uniform_real_distribution<>(0.0, 1.0)(rng);
  const double v = truth + std::normal_distribution<>(0.0, sigma)(rng);
  return std::min(1.0, std::max(0.0, v));
}

}  // namespace

GammaEstimate gamma_limit_oracle(const ExperimentConfig& cfg,
                                 std::size_t n_cases, Side side,
                                 std::uint64_t salt) {
  cfg.validate();
  const OraclePolicy pros(cfg.prosecution_policy, Side::kProsecution);
  const OraclePolicy def(cfg.defense_policy, Side::kDefense);
  const auto& pop = cfg.jpf_population;
  const double removal =
      cfg.cause.judge + cfg.cause.prosecution + cfg.cause.defense;

  double sum[2] = {0.0, 0.0};
  double sum_sq[2] = {0.0, 0.0};
  std::size_t count[2] = {0, 0};

  std::vector<Candidate> survivors;
  std::vector<double> rest;
  std::vector<double> jury;
  for (std::size_t i = 0; i < n_cases; ++i) {
    Rng rng = substream(cfg.master_seed ^ salt, i, Stream::kOracle);
    std::uniform_real_distribution<> unit(0.0, 1.0);

    const double u_offense = unit(rng);
    const int offense = u_offense < cfg.offense_mix.misdemeanor ? 0
                        : u_offense < cfg.offense_mix.misdemeanor +
                                          cfg.offense_mix.felony
                            ? 1
                            : 2;
    const int limit = offense == 0 ? 3 : offense == 1 ? 6 : 10;
    const int pool_size = offense == 0   ? cfg.pool_size.misdemeanor
                          : offense == 1 ? cfg.pool_size.felony
                                         : cfg.pool_size.life_felony;

    const double ga = std::gamma_distribution<>(cfg.fact_alpha, 1.0)(rng);
    const double gb = std::gamma_distribution<>(cfg.fact_beta, 1.0)(rng);
    const double fact = ga / (ga + gb);

    std::vector<double> cumulative;
    double total = 0.0;
    for (const auto& c : pop.components) {
      double w = c.weight;
      if (pop.concentration > 0.0 && w > 0.0) {
        w = std::gamma_distribution<>(pop.concentration * w, 1.0)(rng);
      }
      total += w;
      cumulative.push_back(total);
    }
    const double shift =
        pop.pool_shift_sd > 0.0
            ? std::normal_distribution<>(0.0, pop.pool_shift_sd)(rng)
            : 0.0;

    survivors.clear();
    for (int k = 0; k < pool_size; ++k) {
      const double u = unit(rng) * total;
      std::size_t c = 0;
      while (c + 1 < cumulative.size() && u >= cumulative[c]) ++c;
      const auto& comp = pop.components[c];
      const double a =
          comp.intercept.lo + (comp.intercept.hi - comp.intercept.lo) * unit(rng);
      const double b = comp.slope.lo + (comp.slope.hi - comp.slope.lo) * unit(rng);
      Candidate cand;
      cand.truth = Jpf::affine(a + shift, b)(fact);
      cand.view[1] = observe(cand.truth, cfg.defense_policy.noise_sigma, rng);
      cand.view[0] = observe(cand.truth, cfg.prosecution_policy.noise_sigma, rng);
      if (unit(rng) >= removal) survivors.push_back(cand);
    }
    if (survivors.size() < kJurySize + 2 * static_cast<std::size_t>(limit)) {
      throw PoolExhausted("oracle case " + std::to_string(i) +
                          ": too few survivors");
    }

    int left[2] = {limit, limit};
    jury.clear();
    for (std::size_t pos = 0; pos < survivors.size() && jury.size() < kJurySize;
         ++pos) {
      const std::size_t reach = std::min(
          survivors.size() - pos,
          (kJurySize - jury.size()) + static_cast<std::size_t>(left[0] + left[1]));
      bool struck = false;
      for (Side s : {Side::kProsecution, Side::kDefense}) {
        const int slot = side_slot(s);
        rest.clear();
        for (std::size_t k = pos + 1; k < pos + reach; ++k) {
          rest.push_back(survivors[k].view[slot]);
        }
        const OraclePolicy& policy = s == Side::kDefense ? def : pros;
        if (policy.strike(survivors[pos].view[slot], rest, left[slot], fact)) {
          --left[slot];
          struck = true;
          break;
        }
      }
      if (!struck) jury.push_back(survivors[pos].truth);
    }
    if (jury.size() != kJurySize) {
      throw InvariantViolation("oracle seated fewer than six jurors");
    }

    const int used = limit - left[side_slot(side)];
    const int group = used == limit ? 0 : used == limit - 1 ? 1 : -1;
    if (group < 0) continue;
    const double cp = conviction_probability(cfg.verdict, jury);
    sum[group] += cp;
    sum_sq[group] += cp * cp;
    ++count[group];
  }

  if (count[0] < 2 || count[1] < 2) {
    throw EstimationError("oracle produced too few cases in the n or n - 1 "
                          "group");
  }
  GammaEstimate g;
  g.n_exhausted = count[0];
  g.n_one_short = count[1];
  g.mean_exhausted = sum[0] / static_cast<double>(count[0]);
  g.mean_one_short = sum[1] / static_cast<double>(count[1]);
  g.value = g.mean_exhausted - g.mean_one_short;
  auto var = [&](int k, double m) {
    const double n = static_cast<double>(count[k]);
    return std::max(0.0, (sum_sq[k] - n * m * m) / (n - 1.0)) / n;
  };
  g.se = std::sqrt(var(0, g.mean_exhausted) + var(1, g.mean_one_short));
  return g;
}

}  // namespace vdsim
