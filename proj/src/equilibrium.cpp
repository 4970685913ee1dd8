#include "vdsim/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "vdsim/error.hpp"

namespace vdsim {

namespace {

constexpr double kKeyResolution = 1e6;

std::int64_t discretize(double v) {
  return static_cast<std::int64_t>(std::llround(v * kKeyResolution));
}

}  // namespace

GameSpec GameSpec::common(std::vector<double> view, int prosecution_strikes,
                          int defense_strikes, const VerdictModel& model,
                          std::size_t jury_size) {
  GameSpec s;
  s.prosecution_view = view;
  s.defense_view = std::move(view);
  s.prosecution_strikes = prosecution_strikes;
  s.defense_strikes = defense_strikes;
  s.model = model;
  s.jury_size = jury_size;
  return s;
}

EquilibriumSolver::EquilibriumSolver(GameSpec spec) : spec_(std::move(spec)) {
  const std::size_t n = spec_.prosecution_view.size();
  if (spec_.defense_view.size() != n) {
    throw ConfigError("equilibrium: side views differ in length");
  }
  if (spec_.jury_size == 0) throw ConfigError("equilibrium: jury size is 0");
  if (spec_.prosecution_strikes < 0 || spec_.defense_strikes < 0) {
    throw ConfigError("equilibrium: negative strike budget");
  }
  const std::size_t needed = spec_.jury_size +
                             static_cast<std::size_t>(spec_.prosecution_strikes) +
                             static_cast<std::size_t>(spec_.defense_strikes);
  if (n < needed) {
    throw ConfigError("equilibrium: " + std::to_string(n) +
                      " survivors cannot seat " +
                      std::to_string(spec_.jury_size) + " jurors with " +
                      std::to_string(needed - spec_.jury_size) +
                      " strikes outstanding");
  }
  if (n > spec_.max_survivors) {
    throw ConfigError("equilibrium: " + std::to_string(n) +
                      " survivors exceed the exact-solver limit of " +
                      std::to_string(spec_.max_survivors));
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (double v : {spec_.prosecution_view[k], spec_.defense_view[k]}) {
      if (!(v >= 0.0 && v <= 1.0)) {
        throw ConfigError("equilibrium: perceived values must lie in [0,1]");
      }
    }
  }
  if (spec_.prosecution_strikes > 255 || spec_.defense_strikes > 255) {
    throw ConfigError("equilibrium: strike budget too large");
  }
}

GameState EquilibriumSolver::root() const {
  return {0, {}, spec_.prosecution_strikes, spec_.defense_strikes,
          Side::kProsecution};
}

std::size_t EquilibriumSolver::KeyHash::operator()(const Key& k) const {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ k.packed;
  for (std::int64_t v : k.seated) {
    h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) +
         (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

EquilibriumSolver::Key EquilibriumSolver::make_key(
    std::size_t candidate, std::span<const std::size_t> seated, int pros_left,
    int def_left, Side mover) const {
  Key key;
  key.packed = static_cast<std::uint32_t>(candidate) << 17 |
               static_cast<std::uint32_t>(pros_left) << 9 |
               static_cast<std::uint32_t>(def_left) << 1 |
               (mover == Side::kDefense ? 1u : 0u);
  std::vector<std::pair<std::int64_t, std::int64_t>> pairs;
  pairs.reserve(seated.size());
  for (std::size_t k : seated) {
    pairs.emplace_back(discretize(spec_.prosecution_view[k]),
                       discretize(spec_.defense_view[k]));
  }
  std::sort(pairs.begin(), pairs.end());
  key.seated.reserve(2 * pairs.size());
  for (const auto& [p, d] : pairs) {
    key.seated.push_back(p);
    key.seated.push_back(d);
  }
  return key;
}

GameValue EquilibriumSolver::terminal(
    std::span<const std::size_t> seated) const {
  std::vector<double> pv, dv;
  pv.reserve(seated.size());
  dv.reserve(seated.size());
  for (std::size_t k : seated) {
    pv.push_back(spec_.prosecution_view[k]);
    dv.push_back(spec_.defense_view[k]);
  }
  return {conviction_probability(spec_.model, pv, spec_.jury_size),
          conviction_probability(spec_.model, dv, spec_.jury_size)};
}

EquilibriumSolver::Node EquilibriumSolver::solve(
    std::size_t candidate, std::vector<std::size_t>& seated, int pros_left,
    int def_left, Side mover) {
  if (seated.size() == spec_.jury_size) return {terminal(seated), Decision::kPass};
  if (candidate >= spec_.prosecution_view.size()) {
    throw InvariantViolation("equilibrium: ran out of survivors");
  }
  Key key = make_key(candidate, seated, pros_left, def_left, mover);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;

  Node node;
  if (mover == Side::kProsecution) {
    const Node pass = solve(candidate, seated, pros_left, def_left,
                            Side::kDefense);
    node = {pass.value, Decision::kPass};
    if (pros_left > 0) {
      const Node strike = solve(candidate + 1, seated, pros_left - 1,
                                def_left, Side::kProsecution);
      if (strike.value.prosecution > pass.value.prosecution) {
        node = {strike.value, Decision::kStrike};
      }
    }
  } else {
    seated.push_back(candidate);
    const Node pass = solve(candidate + 1, seated, pros_left, def_left,
                            Side::kProsecution);
    seated.pop_back();
    node = {pass.value, Decision::kPass};
    if (def_left > 0) {
      const Node strike = solve(candidate + 1, seated, pros_left,
                                def_left - 1, Side::kProsecution);
      if (strike.value.defense < pass.value.defense) {
        node = {strike.value, Decision::kStrike};
      }
    }
  }
  if (memo_.size() >= spec_.state_budget) {
    throw ResourceError("equilibrium: state budget of " +
                        std::to_string(spec_.state_budget) + " exceeded");
  }
  memo_.emplace(std::move(key), node);
  return node;
}

void EquilibriumSolver::check_state(const GameState& s) const {
  const std::size_t n = spec_.prosecution_view.size();
  if (s.seated.size() >= spec_.jury_size) {
    throw ConfigError("equilibrium: state has a full jury");
  }
  if (s.candidate >= n) throw ConfigError("equilibrium: candidate out of range");
  for (std::size_t k = 0; k < s.seated.size(); ++k) {
    if (s.seated[k] >= s.candidate ||
        (k > 0 && s.seated[k] <= s.seated[k - 1])) {
      throw ConfigError(
          "equilibrium: seated indices must be increasing and precede the "
          "candidate");
    }
  }
  if (s.prosecution_remaining < 0 || s.defense_remaining < 0 ||
      s.prosecution_remaining > spec_.prosecution_strikes ||
      s.defense_remaining > spec_.defense_strikes) {
    throw ConfigError("equilibrium: strike counts outside the game budget");
  }
  const std::size_t left = n - s.candidate;
  const std::size_t needed = spec_.jury_size - s.seated.size() +
                             static_cast<std::size_t>(s.prosecution_remaining) +
                             static_cast<std::size_t>(s.defense_remaining);
  if (left < needed) {
    throw ConfigError("equilibrium: state cannot complete a jury");
  }
}

GameValue EquilibriumSolver::value(const GameState& state) {
  check_state(state);
  std::vector<std::size_t> seated = state.seated;
  return solve(state.candidate, seated, state.prosecution_remaining,
               state.defense_remaining, state.mover)
      .value;
}

Decision EquilibriumSolver::decision(const GameState& state) {
  check_state(state);
  std::vector<std::size_t> seated = state.seated;
  return solve(state.candidate, seated, state.prosecution_remaining,
               state.defense_remaining, state.mover)
      .decision;
}

EquilibriumSolver::Play EquilibriumSolver::play_out() {
  Play play;
  GameState s = root();
  while (s.seated.size() < spec_.jury_size) {
    const Decision d = decision(s);
    play.decisions.push_back(d);
    play.movers.push_back(s.mover);
    if (s.mover == Side::kProsecution) {
      if (d == Decision::kStrike) {
        --s.prosecution_remaining;
        ++s.candidate;
      } else {
        s.mover = Side::kDefense;
      }
    } else {
      if (d == Decision::kStrike) {
        --s.defense_remaining;
      } else {
        s.seated.push_back(s.candidate);
      }
      ++s.candidate;
      s.mover = Side::kProsecution;
    }
  }
  play.seated = s.seated;
  return play;
}

EquilibriumResult solve_equilibrium(const GameSpec& spec) {
  EquilibriumSolver solver(spec);
  const GameState root = solver.root();
  EquilibriumResult r;
  r.value = solver.value(root);
  r.root_decision = solver.decision(root);
  r.states = solver.states();
  return r;
}

FInvarianceReport equilibrium_f_invariance(std::span<const Jpf> survivors,
                                           const FSet& fset, int strikes,
                                           const VerdictModel& model,
                                           std::size_t jury_size) {
  const auto grid = fset.grid();
  const std::size_t n = survivors.size();
  std::map<std::vector<std::size_t>, std::size_t> paths;
  std::vector<double> strike_freq(n, 0.0);
  for (double f : grid) {
    std::vector<double> view(n);
    for (std::size_t k = 0; k < n; ++k) view[k] = survivors[k](f);
    EquilibriumSolver solver(
        GameSpec::common(view, strikes, strikes, model, jury_size));
    const auto play = solver.play_out();
    ++paths[play.seated];
    // A survivor before the last seat that was not seated was struck.
    const std::size_t last = play.seated.back();
    std::vector<char> seated(n, 0);
    for (std::size_t k : play.seated) seated[k] = 1;
    for (std::size_t k = 0; k <= last; ++k) {
      if (!seated[k]) strike_freq[k] += 1.0;
    }
  }
  FInvarianceReport report;
  report.grid_points = grid.size();
  report.distinct_paths = paths.size();
  std::size_t modal = 0;
  for (const auto& [path, count] : paths) modal = std::max(modal, count);
  report.modal_share =
      static_cast<double>(modal) / static_cast<double>(grid.size());
  double var = 0.0;
  for (double c : strike_freq) {
    const double p = c / static_cast<double>(grid.size());
    var += p * (1.0 - p);
  }
  report.decision_variance = n > 0 ? var / static_cast<double>(n) : 0.0;
  return report;
}

}  // namespace vdsim
