#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "vdsim/jpf.hpp"
#include "vdsim/selection.hpp"
#include "vdsim/verdict.hpp"

namespace vdsim {

// Full-information one-pass strike game over a list of survivors. Each side
// evaluates juries with its own perceived predispositions; both views are
// common knowledge.
struct GameSpec {
  std::vector<double> prosecution_view;
  std::vector<double> defense_view;
  int prosecution_strikes = 0;
  int defense_strikes = 0;
  std::size_t jury_size = kJurySize;
  VerdictModel model;
  std::size_t max_survivors = 24;
  std::size_t state_budget = 5'000'000;

  // Same values for both sides.
  static GameSpec common(std::vector<double> view, int prosecution_strikes,
                         int defense_strikes, const VerdictModel& model,
                         std::size_t jury_size = kJurySize);
};

struct GameState {
  std::size_t candidate = 0;
  std::vector<std::size_t> seated;  // indices into the survivor list
  int prosecution_remaining = 0;
  int defense_remaining = 0;
  Side mover = Side::kProsecution;
};

// Conviction probability of the equilibrium jury, as each side perceives it.
struct GameValue {
  double prosecution = 0.0;
  double defense = 0.0;
};

// Memoised backward induction. The prosecution maximises and the defense
// minimises conviction probability; ties resolve to Pass. Seated multisets
// are keyed on a 1e-6 grid, so states whose seated values differ by less
// than that share a memo entry.
class EquilibriumSolver {
 public:
  explicit EquilibriumSolver(GameSpec spec);

  GameState root() const;
  GameValue value(const GameState& state);
  Decision decision(const GameState& state);

  // Follows equilibrium play from the root; returns the seated survivor
  // indices and the decision taken at every node, in order.
  struct Play {
    std::vector<std::size_t> seated;
    std::vector<Decision> decisions;
    std::vector<Side> movers;
  };
  Play play_out();

  std::size_t states() const { return memo_.size(); }
  const GameSpec& spec() const { return spec_; }

 private:
  struct Key {
    std::uint32_t packed = 0;  // candidate, strikes, mover
    std::vector<std::int64_t> seated;

    friend bool operator==(const Key&, const Key&) = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const;
  };
  struct Node {
    GameValue value;
    Decision decision = Decision::kPass;
  };

  Node solve(std::size_t candidate, std::vector<std::size_t>& seated,
             int pros_left, int def_left, Side mover);
  Key make_key(std::size_t candidate, std::span<const std::size_t> seated,
               int pros_left, int def_left, Side mover) const;
  GameValue terminal(std::span<const std::size_t> seated) const;
  void check_state(const GameState& s) const;

  GameSpec spec_;
  std::unordered_map<Key, Node, KeyHash> memo_;
};

struct EquilibriumResult {
  GameValue value;
  Decision root_decision = Decision::kPass;
  std::size_t states = 0;
};

EquilibriumResult solve_equilibrium(const GameSpec& spec);

// Measures how much equilibrium play moves across the fact grid when every
// survivor's view is j_k(F).
struct FInvarianceReport {
  std::size_t grid_points = 0;
  std::size_t distinct_paths = 0;
  double modal_share = 0.0;  // share of grid points playing the modal path
  double decision_variance = 0.0;  // mean Bernoulli variance of strike flags
};

FInvarianceReport equilibrium_f_invariance(std::span<const Jpf> survivors,
                                           const FSet& fset, int strikes,
                                           const VerdictModel& model,
                                           std::size_t jury_size = kJurySize);

}  // namespace vdsim
