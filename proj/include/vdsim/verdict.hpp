#pragma once

#include <cstddef>
#include <span>
#include <string>

#include "vdsim/rng.hpp"

namespace vdsim {

// Seats on a Florida non-capital jury.
inline constexpr std::size_t kJurySize = 6;

// Aggregates the seated jurors' predispositions into a unanimous verdict.
//
//   ThresholdUnanimity(tau):    guilty iff min >= tau (deterministic).
//   SmoothLogistic(beta, tau):  P(guilty) = sigmoid(beta * (min - tau)).
//   IndependentVotes(beta, tau): each juror votes guilty independently with
//       probability sigmoid(beta * (j - tau)); conviction needs all votes.
//       Strictly increasing in every juror.
struct VerdictModel {
  enum class Kind { kThresholdUnanimity, kSmoothLogistic, kIndependentVotes };

  Kind kind = Kind::kThresholdUnanimity;
  double tau = 0.5;
  double beta = 1.0;

  static VerdictModel threshold_unanimity(double tau);
  static VerdictModel smooth_logistic(double beta, double tau);
  static VerdictModel independent_votes(double beta, double tau);

  std::string describe() const;
};

double sigmoid(double x);

double conviction_probability(const VerdictModel& model,
                              std::span<const double> predispositions,
                              std::size_t jury_size = kJurySize);

// Draws the 0/1 verdict. The threshold model never touches `rng`.
int verdict(const VerdictModel& model, std::span<const double> predispositions,
            Rng& rng, std::size_t jury_size = kJurySize);

}  // namespace vdsim
