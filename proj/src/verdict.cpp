#include "vdsim/verdict.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <vector>

#include "vdsim/error.hpp"

namespace vdsim {

namespace {

void check_size(std::span<const double> p, std::size_t jury_size) {
  if (p.size() != jury_size) {
    throw ConfigError("verdict expects " + std::to_string(jury_size) +
                      " predispositions, got " + std::to_string(p.size()));
  }
}

void check_params(double beta, double tau) {
  if (!std::isfinite(tau)) throw ConfigError("verdict tau must be finite");
  if (!std::isfinite(beta) || beta <= 0.0) {
    throw ConfigError("verdict beta must be positive and finite");
  }
}

}  // namespace

VerdictModel VerdictModel::threshold_unanimity(double tau) {
  check_params(1.0, tau);
  return {Kind::kThresholdUnanimity, tau, 1.0};
}

VerdictModel VerdictModel::smooth_logistic(double beta, double tau) {
  check_params(beta, tau);
  return {Kind::kSmoothLogistic, tau, beta};
}

VerdictModel VerdictModel::independent_votes(double beta, double tau) {
  check_params(beta, tau);
  return {Kind::kIndependentVotes, tau, beta};
}

std::string VerdictModel::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::kThresholdUnanimity:
      os << "ThresholdUnanimity(tau=" << tau << ")";
      break;
    case Kind::kSmoothLogistic:
      os << "SmoothLogistic(beta=" << beta << ", tau=" << tau << ")";
      break;
    case Kind::kIndependentVotes:
      os << "IndependentVotes(beta=" << beta << ", tau=" << tau << ")";
      break;
  }
  return os.str();
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double conviction_probability(const VerdictModel& model,
                              std::span<const double> predispositions,
                              std::size_t jury_size) {
  check_size(predispositions, jury_size);
  switch (model.kind) {
    case VerdictModel::Kind::kThresholdUnanimity: {
      const double lo =
          *std::min_element(predispositions.begin(), predispositions.end());
      return lo >= model.tau ? 1.0 : 0.0;
    }
    case VerdictModel::Kind::kSmoothLogistic: {
      const double lo =
          *std::min_element(predispositions.begin(), predispositions.end());
      return sigmoid(model.beta * (lo - model.tau));
    }
    case VerdictModel::Kind::kIndependentVotes: {
      // Multiply in sorted order so the result does not depend on seating
      // order, bit for bit.
      std::array<double, 16> buf{};
      std::vector<double> heap;
      std::span<double> sorted;
      if (predispositions.size() <= buf.size()) {
        sorted = std::span<double>(buf.data(), predispositions.size());
      } else {
        heap.resize(predispositions.size());
        sorted = heap;
      }
      std::copy(predispositions.begin(), predispositions.end(), sorted.begin());
      std::sort(sorted.begin(), sorted.end());
      double p = 1.0;
      for (double j : sorted) p *= sigmoid(model.beta * (j - model.tau));
      return p;
    }
  }
  throw InvariantViolation("unknown verdict model");
}

int verdict(const VerdictModel& model, std::span<const double> predispositions,
            Rng& rng, std::size_t jury_size) {
  const double p = conviction_probability(model, predispositions, jury_size);
  if (model.kind == VerdictModel::Kind::kThresholdUnanimity) {
    return p >= 1.0 ? 1 : 0;
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  return unit(rng) < p ? 1 : 0;
}

}  // namespace vdsim
