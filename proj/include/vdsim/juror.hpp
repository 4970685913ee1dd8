#pragma once

#include <string_view>
#include <vector>

#include "vdsim/jpf.hpp"

namespace vdsim {

enum class Side { kProsecution, kDefense };

constexpr Side opponent(Side s) {
  return s == Side::kDefense ? Side::kProsecution : Side::kDefense;
}

std::string_view to_string(Side s);
Side parse_side(std::string_view text);

enum class OffenseClass { kMisdemeanor, kFelony, kLifeFelony };

// Peremptory strikes per side: 3 misdemeanor, 6 felony, 10 life felony.
int strike_limit(OffenseClass offense);
std::string_view to_string(OffenseClass offense);

enum class Party { kNone, kDem, kRep };

struct JurorCovariates {
  bool black = false;
  bool female = false;
  double age = 0.0;
  double zip_median_income = 0.0;
  Party party = Party::kNone;
};

struct Juror {
  int id = 0;  // 1-based position in the randomly ordered pool
  Jpf jpf = Jpf::identity();
  JurorCovariates covariates;
  double perceived_by_defense = 0.0;
  double perceived_by_prosecution = 0.0;

  double perceived(Side side) const {
    return side == Side::kDefense ? perceived_by_defense
                                  : perceived_by_prosecution;
  }
};

// Jurors ordered by their randomly assigned number; jurors[k].id == k + 1.
struct JuryPool {
  std::vector<Juror> jurors;

  std::size_t size() const { return jurors.size(); }
  const Juror& operator[](std::size_t k) const { return jurors[k]; }

  // Throws ConfigError on bad ids or perceived values outside [0,1].
  void validate() const;
};

}  // namespace vdsim
