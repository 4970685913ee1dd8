#include "vdsim/juror.hpp"

#include <string>

#include "vdsim/error.hpp"

namespace vdsim {

std::string_view to_string(Side s) {
  return s == Side::kDefense ? "defense" : "prosecution";
}

Side parse_side(std::string_view text) {
  if (text == "defense" || text == "def") return Side::kDefense;
  if (text == "prosecution" || text == "pros") return Side::kProsecution;
  throw ConfigError("unknown side '" + std::string(text) +
                    "' (expected defense or prosecution)");
}

int strike_limit(OffenseClass offense) {
  switch (offense) {
    case OffenseClass::kMisdemeanor:
      return 3;
    case OffenseClass::kFelony:
      return 6;
    case OffenseClass::kLifeFelony:
      return 10;
  }
  return 0;
}

std::string_view to_string(OffenseClass offense) {
  switch (offense) {
    case OffenseClass::kMisdemeanor:
      return "misdemeanor";
    case OffenseClass::kFelony:
      return "felony";
    case OffenseClass::kLifeFelony:
      return "life_felony";
  }
  return "?";
}

void JuryPool::validate() const {
  for (std::size_t k = 0; k < jurors.size(); ++k) {
    const Juror& j = jurors[k];
    if (j.id != static_cast<int>(k) + 1) {
      throw ConfigError("jury pool ids must be 1..P in pool order; position " +
                        std::to_string(k + 1) + " has id " +
                        std::to_string(j.id));
    }
    for (double v : {j.perceived_by_defense, j.perceived_by_prosecution}) {
      if (!(v >= 0.0 && v <= 1.0)) {
        throw ConfigError("juror " + std::to_string(j.id) +
                          ": perceived predisposition outside [0,1]");
      }
    }
  }
}

}  // namespace vdsim
