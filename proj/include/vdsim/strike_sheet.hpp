#pragma once

#include <iosfwd>
#include <string_view>
#include <vector>

namespace vdsim {

// Per-juror disposition on a strike sheet:
//   JC/DC/PC  struck for cause by judge, defense, prosecution
//   D/P       peremptory strike by defense/prosecution (ordinal = strike #)
//   J         seated on the final jury (ordinal = seat #)
//   NU        neither struck nor used
enum class Disposition { kJC, kDC, kPC, kD, kP, kJ, kNU };

std::string_view to_string(Disposition d);
Disposition parse_disposition(std::string_view text);

constexpr bool is_strike(Disposition d) {
  return d == Disposition::kJC || d == Disposition::kDC ||
         d == Disposition::kPC || d == Disposition::kD ||
         d == Disposition::kP;
}

constexpr bool has_ordinal(Disposition d) {
  return d == Disposition::kD || d == Disposition::kP || d == Disposition::kJ;
}

struct SheetEntry {
  int juror_id = 0;
  Disposition disposition = Disposition::kNU;
  int ordinal = 0;  // 0 when the disposition carries no ordinal

  friend bool operator==(const SheetEntry&, const SheetEntry&) = default;
};

// One entry per pool member, in pool order.
struct StrikeSheet {
  std::vector<SheetEntry> entries;

  friend bool operator==(const StrikeSheet&, const StrikeSheet&) = default;
};

struct CauseCounts {
  int judge = 0;
  int defense = 0;
  int prosecution = 0;

  friend bool operator==(const CauseCounts&, const CauseCounts&) = default;
};

// CSV with header `juror_id,disposition,ordinal`. Lines starting with '#'
// are comments. Throws SheetError on malformed input.
StrikeSheet read_strike_sheet(std::istream& in);
void write_strike_sheet(std::ostream& out, const StrikeSheet& sheet);

struct ReplayResult {
  std::vector<int> seated;  // juror ids in seating order
  int defense_strikes = 0;
  int prosecution_strikes = 0;
  CauseCounts cause;
};

// Seats the first six pool members carrying no strike mark. Validates
// ordinals (unique, contiguous from 1) and any J marks present against the
// computed seating.
ReplayResult replay_strike_sheet(const StrikeSheet& sheet,
                                 std::size_t pool_size);

enum class StrikeGroup { kOverLimit, kN, kNminus1, kNminus2, kFewer };

StrikeGroup classify_strike_group(int used, int limit);

// "over", "n", "n1", "n2", "few".
std::string_view to_string(StrikeGroup g);
StrikeGroup parse_strike_group(std::string_view text);

}  // namespace vdsim
