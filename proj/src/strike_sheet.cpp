#include "vdsim/strike_sheet.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>

#include "vdsim/error.hpp"
#include "vdsim/verdict.hpp"

namespace vdsim {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

int parse_int(const std::string& text, int line) {
  int v = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw SheetError("strike sheet line " + std::to_string(line) +
                     ": expected an integer, got '" + text + "'");
  }
  return v;
}

// Ordinals of one kind must be exactly 1..count.
void check_ordinals(std::vector<int> ordinals, std::string_view what) {
  std::sort(ordinals.begin(), ordinals.end());
  for (std::size_t k = 0; k < ordinals.size(); ++k) {
    if (k > 0 && ordinals[k] == ordinals[k - 1]) {
      throw SheetError("duplicate " + std::string(what) + " ordinal " +
                       std::to_string(ordinals[k]));
    }
    if (ordinals[k] != static_cast<int>(k) + 1) {
      throw SheetError(std::string(what) +
                       " ordinals must be contiguous from 1");
    }
  }
}

}  // namespace

std::string_view to_string(Disposition d) {
  switch (d) {
    case Disposition::kJC:
      return "JC";
    case Disposition::kDC:
      return "DC";
    case Disposition::kPC:
      return "PC";
    case Disposition::kD:
      return "D";
    case Disposition::kP:
      return "P";
    case Disposition::kJ:
      return "J";
    case Disposition::kNU:
      return "NU";
  }
  return "?";
}

Disposition parse_disposition(std::string_view text) {
  for (Disposition d : {Disposition::kJC, Disposition::kDC, Disposition::kPC,
                        Disposition::kD, Disposition::kP, Disposition::kJ,
                        Disposition::kNU}) {
    if (text == to_string(d)) return d;
  }
  throw SheetError("unknown disposition '" + std::string(text) + "'");
}

StrikeSheet read_strike_sheet(std::istream& in) {
  StrikeSheet sheet;
  std::string raw;
  int line = 0;
  bool header_seen = false;
  while (std::getline(in, raw)) {
    ++line;
    const std::string text = trim(raw);
    if (text.empty() || text.front() == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(text);
    for (std::string cell; std::getline(ss, cell, ',');) {
      cells.push_back(trim(cell));
    }
    if (!text.empty() && text.back() == ',') cells.emplace_back();
    if (!header_seen) {
      if (cells.size() != 3 || cells[0] != "juror_id" ||
          cells[1] != "disposition" || cells[2] != "ordinal") {
        throw SheetError(
            "strike sheet header must be 'juror_id,disposition,ordinal'");
      }
      header_seen = true;
      continue;
    }
    if (cells.size() != 3) {
      throw SheetError("strike sheet line " + std::to_string(line) +
                       ": expected 3 columns");
    }
    SheetEntry e;
    e.juror_id = parse_int(cells[0], line);
    e.disposition = parse_disposition(cells[1]);
    if (has_ordinal(e.disposition)) {
      if (cells[2].empty()) {
        throw SheetError("strike sheet line " + std::to_string(line) +
                         ": " + std::string(to_string(e.disposition)) +
                         " requires an ordinal");
      }
      e.ordinal = parse_int(cells[2], line);
    } else if (!cells[2].empty()) {
      throw SheetError("strike sheet line " + std::to_string(line) +
                       ": ordinal not allowed for " + cells[1]);
    }
    sheet.entries.push_back(e);
  }
  if (!header_seen) throw SheetError("strike sheet is empty");
  return sheet;
}

void write_strike_sheet(std::ostream& out, const StrikeSheet& sheet) {
  out << "juror_id,disposition,ordinal\n";
  for (const SheetEntry& e : sheet.entries) {
    out << e.juror_id << ',' << to_string(e.disposition) << ',';
    if (has_ordinal(e.disposition)) out << e.ordinal;
    out << '\n';
  }
}

ReplayResult replay_strike_sheet(const StrikeSheet& sheet,
                                 std::size_t pool_size) {
  if (sheet.entries.size() != pool_size) {
    throw SheetError("strike sheet has " +
                     std::to_string(sheet.entries.size()) +
                     " rows for a pool of " + std::to_string(pool_size));
  }
  ReplayResult r;
  std::vector<int> d_ord, p_ord, j_ord;
  std::vector<int> j_ids;
  for (std::size_t k = 0; k < sheet.entries.size(); ++k) {
    const SheetEntry& e = sheet.entries[k];
    if (e.juror_id != static_cast<int>(k) + 1) {
      throw SheetError("strike sheet rows must list juror ids 1..P in order");
    }
    switch (e.disposition) {
      case Disposition::kJC:
        ++r.cause.judge;
        break;
      case Disposition::kDC:
        ++r.cause.defense;
        break;
      case Disposition::kPC:
        ++r.cause.prosecution;
        break;
      case Disposition::kD:
        d_ord.push_back(e.ordinal);
        break;
      case Disposition::kP:
        p_ord.push_back(e.ordinal);
        break;
      case Disposition::kJ:
        j_ord.push_back(e.ordinal);
        j_ids.push_back(e.juror_id);
        break;
      case Disposition::kNU:
        break;
    }
    if (!is_strike(e.disposition) && r.seated.size() < kJurySize) {
      r.seated.push_back(e.juror_id);
    }
  }
  check_ordinals(d_ord, "defense strike");
  check_ordinals(p_ord, "prosecution strike");
  check_ordinals(j_ord, "seat");
  if (j_ids.size() > kJurySize) {
    throw SheetError("strike sheet marks " + std::to_string(j_ids.size()) +
                     " jurors as seated; a jury has " +
                     std::to_string(kJurySize));
  }
  if (r.seated.size() < kJurySize) {
    throw SheetError("only " + std::to_string(r.seated.size()) +
                     " unstruck pool members; cannot seat a jury");
  }
  if (!j_ids.empty()) {
    // J marks, when present, must agree with the seating rule.
    std::vector<int> by_seat(j_ids.size());
    for (std::size_t k = 0; k < sheet.entries.size(); ++k) {
      const SheetEntry& e = sheet.entries[k];
      if (e.disposition == Disposition::kJ) {
        by_seat[static_cast<std::size_t>(e.ordinal - 1)] = e.juror_id;
      }
    }
    if (by_seat.size() != kJurySize || by_seat != r.seated) {
      throw SheetError(
          "J marks disagree with the seating rule (first six unstruck)");
    }
  }
  r.defense_strikes = static_cast<int>(d_ord.size());
  r.prosecution_strikes = static_cast<int>(p_ord.size());
  return r;
}

StrikeGroup classify_strike_group(int used, int limit) {
  if (used > limit) return StrikeGroup::kOverLimit;
  if (used == limit) return StrikeGroup::kN;
  if (used == limit - 1) return StrikeGroup::kNminus1;
  if (used == limit - 2) return StrikeGroup::kNminus2;
  return StrikeGroup::kFewer;
}

std::string_view to_string(StrikeGroup g) {
  switch (g) {
    case StrikeGroup::kOverLimit:
      return "over";
    case StrikeGroup::kN:
      return "n";
    case StrikeGroup::kNminus1:
      return "n1";
    case StrikeGroup::kNminus2:
      return "n2";
    case StrikeGroup::kFewer:
      return "few";
  }
  return "?";
}

StrikeGroup parse_strike_group(std::string_view text) {
  for (StrikeGroup g : {StrikeGroup::kOverLimit, StrikeGroup::kN,
                        StrikeGroup::kNminus1, StrikeGroup::kNminus2,
                        StrikeGroup::kFewer}) {
    if (text == to_string(g)) return g;
  }
  throw SchemaError("unknown strike group '" + std::string(text) + "'");
}

}  // namespace vdsim
