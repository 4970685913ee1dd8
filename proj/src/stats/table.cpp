#include "vdsim/stats/table.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "vdsim/error.hpp"

namespace vdsim::stats {
namespace {

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

void Table::check_rows(std::size_t n, const std::string& name) {
  if (has(name)) throw SchemaError("duplicate column '" + name + "'");
  if (!names_.empty() && n != rows_) {
    throw SchemaError("column '" + name + "' has " + std::to_string(n) +
                      " rows, table has " + std::to_string(rows_));
  }
  rows_ = n;
}

void Table::add_numeric(std::string name, Numeric values) {
  check_rows(values.size(), name);
  names_.push_back(std::move(name));
  data_.emplace_back(std::move(values));
}

void Table::add_text(std::string name, Text values) {
  check_rows(values.size(), name);
  names_.push_back(std::move(name));
  data_.emplace_back(std::move(values));
}

std::size_t Table::index_of(const std::string& name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw SchemaError("missing column '" + name + "'");
  return static_cast<std::size_t>(it - names_.begin());
}

bool Table::has(const std::string& name) const {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

bool Table::is_numeric(const std::string& name) const {
  return std::holds_alternative<Numeric>(data_[index_of(name)]);
}

const Table::Numeric& Table::numeric(const std::string& name) const {
  const auto& col = data_[index_of(name)];
  if (const auto* v = std::get_if<Numeric>(&col)) return *v;
  throw SchemaError("column '" + name + "' is not numeric");
}

const Table::Text& Table::text(const std::string& name) const {
  const auto& col = data_[index_of(name)];
  if (const auto* v = std::get_if<Text>(&col)) return *v;
  throw SchemaError("column '" + name + "' is not text");
}

Table Table::filter(const std::vector<char>& keep) const {
  if (keep.size() != rows_) {
    throw InvariantViolation("filter mask length does not match table rows");
  }
  Table out;
  out.comment = comment;
  for (std::size_t c = 0; c < names_.size(); ++c) {
    std::visit(
        [&](const auto& col) {
          std::decay_t<decltype(col)> kept;
          for (std::size_t r = 0; r < rows_; ++r) {
            if (keep[r]) kept.push_back(col[r]);
          }
          using T = std::decay_t<decltype(col)>;
          if constexpr (std::is_same_v<T, Numeric>) {
            out.add_numeric(names_[c], std::move(kept));
          } else {
            out.add_text(names_[c], std::move(kept));
          }
        },
        data_[c]);
  }
  if (names_.empty()) out.rows_ = 0;
  return out;
}

std::string format_number(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw InvariantViolation("number formatting failed");
  return std::string(buf, ptr);
}

Table read_csv(std::istream& in) {
  Table table;
  std::string line;
  std::vector<std::string> header;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (table.comment.empty()) {
        table.comment = line.substr(line.size() > 1 && line[1] == ' ' ? 2 : 1);
      }
      continue;
    }
    header = split_line(line);
    break;
  }
  if (header.empty()) throw SchemaError("CSV input has no header");
  std::vector<std::vector<std::string>> cells(header.size());
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto row = split_line(line);
    if (row.size() != header.size()) {
      throw SchemaError("CSV line " + std::to_string(line_no) + " has " +
                        std::to_string(row.size()) + " fields, expected " +
                        std::to_string(header.size()));
    }
    for (std::size_t c = 0; c < row.size(); ++c) cells[c].push_back(row[c]);
  }
  for (std::size_t c = 0; c < header.size(); ++c) {
    std::vector<double> numbers(cells[c].size());
    bool numeric = !cells[c].empty();
    for (std::size_t r = 0; r < cells[c].size() && numeric; ++r) {
      numeric = parse_double(cells[c][r], numbers[r]);
    }
    if (numeric) {
      table.add_numeric(header[c], std::move(numbers));
    } else {
      table.add_text(header[c], std::move(cells[c]));
    }
  }
  return table;
}

void write_csv(std::ostream& out, const Table& table) {
  if (!table.comment.empty()) out << "# " << table.comment << '\n';
  const auto& names = table.column_names();
  for (std::size_t c = 0; c < names.size(); ++c) {
    out << (c ? "," : "") << names[c];
  }
  out << '\n';
  std::vector<bool> numeric(names.size());
  for (std::size_t c = 0; c < names.size(); ++c) {
    numeric[c] = table.is_numeric(names[c]);
  }
  for (std::size_t r = 0; r < table.rows(); ++r) {
    for (std::size_t c = 0; c < names.size(); ++c) {
      if (c) out << ',';
      if (numeric[c]) {
        out << format_number(table.numeric(names[c])[r]);
      } else {
        out << table.text(names[c])[r];
      }
    }
    out << '\n';
  }
}

}  // namespace vdsim::stats
