#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace vdsim::stats {

// Column store with numeric and text columns, kept in insertion order.
class Table {
 public:
  using Numeric = std::vector<double>;
  using Text = std::vector<std::string>;

  void add_numeric(std::string name, Numeric values);
  void add_text(std::string name, Text values);

  bool has(const std::string& name) const;
  bool is_numeric(const std::string& name) const;

  // Throw SchemaError when the column is absent or of the other type.
  const Numeric& numeric(const std::string& name) const;
  const Text& text(const std::string& name) const;

  std::size_t rows() const { return rows_; }
  std::size_t columns() const { return names_.size(); }
  const std::vector<std::string>& column_names() const { return names_; }

  // Keeps rows whose flag is non-zero.
  Table filter(const std::vector<char>& keep) const;

  // Free-form line written as "# <comment>" above the header.
  std::string comment;

 private:
  std::size_t index_of(const std::string& name) const;
  void check_rows(std::size_t n, const std::string& name);

  std::vector<std::string> names_;
  std::vector<std::variant<Numeric, Text>> data_;
  std::size_t rows_ = 0;
};

// A column is numeric when every cell parses as a number.
Table read_csv(std::istream& in);
void write_csv(std::ostream& out, const Table& table);

// Shortest round-trip decimal form.
std::string format_number(double x);

}  // namespace vdsim::stats
