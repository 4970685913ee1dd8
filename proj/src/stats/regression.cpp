#include "vdsim/stats/regression.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <set>
#include <sstream>

#include "vdsim/error.hpp"

namespace vdsim::stats {
namespace {

std::vector<double> indicator(const Table::Text& groups,
                              std::initializer_list<const char*> levels) {
  std::vector<double> out(groups.size(), 0.0);
  for (std::size_t r = 0; r < groups.size(); ++r) {
    for (const char* level : levels) {
      if (groups[r] == level) out[r] = 1.0;
    }
  }
  return out;
}

}  // namespace

std::string side_prefix(Side side) {
  return side == Side::kDefense ? "def" : "pros";
}

void add_group_indicators(Table& table, Side side) {
  const auto p = side_prefix(side);
  const auto& groups = table.text(p + "_group");
  if (!table.has(p + "_n_n1_group")) {
    table.add_numeric(p + "_n_n1_group", indicator(groups, {"n", "n1"}));
  }
  if (!table.has(p + "_placebo_exhausts")) {
    table.add_numeric(p + "_placebo_exhausts", indicator(groups, {"n1"}));
  }
  if (!table.has(p + "_n1_n2_group")) {
    table.add_numeric(p + "_n1_n2_group", indicator(groups, {"n1", "n2"}));
  }
}

RegressionSpec primary_spec(Side side) {
  const auto p = side_prefix(side);
  RegressionSpec s;
  s.name = "primary";
  s.outcome = "guilty";
  s.regressors = {p + "_exhausts", p + "_n_n1_group", "felony",
                  "life_eligible"};
  s.filter = SampleFilter{p + "_group", {"over"}};
  return s;
}

RegressionSpec placebo_spec(Side side) {
  const auto p = side_prefix(side);
  RegressionSpec s;
  s.name = "placebo";
  s.outcome = "guilty";
  s.regressors = {p + "_placebo_exhausts", p + "_n1_n2_group", "felony",
                  "life_eligible"};
  s.filter = SampleFilter{p + "_group", {"over"}};
  return s;
}

RegressionSpec pooled_controls_spec(Side side) {
  RegressionSpec s = primary_spec(side);
  s.name = "pooled-controls";
  for (const char* c : {"prop_black", "prop_female", "avg_age",
                        "ln_median_income", "prop_dem", "prop_rep"}) {
    s.regressors.emplace_back(c);
  }
  return s;
}

RegressionSpec spec_by_name(const std::string& name, Side side) {
  if (name == "primary") return primary_spec(side);
  if (name == "placebo") return placebo_spec(side);
  if (name == "pooled-controls") return pooled_controls_spec(side);
  throw ConfigError("unknown regression spec '" + name +
                    "' (expected primary, placebo or pooled-controls)");
}

Table estimation_sample(const Table& table, const RegressionSpec& spec) {
  if (!spec.filter) return table;
  const auto& col = table.text(spec.filter->column);
  const auto& ex = spec.filter->excluded;
  std::vector<char> keep(table.rows());
  for (std::size_t r = 0; r < table.rows(); ++r) {
    keep[r] = std::find(ex.begin(), ex.end(), col[r]) == ex.end();
  }
  return table.filter(keep);
}

OlsFit<double> fit_spec(const Table& input, const RegressionSpec& spec,
                        SeKind se) {
  std::vector<std::string> missing;
  auto need = [&](const std::string& c) {
    if (!input.has(c) &&
        std::find(missing.begin(), missing.end(), c) == missing.end()) {
      missing.push_back(c);
    }
  };
  need(spec.outcome);
  for (const auto& r : spec.regressors) need(r);
  for (const auto& f : spec.fixed_effects) need(f);
  if (spec.filter) need(spec.filter->column);
  if (!missing.empty()) {
    std::string msg = "dataset lacks required column(s):";
    for (const auto& m : missing) msg += " " + m;
    throw SchemaError(msg);
  }

  const Table data = estimation_sample(input, spec);
  const auto n = static_cast<Eigen::Index>(data.rows());

  std::vector<std::string> names;
  std::vector<const std::vector<double>*> numeric_cols;
  std::vector<std::vector<double>> dummies;
  if (spec.intercept) names.emplace_back("const");
  for (const auto& r : spec.regressors) {
    names.push_back(r);
    numeric_cols.push_back(&data.numeric(r));
  }
  for (const auto& f : spec.fixed_effects) {
    const auto& levels_col = data.text(f);
    const std::set<std::string> levels(levels_col.begin(), levels_col.end());
    auto it = levels.begin();
    if (it != levels.end()) ++it;
    for (; it != levels.end(); ++it) {
      std::vector<double> d(levels_col.size());
      for (std::size_t r = 0; r < d.size(); ++r) d[r] = levels_col[r] == *it;
      names.push_back(f + "=" + *it);
      dummies.push_back(std::move(d));
    }
  }
  for (const auto& d : dummies) numeric_cols.push_back(&d);

  Eigen::MatrixXd X(n, static_cast<Eigen::Index>(names.size()));
  Eigen::Index c = 0;
  if (spec.intercept) X.col(c++).setOnes();
  for (const auto* col : numeric_cols) {
    X.col(c++) = Eigen::Map<const Eigen::VectorXd>(col->data(), n);
  }
  const auto& y_col = data.numeric(spec.outcome);
  const Eigen::Map<const Eigen::VectorXd> y(y_col.data(), n);
  return ols_fit(X, y, se, names);
}

void write_fit_csv(std::ostream& out, const OlsFit<double>& fit,
                   const std::string& comment) {
  if (!comment.empty()) out << "# " << comment << '\n';
  out << "term,estimate,robust_se,t\n";
  for (Eigen::Index j = 0; j < fit.k; ++j) {
    out << fit.terms[j] << ',' << format_number(fit.coefficients(j)) << ','
        << format_number(fit.std_errors(j)) << ','
        << format_number(fit.t_stats(j)) << '\n';
  }
}

std::string format_fit(const OlsFit<double>& fit, const std::string& title) {
  std::size_t width = 4;
  for (const auto& t : fit.terms) width = std::max(width, t.size());
  std::ostringstream out;
  char line[256];
  out << title << "  (n = " << fit.n << ", R^2 = ";
  std::snprintf(line, sizeof line, "%.4f", fit.r_squared);
  out << line << ", "
      << (fit.se_kind == SeKind::kHC1 ? "HC1 robust" : "classical")
      << " SE)\n";
  std::snprintf(line, sizeof line, "%-*s %12s %12s %9s %9s\n",
                static_cast<int>(width), "term", "estimate", "std_err", "t",
                "p");
  out << line;
  for (Eigen::Index j = 0; j < fit.k; ++j) {
    std::snprintf(line, sizeof line, "%-*s %12.6f %12.6f %9.3f %9.4f\n",
                  static_cast<int>(width), fit.terms[j].c_str(),
                  fit.coefficients(j), fit.std_errors(j), fit.t_stats(j),
                  fit.p_values(j));
    out << line;
  }
  return out.str();
}

}  // namespace vdsim::stats
