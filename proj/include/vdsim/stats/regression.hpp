#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vdsim/juror.hpp"
#include "vdsim/stats/ols.hpp"
#include "vdsim/stats/table.hpp"

namespace vdsim::stats {

// Keeps rows whose text column `column` holds none of `excluded`.
struct SampleFilter {
  std::string column;
  std::vector<std::string> excluded;
};

struct RegressionSpec {
  std::string name;
  std::string outcome;
  std::vector<std::string> regressors;
  std::vector<std::string> fixed_effects;  // text columns, first level dropped
  std::optional<SampleFilter> filter;
  bool intercept = true;
};

// Prefix of the side's dataset columns: "def" or "pros".
std::string side_prefix(Side side);

// Adds the side's derived group indicators if they are not present yet:
//   <p>_n_n1_group         used n or n - 1
//   <p>_placebo_exhausts   used exactly n - 1
//   <p>_n1_n2_group        used n - 1 or n - 2
// <p>_exhausts (used exactly n) is part of the dataset itself.
void add_group_indicators(Table& table, Side side);

// guilty on exhaustion and the n/n-1 indicator, controlling for offense.
RegressionSpec primary_spec(Side side);
// guilty on the n - 1 indicator and the n-1/n-2 indicator.
RegressionSpec placebo_spec(Side side);
// Primary specification plus the pool composition statistics.
RegressionSpec pooled_controls_spec(Side side);
RegressionSpec spec_by_name(const std::string& name, Side side);

// The estimation sample after the spec's filter.
Table estimation_sample(const Table& table, const RegressionSpec& spec);

// Throws SchemaError listing every missing column, EstimationError on a
// degenerate design.
OlsFit<double> fit_spec(const Table& table, const RegressionSpec& spec,
                        SeKind se = SeKind::kHC1);

// CSV with columns term,estimate,robust_se,t.
void write_fit_csv(std::ostream& out, const OlsFit<double>& fit,
                   const std::string& comment = {});
// Aligned plain-text rendering.
std::string format_fit(const OlsFit<double>& fit, const std::string& title);

}  // namespace vdsim::stats
