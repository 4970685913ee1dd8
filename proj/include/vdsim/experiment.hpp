#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "vdsim/config.hpp"
#include "vdsim/juror.hpp"
#include "vdsim/stats/table.hpp"
#include "vdsim/strike_sheet.hpp"

namespace vdsim {

struct DefendantCovariates {
  double age = 0.0;
  bool black = false;
  bool hispanic = false;
  bool female = false;
  bool public_defender = false;
  double atty_experience = 0.0;
};

struct CaseDraw {
  OffenseClass offense = OffenseClass::kFelony;
  FactIndex fact;
  JuryPool pool;
  DefendantCovariates defendant;
};

// Everything about case `case_index` that is fixed before selection starts.
CaseDraw generate_case(const ExperimentConfig& cfg, std::uint64_t case_index);

struct PoolComposition {
  double prop_black = 0.0;
  double prop_female = 0.0;
  double avg_age = 0.0;
  double ln_median_income = 0.0;
  double prop_dem = 0.0;
  double prop_rep = 0.0;
};

PoolComposition pool_composition(const JuryPool& pool);

struct CaseRecord {
  std::uint64_t case_id = 0;
  OffenseClass offense = OffenseClass::kFelony;
  int guilty = 0;
  int limit = 0;
  int def_strikes = 0;
  int pros_strikes = 0;
  StrikeGroup def_group = StrikeGroup::kFewer;
  StrikeGroup pros_group = StrikeGroup::kFewer;
  CauseCounts cause;
  PoolComposition pool;
  DefendantCovariates defendant;
  double fact = 0.0;
  // Conviction probability of the seated jury under the configured model.
  double conviction_probability = 0.0;
  bool policy_violation = false;
};

using Dataset = std::vector<CaseRecord>;

// Runs cfg.n_cases cases. Output is identical for every worker count.
Dataset run_experiment(const ExperimentConfig& cfg, unsigned workers = 1);

// Covariates the balance and randomization checks look at.
const std::vector<std::string>& pool_stat_columns();
const std::vector<std::string>& defendant_columns();

// Dataset CSV form. The fact index is a latent quantity and is only written
// in oracle mode.
stats::Table to_table(const Dataset& data, bool oracle = false);
std::string dataset_comment(const ExperimentConfig& cfg);

struct GammaEstimate {
  double value = 0.0;
  double se = 0.0;
  std::size_t n_exhausted = 0;
  std::size_t n_one_short = 0;
  double mean_exhausted = 0.0;
  double mean_one_short = 0.0;
};

// Conviction-rate gap between cases where `side` used all n strikes and
// cases where it used n - 1.
GammaEstimate gamma_hat(const stats::Table& data, Side side);
GammaEstimate gamma_hat(const Dataset& data, Side side);

// Same contrast for the n - 1 versus n - 2 groups.
GammaEstimate placebo_hat(const stats::Table& data, Side side);

// Large-sample reference value of the exhaustion contrast computed from
// expected conviction probabilities.
GammaEstimate gamma_limit_oracle(const ExperimentConfig& cfg,
                                 std::size_t n_cases, Side side,
                                 std::uint64_t salt = 0x9a11ULL);

struct BalanceRow {
  std::string covariate;
  double mean_n = 0.0;
  double mean_n1 = 0.0;
  double mean_n2 = 0.0;
  // Welch test of the n group against the n - 1 group.
  double t = 0.0;
  double dof = 0.0;
  double p_value = 1.0;
  bool testable = false;
};

struct BalanceTable {
  Side side = Side::kDefense;
  std::size_t count_n = 0;
  std::size_t count_n1 = 0;
  std::size_t count_n2 = 0;
  std::vector<BalanceRow> rows;
};

BalanceTable balance_table(const stats::Table& data, Side side);

struct RandomizationRow {
  std::string pool_stat;
  // Terms are "const" followed by defendant_columns().
  std::vector<std::string> terms;
  std::vector<double> coefficients;
  std::vector<double> robust_se;
  double f = 0.0;
  double df1 = 0.0;
  double df2 = 0.0;
  double p_value = 1.0;
};

// Regresses each pool statistic on the defendant and attorney covariates
// and tests their joint significance with robust standard errors. A pool
// statistic that does not vary is reported with zero slopes, F = 0, p = 1.
std::vector<RandomizationRow> randomization_check(const stats::Table& data);

}  // namespace vdsim
