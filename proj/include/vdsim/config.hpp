#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "vdsim/jpf.hpp"
#include "vdsim/juror.hpp"
#include "vdsim/policy.hpp"
#include "vdsim/selection.hpp"
#include "vdsim/verdict.hpp"

namespace vdsim {

inline constexpr const char* kConfigSchema = "vdsim.config/1";

struct Range {
  double lo = 0.0;
  double hi = 0.0;

  double mid() const { return 0.5 * (lo + hi); }
};

// One juror type: intercept and slope drawn uniformly from their ranges.
struct JpfComponent {
  double weight = 1.0;
  Range intercept{0.0, 1.0};
  Range slope{0.0, 0.0};
};

// Mixture over affine JPFs. With concentration > 0 each pool draws its own
// component weights from Dirichlet(concentration * weight), which makes
// pools differ in composition; pool_shift_sd adds a common intercept shift
// per pool.
struct JpfPopulation {
  std::vector<JpfComponent> components;
  double concentration = 0.0;
  double pool_shift_sd = 0.0;

  // Population-average JPF (weights at their base values, no shift).
  Jpf mean_jpf() const;
};

struct OffenseMix {
  double misdemeanor = 0.40;
  double felony = 0.50;
  double life_felony = 0.10;

  double operator[](OffenseClass c) const;
};

// Summoned pool size per offense class. Defaults keep the chance that cause
// strikes leave fewer than 6 + 2n survivors below 1e-8.
struct PoolSizes {
  int misdemeanor = 48;
  int felony = 62;
  int life_felony = 78;

  int operator[](OffenseClass c) const;
};

struct PoolCovariateModel {
  double prop_black = 0.13;
  double prop_female = 0.54;
  double age_mean = 46.91;
  double age_sd = 17.5;
  double income_mean = 62404.0;
  double income_log_sd = 0.42;
  double prob_dem = 0.29;
  double prob_rep = 0.21;
};

// Defendant and attorney covariates, drawn independently of everything
// else. Their only job is calibrating balance and randomization tests.
struct DefendantCovariateModel {
  double age_mean = 36.84;
  double age_sd = 12.68;
  double prob_black = 0.55;
  double prob_hispanic = 0.13;
  double prob_female = 0.14;
  double prob_public_defender = 0.75;
  double atty_experience_mean = 9.71;
  double atty_experience_sd = 10.32;
};

struct ExperimentConfig {
  std::string schema = kConfigSchema;
  std::uint64_t master_seed = 0;
  std::size_t n_cases = 0;
  PoolSizes pool_size;
  OffenseMix offense_mix;
  double fact_alpha = 2.0;
  double fact_beta = 2.0;
  JpfPopulation jpf_population;
  VerdictModel verdict = VerdictModel::independent_votes(8.0, 0.15);
  CauseProbabilities cause;
  PoolCovariateModel pool_covariates;
  DefendantCovariateModel defendant;
  StrategyPolicy defense_policy = StrategyPolicy::greedy_rank(0.15);
  StrategyPolicy prosecution_policy = StrategyPolicy::greedy_rank(0.15);

  const StrategyPolicy& policy(Side s) const {
    return s == Side::kDefense ? defense_policy : prosecution_policy;
  }

  // Throws ConfigError naming the offending field.
  void validate() const;
};

// Library defaults with a two-type juror population.
ExperimentConfig default_config();

// Throws ConfigError with a field-level message.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const ExperimentConfig& cfg);

// FNV-1a over the canonical JSON form, 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

}  // namespace vdsim
