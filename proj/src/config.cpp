#include "vdsim/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "vdsim/error.hpp"

namespace vdsim {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ConfigError("config field '" + field + "': " + what);
}

void check_keys(const json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(path, "expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!ok.count(it.key())) {
      fail(path.empty() ? it.key() : path + "." + it.key(), "unknown field");
    }
  }
}

std::string join(const std::string& path, const char* key) {
  return path.empty() ? std::string(key) : path + "." + key;
}

double get_number(const json& j, const std::string& path, const char* key,
                  double fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number()) fail(join(path, key), "expected a number");
  return v.get<double>();
}

double require_number(const json& j, const std::string& path,
                      const char* key) {
  if (!j.contains(key)) fail(join(path, key), "missing");
  return get_number(j, path, key, 0.0);
}

std::int64_t get_integer(const json& j, const std::string& path,
                         const char* key) {
  const json& v = j.at(key);
  if (!v.is_number_integer()) fail(join(path, key), "expected an integer");
  return v.get<std::int64_t>();
}

Range parse_range(const json& j, const std::string& path) {
  if (j.is_number()) return Range{j.get<double>(), j.get<double>()};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() ||
      !j[1].is_number()) {
    fail(path, "expected a number or a [lo, hi] pair");
  }
  return Range{j[0].get<double>(), j[1].get<double>()};
}

double parse_sigma(const json& j, const std::string& path) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "infinity") return StrategyPolicy::kBlind;
    fail(path, "expected a number or \"inf\"");
  }
  if (!j.is_number()) fail(path, "expected a number or \"inf\"");
  return j.get<double>();
}

VerdictModel parse_verdict(const json& j, const std::string& path) {
  check_keys(j, path, {"kind", "tau", "beta"});
  if (!j.contains("kind") || !j.at("kind").is_string()) {
    fail(join(path, "kind"), "missing or not a string");
  }
  const auto kind = j.at("kind").get<std::string>();
  const double tau = require_number(j, path, "tau");
  if (kind == "threshold_unanimity") {
    return VerdictModel::threshold_unanimity(tau);
  }
  const double beta = require_number(j, path, "beta");
  if (kind == "smooth_logistic") return VerdictModel::smooth_logistic(beta, tau);
  if (kind == "independent_votes") {
    return VerdictModel::independent_votes(beta, tau);
  }
  fail(join(path, "kind"), "unknown verdict model '" + kind + "'");
}

json verdict_json(const VerdictModel& m) {
  switch (m.kind) {
    case VerdictModel::Kind::kThresholdUnanimity:
      return {{"kind", "threshold_unanimity"}, {"tau", m.tau}};
    case VerdictModel::Kind::kSmoothLogistic:
      return {{"kind", "smooth_logistic"}, {"tau", m.tau}, {"beta", m.beta}};
    case VerdictModel::Kind::kIndependentVotes:
      return {{"kind", "independent_votes"}, {"tau", m.tau}, {"beta", m.beta}};
  }
  throw InvariantViolation("unknown verdict kind");
}

StrategyPolicy parse_policy(const json& j, const std::string& path,
                            const ExperimentConfig& cfg) {
  check_keys(j, path,
             {"kind", "noise_sigma", "margin", "reference", "ids",
              "state_budget"});
  if (!j.contains("kind") || !j.at("kind").is_string()) {
    fail(join(path, "kind"), "missing or not a string");
  }
  const auto kind = j.at("kind").get<std::string>();
  double sigma = 0.0;
  if (j.contains("noise_sigma")) {
    sigma = parse_sigma(j.at("noise_sigma"), join(path, "noise_sigma"));
  }
  StrategyPolicy p;
  if (kind == "never_strike") {
    p = StrategyPolicy::never_strike();
  } else if (kind == "always_strike") {
    p = StrategyPolicy::always_strike();
  } else if (kind == "greedy_rank") {
    p = StrategyPolicy::greedy_rank(0.0);
  } else if (kind == "reservation") {
    Jpf reference = cfg.jpf_population.mean_jpf();
    if (j.contains("reference")) {
      const json& r = j.at("reference");
      const auto rpath = join(path, "reference");
      if (r.is_string()) {
        if (r.get<std::string>() != "population_mean") {
          fail(rpath, "expected \"population_mean\" or an affine object");
        }
      } else {
        check_keys(r, rpath, {"intercept", "slope"});
        reference = Jpf::affine(require_number(r, rpath, "intercept"),
                                require_number(r, rpath, "slope"));
      }
    }
    p = StrategyPolicy::reservation(reference,
                                    require_number(j, path, "margin"));
  } else if (kind == "scripted") {
    if (!j.contains("ids") || !j.at("ids").is_array()) {
      fail(join(path, "ids"), "missing or not an array");
    }
    std::vector<int> ids;
    for (const auto& v : j.at("ids")) {
      if (!v.is_number_integer()) fail(join(path, "ids"), "expected integers");
      ids.push_back(v.get<int>());
    }
    p = StrategyPolicy::scripted(std::move(ids));
  } else if (kind == "equilibrium") {
    p = StrategyPolicy::equilibrium(cfg.verdict);
    if (j.contains("state_budget")) {
      const auto b = get_integer(j, path, "state_budget");
      if (b <= 0) fail(join(path, "state_budget"), "must be positive");
      p.state_budget = static_cast<std::size_t>(b);
    }
  } else {
    fail(join(path, "kind"), "unknown policy '" + kind + "'");
  }
  p.noise_sigma = sigma;
  return p;
}

json policy_json(const StrategyPolicy& p) {
  json j;
  switch (p.kind) {
    case StrategyPolicy::Kind::kNeverStrike:
      j["kind"] = "never_strike";
      break;
    case StrategyPolicy::Kind::kAlwaysStrike:
      j["kind"] = "always_strike";
      break;
    case StrategyPolicy::Kind::kGreedyRank:
      j["kind"] = "greedy_rank";
      break;
    case StrategyPolicy::Kind::kReservation:
      j["kind"] = "reservation";
      j["margin"] = p.margin;
      j["reference"] = {{"intercept", p.reference.intercept()},
                        {"slope", p.reference.slope()}};
      break;
    case StrategyPolicy::Kind::kScripted:
      j["kind"] = "scripted";
      j["ids"] = p.script;
      break;
    case StrategyPolicy::Kind::kEquilibrium:
      j["kind"] = "equilibrium";
      j["state_budget"] = p.state_budget;
      break;
  }
  if (std::isinf(p.noise_sigma)) {
    j["noise_sigma"] = "inf";
  } else {
    j["noise_sigma"] = p.noise_sigma;
  }
  return j;
}

void check_probability(double p, const std::string& field) {
  if (!(p >= 0.0 && p <= 1.0)) fail(field, "must lie in [0, 1]");
}

void check_nonnegative(double x, const std::string& field) {
  if (!(x >= 0.0) || !std::isfinite(x)) {
    fail(field, "must be finite and non-negative");
  }
}

void check_policy(const StrategyPolicy& p, const std::string& path) {
  if (!(p.noise_sigma >= 0.0)) fail(path + ".noise_sigma", "must be >= 0");
  if (p.kind == StrategyPolicy::Kind::kReservation) {
    check_nonnegative(p.margin, path + ".margin");
  }
  if (p.kind == StrategyPolicy::Kind::kEquilibrium && p.state_budget == 0) {
    fail(path + ".state_budget", "must be positive");
  }
}

}  // namespace

Jpf JpfPopulation::mean_jpf() const {
  double total = 0.0;
  double a = 0.0;
  double b = 0.0;
  for (const auto& c : components) {
    total += c.weight;
    a += c.weight * c.intercept.mid();
    b += c.weight * c.slope.mid();
  }
  if (!(total > 0.0)) throw ConfigError("jpf_population has no weight");
  return Jpf::affine(a / total, b / total);
}

double OffenseMix::operator[](OffenseClass c) const {
  switch (c) {
    case OffenseClass::kMisdemeanor:
      return misdemeanor;
    case OffenseClass::kFelony:
      return felony;
    case OffenseClass::kLifeFelony:
      return life_felony;
  }
  throw InvariantViolation("unknown offense class");
}

int PoolSizes::operator[](OffenseClass c) const {
  switch (c) {
    case OffenseClass::kMisdemeanor:
      return misdemeanor;
    case OffenseClass::kFelony:
      return felony;
    case OffenseClass::kLifeFelony:
      return life_felony;
  }
  throw InvariantViolation("unknown offense class");
}

ExperimentConfig default_config() {
  ExperimentConfig cfg;
  cfg.master_seed = 1;
  cfg.n_cases = 1000;
  cfg.jpf_population.components = {
      JpfComponent{0.7, Range{0.0, 0.3}, Range{0.4, 0.4}},
      JpfComponent{0.3, Range{0.5, 0.8}, Range{0.4, 0.4}},
  };
  cfg.jpf_population.concentration = 4.0;
  return cfg;
}

void ExperimentConfig::validate() const {
  if (schema != kConfigSchema) {
    fail("schema", "expected '" + std::string(kConfigSchema) + "', got '" +
                       schema + "'");
  }
  if (n_cases == 0) fail("n_cases", "must be at least 1");
  const std::pair<const char*, int> sizes[] = {
      {"pool_size.misdemeanor", pool_size.misdemeanor},
      {"pool_size.felony", pool_size.felony},
      {"pool_size.life_felony", pool_size.life_felony}};
  for (const auto& [name, n] : sizes) {
    if (n < static_cast<int>(kJurySize)) fail(name, "must be at least 6");
  }
  const std::pair<const char*, double> mix[] = {
      {"offense_mix.misdemeanor", offense_mix.misdemeanor},
      {"offense_mix.felony", offense_mix.felony},
      {"offense_mix.life_felony", offense_mix.life_felony}};
  double mix_total = 0.0;
  for (const auto& [name, w] : mix) {
    check_probability(w, name);
    mix_total += w;
  }
  if (std::abs(mix_total - 1.0) > 1e-9) fail("offense_mix", "must sum to 1");
  if (!(fact_alpha > 0.0) || !std::isfinite(fact_alpha)) {
    fail("fact_distribution.alpha", "must be positive");
  }
  if (!(fact_beta > 0.0) || !std::isfinite(fact_beta)) {
    fail("fact_distribution.beta", "must be positive");
  }
  const auto& pop = jpf_population;
  if (pop.components.empty()) {
    fail("jpf_population.components", "must not be empty");
  }
  double weight_total = 0.0;
  for (std::size_t k = 0; k < pop.components.size(); ++k) {
    const auto& c = pop.components[k];
    const auto base = "jpf_population.components[" + std::to_string(k) + "]";
    check_nonnegative(c.weight, base + ".weight");
    weight_total += c.weight;
    for (const auto& [r, name] :
         {std::pair{c.intercept, ".intercept"}, std::pair{c.slope, ".slope"}}) {
      if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || r.lo > r.hi) {
        fail(base + name, "needs finite lo <= hi");
      }
    }
    if (c.slope.lo < 0.0) fail(base + ".slope", "must be non-negative");
  }
  if (!(weight_total > 0.0)) {
    fail("jpf_population.components", "weights must not all be zero");
  }
  check_nonnegative(pop.concentration, "jpf_population.concentration");
  check_nonnegative(pop.pool_shift_sd, "jpf_population.pool_shift_sd");
  if (!std::isfinite(verdict.tau)) fail("verdict.tau", "must be finite");
  if (verdict.kind != VerdictModel::Kind::kThresholdUnanimity &&
      (!(verdict.beta > 0.0) || !std::isfinite(verdict.beta))) {
    fail("verdict.beta", "must be positive and finite");
  }
  try {
    cause.validate();
  } catch (const ConfigError& e) {
    fail("cause", e.what());
  }
  const auto& pc = pool_covariates;
  check_probability(pc.prop_black, "pool_covariates.prop_black");
  check_probability(pc.prop_female, "pool_covariates.prop_female");
  check_probability(pc.prob_dem, "pool_covariates.prob_dem");
  check_probability(pc.prob_rep, "pool_covariates.prob_rep");
  if (pc.prob_dem + pc.prob_rep > 1.0) {
    fail("pool_covariates", "prob_dem + prob_rep must not exceed 1");
  }
  check_nonnegative(pc.age_sd, "pool_covariates.age_sd");
  check_nonnegative(pc.income_log_sd, "pool_covariates.income_log_sd");
  if (!(pc.income_mean > 0.0)) {
    fail("pool_covariates.income_mean", "must be positive");
  }
  const auto& d = defendant;
  check_probability(d.prob_black, "defendant_covariates.prob_black");
  check_probability(d.prob_hispanic, "defendant_covariates.prob_hispanic");
  if (d.prob_black + d.prob_hispanic > 1.0) {
    fail("defendant_covariates",
         "prob_black + prob_hispanic must not exceed 1");
  }
  check_probability(d.prob_female, "defendant_covariates.prob_female");
  check_probability(d.prob_public_defender,
                    "defendant_covariates.prob_public_defender");
  check_nonnegative(d.age_sd, "defendant_covariates.age_sd");
  if (!(d.atty_experience_mean > 0.0) || !(d.atty_experience_sd > 0.0)) {
    fail("defendant_covariates.atty_experience_mean",
         "mean and sd must be positive");
  }
  check_policy(defense_policy, "defense_policy");
  check_policy(prosecution_policy, "prosecution_policy");
}

ExperimentConfig parse_config(const json& j) {
  check_keys(j, "",
             {"schema", "master_seed", "n_cases", "pool_size", "offense_mix",
              "fact_distribution", "jpf_population", "verdict", "cause",
              "pool_covariates", "defendant_covariates", "defense_policy",
              "prosecution_policy"});
  ExperimentConfig cfg = default_config();
  if (!j.contains("schema") || !j.at("schema").is_string()) {
    fail("schema", "missing or not a string");
  }
  cfg.schema = j.at("schema").get<std::string>();
  if (!j.contains("master_seed")) fail("master_seed", "missing");
  if (!j.at("master_seed").is_number_unsigned()) {
    fail("master_seed", "expected a non-negative integer");
  }
  cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
  if (!j.contains("n_cases")) fail("n_cases", "missing");
  const auto n = get_integer(j, "", "n_cases");
  if (n < 1) fail("n_cases", "must be at least 1");
  cfg.n_cases = static_cast<std::size_t>(n);

  if (j.contains("pool_size")) {
    const json& p = j.at("pool_size");
    if (p.is_number_integer()) {
      const int v = p.get<int>();
      cfg.pool_size = PoolSizes{v, v, v};
    } else {
      check_keys(p, "pool_size", {"misdemeanor", "felony", "life_felony"});
      for (auto [key, slot] :
           {std::pair{"misdemeanor", &cfg.pool_size.misdemeanor},
            std::pair{"felony", &cfg.pool_size.felony},
            std::pair{"life_felony", &cfg.pool_size.life_felony}}) {
        if (p.contains(key)) {
          *slot = static_cast<int>(get_integer(p, "pool_size", key));
        }
      }
    }
  }
  if (j.contains("offense_mix")) {
    const json& m = j.at("offense_mix");
    check_keys(m, "offense_mix", {"misdemeanor", "felony", "life_felony"});
    cfg.offense_mix.misdemeanor =
        require_number(m, "offense_mix", "misdemeanor");
    cfg.offense_mix.felony = require_number(m, "offense_mix", "felony");
    cfg.offense_mix.life_felony =
        require_number(m, "offense_mix", "life_felony");
  }
  if (j.contains("fact_distribution")) {
    const json& f = j.at("fact_distribution");
    check_keys(f, "fact_distribution", {"alpha", "beta"});
    cfg.fact_alpha = require_number(f, "fact_distribution", "alpha");
    cfg.fact_beta = require_number(f, "fact_distribution", "beta");
  }
  if (j.contains("jpf_population")) {
    const json& p = j.at("jpf_population");
    check_keys(p, "jpf_population",
               {"components", "concentration", "pool_shift_sd"});
    if (!p.contains("components") || !p.at("components").is_array()) {
      fail("jpf_population.components", "missing or not an array");
    }
    cfg.jpf_population.components.clear();
    std::size_t k = 0;
    for (const auto& c : p.at("components")) {
      const auto base =
          "jpf_population.components[" + std::to_string(k++) + "]";
      check_keys(c, base, {"weight", "intercept", "slope"});
      JpfComponent comp;
      comp.weight = get_number(c, base, "weight", 1.0);
      if (!c.contains("intercept")) fail(base + ".intercept", "missing");
      comp.intercept = parse_range(c.at("intercept"), base + ".intercept");
      comp.slope = c.contains("slope")
                       ? parse_range(c.at("slope"), base + ".slope")
                       : Range{0.0, 0.0};
      cfg.jpf_population.components.push_back(comp);
    }
    cfg.jpf_population.concentration =
        get_number(p, "jpf_population", "concentration", 0.0);
    cfg.jpf_population.pool_shift_sd =
        get_number(p, "jpf_population", "pool_shift_sd", 0.0);
  }
  if (j.contains("verdict")) cfg.verdict = parse_verdict(j.at("verdict"), "verdict");
  if (j.contains("cause")) {
    const json& c = j.at("cause");
    check_keys(c, "cause", {"judge", "prosecution", "defense"});
    cfg.cause.judge = require_number(c, "cause", "judge");
    cfg.cause.prosecution = require_number(c, "cause", "prosecution");
    cfg.cause.defense = require_number(c, "cause", "defense");
  }
  if (j.contains("pool_covariates")) {
    const json& c = j.at("pool_covariates");
    const std::string path = "pool_covariates";
    check_keys(c, path,
               {"prop_black", "prop_female", "age_mean", "age_sd",
                "income_mean", "income_log_sd", "prob_dem", "prob_rep"});
    auto& pc = cfg.pool_covariates;
    pc.prop_black = get_number(c, path, "prop_black", pc.prop_black);
    pc.prop_female = get_number(c, path, "prop_female", pc.prop_female);
    pc.age_mean = get_number(c, path, "age_mean", pc.age_mean);
    pc.age_sd = get_number(c, path, "age_sd", pc.age_sd);
    pc.income_mean = get_number(c, path, "income_mean", pc.income_mean);
    pc.income_log_sd = get_number(c, path, "income_log_sd", pc.income_log_sd);
    pc.prob_dem = get_number(c, path, "prob_dem", pc.prob_dem);
    pc.prob_rep = get_number(c, path, "prob_rep", pc.prob_rep);
  }
  if (j.contains("defendant_covariates")) {
    const json& c = j.at("defendant_covariates");
    const std::string path = "defendant_covariates";
    check_keys(c, path,
               {"age_mean", "age_sd", "prob_black", "prob_hispanic",
                "prob_female", "prob_public_defender", "atty_experience_mean",
                "atty_experience_sd"});
    auto& d = cfg.defendant;
    d.age_mean = get_number(c, path, "age_mean", d.age_mean);
    d.age_sd = get_number(c, path, "age_sd", d.age_sd);
    d.prob_black = get_number(c, path, "prob_black", d.prob_black);
    d.prob_hispanic = get_number(c, path, "prob_hispanic", d.prob_hispanic);
    d.prob_female = get_number(c, path, "prob_female", d.prob_female);
    d.prob_public_defender =
        get_number(c, path, "prob_public_defender", d.prob_public_defender);
    d.atty_experience_mean =
        get_number(c, path, "atty_experience_mean", d.atty_experience_mean);
    d.atty_experience_sd =
        get_number(c, path, "atty_experience_sd", d.atty_experience_sd);
  }
  // Policies resolve references against the population and verdict parsed
  // above, so they come last.
  if (j.contains("defense_policy")) {
    cfg.defense_policy =
        parse_policy(j.at("defense_policy"), "defense_policy", cfg);
  }
  if (j.contains("prosecution_policy")) {
    cfg.prosecution_policy =
        parse_policy(j.at("prosecution_policy"), "prosecution_policy", cfg);
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file " + path.string() +
                      " is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

json to_json(const ExperimentConfig& cfg) {
  json j;
  j["schema"] = cfg.schema;
  j["master_seed"] = cfg.master_seed;
  j["n_cases"] = cfg.n_cases;
  j["pool_size"] = {{"misdemeanor", cfg.pool_size.misdemeanor},
                    {"felony", cfg.pool_size.felony},
                    {"life_felony", cfg.pool_size.life_felony}};
  j["offense_mix"] = {{"misdemeanor", cfg.offense_mix.misdemeanor},
                      {"felony", cfg.offense_mix.felony},
                      {"life_felony", cfg.offense_mix.life_felony}};
  j["fact_distribution"] = {{"alpha", cfg.fact_alpha},
                            {"beta", cfg.fact_beta}};
  json comps = json::array();
  for (const auto& c : cfg.jpf_population.components) {
    comps.push_back({{"weight", c.weight},
                     {"intercept", {c.intercept.lo, c.intercept.hi}},
                     {"slope", {c.slope.lo, c.slope.hi}}});
  }
  j["jpf_population"] = {
      {"components", comps},
      {"concentration", cfg.jpf_population.concentration},
      {"pool_shift_sd", cfg.jpf_population.pool_shift_sd}};
  j["verdict"] = verdict_json(cfg.verdict);
  j["cause"] = {{"judge", cfg.cause.judge},
                {"prosecution", cfg.cause.prosecution},
                {"defense", cfg.cause.defense}};
  const auto& pc = cfg.pool_covariates;
  j["pool_covariates"] = {{"prop_black", pc.prop_black},
                          {"prop_female", pc.prop_female},
                          {"age_mean", pc.age_mean},
                          {"age_sd", pc.age_sd},
                          {"income_mean", pc.income_mean},
                          {"income_log_sd", pc.income_log_sd},
                          {"prob_dem", pc.prob_dem},
                          {"prob_rep", pc.prob_rep}};
  const auto& d = cfg.defendant;
  j["defendant_covariates"] = {
      {"age_mean", d.age_mean},
      {"age_sd", d.age_sd},
      {"prob_black", d.prob_black},
      {"prob_hispanic", d.prob_hispanic},
      {"prob_female", d.prob_female},
      {"prob_public_defender", d.prob_public_defender},
      {"atty_experience_mean", d.atty_experience_mean},
      {"atty_experience_sd", d.atty_experience_sd}};
  j["defense_policy"] = policy_json(cfg.defense_policy);
  j["prosecution_policy"] = policy_json(cfg.prosecution_policy);
  return j;
}

std::string config_hash(const ExperimentConfig& cfg) {
  const std::string text = to_json(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream out;
  out << std::hex;
  out.width(16);
  out.fill('0');
  out << h;
  return out.str();
}

}  // namespace vdsim
