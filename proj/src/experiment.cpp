#include "vdsim/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <thread>

#include "vdsim/error.hpp"
#include "vdsim/policy.hpp"
#include "vdsim/rng.hpp"
#include "vdsim/selection.hpp"
#include "vdsim/stats/ols.hpp"
#include "vdsim/stats/regression.hpp"
#include "vdsim/stats/ttest.hpp"
#include "vdsim/verdict.hpp"

namespace vdsim {
namespace {

double uniform(Rng& rng, double lo, double hi) {
  if (lo == hi) return lo;
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double draw_beta(Rng& rng, double a, double b) {
  const double x = std::gamma_distribution<double>(a, 1.0)(rng);
  const double y = std::gamma_distribution<double>(b, 1.0)(rng);
  return x / (x + y);
}

std::size_t categorical(Rng& rng, const std::vector<double>& weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  double u = uniform(rng, 0.0, total);
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (u < weights[k]) return k;
    u -= weights[k];
  }
  // Round-off can leave u at the total; fall back to the last positive weight.
  for (std::size_t k = weights.size(); k-- > 0;) {
    if (weights[k] > 0.0) return k;
  }
  throw InvariantViolation("categorical draw with no positive weight");
}

std::vector<double> pool_weights(const JpfPopulation& pop, Rng& rng) {
  std::vector<double> w(pop.components.size());
  for (std::size_t k = 0; k < w.size(); ++k) w[k] = pop.components[k].weight;
  if (pop.concentration > 0.0) {
    for (auto& x : w) {
      if (x > 0.0) {
        x = std::gamma_distribution<double>(pop.concentration * x, 1.0)(rng);
      }
    }
  }
  return w;
}

DefendantCovariates draw_defendant(const DefendantCovariateModel& m,
                                   Rng& rng) {
  DefendantCovariates d;
  d.age = std::max(18.0,
                   std::normal_distribution<double>(m.age_mean, m.age_sd)(rng));
  const double race = uniform(rng, 0.0, 1.0);
  d.black = race < m.prob_black;
  d.hispanic = !d.black && race < m.prob_black + m.prob_hispanic;
  d.female = uniform(rng, 0.0, 1.0) < m.prob_female;
  d.public_defender = uniform(rng, 0.0, 1.0) < m.prob_public_defender;
  const double ratio = m.atty_experience_mean / m.atty_experience_sd;
  const double shape = ratio * ratio;
  const double scale = m.atty_experience_mean / shape;
  d.atty_experience = std::gamma_distribution<double>(shape, scale)(rng);
  return d;
}

CaseRecord simulate_case(const ExperimentConfig& cfg, std::uint64_t index) {
  CaseDraw draw = generate_case(cfg, index);
  Rng cause_rng = substream(cfg.master_seed, index, Stream::kCause);
  const auto cause = apply_cause_strikes(draw.pool, cfg.cause, cause_rng);
  Rng select_rng = substream(cfg.master_seed, index, Stream::kSelection);
  const SelectionOutcome out =
      run_selection(draw.pool, cause, draw.offense, cfg.defense_policy,
                    cfg.prosecution_policy, draw.fact, select_rng);

  std::vector<double> seated;
  seated.reserve(out.seated.size());
  for (int id : out.seated) {
    seated.push_back(draw.pool[static_cast<std::size_t>(id - 1)].jpf(draw.fact));
  }
  Rng verdict_rng = substream(cfg.master_seed, index, Stream::kVerdict);

  CaseRecord r;
  r.case_id = index;
  r.offense = draw.offense;
  r.conviction_probability = conviction_probability(cfg.verdict, seated);
  r.guilty = verdict(cfg.verdict, seated, verdict_rng);
  r.limit = out.limit;
  r.def_strikes = out.def_strikes_used;
  r.pros_strikes = out.pros_strikes_used;
  r.def_group = classify_strike_group(out.def_strikes_used, out.limit);
  r.pros_group = classify_strike_group(out.pros_strikes_used, out.limit);
  r.cause = out.cause_counts;
  r.pool = pool_composition(draw.pool);
  r.defendant = draw.defendant;
  r.fact = draw.fact.value();
  r.policy_violation = out.policy_violation;
  return r;
}

template <typename E>
[[noreturn]] void rethrow_with_case(const E& e, std::uint64_t index) {
  throw E("case " + std::to_string(index) + ": " + e.what());
}

CaseRecord simulate_case_checked(const ExperimentConfig& cfg,
                                 std::uint64_t index) {
  try {
    return simulate_case(cfg, index);
  } catch (const PoolExhausted& e) {
    rethrow_with_case(e, index);
  } catch (const ResourceError& e) {
    rethrow_with_case(e, index);
  } catch (const ConfigError& e) {
    rethrow_with_case(e, index);
  }
}

std::vector<double> column_of(const stats::Table& data,
                              const std::string& name,
                              const stats::Table::Text& groups,
                              const char* level) {
  const auto& col = data.numeric(name);
  std::vector<double> out;
  for (std::size_t r = 0; r < col.size(); ++r) {
    if (groups[r] == level) out.push_back(col[r]);
  }
  return out;
}

double mean_of(const std::vector<double>& x) {
  if (x.empty()) return std::nan("");
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

GammaEstimate contrast(const stats::Table& data, Side side, const char* hi,
                       const char* lo) {
  const auto& groups = data.text(stats::side_prefix(side) + "_group");
  const auto a = column_of(data, "guilty", groups, hi);
  const auto b = column_of(data, "guilty", groups, lo);
  if (a.size() < 2 || b.size() < 2) {
    throw EstimationError(std::string("too few cases in groups '") + hi +
                          "' (" + std::to_string(a.size()) + ") and '" + lo +
                          "' (" + std::to_string(b.size()) + ")");
  }
  auto var = [](const std::vector<double>& x, double m) {
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    return ss / static_cast<double>(x.size() - 1);
  };
  GammaEstimate g;
  g.n_exhausted = a.size();
  g.n_one_short = b.size();
  g.mean_exhausted = mean_of(a);
  g.mean_one_short = mean_of(b);
  g.value = g.mean_exhausted - g.mean_one_short;
  g.se = std::sqrt(var(a, g.mean_exhausted) / static_cast<double>(a.size()) +
                   var(b, g.mean_one_short) / static_cast<double>(b.size()));
  return g;
}

}  // namespace

CaseDraw generate_case(const ExperimentConfig& cfg, std::uint64_t index) {
  Rng rng = substream(cfg.master_seed, index, Stream::kCase);
  CaseDraw d;
  const std::vector<double> mix{cfg.offense_mix.misdemeanor,
                                cfg.offense_mix.felony,
                                cfg.offense_mix.life_felony};
  d.offense = static_cast<OffenseClass>(categorical(rng, mix));
  d.fact = FactIndex(draw_beta(rng, cfg.fact_alpha, cfg.fact_beta));

  const auto& pop = cfg.jpf_population;
  const std::vector<double> weights = pool_weights(pop, rng);
  const double shift =
      pop.pool_shift_sd > 0.0
          ? std::normal_distribution<double>(0.0, pop.pool_shift_sd)(rng)
          : 0.0;

  const auto& pc = cfg.pool_covariates;
  const double log_mu =
      std::log(pc.income_mean) - 0.5 * pc.income_log_sd * pc.income_log_sd;
  const int size = cfg.pool_size[d.offense];
  d.pool.jurors.resize(static_cast<std::size_t>(size));
  for (int k = 0; k < size; ++k) {
    Juror& j = d.pool.jurors[static_cast<std::size_t>(k)];
    j.id = k + 1;
    const auto& comp = pop.components[categorical(rng, weights)];
    const double a = uniform(rng, comp.intercept.lo, comp.intercept.hi) + shift;
    const double b = uniform(rng, comp.slope.lo, comp.slope.hi);
    j.jpf = Jpf::affine(a, b);
    j.covariates.black = uniform(rng, 0.0, 1.0) < pc.prop_black;
    j.covariates.female = uniform(rng, 0.0, 1.0) < pc.prop_female;
    j.covariates.age = std::clamp(
        std::normal_distribution<double>(pc.age_mean, pc.age_sd)(rng), 18.0,
        99.0);
    j.covariates.zip_median_income =
        pc.income_log_sd > 0.0
            ? std::lognormal_distribution<double>(log_mu, pc.income_log_sd)(rng)
            : pc.income_mean;
    const double party = uniform(rng, 0.0, 1.0);
    j.covariates.party = party < pc.prob_dem ? Party::kDem
                         : party < pc.prob_dem + pc.prob_rep ? Party::kRep
                                                             : Party::kNone;
  }
  // Perception draws come after the whole pool so the noise settings never
  // change who is in it.
  for (Juror& j : d.pool.jurors) {
    const double truth = j.jpf(d.fact);
    j.perceived_by_defense =
        perceive(truth, cfg.defense_policy.noise_sigma, rng);
    j.perceived_by_prosecution =
        perceive(truth, cfg.prosecution_policy.noise_sigma, rng);
  }
  Rng def_rng = substream(cfg.master_seed, index, Stream::kDefendant);
  d.defendant = draw_defendant(cfg.defendant, def_rng);
  return d;
}

PoolComposition pool_composition(const JuryPool& pool) {
  PoolComposition c;
  if (pool.size() == 0) return c;
  double income = 0.0;
  for (const Juror& j : pool.jurors) {
    c.prop_black += j.covariates.black;
    c.prop_female += j.covariates.female;
    c.avg_age += j.covariates.age;
    income += j.covariates.zip_median_income;
    c.prop_dem += j.covariates.party == Party::kDem;
    c.prop_rep += j.covariates.party == Party::kRep;
  }
  const double n = static_cast<double>(pool.size());
  c.prop_black /= n;
  c.prop_female /= n;
  c.avg_age /= n;
  c.ln_median_income = std::log(income / n);
  c.prop_dem /= n;
  c.prop_rep /= n;
  return c;
}

Dataset run_experiment(const ExperimentConfig& cfg, unsigned workers) {
  const std::size_t n = cfg.n_cases;
  if (n == 0) return {};
  cfg.validate();
  Dataset out(n);
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n)));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = simulate_case_checked(cfg, i);
    return out;
  }
  // Each worker takes a contiguous block; the first failing case (by index)
  // decides which error surfaces, independent of scheduling.
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> threads;
  for (unsigned w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      const std::size_t lo = n * w / workers;
      const std::size_t hi = n * (w + 1) / workers;
      for (std::size_t i = lo; i < hi; ++i) {
        try {
          out[i] = simulate_case_checked(cfg, i);
        } catch (...) {
          errors[w] = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  for (unsigned w = 0; w < workers; ++w) {
    if (errors[w]) std::rethrow_exception(errors[w]);
  }
  return out;
}

const std::vector<std::string>& pool_stat_columns() {
  static const std::vector<std::string> cols{
      "prop_black", "prop_female", "avg_age",
      "ln_median_income", "prop_dem", "prop_rep"};
  return cols;
}

const std::vector<std::string>& defendant_columns() {
  static const std::vector<std::string> cols{
      "def_age", "def_black", "def_hispanic",
      "def_female", "public_defender", "def_atty_experience"};
  return cols;
}

std::string dataset_comment(const ExperimentConfig& cfg) {
  return "config_hash=" + config_hash(cfg) +
         " master_seed=" + std::to_string(cfg.master_seed);
}

stats::Table to_table(const Dataset& data, bool oracle) {
  const std::size_t n = data.size();
  auto numeric = [&](auto f) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<double>(f(data[i]));
    return v;
  };
  auto text = [&](auto f) {
    std::vector<std::string> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = std::string(f(data[i]));
    return v;
  };
  stats::Table t;
  t.add_numeric("case_id", numeric([](const CaseRecord& r) { return r.case_id; }));
  t.add_numeric("guilty", numeric([](const CaseRecord& r) { return r.guilty; }));
  t.add_numeric("felony", numeric([](const CaseRecord& r) {
                  return r.offense != OffenseClass::kMisdemeanor;
                }));
  t.add_numeric("life_eligible", numeric([](const CaseRecord& r) {
                  return r.offense == OffenseClass::kLifeFelony;
                }));
  t.add_text("def_group", text([](const CaseRecord& r) { return to_string(r.def_group); }));
  t.add_text("pros_group", text([](const CaseRecord& r) { return to_string(r.pros_group); }));
  t.add_numeric("def_exhausts", numeric([](const CaseRecord& r) {
                  return r.def_group == StrikeGroup::kN;
                }));
  t.add_numeric("pros_exhausts", numeric([](const CaseRecord& r) {
                  return r.pros_group == StrikeGroup::kN;
                }));
  t.add_numeric("def_strikes", numeric([](const CaseRecord& r) { return r.def_strikes; }));
  t.add_numeric("pros_strikes", numeric([](const CaseRecord& r) { return r.pros_strikes; }));
  t.add_numeric("cause_judge", numeric([](const CaseRecord& r) { return r.cause.judge; }));
  t.add_numeric("cause_pros", numeric([](const CaseRecord& r) { return r.cause.prosecution; }));
  t.add_numeric("cause_def", numeric([](const CaseRecord& r) { return r.cause.defense; }));
  t.add_numeric("prop_black", numeric([](const CaseRecord& r) { return r.pool.prop_black; }));
  t.add_numeric("prop_female", numeric([](const CaseRecord& r) { return r.pool.prop_female; }));
  t.add_numeric("avg_age", numeric([](const CaseRecord& r) { return r.pool.avg_age; }));
  t.add_numeric("ln_median_income", numeric([](const CaseRecord& r) { return r.pool.ln_median_income; }));
  t.add_numeric("prop_dem", numeric([](const CaseRecord& r) { return r.pool.prop_dem; }));
  t.add_numeric("prop_rep", numeric([](const CaseRecord& r) { return r.pool.prop_rep; }));
  t.add_numeric("def_age", numeric([](const CaseRecord& r) { return r.defendant.age; }));
  t.add_numeric("def_black", numeric([](const CaseRecord& r) { return r.defendant.black; }));
  t.add_numeric("def_hispanic", numeric([](const CaseRecord& r) { return r.defendant.hispanic; }));
  t.add_numeric("def_female", numeric([](const CaseRecord& r) { return r.defendant.female; }));
  t.add_numeric("public_defender", numeric([](const CaseRecord& r) { return r.defendant.public_defender; }));
  t.add_numeric("def_atty_experience", numeric([](const CaseRecord& r) { return r.defendant.atty_experience; }));
  if (oracle) {
    t.add_numeric("fact_index", numeric([](const CaseRecord& r) { return r.fact; }));
  }
  return t;
}

GammaEstimate gamma_hat(const stats::Table& data, Side side) {
  return contrast(data, side, "n", "n1");
}

GammaEstimate gamma_hat(const Dataset& data, Side side) {
  return gamma_hat(to_table(data), side);
}

GammaEstimate placebo_hat(const stats::Table& data, Side side) {
  return contrast(data, side, "n1", "n2");
}

BalanceTable balance_table(const stats::Table& data, Side side) {
  const auto& groups = data.text(stats::side_prefix(side) + "_group");
  BalanceTable out;
  out.side = side;
  for (const auto& g : groups) {
    out.count_n += g == "n";
    out.count_n1 += g == "n1";
    out.count_n2 += g == "n2";
  }
  std::vector<std::string> covariates = defendant_columns();
  for (const auto& c : pool_stat_columns()) covariates.push_back(c);
  for (const auto& c : covariates) {
    BalanceRow row;
    row.covariate = c;
    const auto a = column_of(data, c, groups, "n");
    const auto b = column_of(data, c, groups, "n1");
    row.mean_n = mean_of(a);
    row.mean_n1 = mean_of(b);
    row.mean_n2 = mean_of(column_of(data, c, groups, "n2"));
    try {
      const auto t = stats::welch_t_test(a, b);
      row.t = t.t;
      row.dof = t.dof;
      row.p_value = t.p_value;
      row.testable = true;
    } catch (const EstimationError&) {
      row.testable = false;
    }
    out.rows.push_back(row);
  }
  return out;
}

std::vector<RandomizationRow> randomization_check(const stats::Table& data) {
  const auto n = static_cast<Eigen::Index>(data.rows());
  const auto& dcols = defendant_columns();
  const auto k = static_cast<Eigen::Index>(dcols.size()) + 1;
  Eigen::MatrixXd X(n, k);
  std::vector<std::string> names{"const"};
  X.col(0).setOnes();
  for (Eigen::Index c = 1; c < k; ++c) {
    const auto& col = data.numeric(dcols[c - 1]);
    X.col(c) = Eigen::Map<const Eigen::VectorXd>(col.data(), n);
    names.push_back(dcols[c - 1]);
  }
  std::vector<Eigen::Index> tested(dcols.size());
  for (std::size_t j = 0; j < tested.size(); ++j) {
    tested[j] = static_cast<Eigen::Index>(j) + 1;
  }
  std::vector<RandomizationRow> out;
  for (const auto& stat : pool_stat_columns()) {
    const auto& ycol = data.numeric(stat);
    const Eigen::Map<const Eigen::VectorXd> y(ycol.data(), n);
    const auto fit = stats::ols_fit(X, y, stats::SeKind::kHC1, names);
    RandomizationRow row;
    row.pool_stat = stat;
    row.terms = fit.terms;
    row.coefficients.assign(fit.coefficients.begin(), fit.coefficients.end());
    row.robust_se.assign(fit.std_errors.begin(), fit.std_errors.end());
    row.df1 = static_cast<double>(tested.size());
    row.df2 = static_cast<double>(fit.n - fit.k);
    if (y.maxCoeff() == y.minCoeff()) {
      for (std::size_t j = 1; j < row.coefficients.size(); ++j) {
        row.coefficients[j] = 0.0;
      }
      row.coefficients[0] = y(0);
      out.push_back(std::move(row));
      continue;
    }
    const auto w = stats::wald_test(fit, tested);
    row.f = w.f;
    row.p_value = w.p_value;
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace vdsim
