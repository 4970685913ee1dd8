#include "cli.hpp"

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "vdsim/config.hpp"
#include "vdsim/error.hpp"
#include "vdsim/experiment.hpp"
#include "vdsim/stats/regression.hpp"
#include "vdsim/stats/table.hpp"

namespace vdsim::cli {
namespace {

std::shared_ptr<spdlog::logger> logger() {
  if (auto existing = spdlog::get("vdsim")) return existing;
  auto log = spdlog::stderr_logger_mt("vdsim");
  const char* level = std::getenv("VDSIM_LOG");
  log->set_level(level ? spdlog::level::from_str(level)
                       : spdlog::level::warn);
  return log;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(
      std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file " + path);
  return out;
}

stats::Table load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot open dataset " + path);
  return stats::read_csv(in);
}

std::string dataset_hash_comment(const stats::Table& table) {
  const auto pos = table.comment.find("config_hash=");
  if (pos == std::string::npos) return "config_hash=unknown";
  const auto end = table.comment.find(' ', pos);
  return table.comment.substr(pos, end - pos);
}

struct Options {
  std::string config;
  std::string out;
  unsigned workers = 1;
  bool oracle = false;
  std::optional<std::uint64_t> seed_override;
  std::string dataset;
  std::string spec = "primary";
  std::string side = "defense";
  std::string se = "hc1";
  std::string sheet;
  std::string offense = "felony";
  std::size_t n_oracle = 200000;
};

int do_simulate(const Options& o, std::ostream& out) {
  RunManifest manifest;
  manifest.started_at = utc_now();
  ExperimentConfig cfg = load_config(o.config);
  if (o.seed_override) cfg.master_seed = *o.seed_override;
  logger()->info("simulating {} cases with {} worker(s)", cfg.n_cases,
                 o.workers);
  const Dataset data = run_experiment(cfg, o.workers);
  stats::Table table = to_table(data, o.oracle);
  table.comment = dataset_comment(cfg);
  {
    auto file = open_output(o.out);
    stats::write_csv(file, table);
  }
  manifest.config_hash = config_hash(cfg);
  manifest.master_seed = cfg.master_seed;
  manifest.outputs.push_back(o.out);
  manifest.finished_at = utc_now();
  {
    auto file = open_output(o.out + ".manifest.json");
    file << manifest.to_json().dump(2) << '\n';
  }

  double guilty = 0.0;
  std::size_t def_n = 0;
  std::size_t def_n1 = 0;
  for (const auto& r : data) {
    guilty += r.guilty;
    def_n += r.def_group == StrikeGroup::kN;
    def_n1 += r.def_group == StrikeGroup::kNminus1;
  }
  const double n = static_cast<double>(std::max<std::size_t>(1, data.size()));
  char line[256];
  std::snprintf(line, sizeof line,
                "wrote %zu cases to %s (config_hash=%s)\n"
                "conviction rate %.4f; defense used n or n-1 strikes in "
                "%.1f%% of cases\n",
                data.size(), o.out.c_str(), manifest.config_hash.c_str(),
                guilty / n, 100.0 * static_cast<double>(def_n + def_n1) / n);
  out << line;
  return kExitOk;
}

int do_estimate(const Options& o, const std::string& spec_name,
                std::ostream& out) {
  const Side side = parse_side(o.side);
  stats::Table table = load_dataset(o.dataset);
  if (table.has(stats::side_prefix(side) + "_group")) {
    stats::add_group_indicators(table, side);
  }
  const auto spec = stats::spec_by_name(spec_name, side);
  stats::SeKind se;
  if (o.se == "hc1") {
    se = stats::SeKind::kHC1;
  } else if (o.se == "classic") {
    se = stats::SeKind::kClassic;
  } else {
    throw ConfigError("--se must be hc1 or classic");
  }
  const auto fit = stats::fit_spec(table, spec, se);
  out << stats::format_fit(fit, spec.name + " specification, " +
                                    std::string(to_string(side)));
  if (!o.out.empty()) {
    auto file = open_output(o.out);
    stats::write_fit_csv(file, fit, dataset_hash_comment(table));
  }
  return kExitOk;
}

int do_balance(const Options& o, std::ostream& out) {
  const Side side = parse_side(o.side);
  const stats::Table table = load_dataset(o.dataset);
  const BalanceTable bal = balance_table(table, side);
  char line[256];
  std::snprintf(line, sizeof line,
                "balance by %s strike group (n = %zu, n-1 = %zu, n-2 = %zu)\n",
                std::string(to_string(side)).c_str(), bal.count_n,
                bal.count_n1, bal.count_n2);
  out << line;
  std::snprintf(line, sizeof line, "%-20s %12s %12s %12s %9s %9s\n",
                "covariate", "mean_n", "mean_n1", "mean_n2", "t", "p");
  out << line;
  for (const auto& r : bal.rows) {
    if (r.testable) {
      std::snprintf(line, sizeof line,
                    "%-20s %12.4f %12.4f %12.4f %9.3f %9.4f\n",
                    r.covariate.c_str(), r.mean_n, r.mean_n1, r.mean_n2, r.t,
                    r.p_value);
    } else {
      std::snprintf(line, sizeof line,
                    "%-20s %12.4f %12.4f %12.4f %9s %9s\n",
                    r.covariate.c_str(), r.mean_n, r.mean_n1, r.mean_n2, "-",
                    "-");
    }
    out << line;
  }
  out << "\nrandomization check (pool statistic on defendant covariates, "
         "robust joint F)\n";
  for (const auto& r : randomization_check(table)) {
    std::snprintf(line, sizeof line, "%-20s F(%g, %g) = %8.3f  p = %.4f\n",
                  r.pool_stat.c_str(), r.df1, r.df2, r.f, r.p_value);
    out << line;
  }
  if (!o.out.empty()) {
    auto file = open_output(o.out);
    file << "# " << dataset_hash_comment(table) << '\n'
         << "covariate,mean_n,mean_n1,mean_n2,t,dof,p_value,testable\n";
    for (const auto& r : bal.rows) {
      file << r.covariate << ',' << stats::format_number(r.mean_n) << ','
           << stats::format_number(r.mean_n1) << ','
           << stats::format_number(r.mean_n2) << ','
           << stats::format_number(r.t) << ',' << stats::format_number(r.dof)
           << ',' << stats::format_number(r.p_value) << ','
           << (r.testable ? 1 : 0) << '\n';
    }
  }
  return kExitOk;
}

int do_replay(const Options& o, std::ostream& out) {
  OffenseClass offense;
  if (o.offense == "misdemeanor") {
    offense = OffenseClass::kMisdemeanor;
  } else if (o.offense == "felony") {
    offense = OffenseClass::kFelony;
  } else if (o.offense == "life_felony") {
    offense = OffenseClass::kLifeFelony;
  } else {
    throw ConfigError("--offense must be misdemeanor, felony or life_felony");
  }
  out << format_replay(cmd_replay(o.sheet), strike_limit(offense)) << '\n';
  return kExitOk;
}

int do_oracle(const Options& o, std::ostream& out) {
  ExperimentConfig cfg = load_config(o.config);
  if (o.seed_override) cfg.master_seed = *o.seed_override;
  const Side side = parse_side(o.side);
  const auto g = gamma_limit_oracle(cfg, o.n_oracle, side);
  char line[256];
  std::snprintf(line, sizeof line,
                "gamma_limit (%s) = %.5f  (MC se %.5f; %zu n-group, %zu "
                "n-1-group cases; config_hash=%s)\n",
                std::string(to_string(side)).c_str(), g.value, g.se,
                g.n_exhausted, g.n_one_short, config_hash(cfg).c_str());
  out << line;
  return kExitOk;
}

}  // namespace

nlohmann::json RunManifest::to_json() const {
  return {{"config_hash", config_hash},
          {"master_seed", master_seed},
          {"tool_version", tool_version},
          {"started_at", started_at},
          {"finished_at", finished_at},
          {"outputs", outputs}};
}

ReplayResult cmd_replay(const std::filesystem::path& sheet_path) {
  std::ifstream in(sheet_path);
  if (!in) throw SheetError("cannot open strike sheet " + sheet_path.string());
  const StrikeSheet sheet = read_strike_sheet(in);
  return replay_strike_sheet(sheet, sheet.entries.size());
}

std::string format_replay(const ReplayResult& r, int limit) {
  std::ostringstream out;
  out << "seated:";
  for (int id : r.seated) out << ' ' << id;
  out << "; defense " << r.defense_strikes << '/' << limit
      << (r.defense_strikes == limit ? " (exhausted)" : "")
      << "; prosecution " << r.prosecution_strikes << '/' << limit
      << (r.prosecution_strikes == limit ? " (exhausted)" : "");
  return out.str();
}

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Voir dire strike-exhaustion simulator", "vdsim"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);
  Options o;

  auto* sim = app.add_subcommand("simulate", "Simulate a dataset of cases");
  sim->add_option("-c,--config", o.config, "Experiment config JSON")
      ->required();
  sim->add_option("-o,--out", o.out, "Dataset CSV path")->required();
  sim->add_option("--workers", o.workers, "Worker threads")
      ->check(CLI::Range(1u, 1024u));
  sim->add_flag("--oracle", o.oracle, "Include the latent fact_index column");
  sim->add_option("--seed-override", o.seed_override,
                  "Replace the config's master_seed");

  auto add_dataset_opts = [&](CLI::App* cmd, bool with_spec) {
    cmd->add_option("dataset", o.dataset, "Dataset CSV")->required();
    cmd->add_option("--side", o.side, "defense or prosecution");
    cmd->add_option("-o,--out", o.out, "Output CSV path");
    if (with_spec) {
      cmd->add_option("--spec", o.spec, "primary, placebo or pooled-controls");
      cmd->add_option("--se", o.se, "hc1 or classic");
    }
  };
  auto* est = app.add_subcommand("estimate", "Fit a regression specification");
  add_dataset_opts(est, true);
  auto* plc = app.add_subcommand("placebo", "Fit the placebo specification");
  add_dataset_opts(plc, false);
  plc->add_option("--se", o.se, "hc1 or classic");
  auto* bal = app.add_subcommand(
      "balance", "Balance table and randomization check");
  add_dataset_opts(bal, false);

  auto* rep = app.add_subcommand("replay", "Replay a strike sheet");
  rep->add_option("sheet", o.sheet, "Strike sheet CSV")->required();
  rep->add_option("--offense", o.offense,
                  "misdemeanor, felony or life_felony");

  auto* orc = app.add_subcommand("oracle-gamma",
                                 "Large-sample exhaustion contrast");
  orc->add_option("-c,--config", o.config, "Experiment config JSON")
      ->required();
  orc->add_option("--side", o.side, "defense or prosecution");
  orc->add_option("--n-oracle", o.n_oracle, "Simulated cases")
      ->check(CLI::PositiveNumber);
  orc->add_option("--seed-override", o.seed_override,
                  "Replace the config's master_seed");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUserError;
  }

  try {
    if (sim->parsed()) return do_simulate(o, out);
    if (est->parsed()) return do_estimate(o, o.spec, out);
    if (plc->parsed()) return do_estimate(o, "placebo", out);
    if (bal->parsed()) return do_balance(o, out);
    if (rep->parsed()) return do_replay(o, out);
    if (orc->parsed()) return do_oracle(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUserError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternalError;
  }
  return kExitInternalError;
}

}  // namespace vdsim::cli
