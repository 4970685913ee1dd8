#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "vdsim/error.hpp"

namespace fs = std::filesystem;
using namespace vdsim;

namespace {

const std::string kData = VDSIM_DATA_DIR;

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Result r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("vdsim_cli_" +
            std::string(::testing::UnitTest::GetInstance()
                            ->current_test_info()
                            ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, ReplayExampleSheet) {
  const auto r = run({"replay", kData + "/example_sheet.csv"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out,
            "seated: 3 6 10 12 21 25; defense 6/6 (exhausted); prosecution "
            "4/6\n");
  const auto direct = cli::cmd_replay(kData + "/example_sheet.csv");
  EXPECT_EQ(direct.seated, (std::vector<int>{3, 6, 10, 12, 21, 25}));
}

TEST_F(CliTest, ReplayErrors) {
  const auto empty = write("empty.csv", "juror_id,disposition,ordinal\n");
  auto r = run({"replay", empty.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(r.err.empty());

  std::string seven = "juror_id,disposition,ordinal\n";
  for (int k = 1; k <= 7; ++k) seven += std::to_string(k) + ",J,\n";
  r = run({"replay", write("seven.csv", seven).string()});
  EXPECT_EQ(r.code, 2);

  r = run({"replay", (dir_ / "missing.csv").string()});
  EXPECT_EQ(r.code, 2);
  r = run({"replay", kData + "/example_sheet.csv", "--offense", "treason"});
  EXPECT_EQ(r.code, 2);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"simulate", "-c", kData + "/demo.json"}).code, 2);
}

TEST_F(CliTest, MissingSeedIsAUserError) {
  std::string text = slurp(kData + "/demo.json");
  const auto pos = text.find("\"master_seed\"");
  ASSERT_NE(pos, std::string::npos);
  text.erase(pos, text.find('\n', pos) - pos + 1);
  const auto cfg = write("noseed.json", text);
  const auto r = run({"simulate", "-c", cfg.string(), "-o",
                      (dir_ / "x.csv").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("master_seed"), std::string::npos);
}

TEST_F(CliTest, EstimateOnEmptyFile) {
  const auto r = run({"estimate", write("empty.csv", "").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(r.err.empty());
}

TEST_F(CliTest, EstimateListsMissingColumns) {
  const auto r = run({"estimate", write("thin.csv", "guilty\n1\n0\n").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("def_group"), std::string::npos);
}

TEST_F(CliTest, SimulateIsReproducible) {
  const auto a = dir_ / "a.csv";
  const auto b = dir_ / "b.csv";
  const auto c = dir_ / "c.csv";
  const auto cfg = kData + "/demo.json";
  ASSERT_EQ(run({"simulate", "-c", cfg, "-o", a.string()}).code, 0);
  ASSERT_EQ(run({"simulate", "-c", cfg, "-o", b.string(), "--workers", "1"}).code, 0);
  ASSERT_EQ(run({"simulate", "-c", cfg, "-o", c.string(), "--workers", "8"}).code, 0);
  const auto text = slurp(a);
  EXPECT_EQ(text, slurp(b));
  EXPECT_EQ(text, slurp(c));
  EXPECT_EQ(text, slurp(kData + "/demo.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "a.csv.manifest.json"));
}

TEST_F(CliTest, SeedOverrideChangesData) {
  const auto a = dir_ / "a.csv";
  const auto b = dir_ / "b.csv";
  const auto cfg = kData + "/demo.json";
  ASSERT_EQ(run({"simulate", "-c", cfg, "-o", a.string()}).code, 0);
  ASSERT_EQ(run({"simulate", "-c", cfg, "-o", b.string(), "--seed-override",
                 "8"})
                .code,
            0);
  EXPECT_NE(slurp(a), slurp(b));
  EXPECT_NE(slurp(b).find("master_seed=8"), std::string::npos);
}

TEST_F(CliTest, OracleColumnOnlyOnRequest) {
  const auto a = dir_ / "a.csv";
  const auto cfg = kData + "/demo.json";
  ASSERT_EQ(run({"simulate", "-c", cfg, "-o", a.string(), "--oracle"}).code, 0);
  EXPECT_NE(slurp(a).find("fact_index"), std::string::npos);
  EXPECT_EQ(slurp(kData + "/demo.csv").find("fact_index"), std::string::npos);
}

TEST_F(CliTest, EstimateOnDemoHasPositiveExhausts) {
  const auto out = dir_ / "fit.csv";
  const auto r =
      run({"estimate", kData + "/demo.csv", "--spec", "primary", "-o",
           out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(out);
  std::string line;
  double estimate = 0.0;
  bool found = false;
  while (std::getline(in, line)) {
    if (line.rfind("def_exhausts,", 0) == 0) {
      estimate = std::stod(line.substr(line.find(',') + 1));
      found = true;
    }
  }
  ASSERT_TRUE(found);
  EXPECT_GT(estimate, 0.0);
}

TEST_F(CliTest, PlaceboAndBalanceRun) {
  auto r = run({"placebo", kData + "/demo.csv"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("def_placebo_exhausts"), std::string::npos);
  r = run({"placebo", kData + "/demo.csv", "--side", "prosecution"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("pros_placebo_exhausts"), std::string::npos);
  r = run({"balance", kData + "/demo.csv", "-o", (dir_ / "bal.csv").string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("randomization check"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir_ / "bal.csv"));
  r = run({"estimate", kData + "/demo.csv", "--spec", "tobit"});
  EXPECT_EQ(r.code, 2);
}

TEST_F(CliTest, OracleGamma) {
  const auto r = run({"oracle-gamma", "-c", kData + "/demo.json",
                      "--n-oracle", "20000"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("gamma"), std::string::npos);
}

TEST(Manifest, Fields) {
  cli::RunManifest m;
  m.config_hash = "abc";
  m.master_seed = 9;
  m.outputs = {"x.csv"};
  const auto j = m.to_json();
  EXPECT_EQ(j.at("config_hash"), "abc");
  EXPECT_EQ(j.at("master_seed"), 9);
  EXPECT_EQ(j.at("tool_version"), cli::kToolVersion);
}
