#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "ecorank/io.hpp"
#include "ecorank/synth.hpp"
#include "json.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;
using ecorank::cli::run;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

fs::path data_dir() {
  if (const char* dir = std::getenv("ECORANK_DATA_DIR")) return dir;
  return fs::path(__FILE__).parent_path().parent_path() / "data";
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("ecorank_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int call(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return run(args, out_, err_);
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string nested(int n, int m) {
    const auto file = path("nested.mat");
    EXPECT_EQ(call({"synth", "--nested", std::to_string(n), std::to_string(m), "--noise", "0.05", "--seed", "3",
                    "--out", file}),
              0);
    return file;
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

}  // namespace

TEST_F(Cli, HelpAndUsage) {
  EXPECT_EQ(call({"--help"}), 0);
  EXPECT_NE(out_.str().find("synth"), std::string::npos);
  EXPECT_EQ(call({}), 1);
  EXPECT_EQ(call({"frobnicate"}), 1);
}

TEST_F(Cli, SynthNested) {
  ASSERT_EQ(call({"synth", "--nested", "20", "40", "--out", path("n.mat")}), 0);
  const auto m = ecorank::load_matrix(path("n.mat"));
  EXPECT_EQ(testutil::link_set(m), testutil::link_set(ecorank::perfectly_nested(20, 40)));
  EXPECT_EQ(slurp(path("n.mat")).rfind("#ecorank-matrix v1 year=none\n", 0), 0u);
  EXPECT_TRUE(fs::exists(path("n.mat.manifest.json")));
}

TEST_F(Cli, SynthReproducible) {
  ASSERT_EQ(call({"synth", "--nested", "20", "40", "--noise", "0.05", "--seed", "7", "--out", path("a.mat")}), 0);
  ASSERT_EQ(call({"synth", "--nested", "20", "40", "--noise", "0.05", "--seed", "7", "--out", path("b.mat")}), 0);
  EXPECT_EQ(slurp(path("a.mat")), slurp(path("b.mat")));
  EXPECT_EQ(testutil::link_set(ecorank::load_matrix(path("a.mat"))),
            testutil::link_set(ecorank::nested_with_noise(20, 40, 0.05, 7)));
}

TEST_F(Cli, SynthRejectsEmptyShape) {
  EXPECT_EQ(call({"synth", "--nested", "0", "5", "--out", path("x.mat")}), 1);
  EXPECT_EQ(call({"synth", "--nested", "3", "5", "--random", "3", "5", "--out", path("x.mat")}), 1);
  EXPECT_FALSE(fs::exists(path("x.mat")));
}

TEST_F(Cli, RankFcmDefaults) {
  const auto matrix = nested(20, 40);
  ASSERT_EQ(call({"rank", matrix, "--method", "fcm", "--gamma", "1", "--iters", "1000", "--out-prefix", path("f"),
                  "--pbm", path("f.pbm")}),
            0);
  for (const char* suffix : {".countries.scores", ".products.scores", ".countries.ranking", ".products.ranking"}) {
    EXPECT_TRUE(fs::exists(path(std::string("f") + suffix))) << suffix;
  }
  const auto scores = ecorank::load_scores(path("f.countries.scores"));
  EXPECT_EQ(scores.scores.method_tag, "fcm gamma=1 iters=1000");
  EXPECT_NEAR(scores.scores.values.mean(), 1.0, 1e-12);
  const auto manifest = nlohmann::json::parse(slurp(path("f.manifest.json")));
  EXPECT_EQ(manifest["subcommand"], "rank");
  EXPECT_EQ(manifest["parameters"]["method"], "fcm gamma=1 iters=1000");
  EXPECT_EQ(manifest["inputs"].size(), 1u);
  EXPECT_EQ(manifest["outputs"].size(), 5u);
  EXPECT_EQ(slurp(path("f.pbm")).rfind("P1\n", 0), 0u);
}

TEST_F(Cli, RankMrOrderZeroIsDegrees) {
  const auto matrix = nested(10, 20);
  ASSERT_EQ(call({"rank", matrix, "--method", "mr", "--order", "0", "--out-prefix", path("m")}), 0);
  const auto m = ecorank::load_matrix(matrix);
  const auto scores = ecorank::load_scores(path("m.countries.scores"));
  EXPECT_EQ(scores.scores.values, m.diversification().cast<double>());
  const auto products = ecorank::load_scores(path("m.products.scores"));
  EXPECT_EQ(products.direction, ecorank::Direction::low_is_good);
}

TEST_F(Cli, RankRejectsBadFlags) {
  const auto matrix = nested(10, 20);
  EXPECT_EQ(call({"rank", matrix, "--method", "mr", "--order", "3", "--out-prefix", path("m")}), 1);
  EXPECT_NE(err_.str().find("even"), std::string::npos);
  EXPECT_EQ(call({"rank", matrix, "--method", "mr", "--gamma", "2", "--out-prefix", path("m")}), 1);
  EXPECT_EQ(call({"rank", matrix, "--method", "fcm", "--order", "2", "--out-prefix", path("m")}), 1);
  EXPECT_EQ(call({"rank", matrix, "--method", "fcm", "--gamma", "0", "--out-prefix", path("m")}), 1);
  EXPECT_EQ(call({"rank", matrix, "--method", "pagerank", "--out-prefix", path("m")}), 1);
  EXPECT_EQ(call({"rank", matrix, "--method", "fcm", "--eci", "--out-prefix", path("m")}), 1);
  EXPECT_FALSE(fs::exists(path("m.countries.scores")));
}

TEST_F(Cli, RankEciDegenerateIsNumericalError) {
  ASSERT_EQ(call({"synth", "--random", "4", "6", "--fill", "1", "--out", path("full.mat")}), 0);
  EXPECT_EQ(call({"rank", path("full.mat"), "--method", "mr", "--order", "2", "--eci", "--out-prefix", path("m")}), 3);
  const auto matrix = nested(10, 20);
  EXPECT_EQ(call({"rank", matrix, "--method", "mr", "--order", "2", "--eci", "--out-prefix", path("m")}), 0);
  EXPECT_TRUE(fs::exists(path("m.countries.eci.scores")));
}

TEST_F(Cli, RankMissingOrMalformedMatrix) {
  EXPECT_EQ(call({"rank", path("missing.mat"), "--method", "fcm", "--out-prefix", path("m")}), 1);
  std::ofstream(path("bad.mat")) << "#ecorank-matrix v1 year=none\n\"A\" \"p\"\n";
  EXPECT_EQ(call({"rank", path("bad.mat"), "--method", "fcm", "--out-prefix", path("m")}), 2);
  EXPECT_NE(err_.str().find("line 2"), std::string::npos);
}

TEST_F(Cli, IngestSample) {
  const auto trades = (data_dir() / "sample_trade.tsv").string();
  const auto config = (data_dir() / "cleaning_example.cfg").string();
  ASSERT_EQ(call({"ingest", "--trades", trades, "--config", config, "--year", "1996", "--out", path("y96.mat")}), 0)
      << err_.str();
  const auto m = ecorank::load_matrix(path("y96.mat"));
  EXPECT_EQ(m.year(), 1996);
  EXPECT_EQ(slurp(path("y96.mat")).rfind("#ecorank-matrix v1 year=1996\n", 0), 0u);
  EXPECT_FALSE(m.find(ecorank::Side::products, "9310"));
  EXPECT_FALSE(m.find(ecorank::Side::products, "0565"));
  EXPECT_FALSE(m.find(ecorank::Side::countries, "ZAF"));
  const auto report = slurp(path("y96.mat.cleaning"));
  EXPECT_EQ(report.rfind("#ecorank-cleaning-report v1\n", 0), 0u);
  EXPECT_NE(report.find("removed_gap_products\t1\n"), std::string::npos);

  ASSERT_EQ(call({"ingest", "--trades", trades, "--config", config, "--year", "1996", "--core-countries",
                  (data_dir() / "core_countries.txt").string(), "--out", path("core.mat")}),
            0);
  const auto core = ecorank::load_matrix(path("core.mat"));
  EXPECT_LE(core.countries(), 5);
  EXPECT_TRUE(core.find(ecorank::Side::countries, "USA"));
  EXPECT_FALSE(core.find(ecorank::Side::countries, "FRA"));
}

TEST_F(Cli, IngestStrictAndLenient) {
  std::ofstream(path("t.tsv")) << "USA\t0011\t1996\t10\nUSA\t0012\t1996\noops\nFRA\t0012\t1996\t4\n";
  EXPECT_EQ(call({"ingest", "--trades", path("t.tsv"), "--year", "1996", "--out", path("t.mat")}), 2);
  EXPECT_NE(err_.str().find("line 2"), std::string::npos);
  EXPECT_EQ(call({"ingest", "--trades", path("t.tsv"), "--year", "1996", "--lenient", "--out", path("t.mat")}), 0);
  EXPECT_NE(err_.str().find(":2:"), std::string::npos);
  EXPECT_EQ(call({"ingest", "--trades", path("t.tsv"), "--year", "1980", "--lenient", "--out", path("t.mat")}), 2);
}

TEST_F(Cli, EvalExtinctionFromScores) {
  const auto matrix = nested(20, 40);
  ASSERT_EQ(call({"rank", matrix, "--method", "fcm", "--out-prefix", path("f")}), 0);
  ASSERT_EQ(call({"eval", "extinction", "--matrix", matrix, "--scores", path("f.countries.scores"), "--side",
                  "countries", "--out-dir", path("out")}),
            0);
  const auto table = slurp(path("out/extinction_fcm_gamma1_iters1000.report"));
  EXPECT_NE(table.find("E_C\n"), std::string::npos);
  const auto json = nlohmann::json::parse(slurp(path("out/extinction_fcm_gamma1_iters1000.report.json")));
  EXPECT_EQ(json["experiment"], "extinction");
  EXPECT_TRUE(fs::exists(path("out/extinction_fcm_gamma1_iters1000.manifest.json")));
  EXPECT_EQ(call({"eval", "extinction", "--matrix", matrix, "--scores", path("f.countries.scores"), "--side",
                  "products", "--out-dir", path("out")}),
            1);
}

TEST_F(Cli, EvalExtinctionFromMethodMatchesScores) {
  const auto matrix = nested(20, 40);
  ASSERT_EQ(call({"eval", "extinction", "--matrix", matrix, "--method", "mr", "--order", "2", "--out-dir", path("a")}), 0);
  const auto json = nlohmann::json::parse(slurp(path("a/extinction_mr_order2.report.json")));
  ASSERT_EQ(call({"rank", matrix, "--method", "mr", "--order", "2", "--out-prefix", path("m")}), 0);
  ASSERT_EQ(call({"eval", "extinction", "--matrix", matrix, "--scores", path("m.products.scores"), "--out-dir",
                  path("b")}),
            0);
  const auto side = nlohmann::json::parse(slurp(path("b/extinction_mr_order2.report.json")));
  EXPECT_EQ(json["rows"][0]["E_P"], side["rows"][0]["E_P"]);
}

TEST_F(Cli, EvalNoiseTable) {
  const auto matrix = nested(20, 40);
  ASSERT_EQ(call({"eval", "noise", "--matrix", matrix, "--method", "fcm", "--iters", "200", "--eta", "0.01,0.05,0.1",
                  "--seeds", "10", "--out-dir", path("out")}),
            0);
  const auto json = nlohmann::json::parse(slurp(path("out/noise_fcm_gamma1_iters200.report.json")));
  EXPECT_EQ(json["rows"].size(), 33u);
  EXPECT_EQ(call({"eval", "noise", "--matrix", matrix, "--method", "fcm", "--eta", "1.5", "--out-dir", path("out")}), 1);
}

TEST_F(Cli, EvalVolatilityAndCorrelation) {
  const auto a = nested(20, 40);
  ASSERT_EQ(call({"synth", "--nested", "20", "40", "--noise", "0.05", "--seed", "4", "--out", path("b.mat")}), 0);
  ASSERT_EQ(call({"eval", "volatility", "--year-a", a, "--year-b", path("b.mat"), "--method", "fcm", "--out-dir",
                  path("out")}),
            0);
  EXPECT_TRUE(fs::exists(path("out/volatility_fcm_gamma1_iters1000.report")));
  ASSERT_EQ(call({"eval", "correlation", "--matrix", a, "--method", "fcm", "--gamma", "2", "--out-dir", path("out")}), 0);
  const auto json = nlohmann::json::parse(slurp(path("out/correlation_fcm_gamma2_iters1000.report.json")));
  EXPECT_TRUE(json["rows"][0].contains("rho_products_least_fit"));
}

TEST_F(Cli, SweepTables) {
  const auto matrix = nested(15, 30);
  ASSERT_EQ(call({"sweep", matrix, "--gamma-grid", "0.6:1.0:0.1", "--trials", "5", "--out", path("s.tsv")}), 0);
  const auto table = slurp(path("s.tsv"));
  EXPECT_EQ(table.rfind("method\tparameter\tvalue\tstatistic\tresult\n", 0), 0u);
  // 5 gammas x (E_C, E_P, three correlations)
  EXPECT_EQ(std::count(table.begin(), table.end(), '\n'), 1 + 25);
  EXPECT_NE(table.find("fcm\tgamma\t0.7\t"), std::string::npos);

  ASSERT_EQ(call({"sweep", matrix, "--orders", "0,2,4", "--experiments", "extinction", "--trials", "5"}), 0);
  EXPECT_NE(out_.str().find("mr\torder\t4\tE_P"), std::string::npos);

  EXPECT_EQ(call({"sweep", matrix, "--gammas", ","}), 1);
  EXPECT_EQ(call({"sweep", matrix, "--gamma-grid", "2:1:0.1"}), 1);
  EXPECT_EQ(call({"sweep", matrix}), 1);
  EXPECT_EQ(call({"sweep", matrix, "--orders", "1,2"}), 1);
}

TEST_F(Cli, RerunIsByteIdentical) {
  const auto matrix = nested(20, 40);
  const std::vector<std::string> args{"eval", "noise", "--matrix", matrix, "--method", "mr", "--order", "2",
                                      "--seeds", "3", "--out-dir", path("out")};
  ASSERT_EQ(call(args), 0);
  const auto first = slurp(path("out/noise_mr_order2.report"));
  const auto first_manifest = slurp(path("out/noise_mr_order2.manifest.json"));
  ASSERT_EQ(call(args), 0);
  EXPECT_EQ(slurp(path("out/noise_mr_order2.report")), first);
  EXPECT_EQ(slurp(path("out/noise_mr_order2.manifest.json")), first_manifest);
  const auto manifest = nlohmann::json::parse(first_manifest);
  EXPECT_EQ(manifest["seeds"].size(), 3u);
  EXPECT_EQ(manifest["inputs"][matrix].get<std::string>().rfind("fnv1a64:", 0), 0u);
}
