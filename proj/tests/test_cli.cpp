#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mmlab/cli.hpp"
#include "mmlab/perturbation.hpp"

namespace fs = std::filesystem;
using mmlab::cli::run_command;

namespace {

class CliTest : public ::testing::Test {
protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("mmlab_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) const {
    const fs::path p = dir_ / name;
    std::ofstream(p, std::ios::binary) << text;
    return p;
  }
  static std::string read(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  int run(std::vector<std::string> args) const {
    args.insert(args.begin(), "mmlab");
    return run_command(args);
  }

  fs::path dir_;
};

const char* kTwoTrades =
    "t,x1,y1,volume,value,k_s,l_s,k_b,l_b\n"
    "0.25,0.5,0.5,2,10,1,1,1,1\n"
    "0.75,0.5,0.5,3,9,1,1,1,1\n";

}  // namespace

TEST_F(CliTest, MomentsExample) {
  const auto in = write("ledger.csv", kTwoTrades);
  ASSERT_EQ(run({"moments", "--in", in.string(), "--out", (dir_ / "o").string(), "--delta", "1"}), 0);
  const std::string vol = read(dir_ / "o" / "volatility.csv");
  EXPECT_NE(vol.find("0.75,3.8,13.923076923076923,-0.5169230769230762,false"), std::string::npos) << vol;
  EXPECT_TRUE(fs::exists(dir_ / "o" / "moments.csv"));
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(run({"frobnicate"}), 2);
  EXPECT_EQ(run({}), 2);
  EXPECT_EQ(run({"moments", "--in", (dir_ / "missing.csv").string()}), 2);
  const auto bad = write("bad.csv", "t,x1,y1,volume,value,k_s,l_s,k_b,l_b\n0,0.5,0.5,-1,1,1,1,1,1\n");
  EXPECT_EQ(run({"validate", "--in", bad.string()}), 2);
  EXPECT_EQ(run({"--help"}), 0);
}

TEST_F(CliTest, TransportStepTooLarge) {
  const auto in = write("ledger.csv",
                        "t,x1,y1,volume,value,k_s,l_s,k_b,l_b,vx1,vy1\n"
                        "0.1,0.2,0.3,1,2,1,1,1,1,0.5,-0.5\n"
                        "0.2,0.7,0.6,2,3,1,1,1,1,0.4,0.1\n");
  const std::string out = (dir_ / "t").string();
  EXPECT_EQ(run({"transport", "--in", in.string(), "--out", out, "--cell", "0.25", "--dt", "10"}), 1);
  EXPECT_EQ(run({"transport", "--in", in.string(), "--out", out, "--cell", "0.25"}), 0);
  EXPECT_TRUE(fs::exists(dir_ / "t" / "transport.csv"));
  EXPECT_EQ(run({"transport", "--in", in.string(), "--out", out, "--cell", "0.3"}), 2);
}

TEST_F(CliTest, PerturbHarmonicFrequency) {
  const auto cfg = write("perturb.json", R"({
    "mode": "SIMPLE",
    "labels": [{"k": 1, "l": 1,
                "U": {"a": -1, "b": 1, "x0": 0.01},
                "C": {"a": -4, "b": 1, "x0": 0.0}}]
  })");
  const fs::path out = dir_ / "p";
  ASSERT_EQ(run({"perturb", "--config", cfg.string(), "--out", out.string(), "--dt", "0.001", "--duration", "40"}), 0);
  std::istringstream rows(read(out / "perturb_labels.csv"));
  std::string line;
  std::getline(rows, line);
  std::vector<double> u;
  while (std::getline(rows, line)) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    u.push_back(std::stod(f.at(3)));
  }
  ASSERT_GT(u.size(), 1000u);
  const auto fit = mmlab::fit_oscillation(u, 0.001);
  EXPECT_NEAR(fit.frequency, 1.0, 0.005);
  EXPECT_NE(read(out / "regimes.json").find("HARMONIC"), std::string::npos);
}

TEST_F(CliTest, SynthDeterministicAndFlagsOverride) {
  const auto cfg = write("synth.json", R"({"seed": 5, "agents": 20, "intensity": 40, "duration": 3,
                                            "price_sigma": 0.1, "noise": 0.01})");
  const std::string a = (dir_ / "a").string(), b = (dir_ / "b").string(), c = (dir_ / "c").string();
  ASSERT_EQ(run({"synth", "--config", cfg.string(), "--out", a}), 0);
  ASSERT_EQ(run({"synth", "--config", cfg.string(), "--out", b}), 0);
  ASSERT_EQ(run({"synth", "--config", cfg.string(), "--out", c, "--seed", "6"}), 0);
  EXPECT_EQ(read(dir_ / "a" / "ledger.csv"), read(dir_ / "b" / "ledger.csv"));
  EXPECT_NE(read(dir_ / "a" / "ledger.csv"), read(dir_ / "c" / "ledger.csv"));
  EXPECT_EQ(run({"validate", "--in", (dir_ / "a" / "ledger.csv").string()}), 0);
}

TEST_F(CliTest, PriceOdeAndGrid) {
  const auto cfg = write("ode.json", R"({"U0": 2, "p0": 1, "F_U": 0, "F_C": 0.5})");
  ASSERT_EQ(run({"price-ode", "--config", cfg.string(), "--out", (dir_ / "ode").string(), "--dt", "0.1",
                 "--duration", "1"}),
            0);
  const std::string ode = read(dir_ / "ode" / "price_ode.csv");
  EXPECT_EQ(ode.substr(0, ode.find('\n')), "t,U,p");
  const std::string last = ode.substr(ode.rfind('\n', ode.size() - 2) + 1);
  EXPECT_EQ(last.substr(0, 4), "1,2,") << last;
  EXPECT_NEAR(std::stod(last.substr(4)), 1.25, 1e-12);

  const auto in = write("ledger.csv", kTwoTrades);
  ASSERT_EQ(run({"grid", "--in", in.string(), "--out", (dir_ / "g").string(), "--cell", "0.5"}), 0);
  for (const char* f : {"grid.csv", "grid_counts.csv", "marginal_sell.csv", "marginal_buy.csv"}) {
    EXPECT_TRUE(fs::exists(dir_ / "g" / f)) << f;
  }
  ASSERT_EQ(run({"expectations", "--in", in.string(), "--out", (dir_ / "e").string()}), 0);
  EXPECT_EQ(run({"flows", "--in", in.string(), "--out", (dir_ / "f").string()}), 2);
  const auto matrix = write("matrix.json", R"({"positions": [0, 1], "probabilities": [[0.9, 0.1], [0.2, 0.8]],
                                              "horizon": 1})");
  ASSERT_EQ(run({"flows", "--in", in.string(), "--out", (dir_ / "f").string(), "--matrix", matrix.string()}), 0);
  EXPECT_TRUE(fs::exists(dir_ / "f" / "flow_summary.csv"));
}
