#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "scdtns/io.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code;
  std::string out;
};

class Cli : public ::testing::Test {
 protected:
  fs::path dir;

  void SetUp() override {
    dir = fs::temp_directory_path() /
          (std::string("scdtns_cli_") + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }

  CliResult run(const std::string& args) const {
    const fs::path log = dir / "log.txt";
    const std::string cmd = std::string(SCDTNS_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(log)};
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  static std::size_t data_lines(const fs::path& p) {
    std::ifstream in(p);
    std::size_t n = 0;
    for (std::string line; std::getline(in, line);) n += !line.empty();
    return n - 1;
  }
};

}  // namespace

TEST_F(Cli, GenerateIsDeterministic) {
  ASSERT_EQ(run("generate --seed 0 --n-test 10 --out " + (dir / "a").string()).code, 0);
  ASSERT_EQ(run("generate --seed 0 --n-test 10 --out " + (dir / "b").string()).code, 0);
  EXPECT_EQ(data_lines(dir / "a" / "train.csv"), 48u);
  EXPECT_EQ(data_lines(dir / "a" / "test.csv"), 30u);
  EXPECT_EQ(slurp(dir / "a" / "train.csv"), slurp(dir / "b" / "train.csv"));
  EXPECT_EQ(slurp(dir / "a" / "test.csv"), slurp(dir / "b" / "test.csv"));
  EXPECT_TRUE(fs::exists(dir / "a" / "spec.json"));
  EXPECT_TRUE(fs::exists(dir / "a" / "config.json"));
}

TEST_F(Cli, ZeroMagnitudeConfigGivesIdenticalRowsPerClass) {
  std::ofstream(dir / "cfg.json") << R"({"dataset": {"in_regime": {"magnitude": 0.0}, "n_train": 3, "n_test": 1}})";
  ASSERT_EQ(run("generate --config " + (dir / "cfg.json").string() + " --out " + dir.string()).code, 0);
  const auto rows = scdtns::io::read_signals(dir / "train.csv");
  ASSERT_EQ(rows.size(), 9u);
  for (std::size_t c = 0; c < 3; ++c)
    for (std::size_t i = 1; i < 3; ++i) EXPECT_EQ(rows[c * 3 + i].signal, rows[c * 3].signal);
}

TEST_F(Cli, TrainAndPredictRoundTrip) {
  ASSERT_EQ(run("generate --seed 3 --n-train 8 --n-test 5 --out " + dir.string()).code, 0);
  const auto trained = run("train --data " + (dir / "train.csv").string() + " --out " + dir.string());
  ASSERT_EQ(trained.code, 0) << trained.out;
  EXPECT_NE(trained.out.find("classes = 3"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "model.scdtns"));

  const auto predicted = run("predict --data " + (dir / "train.csv").string() + " --model " +
                             (dir / "model.scdtns").string() + " --out " + (dir / "pred").string());
  ASSERT_EQ(predicted.code, 0) << predicted.out;
  EXPECT_NE(predicted.out.find("accuracy 1,"), std::string::npos) << predicted.out;
  EXPECT_EQ(data_lines(dir / "pred" / "predictions.csv"), 24u);
}

TEST_F(Cli, SingleSamplePerClassTrainsRankOne) {
  ASSERT_EQ(run("generate --n-train 1 --n-test 1 --out " + dir.string()).code, 0);
  const auto r = run("train --data " + (dir / "train.csv").string() + " --model " + (dir / "m.bin").string());
  ASSERT_EQ(r.code, 0) << r.out;
  for (const char* line : {"class 0: rank 1", "class 1: rank 1", "class 2: rank 1"})
    EXPECT_NE(r.out.find(line), std::string::npos);
}

TEST_F(Cli, BadInputsExitWithDataError) {
  std::ofstream(dir / "bad.csv") << "label,t_min,t_max,v0,v1,v2\n0,0,1,1,2,3\n1,0,1,1,oops,3\n";
  auto r = run("train --data " + (dir / "bad.csv").string() + " --out " + dir.string());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("row 3"), std::string::npos) << r.out;

  std::ofstream(dir / "empty.csv") << "label,t_min,t_max\n";
  r = run("train --data " + (dir / "empty.csv").string() + " --out " + dir.string());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("no signals"), std::string::npos) << r.out;

  std::ofstream(dir / "junk.scdtns") << "not a model";
  std::ofstream(dir / "ok.csv") << "0,0,1,1,2,3\n";
  r = run("predict --data " + (dir / "ok.csv").string() + " --model " + (dir / "junk.scdtns").string() +
          " --out " + dir.string());
  EXPECT_EQ(r.code, 2);

  EXPECT_EQ(run("train --no-such-flag").code, 1);
  EXPECT_EQ(run("").code, 1);
}

TEST_F(Cli, BenchmarkWritesSweepTables) {
  auto r = run("benchmark --n-test 5 --train-sizes 1,2,4,8,16,32,64 --ood --out " + dir.string());
  ASSERT_EQ(r.code, 0) << r.out;
  for (const char* file : {"sweep_in.csv", "sweep_ood.csv"}) {
    const auto rows = scdtns::io::parse_sweep(slurp(dir / file));
    ASSERT_EQ(rows.size(), 7u);
    for (const auto& row : rows) {
      EXPECT_GE(row.metrics.accuracy, 0.0);
      EXPECT_LE(row.metrics.accuracy, 1.0);
    }
  }
  fs::remove(dir / "sweep_ood.csv");
  r = run("benchmark --n-test 5 --train-sizes 1,2 --out " + dir.string());
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(scdtns::io::parse_sweep(slurp(dir / "sweep_in.csv")).size(), 2u);
  EXPECT_FALSE(fs::exists(dir / "sweep_ood.csv"));
  EXPECT_EQ(run("benchmark --train-sizes 4,2 --out " + dir.string()).code, 2);
}
