#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "pacp/graph.hpp"
#include "pacp/likelihood.hpp"
#include "pacp/simulator.hpp"

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

struct CliRun {
  int code = -1;
  std::string out;
  json doc;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("pacp_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  CliRun run(const std::string& args, const std::string& env = "") const {
    const std::string cmd = "cd '" + dir_.string() + "' && " + env + " '" + PACP_CLI_PATH + "' " +
                            args + " 2>/dev/null";
    CliRun r;
    FILE* p = ::popen(cmd.c_str(), "r");
    if (!p) return r;
    char buf[4096];
    std::size_t got;
    while ((got = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
    const int status = ::pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.doc = json::parse(r.out, nullptr, false);
    return r;
  }

  std::string read(const std::string& name) const {
    std::ifstream in(dir_ / name, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  void write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name, std::ios::binary) << text;
  }

  fs::path dir_;
};

TEST_F(Cli, SimulateIsByteReproducible) {
  ASSERT_EQ(run("simulate --n 5 --m 1 --delta0 0 --seed 7 --out g.palog").code, 0);
  const auto first = read("g.palog");
  ASSERT_EQ(run("simulate --n 5 --m 1 --delta0 0 --seed 7 --out g.palog").code, 0);
  EXPECT_EQ(read("g.palog"), first);
  EXPECT_EQ(first.rfind("PALOG v1 n=5 m=1\n", 0), 0u);
  std::istringstream in(first);
  EXPECT_NO_THROW(pacp::read_palog(in));
}

TEST_F(Cli, LrOnThreeVertexStar) {
  write("star.palog", "PALOG v1 n=3 m=1\n2 0\n3 0\n");
  const auto r = run("lr --graph star.palog --tau 2 --delta0 0 --delta1 1");
  ASSERT_EQ(r.code, 0);
  EXPECT_NEAR(r.doc["result"]["log_lr"].get<double>(), -0.1541507, 1e-7);
  EXPECT_EQ(r.doc["version"], "1.0.0");
  EXPECT_EQ(r.doc["schema"], "v1");
  EXPECT_TRUE(r.doc.contains("config_echo"));
  EXPECT_TRUE(r.doc.contains("seed"));
}

TEST_F(Cli, TheoryReportsLawAndRates) {
  const auto r = run("theory --m 1 --delta0 0 --delta1 2 --kmax 50");
  ASSERT_EQ(r.code, 0);
  const auto& res = r.doc["result"];
  EXPECT_NEAR(res["p"]["1"].get<double>(), 0.6667, 1e-4);
  EXPECT_NEAR(res["p"]["2"].get<double>(), 0.1667, 1e-4);
  EXPECT_EQ(res["p"].size(), 50u);
  for (const char* k : {"ell_inf_0", "ell_inf_1", "nu0", "nu1"}) EXPECT_GT(res[k].get<double>(), 0.0) << k;
}

TEST_F(Cli, RoundTripLoglikMatchesInMemory) {
  ASSERT_EQ(run("simulate --n 300 --m 2 --delta0 0.5 --delta1 2 --tau 200 --seed 3 --out g.palog").code, 0);
  const auto r = run("loglik --graph g.palog --delta0 0.5 --delta1 2 --tau 200");
  ASSERT_EQ(r.code, 0);
  const auto p = pacp::DeltaProfile::step(0.5, 2.0, 200);
  const auto g = pacp::simulate(300, 2, p, 3);
  EXPECT_EQ(r.doc["result"]["loglik"].get<double>(), pacp::log_likelihood(g, p).value);
}

TEST_F(Cli, CampaignOutputIndependentOfThreads) {
  const std::string args = "test --mode known --n 600 --tau 450 --delta0 0 --delta1 3 --replicates 24 --seed 5";
  const auto a = run(args + " --threads 1");
  const auto b = run(args + " --threads 4");
  const auto c = run(args, "PACP_THREADS=3");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out, c.out);
  EXPECT_TRUE(a.doc["result"].contains("type1"));
  EXPECT_TRUE(a.doc["result"].contains("type2"));
}

TEST_F(Cli, ConfigEchoReplaysTheRun) {
  const auto a = run("mle --n 800 --tau 400 --delta0 0.5 --delta1 2 --replicates 10 --seed 11");
  ASSERT_EQ(a.code, 0);
  std::string args = "mle";
  for (const auto& [k, v] : a.doc["config_echo"].items()) {
    if (v.is_null()) continue;
    args += " --" + k + " " + (v.is_string() ? v.get<std::string>() : v.dump());
  }
  const auto b = run(args);
  ASSERT_EQ(b.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST_F(Cli, CsvTable) {
  const auto r = run("localize --n 500 --tau 400 --delta0 0 --delta1 3 --replicates 5 --seed 1 --csv t.csv");
  ASSERT_EQ(r.code, 0);
  const auto csv = read("t.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "replicate,status,tau_hat,abs_error");
}

TEST_F(Cli, OutFlagWritesJsonFile) {
  ASSERT_EQ(run("theory --m 2 --delta0 1 --out th.json").code, 0);
  const auto doc = json::parse(read("th.json"));
  EXPECT_EQ(doc["command"], "theory");
}

TEST_F(Cli, SingleGraphCommands) {
  write("p.palog", "PALOG v1 n=4 m=1\n2 0\n3 1\n4 2\n");
  const auto red = run("reduce --graph p.palog --tau 3 --tau-prime 2 --delta0 0 --delta1 1");
  ASSERT_EQ(red.code, 0);
  EXPECT_NEAR(red.doc["result"]["y"].get<double>(), 1.2, 1e-12);
  EXPECT_EQ(red.doc["result"]["bold"], json::parse("[3,4]"));
  EXPECT_TRUE(red.doc["result"]["event_bn"].get<bool>());
  const auto loc = run("localize --graph p.palog --delta0 0 --delta1 2 --with-profile");
  ASSERT_EQ(loc.code, 0);
  EXPECT_EQ(loc.doc["result"]["profile"].size(), 5u);
  const auto t = run("test --graph p.palog --tau 2 --delta0 0 --delta1 1");
  ASSERT_EQ(t.code, 0);
  EXPECT_EQ(t.doc["result"]["reject"], t.doc["result"]["statistic"].get<double>() > 0);
}

TEST_F(Cli, PluginAbstentionIsData) {
  write("s.palog", "PALOG v1 n=4 m=1\n2 0\n3 0\n4 0\n");
  const auto r = run("test --mode plugin --graph s.palog --tau 2");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.doc["result"]["verdict"], "abstain");
}

TEST_F(Cli, ExitCodeContract) {
  write("star.palog", "PALOG v1 n=3 m=1\n2 0\n3 0\n");
  write("bad.palog", "PALOG v1 n=3 m=1\n2 0\n2 0\n");
  struct Case {
    std::string args;
    int code;
    std::string kind;
  };
  const Case cases[] = {
      {"", 2, "BadArguments"},
      {"frobnicate", 2, "BadArguments"},
      {"simulate --n 5 --bogus 1", 2, "BadArguments"},
      {"simulate --n abc", 2, "BadArguments"},
      {"simulate --n 5 --m 1 --delta0 -1", 2, "BadArguments"},
      {"simulate --n 5 --delta1 1", 2, "BadArguments"},
      {"lr --graph missing.palog --tau 1 --delta0 0 --delta1 1", 2, "IoError"},
      {"lr --graph star.palog --tau 9 --delta0 0 --delta1 1", 2, "BadArguments"},
      {"test --mode other --tau 2", 2, "BadArguments"},
      {"lr --graph bad.palog --tau 1 --delta0 0 --delta1 1", 3, "MalformedLog"},
      {"mle --graph star.palog --tau 2", 3, "NoInteriorRoot"},
      {"contiguity --probe second-moment --n 1000 --delta0 0 --delta1 1 --regime --replicates 2 --strict",
       3, "PreconditionViolated"},
      {"contiguity --probe event-bn --n 100 --delta0 -0.5 --delta1 1 --tau 99 --tau-prime 80", 3,
       "UnsupportedRegime"},
  };
  for (const auto& c : cases) {
    const auto r = run(c.args);
    EXPECT_EQ(r.code, c.code) << c.args;
    ASSERT_FALSE(r.doc.is_discarded()) << c.args << "\n" << r.out;
    EXPECT_EQ(r.doc["error"]["kind"], c.kind) << c.args;
  }
}

}  // namespace
