#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "hlc/io.hpp"

namespace fs = std::filesystem;
using hlc::cli::run;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result hlc_run(std::vector<std::string> args) {
  args.insert(args.begin(), "hlc");
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

const std::string samples = HLC_SAMPLES_DIR;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("hlc_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string file(const std::string& name, const std::string& text) const {
    const auto p = (dir_ / name).string();
    std::ofstream(p) << text;
    return p;
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  static std::string slurp(const std::string& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), {}};
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, HelpAndUnknownSubcommand) {
  const auto help = hlc_run({"--help"});
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("Usage"), std::string::npos);

  const auto bad = hlc_run({"frobnicate"});
  EXPECT_EQ(bad.code, 3);
  EXPECT_NE(bad.err.find("unknown subcommand 'frobnicate'"), std::string::npos);
  EXPECT_NE(bad.err.find("Usage"), std::string::npos);

  EXPECT_EQ(hlc_run({}).code, 3);
  EXPECT_EQ(hlc_run({"solve", "--bogus"}).code, 3);
}

TEST_F(Cli, CheckSatisfiedParams) {
  const auto r = hlc_run({"check", "--params", samples + "/c2_satisfied.params.json", "--condition", "c2", "--strict"});
  EXPECT_EQ(r.code, 0) << r.err;
  std::istringstream table(r.out);
  std::string header, name;
  double lhs, rhs, margin;
  std::getline(table, header);
  table >> name >> lhs >> rhs >> margin;
  EXPECT_EQ(name, "C2");
  EXPECT_GT(margin, 0.0);
  EXPECT_NE(r.out.find("satisfied"), std::string::npos);
}

TEST_F(Cli, CheckStrictUnsatisfied) {
  const auto p = file("p.json", R"({"k":2,"q":[2,2],"D":[40,40]})");
  EXPECT_EQ(hlc_run({"check", "--params", p}).code, 0);
  EXPECT_EQ(hlc_run({"check", "--params", p, "--strict"}).code, 1);
}

TEST_F(Cli, CheckInstanceAndReductions) {
  const auto r = hlc_run({"check", "--graph", samples + "/k3x2.graph.json", "--lists", samples + "/k3x2.lists.json"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("j=2 C3"), std::string::npos);

  const auto md = hlc_run({"check", "--reduction", "max-degree", "--k", "2", "--eps", "1", "--delta", "1e7", "--variant", "2"});
  EXPECT_EQ(md.code, 0) << md.err;
  EXPECT_NE(md.out.find("satisfied"), std::string::npos);
  EXPECT_EQ(hlc_run({"check", "--reduction", "max-degree", "--k", "2"}).code, 3);
  EXPECT_EQ(hlc_run({"check"}).code, 3);
}

TEST_F(Cli, MalformedInputNamesTheKey) {
  const auto g = file("g.json", R"({"k":2,"parts":[1,1],"edges":[[[0,0],[1,"x"]]]})");
  const auto r = hlc_run({"solve", "--graph", g, "--lists", samples + "/single_edge.lists.json"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("edges[0][1]"), std::string::npos) << r.err;

  const auto p = file("p.json", R"({"q":[1,2]})");
  const auto c = hlc_run({"check", "--params", p});
  EXPECT_EQ(c.code, 3);
  EXPECT_NE(c.err.find("'k'"), std::string::npos) << c.err;

  const auto broken = file("b.json", "{\"k\": 2,");
  EXPECT_EQ(hlc_run({"check", "--params", broken}).code, 3);
  EXPECT_EQ(hlc_run({"check", "--params", path("missing.json")}).code, 3);
}

TEST_F(Cli, SolveSingleEdgeExhaustsBudget) {
  const auto r = hlc_run({"solve", "--graph", samples + "/single_edge.graph.json", "--lists",
                          samples + "/single_edge.lists.json", "--max-resamples", "50"});
  EXPECT_EQ(r.code, 2);
  const auto doc = hlc::io::parse_text(r.out);
  EXPECT_EQ(doc["status"], "budget-exhausted");
  EXPECT_EQ(doc["resample_count"], 50);
  EXPECT_FALSE(doc.contains("colors"));
  // default budget too
  EXPECT_EQ(hlc_run({"solve", "--graph", samples + "/single_edge.graph.json", "--lists",
                     samples + "/single_edge.lists.json"}).code,
            2);
}

TEST_F(Cli, SolveAndVerifyRoundTrip) {
  const auto g = samples + "/k3x2.graph.json";
  const auto l = samples + "/k3x2.lists.json";
  const auto out = path("coloring.json");
  const auto r = hlc_run({"solve", "--graph", g, "--lists", l, "--seed", "4", "--out", out});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto doc = hlc::io::load_file(out);
  EXPECT_EQ(doc["status"], "success");
  EXPECT_EQ(doc["colors"].size(), 6u);

  const auto v = hlc_run({"verify", "coloring", "--graph", g, "--lists", l, "--coloring", out, "--strict"});
  EXPECT_EQ(v.code, 0);
  EXPECT_EQ(v.out, "proper\n");

  const auto bad = file("bad.json", R"({"colors":{"0:0":1,"0:1":1,"1:0":1,"1:1":1,"2:0":1,"2:1":1}})");
  EXPECT_EQ(hlc_run({"verify", "coloring", "--graph", g, "--coloring", bad}).code, 0);
  EXPECT_EQ(hlc_run({"verify", "coloring", "--graph", g, "--coloring", bad, "--strict"}).code, 1);
}

TEST_F(Cli, SolveIsDeterministicPerSeed) {
  const std::vector<std::string> args{"solve", "--graph", samples + "/k3x2.graph.json", "--lists",
                                      samples + "/k3x2.lists.json", "--seed", "11"};
  EXPECT_EQ(hlc_run(args).out, hlc_run(args).out);
}

TEST_F(Cli, SolveEmptyListIsInvalid) {
  const auto l = file("l.json", R"({"lists":{"0:0":[],"1:0":[1]}})");
  const auto r = hlc_run({"solve", "--graph", samples + "/single_edge.graph.json", "--lists", l});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("empty list"), std::string::npos);
}

TEST_F(Cli, GenCapExceeded) {
  const auto r = hlc_run({"gen", "complete", "--k", "4", "--n", "100"});
  EXPECT_EQ(r.code, 4);
  EXPECT_NE(r.err.find("cap"), std::string::npos);
  ::setenv("HLC_MAX_CAP", "10", 1);
  EXPECT_EQ(hlc_run({"gen", "complete", "--k", "2", "--n", "4"}).code, 4);
  ::setenv("HLC_MAX_CAP", "oops", 1);
  EXPECT_EQ(hlc_run({"gen", "complete", "--k", "2", "--n", "4"}).code, 3);
  ::unsetenv("HLC_MAX_CAP");
}

TEST_F(Cli, GenPipeline) {
  const auto g = path("g.json"), l = path("l.json"), c = path("c.json");
  EXPECT_EQ(hlc_run({"gen", "random", "--k", "3", "--n", "3", "--p", "0.4", "--seed", "2", "--out", g}).code, 0);
  EXPECT_EQ(hlc_run({"gen", "lists", "--graph", g, "--model", "palette_random", "--q", "3", "--palette", "5", "--out", l})
                .code,
            0);
  EXPECT_EQ(hlc_run({"gen", "cover", "--graph", g, "--q", "3", "3", "3", "--out", c}).code, 0);
  EXPECT_EQ(hlc_run({"gen", "cover", "--graph", g, "--lists", l}).code, 0);
  EXPECT_EQ(hlc_run({"solve", "--graph", g, "--cover", c, "--seed", "1"}).code, 0);
  EXPECT_EQ(hlc_run({"verify", "aux", "--graph", g, "--cover", c, "--j", "2", "--strict"}).code, 0);
  EXPECT_EQ(hlc_run({"gen", "gadget", "--k", "3", "--n", "4", "--shared"}).code, 0);

  const auto first = hlc_run({"gen", "random", "--k", "2", "--n", "5", "--p", "0.5"});
  ::setenv("HLC_SEED", "77", 1);
  const auto seeded = hlc_run({"gen", "random", "--k", "2", "--n", "5", "--p", "0.5"});
  const auto explicit_seed = hlc_run({"gen", "random", "--k", "2", "--n", "5", "--p", "0.5", "--seed", "77"});
  ::unsetenv("HLC_SEED");
  EXPECT_EQ(seeded.out, explicit_seed.out);
  EXPECT_NE(seeded.out, first.out);
}

TEST_F(Cli, VerifyExactChecks) {
  const auto g = samples + "/k3x2.graph.json";
  const auto l = samples + "/k3x2.lists.json";
  const auto lem = hlc_run({"verify", "lemma41", "--graph", g, "--lists", l, "--j", "2", "--vertex", "2:0", "--strict"});
  EXPECT_EQ(lem.code, 0) << lem.err;
  EXPECT_NE(lem.out.find("exact 0 "), std::string::npos) << lem.out;
  EXPECT_NE(lem.out.find("bound 0.05303232378"), std::string::npos) << lem.out;
  for (const char* sub : {"claim31", "harris"}) {
    const auto r = hlc_run({"verify", sub, "--graph", g, "--lists", l, "--j", "2", "--vertex", "2:0", "--color", "1",
                            "--strict"});
    EXPECT_EQ(r.code, 0) << sub << r.err;
    EXPECT_NE(r.out.find("ok"), std::string::npos) << sub;
  }
  EXPECT_EQ(hlc_run({"verify", "claim32", "--graph", g, "--lists", l, "--j", "2", "--vertex", "2:0", "--strict"}).code,
            0);
  EXPECT_EQ(hlc_run({"verify", "lemma41", "--graph", g, "--lists", l, "--j", "2", "--vertex", "0:0"}).code, 3);
}

TEST_F(Cli, ExperimentSingleEdgelessCell) {
  const auto cfg = file("c.json", R"({"name":"empty","trials":1,
      "grid":{"model":"random_kpp","k":2,"n":3,"p":0,"lists":"uniform_q","q":2}})");
  const auto r = hlc_run({"experiment", "--config", cfg});
  EXPECT_EQ(r.code, 0) << r.err;
  std::istringstream csv(r.out);
  std::string header, row, extra;
  std::getline(csv, header);
  std::getline(csv, row);
  EXPECT_FALSE(std::getline(csv, extra));
  EXPECT_EQ(row, "empty,lemma41,0,random_kpp,2,3,0,uniform_q,2,0,1,1,0,0,0,ok,0\r");
}

TEST_F(Cli, ExperimentCsvIsReproducible) {
  const auto cfg = samples + "/frontier.campaign.json";
  const auto a = path("a.csv"), b = path("b.csv");
  EXPECT_EQ(hlc_run({"experiment", "--config", cfg, "--trials", "10", "--out", a}).code, 0);
  EXPECT_EQ(hlc_run({"experiment", "--config", cfg, "--trials", "10", "--threads", "3", "--out", b}).code, 0);
  EXPECT_FALSE(slurp(a).empty());
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_EQ(hlc_run({"experiment", "--config", path("none.json")}).code, 3);
}
