#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "bqpmc/families.hpp"
#include "bqpmc/io.hpp"

using namespace bqpmc;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code;
  std::string out;
};

const fs::path& scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("bqpmc_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

CliRun run(const std::string& args) {
  fs::path out = scratch() / "stdout.txt";
  std::string cmd = std::string("\"") + BQPMC_CLI + "\" " + args + " > \"" + out.string() + "\" 2>/dev/null";
  int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out)};
}

std::string data(const std::string& name) { return std::string(BQPMC_DATA_DIR) + "/" + name; }

}  // namespace

TEST(Cli, GenIsDeterministic) {
  CliRun a = run("gen --subsets 5x5 --y 10");
  ASSERT_EQ(a.code, 0);
  Instance inst = io::instance_from_json(nlohmann::json::parse(a.out));
  EXPECT_EQ(inst.num_vars(), 25 + 10 + 250);
  EXPECT_EQ(run("gen --subsets 5x5 --y 10").out, a.out);
  CliRun sparse = run("gen --subsets 2,3 --y 4 --density 0.5 --seed 7");
  ASSERT_EQ(sparse.code, 0);
  EXPECT_EQ(run("gen --subsets 2,3 --y 4 --density 0.5 --seed 7").out, sparse.out);
}

TEST(Cli, SolveAndLoop) {
  CliRun s = run("solve --instance " + data("inst_a.json") + " --classes rlt --exact");
  ASSERT_EQ(s.code, 0);
  EXPECT_NE(s.out.find("status optimal"), std::string::npos);
  EXPECT_NE(s.out.find("ip_value"), std::string::npos);
  CliRun l = run("loop --instance " + data("inst_a.json") + " --classes rlt,cc --seeds 1-3");
  ASSERT_EQ(l.code, 0);
  EXPECT_EQ(l.out.rfind("instance,seed,classes,round", 0), 0u);
  EXPECT_NE(l.out.find(",avg,rlt+cc,final,"), std::string::npos);
}

TEST(Cli, SeparateThenVerify) {
  fs::path pool = scratch() / "cuts.json";
  CliRun s = run("separate --instance " + data("inst_a.json") + " --point " + data("point_sep_a.json") +
              " --classes cc --out " + pool.string());
  ASSERT_EQ(s.code, 0);
  CliRun v = run("verify --instance " + data("inst_a.json") + " --pool " + pool.string() + " --exact");
  EXPECT_EQ(v.code, 0);
  EXPECT_NE(v.out.find("valid"), std::string::npos);
  EXPECT_EQ(v.out.find("INVALID"), std::string::npos);
}

TEST(Cli, VerifyFacetRanks) {
  Instance a = fixtures::inst_a();
  fs::path pool = scratch() / "rlt.json";
  io::write_text_file(pool.string(), io::pool_to_json(rlt_inequalities(a), a).dump());
  CliRun v = run("verify --instance " + data("inst_a.json") + " --pool " + pool.string() + " --mode facet");
  ASSERT_EQ(v.code, 0);
  EXPECT_NE(v.out.find("rank 10 of 10 facet"), std::string::npos);
  EXPECT_EQ(v.out.find("not-facet"), std::string::npos);

  io::write_text_file(pool.string(), io::pool_to_json({LinearConstraint({{a.z(0, 0), 1.0}}, Sense::GE, 0.5)}, a).dump());
  EXPECT_EQ(run("verify --instance " + data("inst_a.json") + " --pool " + pool.string()).code, 1);
}

TEST(Cli, HullCertifies) {
  CliRun h = run("hull --instance " + data("inst_c.json") + " --point " + data("point_c.json"));
  EXPECT_EQ(h.code, 0);
  EXPECT_NE(h.out.find("verified"), std::string::npos);
  EXPECT_EQ(run("hull --instance " + data("inst_c.json") + " --seed 4").code, 0);
  EXPECT_EQ(run("hull --instance " + data("inst_a.json") + " --seed 4").code, 3);
}

TEST(Cli, PoolExport) {
  CliRun p = run("pool --instance " + data("pool_2111.json") + " --formulation qcuts --relax");
  ASSERT_EQ(p.code, 0);
  EXPECT_EQ(p.out.rfind("\\ pooling qcuts formulation", 0), 0u);
  EXPECT_NE(p.out.find("[ q_in1_pl1 * y_pl1_o1 ] - v_in1_pl1_o1 = 0"), std::string::npos);
  fs::path lp = scratch() / "m.lp";
  ASSERT_EQ(run("pool --instance " + data("pool_2111.json") + " --formulation qcuts --out " + lp.string()).code, 0);
  EXPECT_EQ(slurp(lp), p.out);
}

TEST(Cli, ErrorsExitNonzero) {
  EXPECT_NE(run("gen --subsets 0x3 --y 2").code, 0);
  EXPECT_NE(run("gen --subsets 2x2 --y 0").code, 0);
  EXPECT_NE(run("pool --instance " + data("pool_2111.json") + " --formulation p").code, 0);
  EXPECT_NE(run("loop --instance " + data("inst_a.json") + " --classes bogus").code, 0);
  EXPECT_NE(run("nosuchcommand").code, 0);
}
