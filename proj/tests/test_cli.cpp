#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string output;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(SUBSHIFT_CLI_PATH) + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, p)) out.append(buf, n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("subshift_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const char* name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

}  // namespace

TEST_F(Cli, TowerDepthZeroAndOne) {
  EXPECT_EQ(run("tower --depth 0").code, 0);
  const auto r = run("tower --depth 1 -o " + path("t.json"));
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.output.find("K 2"), std::string::npos);
  EXPECT_TRUE(fs::exists(path("t.json")));
}

TEST_F(Cli, InvalidScheduleExitsTwo) {
  const auto r = run("tower --depth 1 --schedule 60");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.output.find("multiple of 8"), std::string::npos);
  EXPECT_EQ(run("tower --depth 7").code, 2);
  EXPECT_EQ(run("tower --bogus").code, 2);
}

TEST_F(Cli, WitnessFromTowerFileIsByteIdentical) {
  ASSERT_EQ(run("tower --depth 1 --no-entropy -o " + path("t.json")).code, 0);
  for (const char* tag : {"a", "b"}) {
    const std::string base = path(tag);
    const auto r = run("witness --tower " + path("t.json") + " --signal cosine:0.2 -N 4096 --seed 3 -o " +
                       base + ".json --csv " + base + ".csv");
    ASSERT_EQ(r.code, 0) << r.output;
  }
  EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
  const std::string csv = slurp(path("a.csv"));
  EXPECT_EQ(csv.rfind("level,k,N_k,dot_sum,abs_sum,bound\r\n", 0), 0u);
  EXPECT_NE(slurp(path("a.json")).find("\"seed\": 3"), std::string::npos);
  EXPECT_NE(slurp(path("a.csv.meta.json")).find("config_hash"), std::string::npos);
}

TEST_F(Cli, WitnessZeroSignalAndMalformedCsv) {
  const auto z = run("witness --depth 1 --signal zero -N 2048");
  EXPECT_EQ(z.code, 0);
  EXPECT_NE(z.output.find("degenerate"), std::string::npos);
  std::ofstream(path("bad.csv")) << "a\n1\nnot-a-number\n";
  EXPECT_EQ(run("witness --depth 1 --signal csv:" + path("bad.csv") + " -N 2").code, 2);
  EXPECT_EQ(run("witness --depth 1 --signal csv:" + path("missing.csv") + " -N 2").code, 2);
  EXPECT_EQ(run("witness --depth 1 --signal sine -N 2").code, 2);
}

TEST_F(Cli, CorrelateIsReproducible) {
  for (const char* tag : {"a", "b"}) {
    const std::string base = path(tag);
    const auto r = run("correlate --system goldenmean --l 12 --signal seeded-random-pm1 --seed 7 -N 20000 -o " +
                       base + ".json --csv " + base + ".csv");
    ASSERT_EQ(r.code, 0) << r.output;
  }
  EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
  EXPECT_EQ(slurp(path("a.csv")).rfind("N,corr,abs_avg,bound\r\n", 0), 0u);
}

TEST_F(Cli, CorrelateRejectsShortBlocks) {
  const auto r = run("correlate --system goldenmean --l 2 --u 1");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.output.find("l >= 3u"), std::string::npos);
  EXPECT_EQ(run("correlate --system full2 --l 2").code, 2);  // none at this length
}

TEST_F(Cli, CorrelateZeroSignal) {
  ASSERT_EQ(run("correlate --system full2 --l 9 --signal zero -N 1000 --csv " + path("z.csv")).code, 0);
  std::istringstream in(slurp(path("z.csv")));
  std::string line;
  std::getline(in, line);
  int rows = 0;
  while (std::getline(in, line)) {
    std::stringstream s(line);
    std::string n, corr;
    std::getline(s, n, ',');
    std::getline(s, corr, ',');
    EXPECT_EQ(corr, "0");
    ++rows;
  }
  EXPECT_GT(rows, 0);
}

TEST_F(Cli, ScanShapes) {
  ASSERT_EQ(run("scan --grid 256 --prefixes 1000,10000,100000 --csv " + path("s.csv")).code, 0);
  std::istringstream in(slurp(path("s.csv")));
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  EXPECT_EQ(lines, 1 + 256 * 3);
  ASSERT_EQ(run("scan --grid 1 -N 5000 --csv " + path("one.csv")).code, 0);
  EXPECT_EQ(slurp(path("one.csv")).find("angle,N,magnitude\r\n0,1000,"), 0u);
  EXPECT_EQ(run("scan --grid 0").code, 2);
}

TEST_F(Cli, WitnessSeriesScanShowsCosinePeak) {
  ASSERT_EQ(run("witness --depth 1 --signal cosine:0.15625 -N 8192 -o " + path("w.json")).code, 0);
  const auto r = run("scan --series witness:" + path("w.json") + " -N 8192 --grid 64 --prefixes 2048,8192");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.output.find("N 2048: peak angle 0.15625"), std::string::npos) << r.output;
  EXPECT_NE(r.output.find("N 8192: peak angle 0.15625"), std::string::npos) << r.output;
}

TEST_F(Cli, SystemCommands) {
  const auto e = run("entropy --system goldenmean");
  EXPECT_EQ(e.code, 0);
  EXPECT_NE(e.output.find("entropy 0.4812118250"), std::string::npos) << e.output;
  EXPECT_NE(run("mixing --system full2").output.find("mixing"), std::string::npos);
  const auto g = run("gap --system goldenmean --W 01");
  EXPECT_EQ(g.code, 0);
  EXPECT_NE(g.output.find("K = 3"), std::string::npos);
  EXPECT_EQ(run("gap --system goldenmean --W 11").code, 2);
  EXPECT_EQ(run("gap --system goldenmean --W 01 --bound 1").code, 2);
  EXPECT_EQ(run("entropy --system nosuch").code, 2);
  std::ofstream(path("cyc.json")) << R"({"alphabet":["0","1"],"states":[0,1],"edges":[[0,"0",1],[1,"1",0]]})";
  EXPECT_NE(run("mixing --automaton " + path("cyc.json")).output.find("not mixing"), std::string::npos);
}

TEST_F(Cli, ThreadCountDoesNotChangeOutput) {
  ASSERT_EQ(run("scan --grid 64 -N 20000 --csv " + path("a.csv")).code, 0);
  ASSERT_EQ(std::system(("SUBSHIFT_FORGE_THREADS=3 " + std::string(SUBSHIFT_CLI_PATH) + " scan --grid 64 -N 20000 --csv " +
                         path("b.csv") + " > /dev/null").c_str()),
            0);
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
  EXPECT_EQ(std::system(("SUBSHIFT_FORGE_THREADS=x " + std::string(SUBSHIFT_CLI_PATH) +
                         " entropy > /dev/null 2>&1").c_str()) >> 8,
            2);
}
