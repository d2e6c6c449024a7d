#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "experiment.hpp"

namespace fs = std::filesystem;

namespace modleach::cli {
namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "modleach");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("modleach_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string out_dir() const { return dir_.string(); }

  fs::path dir_;
};

TEST(SeedRange, Parsing) {
  auto r = parse_seed_range("3..7");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->seeds(), (std::vector<std::uint64_t>{3, 4, 5, 6, 7}));
  EXPECT_EQ(parse_seed_range("4")->seeds(), std::vector<std::uint64_t>{4});
  EXPECT_FALSE(parse_seed_range("7..3"));
  EXPECT_FALSE(parse_seed_range("a..b"));
  EXPECT_FALSE(parse_seed_range(""));
}

TEST(Replicates, IndependentOfJobCount) {
  SimConfig cfg;
  cfg.protocol.variant = Variant::Leach;
  const std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  const auto a = run_replicates(cfg, seeds, 1);
  const auto b = run_replicates(cfg, seeds, 3);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].last_dead_round, b[i].last_dead_round);
    EXPECT_EQ(a[i].total_packets_to_bs, b[i].total_packets_to_bs);
  }
}

TEST_F(CliTest, RunWritesTracesAndAggregate) {
  const Result r = invoke({"run", "--variant", "modleach", "--seeds", "1..20", "--out", out_dir(), "--jobs", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  for (int s = 1; s <= 20; ++s) {
    EXPECT_TRUE(fs::exists(dir_ / ("trace_modleach_seed" + std::to_string(s) + ".csv"))) << s;
  }
  const std::string agg = slurp(dir_ / "aggregate_modleach.csv");
  EXPECT_EQ(agg.rfind("round,metric,mean,ci95_lo,ci95_hi\n", 0), 0u);
  EXPECT_NE(agg.find("1,alive,100,100,100\n"), std::string::npos);
  EXPECT_NE(r.out.find("first_dead_round"), std::string::npos);
  EXPECT_NE(r.out.find("±"), std::string::npos);
}

TEST_F(CliTest, ZeroNodesRejected) {
  const Result r = invoke({"run", "--nodes", "0", "--seeds", "1..2", "--out", out_dir()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("node_count"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir_));
}

TEST_F(CliTest, SingleSeedWithCiRejected) {
  const Result r = invoke({"run", "--seeds", "7..7", "--ci", "--out", out_dir()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("InsufficientReplicates"), std::string::npos);
  const Result ok = invoke({"run", "--seeds", "7", "--out", out_dir(), "--variant", "leach"});
  EXPECT_EQ(ok.code, 0) << ok.err;
  EXPECT_NE(slurp(dir_ / "aggregate_leach.csv").find("1,alive,100,,\n"), std::string::npos);
}

TEST_F(CliTest, BadArgumentsExitTwo) {
  EXPECT_EQ(invoke({"run", "--variant", "teen", "--out", out_dir()}).code, 2);
  EXPECT_EQ(invoke({"run", "--seeds", "9..1", "--out", out_dir()}).code, 2);
  EXPECT_EQ(invoke({"run", "--field", "100", "--out", out_dir()}).code, 2);
  EXPECT_EQ(invoke({"frobnicate"}).code, 2);
  EXPECT_EQ(invoke({"run", "--nodes", "many"}).code, 2);
  EXPECT_EQ(invoke({"--help"}).code, 0);
}

TEST_F(CliTest, CompareTable) {
  const Result r = invoke({"compare", "--seeds", "1..3", "--max-rounds", "800", "--out", out_dir(), "--svg"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  std::vector<std::string> body;
  while (std::getline(lines, line)) {
    if (!line.empty() && line[0] != '#') body.push_back(line);
  }
  ASSERT_GE(body.size(), 5u);
  for (const char* col : {"variant", "stability", "half_death", "last_death", "throughput_bs", "mean_ch"}) {
    EXPECT_NE(body[0].find(col), std::string::npos) << col;
  }
  const char* names[] = {"LEACH ", "MODLEACH ", "MODLEACH_HT ", "MODLEACH_ST "};
  for (int i = 0; i < 4; ++i) EXPECT_EQ(body[1 + i].rfind(names[i], 0), 0u) << body[1 + i];
  // Each row's cells start at the header's column offsets.
  const std::size_t stab = body[0].find("stability");
  for (int i = 1; i <= 4; ++i) EXPECT_NE(body[i][stab], ' ');
  EXPECT_TRUE(fs::exists(dir_ / "comparison.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "alive_nodes.svg"));
  EXPECT_EQ(slurp(dir_ / "alive_nodes.svg").rfind("<svg", 0), 0u);
  for (const char* v : {"leach", "modleach", "modleach_ht", "modleach_st"}) {
    EXPECT_TRUE(fs::exists(dir_ / ("summary_" + std::string(v) + ".csv"))) << v;
  }
}

TEST_F(CliTest, CompareNeedsTwoSeeds) {
  EXPECT_EQ(invoke({"compare", "--seeds", "4", "--out", out_dir()}).code, 2);
}

TEST_F(CliTest, ControlBitsZeroPassesThrough) {
  const Result r = invoke({"run", "--variant", "leach", "--seeds", "1..2", "--control-bits", "0",
                           "--max-rounds", "50", "--out", out_dir()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("control_bits=0"), std::string::npos);
  const std::string trace = slurp(dir_ / "trace_leach_seed1.csv");
  std::istringstream in(trace);
  std::string line;
  std::getline(in, line);
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(line.substr(line.rfind(',') + 1), "0") << line;
  }
  EXPECT_EQ(rows, 50);
}

TEST_F(CliTest, RerunsAreByteIdentical) {
  const std::string a = out_dir() + "/a", b = out_dir() + "/b";
  ASSERT_EQ(invoke({"run", "--variant", "modleach_st", "--seeds", "3..4", "--out", a, "--jobs", "2"}).code, 0);
  ASSERT_EQ(invoke({"run", "--variant", "modleach_st", "--seeds", "3..4", "--out", b, "--jobs", "1"}).code, 0);
  for (const auto& entry : fs::directory_iterator(a)) {
    EXPECT_EQ(slurp(entry.path()), slurp(fs::path(b) / entry.path().filename())) << entry.path();
  }
}

TEST_F(CliTest, ConfigFile) {
  fs::create_directories(dir_);
  {
    std::ofstream f(dir_ / "bad.json");
    f << R"({"field": {"node_count": 20, "colour": "red"}})";
    std::ofstream g(dir_ / "good.json");
    g << R"({"field": {"node_count": 20, "max_rounds": 30}, "protocol": {"variant": "modleach_ht"}})";
  }
  const Result bad = invoke({"run", "--config", (dir_ / "bad.json").string(), "--out", out_dir()});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("field.colour"), std::string::npos);

  const Result good = invoke({"run", "--config", (dir_ / "good.json").string(), "--nodes", "30",
                              "--seeds", "1..2", "--out", out_dir()});
  ASSERT_EQ(good.code, 0) << good.err;
  EXPECT_NE(good.out.find("nodes=30"), std::string::npos);
  EXPECT_NE(good.out.find("MODLEACH_HT"), std::string::npos);

  EXPECT_EQ(invoke({"run", "--config", (dir_ / "missing.json").string(), "--out", out_dir()}).code, 1);
}

TEST(Chart, SvgContainsOnePolylinePerSeries) {
  const std::string svg = render_line_chart("t", "x", "y", {{"a", {1, 2, 3}}, {"b", {3, 2}}});
  std::size_t count = 0;
  for (std::size_t pos = svg.find("<polyline"); pos != std::string::npos; pos = svg.find("<polyline", pos + 1)) {
    ++count;
  }
  EXPECT_EQ(count, 2u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

}  // namespace
}  // namespace modleach::cli
