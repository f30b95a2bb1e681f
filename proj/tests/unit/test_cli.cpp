#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "commands.hpp"

namespace {

const std::string kData = QSSLAB_TEST_DATA_DIR;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = qsslab::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return kData + "/" + name; }

std::string temp_path(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "qsslab_cli_test";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST(CliStructure, ThresholdThreeOfFour) {
  const auto r = run({"structure", "check", data("threshold_3_4.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(contains(r.out, "admissible; |A1|=4 |A2|=6; perfect: infeasible")) << r.out;
}

TEST(CliStructure, TwoOfThreeIsPerfect) {
  const auto r = run({"structure", "check", data("threshold_2_3.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(contains(r.out, "perfect: feasible")) << r.out;
}

TEST(CliStructure, DisjointSetsExitTwo) {
  const auto r = run({"structure", "check", data("disjoint.json")});
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(contains(r.err, "disjoint authorized sets")) << r.err;
}

TEST(CliStructure, MalformedInputsExitTwoWithLocation) {
  auto r = run({"structure", "check", data("malformed.json")});
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(contains(r.err, "malformed.json:4:")) << r.err;
  r = run({"structure", "check", data("not_antichain.json")});
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(contains(r.err, "$.minimal_authorized")) << r.err;
  r = run({"structure", "check", data("missing.json")});
  EXPECT_EQ(r.code, 2);
}

TEST(CliVerify, ExitCodesPerModel) {
  auto r = run({"scheme", "verify", data("example1.json"), data("threshold_3_4.json"), "--model", "generalized"});
  EXPECT_EQ(r.code, 0);
  r = run({"scheme", "verify", data("example1.json"), data("threshold_3_4.json"), "--model", "perfect"});
  EXPECT_EQ(r.code, 4);
  EXPECT_TRUE(contains(r.err, "witness {12}")) << r.err;
  r = run({"scheme", "verify", data("corrupted_example1.json"), data("threshold_3_4.json")});
  EXPECT_EQ(r.code, 4);
  EXPECT_TRUE(contains(r.err, "witness {123} [authorized]")) << r.err;
  r = run({"scheme", "verify", data("example1.json"), data("threshold_2_3.json")});
  EXPECT_EQ(r.code, 3);
  r = run({"--max-qubits", "4", "scheme", "verify", data("example1.json"), data("threshold_3_4.json")});
  EXPECT_EQ(r.code, 5);
  r = run({"scheme", "verify", data("overlap_example1.json"), data("threshold_3_4.json")});
  EXPECT_EQ(r.code, 2);
  r = run({"scheme", "verify", data("nonisometry_example1.json"), data("threshold_3_4.json")});
  EXPECT_EQ(r.code, 2);
}

TEST(CliVerify, ScaledSchemeWarns) {
  const auto r = run({"scheme", "verify", data("scaled_example1.json"), data("threshold_3_4.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(contains(r.err, "warning")) << r.err;
}

TEST(CliVerify, JsonReportShape) {
  const auto r = run({"--format", "json", "scheme", "verify", data("example1.json"), data("threshold_3_4.json")});
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["verdict"], "generalized");
  EXPECT_EQ(j["records"].size(), 15u);
  EXPECT_EQ(j["theorem7_balanced"], true);
}

TEST(CliVerify, CsvReport) {
  const auto r = run({"--format", "csv", "scheme", "verify", data("corrupted_example1.json"), data("threshold_3_4.json")});
  EXPECT_EQ(r.code, 4);
  EXPECT_TRUE(contains(r.out, "{3},A1,0.811278124459,1.5,0.311278124459,true")) << r.out;
}

TEST(CliGlobal, ToleranceRangeAndUnknownFlags) {
  EXPECT_EQ(run({"--tolerance", "1e-3", "enumerate"}).code, 2);
  EXPECT_EQ(run({"--tolerance", "1e-13", "enumerate"}).code, 2);
  EXPECT_EQ(run({"--format", "xml", "enumerate"}).code, 2);
  EXPECT_EQ(run({"bogus"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(CliBuild, Result1WritesSchemeAndStructure) {
  const auto scheme = temp_path("r1.json");
  const auto structure = temp_path("r1_structure.json");
  const auto r = run({"build", "result1", "--n", "5", "--b", "1,2", "--out", scheme, "--structure-out", structure});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(contains(r.out, "{123,124,125,1345,2345}")) << r.out;
  EXPECT_EQ(run({"scheme", "verify", scheme, structure}).code, 0);
  EXPECT_EQ(run({"build", "result1", "--n", "9", "--b", "1"}).code, 2);
  EXPECT_EQ(run({"build", "result1", "--n", "5"}).code, 2);
  EXPECT_EQ(run({"build", "star", "--n", "4", "--center", "7"}).code, 2);
}

TEST(CliAssign, SearchThenInduce) {
  const auto base = temp_path("r6.json");
  ASSERT_EQ(run({"build", "result1", "--n", "6", "--b", "1,2,3", "--out", base}).code, 0);
  const auto target = temp_path("no5.json");
  {
    std::ofstream(target) << R"({"players": 4, "minimal_authorized": [[1,2,3],[1,4]]})";
  }
  const auto assigned = temp_path("r6_assigned.json");
  auto r = run({"assign", "search", base, target, "--out", assigned});
  ASSERT_EQ(r.code, 0) << r.err;
  r = run({"assign", "induce", assigned});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(contains(r.out, "induced {123,14}")) << r.out;
  EXPECT_EQ(run({"scheme", "verify", assigned, target}).code, 0);

  const auto star = temp_path("star_target.json");
  {
    std::ofstream(star) << R"({"players": 4, "minimal_authorized": [[1,2],[1,3],[1,4]]})";
  }
  EXPECT_EQ(run({"assign", "search", data("example1.json"), star}).code, 4);
}

TEST(CliEnumerate, CatalogCrossReference) {
  const auto r = run({"--format", "json", "enumerate", "--max-n", "5"});
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["counts"]["5"], 20);
  EXPECT_TRUE(j["catalog_missing"].empty());
  int labelled = 0;
  for (const auto& c : j["classes"]) labelled += c["catalog_no"].is_null() ? 0 : 1;
  EXPECT_EQ(labelled, 16);
  EXPECT_EQ(j["beyond_catalog"].size(), 28u - 16u);
  EXPECT_EQ(run({"enumerate", "--max-n", "7"}).code, 2);
}

TEST(CliReconstruct, Example1TwentyTrials) {
  const auto r = run({"--format", "json", "reconstruct", "example1", "--set", "1,3,4", "--trials", "20"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j["trials"].size(), 20u);
  for (const auto& t : j["trials"]) EXPECT_GE(t["fidelity"].get<double>(), 1 - 1e-9);
  EXPECT_EQ(j["protocol"], "circuit");
}

TEST(CliReconstruct, ProtocolsAndFailures) {
  EXPECT_EQ(run({"reconstruct", "result1", "--n", "5", "--b", "1,2", "--set", "1,2,5"}).code, 0);
  EXPECT_EQ(run({"reconstruct", "result1", "--n", "5", "--b", "1,2", "--set", "2,3,4,5"}).code, 0);
  EXPECT_EQ(run({"reconstruct", data("example1.json"), "--set", "2,3,4", "--protocol", "decoder"}).code, 0);
  EXPECT_EQ(run({"reconstruct", "example1", "--set", "1,2"}).code, 2);
  EXPECT_EQ(run({"reconstruct", "example1", "--set", "1,2", "--protocol", "decoder"}).code, 4);
  EXPECT_EQ(run({"reconstruct", "example1", "--set", "1,9"}).code, 2);
}

TEST(CliReconstruct, DeterministicForSeed) {
  const std::vector<std::string> args = {"--seed", "7", "--format", "csv", "reconstruct", "example1", "--set", "1,2,3", "--trials", "5"};
  EXPECT_EQ(run(args).out, run(args).out);
  auto other = args;
  other[1] = "8";
  EXPECT_NE(run(args).out, run(other).out);
}

TEST(CliTables, WritesArtifacts) {
  const auto dir = temp_path("tables");
  const auto r = run({"--format", "csv", "tables", "--out-dir", dir});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(contains(r.out, "No.,structure,PQSS,GQSS,evidence"));
  EXPECT_TRUE(contains(r.out, "9,\"{12,13,145}\",infeasible (A2 witness {1}),unknown"));
  for (const auto* f : {"feasibility.json", "feasibility.csv", "catalog_classes.json", "catalog_classes.csv"}) {
    EXPECT_TRUE(std::filesystem::exists(std::filesystem::path(dir) / f)) << f;
  }
  EXPECT_EQ(r.out, run({"--format", "csv", "tables"}).out);
}
