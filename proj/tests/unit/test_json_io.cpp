#include <gtest/gtest.h>

#include <cmath>

#include "qss/error.hpp"
#include "qss/json_io.hpp"

using namespace qss;

namespace {

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(StructureJson, RoundTrip) {
  const auto g = AccessStructure::from_lists(4, {{1, 2, 3}, {1, 4}});
  const auto j = structure_to_json(g);
  EXPECT_EQ(j.dump(), R"({"players":4,"minimal_authorized":[[1,2,3],[1,4]]})");
  EXPECT_EQ(structure_from_json(j), g);
}

TEST(StructureJson, DiagnosticsNameTheField) {
  EXPECT_NE(error_of([] { structure_from_json(parse_json(R"({"players":3,"minimal_authorized":[[1],[]]})")); })
                .find("$.minimal_authorized[1]: empty set"),
            std::string::npos);
  EXPECT_NE(error_of([] { structure_from_json(parse_json(R"({"players":3,"minimal_authorized":[[1,2],[1,2,3]]})")); })
                .find("{123}"),
            std::string::npos);
  EXPECT_NE(error_of([] { structure_from_json(parse_json(R"({"minimal_authorized":[]})")); })
                .find("$.players: missing field"),
            std::string::npos);
  EXPECT_NE(error_of([] { structure_from_json(parse_json(R"({"players":3,"minimal_authorized":[[4]]})")); })
                .find("player 4 outside 1..3"),
            std::string::npos);
  EXPECT_NE(error_of([] { parse_json("{\n  \"players\": 3,\n  oops\n}", "f.json"); }).find("f.json:3:"),
            std::string::npos);
}

TEST(SchemeJson, RoundTripIsIdentity) {
  const auto s = build_example1();
  const auto back = scheme_from_json(scheme_to_json(s));
  EXPECT_EQ(back, s);
  const auto r = build_result1(5, PlayerSubset::from_players(5, {1, 2})).scheme;
  const auto dealer = with_assignment(r, Assignment::from_lists(5, {{2}, {3}, {4}, {5}}, {1}));
  EXPECT_EQ(scheme_from_json(parse_json(scheme_to_json(dealer).dump())), dealer);
}

TEST(SchemeJson, ScaledImagesWarnAndNormalize) {
  auto j = scheme_to_json(build_example1());
  for (auto& t : j["basis_images"]["0"]) t["re"] = t["re"].get<double>() * 2;
  std::vector<std::string> warnings;
  const auto s = scheme_from_json(j, &warnings);
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("normalized"), std::string::npos);
  EXPECT_NEAR(std::abs(s.basis_images[0][0]), 1 / std::sqrt(2.0), 1e-15);
}

TEST(SchemeJson, RejectsBadInput) {
  auto overlap = scheme_to_json(build_example1());
  overlap["assignment"]["P1"] = {1, 2};
  EXPECT_NE(error_of([&] { scheme_from_json(overlap); }).find("$.assignment"), std::string::npos);

  auto unassigned = scheme_to_json(build_example1());
  unassigned["assignment"]["P4"] = Json::array();
  EXPECT_THROW(scheme_from_json(unassigned), InputError);

  auto non_iso = scheme_to_json(build_example1());
  non_iso["basis_images"]["1"][0]["ket"] = "0000";
  EXPECT_NE(error_of([&] { scheme_from_json(non_iso); }).find("isometry"), std::string::npos);

  auto bad_ket = scheme_to_json(build_example1());
  bad_ket["basis_images"]["0"][0]["ket"] = "0a00";
  EXPECT_NE(error_of([&] { scheme_from_json(bad_ket); }).find("$.basis_images.0[0].ket"), std::string::npos);

  auto qutrit = scheme_to_json(build_example1());
  qutrit["secret_dim"] = 3;
  EXPECT_THROW(scheme_from_json(qutrit), InputError);
}

TEST(ReportJson, FieldsAndStableNumbers) {
  const auto rep = verify(build_example1(), threshold_structure(3, 4), Model::kGeneralized);
  const auto j = report_to_json(rep);
  EXPECT_EQ(j["verdict"], "generalized");
  EXPECT_EQ(j["i_rs"], 2.0);
  EXPECT_EQ(j["records"].size(), 15u);
  EXPECT_EQ(j["records"][2]["subset"], Json({1, 2}));
  EXPECT_EQ(j["records"][2]["class"], "A2");
  EXPECT_EQ(j["records"][2]["i_ra"], 1.0);
  EXPECT_EQ(report_to_json(rep).dump(), j.dump());
}

TEST(Csv, TwelveSignificantDigitsAndQuoting) {
  EXPECT_EQ(format_number(0.3112781244591328), "0.311278124459");
  EXPECT_EQ(format_number(-1e-17), "0");
  EXPECT_EQ(format_number(2.0), "2");
  EXPECT_EQ(csv_field("{12,13}"), "\"{12,13}\"");
  EXPECT_EQ(csv_field("plain"), "plain");
  EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
}

TEST(TraceJson, BranchesAndResiduals) {
  const auto set = PlayerSubset::from_players(5, {1, 2, 3});
  const auto b = PlayerSubset::from_players(5, {1, 2});
  const auto proto = result1_measure_protocol(5, b, set);
  const auto out = run_result1_measure_protocol(5, b, set, Complex(0.6, 0), Complex(0, 0.8));
  const auto j = trace_to_json(proto, out);
  EXPECT_EQ(j["steps"].size(), 3u);
  EXPECT_EQ(j["branches"].size(), 2u);
  EXPECT_EQ(j["branches"][0]["probability"], 0.5);
  EXPECT_EQ(j["branches"][1]["residual"][0]["ket"], "0111");
}
