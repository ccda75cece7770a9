#include <gtest/gtest.h>

#include "gcrp/json_io.hpp"

using namespace gcrp;

TEST(Fnv1a, KnownVectors) {
  EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
  EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
  EXPECT_EQ(fnv1a_hex("foobar"), "85944171f73967e8");
}

TEST(Json, ConstantsCarryProvenance) {
  const auto p = validate_params(0.5, 0.5);
  const Json j = to_json(compute_constants(p));
  for (const char* key : {"K", "R", "c1", "c2", "c3", "cV", "c_star", "cM", "h", "c_main", "theta_inf"}) {
    ASSERT_TRUE(j.contains(key)) << key;
    EXPECT_TRUE(j[key]["value"].is_number());
    EXPECT_FALSE(j[key]["provenance"].get<std::string>().empty());
  }
  EXPECT_EQ(j["K"]["value"].get<double>(), 3.0);
}

TEST(Json, ParamsAndRecords) {
  const Json p = to_json(validate_params(-0.5, 1.5));
  EXPECT_EQ(p["regime"], "BoundedParts");
  EXPECT_EQ(p["part_limit"], 3);
  const Json r = to_json(CheckpointRecord{10, 4, {2, 1}, 1});
  EXPECT_EQ(dump_json(r), dump_json(Json::parse(R"({"n":10,"V":4,"counts":[2,1],"tail":1})")));
}

TEST(Json, DumpIsStable) {
  const auto law = enumerate(validate_params(0.5, 0.5), 4).back();
  EXPECT_EQ(dump_json(to_json(law)), dump_json(to_json(law)));
  EXPECT_EQ(shape_key({3, 1}), "3+1");
  EXPECT_EQ(to_json(law)["states"].size(), 5u);
}

TEST(Csv, EscapesAndStamps) {
  EventReport r{"Vm", validate_params(0.5, 0.5), 100, 10, 1, {}, {}, {}, {}};
  r.rows.push_back(make_event_row("A=3, \"quoted\"", 1, 10, 0.5));
  const auto csv = event_reports_csv({r}, "00ff");
  EXPECT_EQ(csv.rfind("# manifest_digest=00ff\n", 0), 0u);
  EXPECT_NE(csv.find("\"A=3, \"\"quoted\"\"\""), std::string::npos);
}
