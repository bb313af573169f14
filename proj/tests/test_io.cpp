// Copyright 2026 The memcert developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <string>

#include "doctest.h"
#include "memcert/io.hpp"
#include "memcert/simulate.hpp"
#include "test_support.hpp"

using namespace memcert;

namespace {

std::string fixture(const std::string& name) {
  return io::read_file(testsup::data_file(name));
}

bool mentions(const std::string& text, const std::string& needle) {
  return text.find(needle) != std::string::npos;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("counts documents round-trip losslessly") {
  for (const char* name :
       {"ideal_lossless_counts_input.json", "ideal_lossless_counts_output.json",
        "energy_time_photon_counts_input.json",
        "energy_time_photon_counts_output.json"}) {
    const CountsTable first = io::parse_counts(fixture(name));
    const CountsTable second = io::parse_counts(io::serialize_counts(first));
    CHECK(second.phase == first.phase);
    CHECK(second.post_selected == first.post_selected);
    CHECK(second.counts == first.counts);
  }
}

TEST_CASE("sampled counts survive serialization") {
  const CountsTable table = sample_counts(ideal_chsh_model(), 4096, 17);
  const CountsTable back = io::parse_counts(io::serialize_counts(table));
  CHECK(back.counts == table.counts);
  CHECK(back.phase == Phase::output);
}

TEST_CASE("counts parse errors name the offending key") {
  try {
    io::parse_counts(R"({"phase": 3, "counts": {}})");
    FAIL("expected a parse error");
  } catch (const std::runtime_error& e) {
    CHECK(mentions(e.what(), "$.phase"));
  }
  try {
    io::parse_counts(R"({"phase": "output", "counts": {"9,0": {"0,0": 1}}})");
    FAIL("expected a parse error");
  } catch (const std::runtime_error& e) {
    CHECK(mentions(e.what(), "$.counts"));
  }
  CHECK_THROWS_WITH_AS(io::parse_counts("{nope"),
                       doctest::Contains("invalid JSON"), std::runtime_error);
}

TEST_CASE("model documents round-trip and validate") {
  const std::string text = fixture("ideal_singlet_model.json");
  const ExperimentModel model = io::parse_model(text);
  model.validate();
  CHECK_FALSE(model.memory.has_value());

  const ExperimentModel back = io::parse_model(io::serialize_model(model));
  CHECK(max_abs_diff(back.source.matrix(), model.source.matrix()) < 1e-12);
  for (int s = 0; s < 2; ++s)
    for (int o = 0; o < 3; ++o) {
      CHECK(max_abs_diff(back.povms_a[s].elements[o],
                         model.povms_a[s].elements[o]) < 1e-12);
      CHECK(max_abs_diff(back.povms_b[s].elements[o],
                         model.povms_b[s].elements[o]) < 1e-12);
    }
}

TEST_CASE("models with a memory keep their Kraus operators") {
  std::mt19937_64 eng(71);
  ExperimentModel m = ideal_chsh_model();
  m.memory = testsup::random_cptp(2, 2, 2, eng);
  const ExperimentModel back = io::parse_model(io::serialize_model(m));
  REQUIRE(back.memory.has_value());
  REQUIRE(back.memory->kraus_ops.size() == 2);
  for (int k = 0; k < 2; ++k)
    CHECK(max_abs_diff(back.memory->kraus_ops[k], m.memory->kraus_ops[k]) <
          1e-12);
}

TEST_CASE("model parse errors carry their own prefix") {
  // Structurally fine JSON whose POVM no longer resolves the identity.
  ExperimentModel broken = ideal_chsh_model();
  broken.povms_a[0].elements[0] *= 1.5;
  CHECK_THROWS_WITH_AS(io::parse_model(io::serialize_model(broken)),
                       doctest::Contains("invalid model:"),
                       std::runtime_error);
  try {
    io::parse_model(R"({"source": {"dims": "no"}, "povms_a": [], "povms_b": []})");
    FAIL("expected a parse error");
  } catch (const std::runtime_error& e) {
    CHECK(mentions(e.what(), "$.source.dims"));
  }
}

TEST_CASE("report documents round-trip losslessly") {
  io::ReportDocument doc;
  doc.report.scenario = Scenario::s3;
  doc.report.assume_a = Assumption::none;
  doc.report.assume_b_in = Assumption::wfs;
  doc.report.assume_b_out = Assumption::wfs;
  doc.report.s_i = ChshScore{2.7334, true};
  doc.report.s_o = ChshScore{2.6401, true};
  doc.report.f_i = 0.933971;
  doc.report.f_o = 0.869620;
  doc.report.lambda_i = 0.755147;
  doc.report.p_i = 0.95;
  doc.report.p_o = 0.84;
  doc.report.fidelity_bound = 0.795899;
  doc.report.success_bound = 0.6324;
  doc.report.signaling_i = 0.001;
  doc.report.signaling_o = 0.002;
  doc.report.warnings = {"conditional detection unavailable"};
  doc.tool_version = "1.0.0";
  doc.input_hashes["counts_input"] = io::content_hash("x");
  doc.input_hashes["counts_output"] = io::content_hash("y");

  const io::ReportDocument back = io::parse_report(io::serialize_report(doc));
  CHECK(back.report.scenario == Scenario::s3);
  CHECK(back.report.assume_b_in == Assumption::wfs);
  REQUIRE(back.report.s_i.has_value());
  CHECK(back.report.s_i->value == doctest::Approx(2.7334).epsilon(1e-12));
  CHECK(back.report.s_i->post_selected);
  CHECK(back.report.f_i == doc.report.f_i);
  CHECK(back.report.lambda_i == doc.report.lambda_i);
  CHECK(back.report.p_o == doc.report.p_o);
  CHECK(back.report.fidelity_bound == doc.report.fidelity_bound);
  CHECK(back.report.success_bound == doc.report.success_bound);
  CHECK(back.report.signaling_i == doc.report.signaling_i);
  CHECK(back.report.warnings == doc.report.warnings);
  CHECK(back.tool_version == "1.0.0");
  CHECK(back.input_hashes == doc.input_hashes);
}

TEST_CASE("optional report fields stay absent") {
  io::ReportDocument doc;
  doc.report.scenario = Scenario::s2;
  doc.report.s_o = ChshScore{2.64, true};
  doc.report.f_o = 0.8696;
  doc.report.fidelity_bound = 0.8696;
  doc.tool_version = "1.0.0";
  const std::string text = io::serialize_report(doc);
  CHECK_FALSE(mentions(text, "\"s_i\""));
  CHECK_FALSE(mentions(text, "\"f_i\""));
  CHECK_FALSE(mentions(text, "\"success_bound\""));
  const io::ReportDocument back = io::parse_report(text);
  CHECK_FALSE(back.report.s_i.has_value());
  CHECK_FALSE(back.report.f_i.has_value());
  CHECK_FALSE(back.report.success_bound.has_value());
}

TEST_CASE("serialized reports satisfy the bundled schema") {
  io::ReportDocument doc;
  doc.report.scenario = Scenario::s1;
  doc.report.s_i = ChshScore{2.733, false};
  doc.report.s_o = ChshScore{2.64, false};
  doc.report.f_i = 0.933971;
  doc.report.f_o = 0.869620;
  doc.report.lambda_i = 0.755;
  doc.report.fidelity_bound = 0.864705;
  doc.report.success_bound = 1.0;
  doc.report.signaling_o = 0.0;
  doc.tool_version = "1.0.0";
  doc.input_hashes["counts_input"] = io::content_hash("a");

  const std::string schema = fixture("report.schema.json");
  CHECK(io::validate_schema(io::serialize_report(doc), schema).empty());

  // Corruptions the schema must flag.
  const auto violations = [&](const std::string& text) {
    return io::validate_schema(text, schema);
  };
  std::string good = io::serialize_report(doc);
  CHECK_FALSE(violations(R"({"report": {}})").empty());

  std::string bad_scenario = good;
  bad_scenario.replace(bad_scenario.find("\"scenario\": 1"), 13,
                       "\"scenario\": 9");
  const std::vector<std::string> v1 = violations(bad_scenario);
  REQUIRE_FALSE(v1.empty());
  CHECK(mentions(v1[0], "$.report.scenario"));

  std::string bad_assumption = good;
  bad_assumption.replace(bad_assumption.find("\"a\": \"none\""), 11,
                         "\"a\": \"hope\"");
  CHECK_FALSE(violations(bad_assumption).empty());

  std::string negative = good;
  negative.replace(negative.find("\"f_o\": 0.86962"), 14, "\"f_o\": -0.8696");
  CHECK_FALSE(violations(negative).empty());
}

TEST_CASE("schema violations pinpoint their path") {
  const std::string schema = R"({
    "type": "object",
    "required": ["w"],
    "properties": {"w": {"type": "array", "items": {"type": "string"}}},
    "additionalProperties": false
  })";
  CHECK(io::validate_schema(R"({"w": ["ok"]})", schema).empty());

  const std::vector<std::string> bad_item =
      io::validate_schema(R"({"w": ["ok", 3]})", schema);
  REQUIRE(bad_item.size() == 1);
  CHECK(mentions(bad_item[0], "$.w[1]"));

  const std::vector<std::string> extra =
      io::validate_schema(R"({"w": [], "z": 1})", schema);
  REQUIRE(extra.size() == 1);
  CHECK(mentions(extra[0], "unexpected key 'z'"));

  const std::vector<std::string> missing = io::validate_schema("{}", schema);
  REQUIRE(missing.size() == 1);
  CHECK(mentions(missing[0], "missing required key 'w'"));
}

TEST_CASE("content hashes match the reference vectors") {
  CHECK(io::content_hash("") == "fnv1a64:cbf29ce484222325");
  CHECK(io::content_hash("a") == "fnv1a64:af63dc4c8601ec8c");
  CHECK(io::content_hash("ab") != io::content_hash("ba"));
}

TEST_CASE("assumption names round-trip") {
  for (Assumption a : {Assumption::none, Assumption::sfs, Assumption::wfs})
    CHECK(io::parse_assumption(io::assumption_name(a)) == a);
  CHECK_THROWS(io::parse_assumption("strong"));
}

TEST_CASE("missing files raise an error naming the path") {
  CHECK_THROWS_WITH_AS(io::read_file("/nonexistent/memcert.json"),
                       doctest::Contains("/nonexistent/memcert.json"),
                       std::runtime_error);
}

}  // TEST_SUITE
