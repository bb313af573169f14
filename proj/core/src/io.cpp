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

#include "memcert/io.hpp"

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace memcert::io {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw std::runtime_error("invalid document at '" + where + "': " + what);
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("invalid JSON: ") + e.what());
  }
}

const json& need(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) fail(where, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) fail(where + "." + key, "missing required key");
  return *it;
}

double need_number(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

int outcome_index(const std::string& token, const std::string& where) {
  if (token == "0") return kOutcomeZero;
  if (token == "1") return kOutcomeOne;
  if (token == "nc") return kOutcomeNoClick;
  fail(where, "outcome must be \"0\", \"1\" or \"nc\", got \"" + token + "\"");
}

const char* outcome_token(int index) {
  static const char* tokens[3] = {"0", "1", "nc"};
  return tokens[index];
}

// Splits "l,r" with both pieces drawn from a known token set.
std::pair<std::string, std::string> split_pair(const std::string& key,
                                               const std::string& where) {
  const auto comma = key.find(',');
  if (comma == std::string::npos || comma == 0 || comma + 1 == key.size())
    fail(where, "key must look like \"l,r\", got \"" + key + "\"");
  return {key.substr(0, comma), key.substr(comma + 1)};
}

int setting_index(const std::string& token, const std::string& where) {
  if (token == "0") return 0;
  if (token == "1") return 1;
  fail(where, "setting must be \"0\" or \"1\", got \"" + token + "\"");
}

ComplexMatrix parse_matrix(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where, "expected a matrix (array of rows)");
  const int rows = static_cast<int>(j.size());
  if (!j[0].is_array() || j[0].empty())
    fail(where + "[0]", "expected a row (array of [re, im] pairs)");
  const int cols = static_cast<int>(j[0].size());
  ComplexMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const json& row = j[r];
    const std::string rw = where + "[" + std::to_string(r) + "]";
    if (!row.is_array() || static_cast<int>(row.size()) != cols)
      fail(rw, "ragged matrix row");
    for (int c = 0; c < cols; ++c) {
      const json& e = row[c];
      const std::string ew = rw + "[" + std::to_string(c) + "]";
      if (!e.is_array() || e.size() != 2) fail(ew, "expected an [re, im] pair");
      m(r, c) = Complex(need_number(e[0], ew), need_number(e[1], ew));
    }
  }
  return m;
}

json matrix_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c)
      row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(row);
  }
  return rows;
}

Povm parse_povm(const json& j, const std::string& where) {
  Povm p;
  const json& e0 = need(j, "0", where);
  const json& e1 = need(j, "1", where);
  p.elements[kOutcomeZero] = parse_matrix(e0, where + ".0");
  p.elements[kOutcomeOne] = parse_matrix(e1, where + ".1");
  const int d = static_cast<int>(p.elements[0].rows());
  if (j.contains("nc")) {
    p.elements[kOutcomeNoClick] = parse_matrix(j["nc"], where + ".nc");
  } else {
    p.elements[kOutcomeNoClick] = ComplexMatrix::Zero(d, d);
  }
  return p;
}

json povm_json(const Povm& p) {
  json out;
  out["0"] = matrix_json(p.elements[kOutcomeZero]);
  out["1"] = matrix_json(p.elements[kOutcomeOne]);
  if (p.has_noclick()) out["nc"] = matrix_json(p.elements[kOutcomeNoClick]);
  return out;
}

json score_json(const ChshScore& s) {
  json out;
  out["value"] = s.value;
  out["post_selected"] = s.post_selected;
  return out;
}

ChshScore parse_score(const json& j, const std::string& where) {
  ChshScore s;
  s.value = need_number(need(j, "value", where), where + ".value");
  const json& ps = need(j, "post_selected", where);
  if (!ps.is_boolean()) fail(where + ".post_selected", "expected a boolean");
  s.post_selected = ps.get<bool>();
  return s;
}

void schema_check(const json& doc, const json& sch, const std::string& path,
                  std::vector<std::string>& errs);

bool type_matches(const json& doc, const std::string& type) {
  if (type == "object") return doc.is_object();
  if (type == "array") return doc.is_array();
  if (type == "string") return doc.is_string();
  if (type == "boolean") return doc.is_boolean();
  if (type == "integer") return doc.is_number_integer();
  if (type == "number") return doc.is_number();
  if (type == "null") return doc.is_null();
  return false;
}

void schema_check(const json& doc, const json& sch, const std::string& path,
                  std::vector<std::string>& errs) {
  if (sch.contains("type")) {
    const json& t = sch["type"];
    bool ok = false;
    if (t.is_string()) {
      ok = type_matches(doc, t.get<std::string>());
    } else if (t.is_array()) {
      for (const json& alt : t) ok = ok || type_matches(doc, alt.get<std::string>());
    }
    if (!ok) {
      errs.push_back(path + ": wrong type, expected " + t.dump());
      return;
    }
  }
  if (sch.contains("enum")) {
    bool ok = false;
    for (const json& v : sch["enum"]) ok = ok || v == doc;
    if (!ok) errs.push_back(path + ": value not in enum " + sch["enum"].dump());
  }
  if (sch.contains("minimum") && doc.is_number() &&
      doc.get<double>() < sch["minimum"].get<double>())
    errs.push_back(path + ": below minimum " + sch["minimum"].dump());
  if (sch.contains("required") && doc.is_object()) {
    for (const json& k : sch["required"])
      if (!doc.contains(k.get<std::string>()))
        errs.push_back(path + ": missing required key '" + k.get<std::string>() +
                       "'");
  }
  if (doc.is_object()) {
    const json props =
        sch.contains("properties") ? sch["properties"] : json::object();
    const bool extra_ok = !sch.contains("additionalProperties") ||
                          sch["additionalProperties"].get<bool>();
    for (const auto& [key, value] : doc.items()) {
      if (props.contains(key)) {
        schema_check(value, props[key], path + "." + key, errs);
      } else if (!extra_ok) {
        errs.push_back(path + ": unexpected key '" + key + "'");
      }
    }
  }
  if (doc.is_array() && sch.contains("items")) {
    for (std::size_t i = 0; i < doc.size(); ++i)
      schema_check(doc[i], sch["items"], path + "[" + std::to_string(i) + "]",
                   errs);
  }
}

}  // namespace

CountsTable parse_counts(const std::string& text) {
  const json doc = parse_json(text);
  CountsTable table;

  const json& phase = need(doc, "phase", "$");
  if (!phase.is_string()) fail("$.phase", "expected a string");
  const std::string ph = phase.get<std::string>();
  if (ph == "input") {
    table.phase = Phase::input;
  } else if (ph == "output") {
    table.phase = Phase::output;
  } else {
    fail("$.phase", "expected \"input\" or \"output\", got \"" + ph + "\"");
  }

  if (doc.contains("post_selected")) {
    if (!doc["post_selected"].is_boolean())
      fail("$.post_selected", "expected a boolean");
    table.post_selected = doc["post_selected"].get<bool>();
  }

  const json& counts = need(doc, "counts", "$");
  if (!counts.is_object()) fail("$.counts", "expected an object");
  for (const auto& [skey, cell] : counts.items()) {
    const std::string sw = "$.counts." + skey;
    const auto [xs, ys] = split_pair(skey, sw);
    const int x = setting_index(xs, sw);
    const int y = setting_index(ys, sw);
    if (!cell.is_object()) fail(sw, "expected an object");
    for (const auto& [okey, value] : cell.items()) {
      const std::string ow = sw + "." + okey;
      const auto [as, bs] = split_pair(okey, ow);
      const int a = outcome_index(as, ow);
      const int b = outcome_index(bs, ow);
      if (!value.is_number_integer() || value.get<std::int64_t>() < 0)
        fail(ow, "expected a nonnegative integer count");
      table.counts[x][y][a][b] = value.get<std::uint64_t>();
    }
  }
  return table;
}

std::string serialize_counts(const CountsTable& table) {
  json doc;
  doc["phase"] = table.phase == Phase::input ? "input" : "output";
  if (table.post_selected) doc["post_selected"] = true;
  json counts = json::object();
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      json cell = json::object();
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
          const std::uint64_t n = table.counts[x][y][a][b];
          if (n == 0) continue;
          cell[std::string(outcome_token(a)) + "," + outcome_token(b)] = n;
        }
      }
      counts[std::to_string(x) + "," + std::to_string(y)] = cell;
    }
  }
  doc["counts"] = counts;
  return doc.dump(2) + "\n";
}

ExperimentModel parse_model(const std::string& text) {
  const json doc = parse_json(text);

  const json& source = need(doc, "source", "$");
  const json& dims_j = need(source, "dims", "$.source");
  if (!dims_j.is_array() || dims_j.empty())
    fail("$.source.dims", "expected an array of subsystem dimensions");
  std::vector<int> dims;
  for (const json& d : dims_j) {
    if (!d.is_number_integer() || d.get<int>() < 1)
      fail("$.source.dims", "dimensions must be positive integers");
    dims.push_back(d.get<int>());
  }
  const ComplexMatrix sm =
      parse_matrix(need(source, "matrix", "$.source"), "$.source.matrix");

  std::optional<KrausChannel> memory;
  if (doc.contains("memory") && !doc["memory"].is_null()) {
    const json& ops = need(doc["memory"], "kraus", "$.memory");
    if (!ops.is_array() || ops.empty())
      fail("$.memory.kraus", "expected a non-empty array of matrices");
    KrausChannel ch;
    for (std::size_t i = 0; i < ops.size(); ++i)
      ch.kraus_ops.push_back(parse_matrix(
          ops[i], "$.memory.kraus[" + std::to_string(i) + "]"));
    ch.out_dim = static_cast<int>(ch.kraus_ops[0].rows());
    ch.in_dim = static_cast<int>(ch.kraus_ops[0].cols());
    memory = ch;
  }

  const auto parse_party = [&](const char* key) {
    const json& arr = need(doc, key, "$");
    if (!arr.is_array() || arr.size() != 2)
      fail(std::string("$.") + key, "expected exactly two POVMs");
    std::array<Povm, 2> povms = {
        parse_povm(arr[0], std::string("$.") + key + "[0]"),
        parse_povm(arr[1], std::string("$.") + key + "[1]")};
    return povms;
  };

  try {
    ExperimentModel model{DensityOperator(dims, sm), memory,
                          parse_party("povms_a"), parse_party("povms_b")};
    model.validate();
    return model;
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("invalid model: ") + e.what());
  }
}

std::string serialize_model(const ExperimentModel& model) {
  json doc;
  json source;
  source["dims"] = model.source.dims();
  source["matrix"] = matrix_json(model.source.matrix());
  doc["source"] = source;
  if (model.memory) {
    json ops = json::array();
    for (const ComplexMatrix& k : model.memory->kraus_ops)
      ops.push_back(matrix_json(k));
    doc["memory"] = json{{"kraus", ops}};
  }
  doc["povms_a"] =
      json::array({povm_json(model.povms_a[0]), povm_json(model.povms_a[1])});
  doc["povms_b"] =
      json::array({povm_json(model.povms_b[0]), povm_json(model.povms_b[1])});
  return doc.dump(2) + "\n";
}

std::string serialize_report(const ReportDocument& doc) {
  json r;
  r["scenario"] = static_cast<int>(doc.report.scenario);
  r["assumptions"] = json{{"a", assumption_name(doc.report.assume_a)},
                          {"b_in", assumption_name(doc.report.assume_b_in)},
                          {"b_out", assumption_name(doc.report.assume_b_out)}};
  if (doc.report.s_i) r["s_i"] = score_json(*doc.report.s_i);
  r["s_o"] = score_json(doc.report.s_o);
  if (doc.report.f_i) r["f_i"] = *doc.report.f_i;
  r["f_o"] = doc.report.f_o;
  if (doc.report.lambda_i) r["lambda_i"] = *doc.report.lambda_i;
  if (doc.report.p_i) r["p_i"] = *doc.report.p_i;
  if (doc.report.p_o) r["p_o"] = *doc.report.p_o;
  r["fidelity_bound"] = doc.report.fidelity_bound;
  if (doc.report.success_bound) r["success_bound"] = *doc.report.success_bound;
  if (doc.report.signaling_i) r["signaling_i"] = *doc.report.signaling_i;
  r["signaling_o"] = doc.report.signaling_o;
  r["warnings"] = doc.report.warnings;

  json top;
  top["report"] = r;
  json prov;
  prov["tool_version"] = doc.tool_version;
  prov["inputs"] = json(doc.input_hashes);
  top["provenance"] = prov;
  return top.dump(2) + "\n";
}

ReportDocument parse_report(const std::string& text) {
  const json top = parse_json(text);
  ReportDocument doc;

  const json& r = need(top, "report", "$");
  const json& sc = need(r, "scenario", "$.report");
  if (!sc.is_number_integer() || sc.get<int>() < 1 || sc.get<int>() > 3)
    fail("$.report.scenario", "expected 1, 2 or 3");
  doc.report.scenario = static_cast<Scenario>(sc.get<int>());

  const json& as = need(r, "assumptions", "$.report");
  const auto read_assumption = [&](const char* key) {
    const json& v = need(as, key, "$.report.assumptions");
    if (!v.is_string()) fail(std::string("$.report.assumptions.") + key,
                             "expected a string");
    return parse_assumption(v.get<std::string>());
  };
  doc.report.assume_a = read_assumption("a");
  doc.report.assume_b_in = read_assumption("b_in");
  doc.report.assume_b_out = read_assumption("b_out");

  if (r.contains("s_i")) doc.report.s_i = parse_score(r["s_i"], "$.report.s_i");
  doc.report.s_o = parse_score(need(r, "s_o", "$.report"), "$.report.s_o");
  if (r.contains("f_i"))
    doc.report.f_i = need_number(r["f_i"], "$.report.f_i");
  doc.report.f_o = need_number(need(r, "f_o", "$.report"), "$.report.f_o");
  if (r.contains("lambda_i"))
    doc.report.lambda_i = need_number(r["lambda_i"], "$.report.lambda_i");
  if (r.contains("p_i")) doc.report.p_i = need_number(r["p_i"], "$.report.p_i");
  if (r.contains("p_o")) doc.report.p_o = need_number(r["p_o"], "$.report.p_o");
  doc.report.fidelity_bound = need_number(
      need(r, "fidelity_bound", "$.report"), "$.report.fidelity_bound");
  if (r.contains("success_bound"))
    doc.report.success_bound =
        need_number(r["success_bound"], "$.report.success_bound");
  if (r.contains("signaling_i"))
    doc.report.signaling_i =
        need_number(r["signaling_i"], "$.report.signaling_i");
  doc.report.signaling_o = need_number(need(r, "signaling_o", "$.report"),
                                       "$.report.signaling_o");
  const json& warnings = need(r, "warnings", "$.report");
  if (!warnings.is_array()) fail("$.report.warnings", "expected an array");
  for (const json& w : warnings) {
    if (!w.is_string()) fail("$.report.warnings", "expected strings");
    doc.report.warnings.push_back(w.get<std::string>());
  }

  const json& prov = need(top, "provenance", "$");
  const json& tv = need(prov, "tool_version", "$.provenance");
  if (!tv.is_string()) fail("$.provenance.tool_version", "expected a string");
  doc.tool_version = tv.get<std::string>();
  const json& inputs = need(prov, "inputs", "$.provenance");
  if (!inputs.is_object()) fail("$.provenance.inputs", "expected an object");
  for (const auto& [key, value] : inputs.items()) {
    if (!value.is_string())
      fail("$.provenance.inputs." + key, "expected a string");
    doc.input_hashes[key] = value.get<std::string>();
  }
  return doc;
}

std::vector<std::string> validate_schema(const std::string& document,
                                         const std::string& schema) {
  const json doc = parse_json(document);
  const json sch = parse_json(schema);
  std::vector<std::string> errs;
  schema_check(doc, sch, "$", errs);
  return errs;
}

std::string content_hash(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream out;
  out << "fnv1a64:" << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

std::string assumption_name(Assumption a) {
  switch (a) {
    case Assumption::none:
      return "none";
    case Assumption::sfs:
      return "sfs";
    case Assumption::wfs:
      return "wfs";
  }
  return "none";
}

Assumption parse_assumption(const std::string& name) {
  if (name == "none") return Assumption::none;
  if (name == "sfs") return Assumption::sfs;
  if (name == "wfs") return Assumption::wfs;
  throw std::runtime_error("invalid assumption \"" + name +
                           "\", expected none, sfs or wfs");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace memcert::io
