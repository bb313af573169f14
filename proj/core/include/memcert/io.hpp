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

#pragma once

// JSON encodings for counts tables, experiment models and certification
// reports. All functions work on strings; parse errors throw
// std::runtime_error with a message naming the offending key.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "memcert/correlations.hpp"
#include "memcert/selftest.hpp"
#include "memcert/simulate.hpp"

namespace memcert::io {

// Counts document: {"phase": "input"|"output", "post_selected": bool?,
// "counts": {"x,y": {"a,b": n}}} with a, b in {"0", "1", "nc"}; missing
// cells mean zero.
CountsTable parse_counts(const std::string& text);
std::string serialize_counts(const CountsTable& table);

// Model document: source state, optional memory in Kraus form, POVMs per
// party and setting keyed "0", "1", "nc". Matrices are nested arrays of
// [re, im] pairs.
ExperimentModel parse_model(const std::string& text);
std::string serialize_model(const ExperimentModel& model);

// Certification report plus provenance; round-trips losslessly.
struct ReportDocument {
  CertificationReport report;
  std::string tool_version;
  std::map<std::string, std::string> input_hashes;  // role -> "fnv1a64:hex"
};
std::string serialize_report(const ReportDocument& doc);
ReportDocument parse_report(const std::string& text);

// Validates a JSON document against the subset of JSON Schema used by the
// bundled schemas (type, required, properties, items, enum, minimum,
// additionalProperties). Returns human-readable violations, empty when valid.
std::vector<std::string> validate_schema(const std::string& document,
                                         const std::string& schema);

// FNV-1a 64-bit content hash, formatted "fnv1a64:<16 hex digits>".
std::string content_hash(const std::string& bytes);

// Assumption spelling shared by flags and report fields.
std::string assumption_name(Assumption a);
Assumption parse_assumption(const std::string& name);

// Reads a whole file; throws std::runtime_error naming the path on failure.
std::string read_file(const std::string& path);

}  // namespace memcert::io
