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

#include <optional>
#include <string>
#include <vector>

#include "memcert/correlations.hpp"

namespace memcert {

enum class Scenario { s1 = 1, s2 = 2, s3 = 3 };
enum class Assumption { none, sfs, wfs };

struct ScenarioInputs {
  double f_i = 0.0;
  double f_o = 0.0;
  double p_i = 1.0;
  double p_o = 1.0;
  Scenario scenario = Scenario::s1;
};

struct BoundPair {
  double fidelity = 0.0;
  double success = 0.0;
};

// f(S) = (1 + (S - s*)/(2 sqrt(2) - s*))/2 with s* = (16 + 14 sqrt(2))/17,
// clamped to [0, 1]. Values below 1/2 mean "no certification" downstream.
double singlet_fidelity_bound(double s);

// Threshold score below which f(S) < 1/2.
double chsh_selftest_threshold();  // s* = (16 + 14 sqrt(2))/17

// Largest Schmidt weight compatible with singlet fidelity f_i at conclusive
// probability p_i: 1 for f_i < 1/2, else 1 - (1/2 - sqrt(f_i(1-f_i))) p_i.
double lambda_i(double f_i, double p_i);

// Deterministic-scenario fidelity bound. Uses lambda_i(f_i, 1).
// Returns 0 for f_o < 1/2 (outside the proven domain).
double scenario1_bound(double f_i, double f_o);

// Heralded-scenario bounds: fidelity f_o, success p_o/2.
BoundPair scenario2_bound(double f_o, double p_o);

// Non-heralded scenario: 1-D minimization over the filter parameter t with
// SDP oracles B_max/B_min at each point.
BoundPair scenario3_bound(const ScenarioInputs& in);

struct CertifyConfig {
  Scenario scenario = Scenario::s2;
  Assumption assume_a = Assumption::none;
  Assumption assume_b_in = Assumption::none;
  Assumption assume_b_out = Assumption::none;
};

struct CertificationReport {
  Scenario scenario = Scenario::s2;
  Assumption assume_a = Assumption::none;
  Assumption assume_b_in = Assumption::none;
  Assumption assume_b_out = Assumption::none;
  std::optional<ChshScore> s_i;
  ChshScore s_o;
  std::optional<double> f_i;
  double f_o = 0.0;
  std::optional<double> lambda_i;
  std::optional<double> p_i;
  std::optional<double> p_o;
  double fidelity_bound = 0.0;
  std::optional<double> success_bound;
  std::optional<double> signaling_i;
  double signaling_o = 0.0;
  std::vector<std::string> warnings;
};

// Full pipeline: counts -> correlations -> post-selection (per assumptions)
// -> CHSH -> f(S) -> scenario bound. Scenarios 1 and 3 need input-phase
// counts. Throws std::invalid_argument on scenario-inconsistent data.
CertificationReport certify(const std::optional<CountsTable>& counts_i,
                            const CountsTable& counts_o,
                            const CertifyConfig& config);

// Same pipeline on probability tables (exact model output); the flags on
// Correlations stand in for the counts-level post_selected marker.
CertificationReport certify_correlations(const std::optional<Correlations>& corr_i,
                                         const Correlations& corr_o,
                                         const CertifyConfig& config);

}  // namespace memcert
