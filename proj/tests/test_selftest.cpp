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

#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "memcert/io.hpp"
#include "memcert/selftest.hpp"
#include "memcert/simulate.hpp"
#include "test_support.hpp"

using namespace memcert;

namespace {

constexpr double kTsirelson = 2.0 * 1.4142135623730951;

bool has_warning(const CertificationReport& rep, const std::string& needle) {
  for (const std::string& w : rep.warnings)
    if (w.find(needle) != std::string::npos) return true;
  return false;
}

CountsTable fixture_counts(const std::string& name) {
  return io::parse_counts(io::read_file(testsup::data_file(name)));
}

}  // namespace

TEST_SUITE("selftest") {

TEST_CASE("singlet fidelity bound at the quantum maximum is 1") {
  CHECK(std::abs(singlet_fidelity_bound(kTsirelson) - 1.0) < 1e-12);
}

TEST_CASE("singlet fidelity bound at the threshold score is 1/2") {
  CHECK(std::abs(singlet_fidelity_bound(chsh_selftest_threshold()) - 0.5) <
        1e-12);
  CHECK(std::abs(chsh_selftest_threshold() -
                 (16.0 + 14.0 * std::sqrt(2.0)) / 17.0) < 1e-15);
}

TEST_CASE("singlet fidelity bound at the reported experimental scores") {
  const double f_i = singlet_fidelity_bound(2.733);
  const double f_o = singlet_fidelity_bound(2.64);
  CHECK(f_i >= 0.93);
  CHECK(std::abs(f_i - 0.933971) < 1e-4);
  CHECK(std::abs(f_o - 0.869620) < 1e-4);
}

TEST_CASE("singlet fidelity bound at the classical score") {
  CHECK(std::abs(singlet_fidelity_bound(2.0) - 0.426777) < 1e-6);
}

TEST_CASE("singlet fidelity bound clamps to [0, 1]") {
  CHECK(singlet_fidelity_bound(-2.8) == 0.0);
  CHECK(singlet_fidelity_bound(4.0) == 1.0);
  CHECK_THROWS(singlet_fidelity_bound(4.5));
}

TEST_CASE("entanglement weight bound lambda_i") {
  CHECK(lambda_i(1.0, 1.0) == 0.5);
  CHECK(lambda_i(0.3, 0.7) == 1.0);
  CHECK(std::abs(lambda_i(0.93, 1.0) - 0.755147) < 1e-6);
  for (double f : {0.5, 0.6, 0.8, 0.97})
    for (double p : {0.2, 0.7, 1.0}) {
      const double l = lambda_i(f, p);
      CHECK(l >= 0.5);
      CHECK(l <= 1.0);
    }
  CHECK_THROWS(lambda_i(1.2, 1.0));
}

TEST_CASE("deterministic bound at perfect scores is 1") {
  CHECK(std::abs(scenario1_bound(1.0, 1.0) - 1.0) < 1e-12);
}

TEST_CASE("deterministic bound at the experimental scores") {
  const double got = scenario1_bound(0.93397, 0.86962);
  // Weak input certification: the bound saturates at the branch-1 value.
  const double branch1 = 0.5 * (0.86962 + std::sqrt(2.0 * 0.86962 - 1.0));
  CHECK(std::abs(got - branch1) < 1e-12);
  CHECK(std::abs(got - 0.86468) < 5e-5);
  CHECK(lambda_i(0.93397, 1.0) >= 1.0 / (2.0 * 0.86962));
}

TEST_CASE("perfect input certification reduces the bound to f_o") {
  for (int i = 1; i <= 10; ++i) {
    const double f_o = 0.5 + 0.049 * i;
    CHECK(std::abs(scenario1_bound(1.0, f_o) - f_o) < 1e-12);
  }
}

TEST_CASE("deterministic bound is zero below the proven domain") {
  CHECK(scenario1_bound(0.9, 0.49) == 0.0);
  CHECK(scenario1_bound(0.9, 0.2) == 0.0);
}

TEST_CASE("deterministic bound is monotone in both scores") {
  const int n = 50;
  for (int i = 0; i < n; ++i) {
    const double f_i = 0.5 + 0.5 * i / (n - 1);
    double prev = -1.0;
    for (int j = 0; j < n; ++j) {
      const double f_o = 0.5 + 0.5 * j / (n - 1);
      const double b = scenario1_bound(f_i, f_o);
      CHECK(b >= prev - 1e-12);
      prev = b;
    }
  }
  for (int j = 0; j < n; ++j) {
    const double f_o = 0.5 + 0.5 * j / (n - 1);
    double prev = -1.0;
    for (int i = 0; i < n; ++i) {
      const double f_i = 0.5 + 0.5 * i / (n - 1);
      const double b = scenario1_bound(f_i, f_o);
      CHECK(b >= prev - 1e-12);
      prev = b;
    }
  }
}

TEST_CASE("heralded fidelity claim dominates the deterministic one") {
  // At equal scores the heralded scenario certifies the conditional channel
  // at f_o itself, while the deterministic bound pays for the unknown input
  // entanglement; equality holds exactly at f_i = 1.
  const int n = 25;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double f_i = 0.5 + 0.5 * i / (n - 1);
      const double f_o = 0.501 + 0.499 * j / (n - 1);
      CHECK(scenario1_bound(f_i, f_o) <=
            scenario2_bound(f_o, 1.0).fidelity + 1e-12);
    }
  CHECK(std::abs(scenario1_bound(1.0, 0.8) -
                 scenario2_bound(0.8, 1.0).fidelity) < 1e-12);
}

TEST_CASE("heralded bound returns the score pair directly") {
  const BoundPair b = scenario2_bound(0.8696, 0.9);
  CHECK(b.fidelity == 0.8696);
  CHECK(b.success == 0.45);
  CHECK(scenario2_bound(0.7, 1.0).success == 0.5);
  const BoundPair zero = scenario2_bound(0.0, 0.0);
  CHECK(zero.fidelity == 0.0);
  CHECK(zero.success == 0.0);
  CHECK_THROWS(scenario2_bound(1.3, 0.5));
}

TEST_CASE("non-heralded bound with a perfect input pins t = 1") {
  ScenarioInputs in;
  in.f_i = 1.0;
  in.p_i = 1.0;
  in.f_o = 0.9;
  in.p_o = 0.8;
  in.scenario = Scenario::s3;
  const BoundPair b = scenario3_bound(in);
  // At t = 1 the SDP caps collapse: B_max = 1 and B_min = p_o.
  CHECK(std::abs(b.fidelity - in.f_o * in.p_o) < 2e-6);
  CHECK(std::abs(b.success - in.p_o) < 2e-6);
}

TEST_CASE("non-heralded bound at perfect scores is (1, 1)") {
  ScenarioInputs in;
  in.f_i = in.p_i = in.f_o = in.p_o = 1.0;
  const BoundPair b = scenario3_bound(in);
  CHECK(std::abs(b.fidelity - 1.0) < 2e-6);
  CHECK(std::abs(b.success - 1.0) < 2e-6);
}

TEST_CASE("non-heralded bound regression at the experimental operating point") {
  ScenarioInputs in;
  in.f_i = singlet_fidelity_bound(2.733);
  in.f_o = singlet_fidelity_bound(2.64);
  in.scenario = Scenario::s3;

  in.p_i = 1.0;
  in.p_o = 1.0;
  const BoundPair full = scenario3_bound(in);
  CHECK(std::abs(full.fidelity - 0.795899484) < 1e-6);
  CHECK(std::abs(full.success - 0.632400312) < 1e-6);

  // With everything announced, the deterministic assumption can only help.
  CHECK(scenario1_bound(in.f_i, in.f_o) >= full.fidelity);

  in.p_i = 0.9;
  in.p_o = 0.9;
  const BoundPair nine = scenario3_bound(in);
  CHECK(std::abs(nine.fidelity - 0.644983529) < 1e-6);
  CHECK(std::abs(nine.success - 0.548602994) < 1e-6);

  // Lower detection rates can only weaken both claims.
  CHECK(nine.fidelity <= full.fidelity + 1e-9);
  CHECK(nine.success <= full.success + 1e-9);
}

TEST_CASE("certify on the bundled heralded fixture") {
  const CountsTable counts_i = fixture_counts("energy_time_photon_counts_input.json");
  const CountsTable counts_o = fixture_counts("energy_time_photon_counts_output.json");

  CertifyConfig config;
  config.scenario = Scenario::s2;
  config.assume_b_out = Assumption::wfs;
  const CertificationReport rep = certify(std::nullopt, counts_o, config);

  CHECK(std::abs(rep.s_o.value - 2.64) < 1e-9);
  CHECK(rep.s_o.post_selected);
  CHECK(rep.fidelity_bound >= 0.8696);
  CHECK(std::abs(rep.fidelity_bound - 0.869620) < 1e-4);
  CHECK_FALSE(rep.success_bound.has_value());
  CHECK(has_warning(rep, "conditional detection unavailable"));
  CHECK_FALSE(rep.s_i.has_value());

  // The same scores read under the deterministic scenario.
  CertifyConfig det;
  det.scenario = Scenario::s1;
  const CertificationReport rep1 = certify(counts_i, counts_o, det);
  CHECK(std::abs(rep1.s_i->value - 2.733) < 1e-9);
  CHECK(std::abs(rep1.fidelity_bound - 0.86470472) < 1e-6);
  CHECK(has_warning(rep1, "deterministic"));
  CHECK(rep1.success_bound.has_value());
  CHECK(*rep1.success_bound == 1.0);
}

TEST_CASE("certify on an exact lossless identity experiment") {
  const Correlations ideal = exact_correlations(ideal_chsh_model());
  CertifyConfig config;
  config.scenario = Scenario::s1;
  const CertificationReport rep =
      certify_correlations(ideal, ideal, config);
  CHECK(std::abs(rep.fidelity_bound - 1.0) < 1e-6);
  CHECK(rep.warnings.empty());
  CHECK(rep.lambda_i.has_value());
  CHECK(std::abs(*rep.lambda_i - 0.5) < 1e-6);
}

TEST_CASE("certify rejects scenario-inconsistent inputs") {
  const Correlations ideal = exact_correlations(ideal_chsh_model());
  CertifyConfig s1;
  s1.scenario = Scenario::s1;
  CHECK_THROWS_AS(certify_correlations(std::nullopt, ideal, s1),
                  std::invalid_argument);

  CountsTable out = sample_counts(ideal_chsh_model(), 1000, 3);
  out.phase = Phase::input;  // mislabeled
  CertifyConfig s2;
  s2.scenario = Scenario::s2;
  CHECK_THROWS_AS(certify(std::nullopt, out, s2), std::invalid_argument);
}

TEST_CASE("certify scenario 3 needs recoverable detection rates") {
  Correlations ideal = exact_correlations(ideal_chsh_model());
  ideal.post_selected = true;  // conditioned upstream, rates lost
  CertifyConfig s3;
  s3.scenario = Scenario::s3;
  s3.assume_b_in = s3.assume_b_out = Assumption::wfs;
  CHECK_THROWS_AS(certify_correlations(ideal, ideal, s3),
                  std::invalid_argument);
}

TEST_CASE("signaling data is flagged") {
  Correlations skew;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      const double w = y == 0 ? 0.53 : 0.5;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          skew.p[x][y][a][b] = (a == 0 ? w : 1.0 - w) * 0.5;
    }
  CertifyConfig config;
  config.scenario = Scenario::s2;
  const CertificationReport rep =
      certify_correlations(std::nullopt, skew, config);
  CHECK(rep.signaling_o > 0.01);
  CHECK(has_warning(rep, "signaling"));
}

}  // TEST_SUITE
