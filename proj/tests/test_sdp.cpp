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

#include <cmath>
#include <random>

#include "doctest.h"
#include "memcert/qcore.hpp"
#include "memcert/sdp.hpp"
#include "test_support.hpp"

using namespace memcert;

namespace {

double lambda_closed_form(double f_i, double p_i) {
  return 1.0 - (0.5 - std::sqrt(f_i * (1.0 - f_i))) * p_i;
}

}  // namespace

TEST_SUITE("sdp") {

TEST_CASE("feasibility cap: maximal trace under a marginal bound is 1") {
  sdp::SdpProblem p;
  p.n = 4;
  p.maximize = true;
  p.objective = ComplexMatrix::Identity(4, 4);
  p.trace_cap = sdp::SdpProblem::PartialTraceCap{
      {2, 2}, 1, ComplexMatrix::Identity(2, 2) / 2.0};
  const sdp::SdpSolution sol = sdp::solve(p);
  REQUIRE(sol.status == sdp::SolveStatus::optimal);
  CHECK(std::abs(sol.primal_value - 1.0) < 1e-7);
  CHECK(sol.dual_value >= sol.primal_value - 1e-7);  // weak duality, max form
  CHECK(sol.min_eigenvalue > -1e-8);
  CHECK(sol.cap_slack_min_eigenvalue > -1e-8);
}

TEST_CASE("orthogonal support: minimal overlap at unit trace is 0") {
  sdp::SdpProblem p;
  p.n = 4;
  p.objective = max_entangled_density().matrix();
  p.equalities.push_back({ComplexMatrix::Identity(4, 4), 1.0});
  const sdp::SdpSolution sol = sdp::solve(p);
  REQUIRE(sol.status == sdp::SolveStatus::optimal);
  CHECK(std::abs(sol.primal_value) < 1e-7);
  CHECK(sol.dual_value <= sol.primal_value + 1e-7);  // weak duality, min form
  CHECK(sol.max_equality_violation < 1e-7);
}

TEST_CASE("entanglement weight program matches the closed form") {
  CHECK(std::abs(sdp::lambda_max_sdp(0.5, 0.8) - 1.0) < 1e-6);
  CHECK(std::abs(sdp::lambda_max_sdp(0.93, 1.0) - 0.755147) < 1e-6);
  // High-fidelity edge: at f_i -> 1 the feasible set loses its interior and
  // the splitting solver stalls, so stay just inside the boundary.
  CHECK(std::abs(sdp::lambda_max_sdp(0.999, 1.0) -
                 lambda_closed_form(0.999, 1.0)) < 1e-6);
}

TEST_CASE("entanglement weight program on random parameters") {
  std::mt19937_64 eng(41);
  std::uniform_real_distribution<double> uf(0.5, 0.995), up(0.05, 1.0);
  for (int rep = 0; rep < 25; ++rep) {
    const double f = uf(eng), p = up(eng);
    CHECK(std::abs(sdp::lambda_max_sdp(f, p) - lambda_closed_form(f, p)) <
          1e-6);
  }
}

TEST_CASE("filtered overlap program at the identity filter returns f_o") {
  CHECK(std::abs(sdp::g_sdp(0.77, 0.5) - 0.77) < 1e-6);
  CHECK(std::abs(sdp::g_closed_form(0.77, 0.5) - 0.77) < 1e-12);
}

TEST_CASE("filtered overlap program at the critical filter strength") {
  const double f_o = 0.8696;
  const double lambda = 1.0 / (2.0 * f_o);
  const double want = 0.5 * (f_o + std::sqrt(2.0 * f_o - 1.0));
  CHECK(std::abs(sdp::g_closed_form(f_o, lambda) - want) < 1e-12);
  CHECK(std::abs(sdp::g_sdp(f_o, lambda) - want) < 1e-6);
}

TEST_CASE("filtered overlap program matches its closed form") {
  CHECK(std::abs(sdp::g_sdp(0.8696, 0.55) -
                 sdp::g_closed_form(0.8696, 0.55)) < 1e-6);
  std::mt19937_64 eng(42);
  std::uniform_real_distribution<double> uf(0.5, 0.999), ul(0.0, 1.0);
  for (int rep = 0; rep < 25; ++rep) {
    const double f = uf(eng);
    const double lambda = 0.5 + (1.0 / (2.0 * f) - 0.5) * ul(eng);
    CHECK(std::abs(sdp::g_sdp(f, lambda) - sdp::g_closed_form(f, lambda)) <
          1e-6);
  }
  CHECK_THROWS(sdp::g_sdp(0.9, 0.7));  // lambda beyond 1/(2 f_o)
}

TEST_CASE("conclusive mass programs collapse at t = 1") {
  for (double f_o : {0.6, 0.8696}) {
    for (double p_o : {0.3, 0.8, 1.0}) {
      CHECK(std::abs(sdp::b_max_sdp(f_o, p_o, 1.0) - 1.0) < 1e-6);
      CHECK(std::abs(sdp::b_min_sdp(f_o, p_o, 1.0) - p_o) < 1e-6);
    }
  }
}

TEST_CASE("conclusive mass programs at perfect scores force the pair") {
  CHECK(std::abs(sdp::b_max_sdp(1.0, 1.0, 1.0) - 1.0) < 1e-6);
  CHECK(std::abs(sdp::b_min_sdp(1.0, 1.0, 1.0) - 1.0) < 1e-6);
}

TEST_CASE("conclusive mass lower program vanishes at p_o = 0") {
  CHECK(std::abs(sdp::b_min_sdp(0.8, 0.0, 0.6)) < 1e-6);
}

TEST_CASE("conclusive mass programs are ordered and monotone in p_o") {
  const double f_o = 0.8, t = 0.7;
  double prev_min = -1.0, prev_max = 2.0;
  for (double p_o : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const double lo = sdp::b_min_sdp(f_o, p_o, t);
    const double hi = sdp::b_max_sdp(f_o, p_o, t);
    CHECK(lo <= hi + 1e-7);
    CHECK(lo >= prev_min - 1e-6);  // tightening constraints raise the min
    CHECK(hi <= prev_max + 1e-6);  // and cannot raise the max
    prev_min = lo;
    prev_max = hi;
  }
}

TEST_CASE("inconsistent conclusive mass constraints are infeasible") {
  // At small t the damped overlap target (1+t)/2 is out of reach for any
  // feasible state, so the solver must report infeasibility.
  CHECK_THROWS(sdp::b_max_sdp(1.0, 1.0, 0.3));
}

TEST_CASE("dual certificate for the entanglement weight program") {
  const sdp::DualCertificate c75 = sdp::verify_dual_T(0.75, 1.0);
  CHECK(c75.psd);
  const double f = 0.75;
  const double c_coeff =
      (f - 1.0 + std::sqrt(f * (1.0 - f))) / (2.0 * (1.0 - f));
  // The certificate operator is PSD exactly when this coefficient is, and
  // its spectrum always contains both the coefficient and zero.
  CHECK(c_coeff >= 0.0);
  CHECK(c75.min_eigenvalue >= -1e-10);
  CHECK(c75.min_eigenvalue <= c_coeff + 1e-10);
  CHECK(c75.gap < 1e-6);

  const sdp::DualCertificate boundary = sdp::verify_dual_T(0.5 + 1e-6, 1.0);
  CHECK(boundary.psd);

  const sdp::DualCertificate c93 = sdp::verify_dual_T(0.93, 0.8);
  CHECK(c93.psd);
  CHECK(std::abs(c93.implied_bound - lambda_closed_form(0.93, 0.8)) < 1e-12);
  CHECK(std::abs(c93.implied_bound - 0.8041) < 1e-4);
  CHECK(c93.gap < 1e-6);
}

TEST_CASE("dual certificate for the filtered overlap program") {
  const sdp::DualCertificate half = sdp::verify_dual_W(0.82, 0.5);
  CHECK(half.psd);
  CHECK(std::abs(half.implied_bound - 0.82) < 1e-9);
  CHECK(half.gap < 1e-6);

  const sdp::DualCertificate mid = sdp::verify_dual_W(0.9, 0.55);
  CHECK(mid.psd);
  CHECK(std::abs(mid.implied_bound - sdp::g_closed_form(0.9, 0.55)) < 1e-9);
  CHECK(mid.gap < 1e-6);

  const sdp::DualCertificate edge = sdp::verify_dual_W(0.5, 0.8);
  CHECK(edge.psd);  // the a >= 0 boundary of the witness construction
  CHECK(edge.gap < 1e-6);
}

}  // TEST_SUITE
