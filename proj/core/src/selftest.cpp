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

#include "memcert/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "memcert/sdp.hpp"

namespace memcert {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

// Uniform grid scan followed by golden-section refinement of the best
// bracket. Returns the smallest value seen anywhere.
double minimize_scalar(const std::function<double(double)>& f, double lo,
                       double hi, int grid_points = 33, double tol = 1e-6) {
  if (hi - lo <= tol) return f(0.5 * (lo + hi));

  double best_t = lo, best_v = std::numeric_limits<double>::infinity();
  std::vector<double> ts(grid_points);
  for (int i = 0; i < grid_points; ++i) {
    ts[i] = lo + (hi - lo) * i / (grid_points - 1);
    const double v = f(ts[i]);
    if (v < best_v) {
      best_v = v;
      best_t = ts[i];
    }
  }

  double a = std::max(lo, best_t - (hi - lo) / (grid_points - 1));
  double b = std::min(hi, best_t + (hi - lo) / (grid_points - 1));
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - phi * (b - a);
  double x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  best_v = std::min({best_v, f1, f2});
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    }
    best_v = std::min({best_v, f1, f2});
  }
  return best_v;
}

}  // namespace

double chsh_selftest_threshold() { return (16.0 + 14.0 * kSqrt2) / 17.0; }

double singlet_fidelity_bound(double s) {
  if (s < -4.0 || s > 4.0)
    throw std::invalid_argument("singlet_fidelity_bound: S outside [-4, 4]");
  const double s_star = chsh_selftest_threshold();
  const double f = 0.5 * (1.0 + (s - s_star) / (2.0 * kSqrt2 - s_star));
  return std::clamp(f, 0.0, 1.0);
}

double lambda_i(double f_i, double p_i) {
  if (f_i < 0.0 || f_i > 1.0 || p_i < 0.0 || p_i > 1.0)
    throw std::invalid_argument("lambda_i: arguments outside [0, 1]");
  if (f_i < 0.5) return 1.0;
  return 1.0 - (0.5 - std::sqrt(f_i * (1.0 - f_i))) * p_i;
}

double scenario1_bound(double f_i, double f_o) {
  if (f_o < 0.5) return 0.0;
  const double li = lambda_i(f_i, 1.0);
  if (li >= 1.0 / (2.0 * f_o))
    return 0.5 * (f_o + std::sqrt(2.0 * f_o - 1.0));
  const double num =
      std::sqrt(2.0 * f_o) - (std::sqrt(li) - std::sqrt(1.0 - li));
  return (num * num) / (4.0 * (1.0 - li));
}

BoundPair scenario2_bound(double f_o, double p_o) {
  if (f_o < 0.0 || f_o > 1.0 || p_o < 0.0 || p_o > 1.0)
    throw std::invalid_argument("scenario2_bound: arguments outside [0, 1]");
  return {f_o, 0.5 * p_o};
}

BoundPair scenario3_bound(const ScenarioInputs& in) {
  for (double v : {in.f_i, in.f_o, in.p_i, in.p_o})
    if (v < 0.0 || v > 1.0)
      throw std::invalid_argument("scenario3_bound: arguments outside [0, 1]");

  const double li = lambda_i(in.f_i, in.p_i);
  const double t_lo = std::max((1.0 - li) / li, 1e-9);
  const double t_hi = 1.0;

  BoundPair out;
  if (in.p_o <= 0.0) return out;  // nothing heralded, nothing certified

  out.fidelity = minimize_scalar(
      [&](double t) {
        const double bmax = sdp::b_max_sdp(in.f_o, in.p_o, t);
        return 0.5 * (1.0 + t) * in.f_o * in.p_o / bmax;
      },
      t_lo, t_hi);
  out.success = minimize_scalar(
      [&](double t) { return sdp::b_min_sdp(in.f_o, in.p_o, t); }, t_lo, t_hi);
  out.fidelity = std::clamp(out.fidelity, 0.0, 1.0);
  out.success = std::clamp(out.success, 0.0, 1.0);
  return out;
}

namespace {

struct SideStats {
  ChshScore score;
  double f = 0.0;
  std::optional<double> p;  // conclusive probability, when recoverable
  double signaling = 0.0;
};

SideStats process_side(const Correlations& raw, const char* side,
                       Assumption assume_b,
                       std::vector<std::string>& warnings) {
  SideStats st;
  st.signaling = signaling_diagnostic(raw);
  if (st.signaling > 0.01)
    warnings.push_back(std::string("large signaling deviation in ") + side +
                       " data: " + std::to_string(st.signaling));

  if (raw.post_selected && raw.three_outcome)
    warnings.push_back(std::string(side) +
                       " data marked post_selected but contains noclick "
                       "outcomes; treating them as raw");

  if (raw.three_outcome) {
    st.p = conditional_detection(raw);
    const double spread = conditional_detection_spread(raw);
    if (spread > 5e-3)
      warnings.push_back(std::string("conditional detection varies across "
                                     "settings in ") +
                         side + " data (spread " + std::to_string(spread) +
                         "); using the minimum");
    if (assume_b == Assumption::none)
      warnings.push_back(std::string("post-selection applied to ") + side +
                         " data without a fair-sampling assumption; the "
                         "certificate is loophole-prone");
  } else if (raw.post_selected) {
    st.p = std::nullopt;  // conditioned upstream, rates unrecoverable
  } else {
    st.p = 1.0;
  }

  Correlations selected = raw.three_outcome ? post_select(raw) : raw;
  st.score = chsh(selected);
  st.score.post_selected = selected.post_selected || raw.post_selected;
  st.f = singlet_fidelity_bound(st.score.value);
  return st;
}

}  // namespace

CertificationReport certify(const std::optional<CountsTable>& counts_i,
                            const CountsTable& counts_o,
                            const CertifyConfig& config) {
  if (counts_o.phase != Phase::output)
    throw std::invalid_argument("certify: output counts have wrong phase tag");
  if (counts_i && counts_i->phase != Phase::input)
    throw std::invalid_argument("certify: input counts have wrong phase tag");

  std::optional<Correlations> corr_i;
  if (counts_i) corr_i = correlations_from_counts(*counts_i);
  return certify_correlations(corr_i, correlations_from_counts(counts_o),
                              config);
}

CertificationReport certify_correlations(const std::optional<Correlations>& corr_i,
                                         const Correlations& corr_o,
                                         const CertifyConfig& config) {
  const bool needs_input = config.scenario != Scenario::s2;
  if (needs_input && !corr_i)
    throw std::invalid_argument("certify: scenario requires input-phase data");

  CertificationReport rep;
  rep.scenario = config.scenario;
  rep.assume_a = config.assume_a;
  rep.assume_b_in = config.assume_b_in;
  rep.assume_b_out = config.assume_b_out;

  SideStats out_side =
      process_side(corr_o, "output", config.assume_b_out, rep.warnings);
  rep.s_o = out_side.score;
  rep.f_o = out_side.f;
  rep.p_o = out_side.p;
  rep.signaling_o = out_side.signaling;

  std::optional<SideStats> in_side;
  if (corr_i) {
    in_side = process_side(*corr_i, "input", config.assume_b_in, rep.warnings);
    rep.s_i = in_side->score;
    rep.f_i = in_side->f;
    rep.p_i = in_side->p;
    rep.signaling_i = in_side->signaling;
  }

  switch (config.scenario) {
    case Scenario::s1: {
      rep.lambda_i = lambda_i(*rep.f_i, 1.0);
      if ((rep.p_i && *rep.p_i < 1.0) || (rep.p_o && *rep.p_o < 1.0) ||
          corr_o.post_selected || (corr_i && corr_i->post_selected))
        rep.warnings.push_back(
            "scenario 1 assumes a deterministic protocol but the data shows "
            "inconclusive events; the bound is only as good as the "
            "fair-sampling assumption");
      if (rep.f_o < 0.5)
        rep.warnings.push_back(
            "f_o below 1/2: outside the proven domain, reporting the trivial "
            "bound 0");
      rep.fidelity_bound = scenario1_bound(*rep.f_i, rep.f_o);
      rep.success_bound = 1.0;
      break;
    }
    case Scenario::s2: {
      BoundPair b = scenario2_bound(rep.f_o, rep.p_o.value_or(0.0));
      rep.fidelity_bound = b.fidelity;
      if (rep.p_o) {
        rep.success_bound = b.success;
      } else {
        rep.success_bound = std::nullopt;
        rep.warnings.push_back("conditional detection unavailable");
      }
      break;
    }
    case Scenario::s3: {
      if (!rep.p_i || !rep.p_o)
        throw std::invalid_argument(
            "certify: scenario 3 needs recoverable detection rates, but the "
            "data was post-selected upstream");
      rep.lambda_i = lambda_i(*rep.f_i, *rep.p_i);
      ScenarioInputs in;
      in.f_i = *rep.f_i;
      in.f_o = rep.f_o;
      in.p_i = *rep.p_i;
      in.p_o = *rep.p_o;
      in.scenario = Scenario::s3;
      BoundPair b = scenario3_bound(in);
      rep.fidelity_bound = b.fidelity;
      rep.success_bound = b.success;
      break;
    }
  }
  return rep;
}

}  // namespace memcert
