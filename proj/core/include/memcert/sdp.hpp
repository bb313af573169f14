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
#include <vector>

#include "memcert/qcore.hpp"

namespace memcert::sdp {

enum class SolveStatus { optimal, max_iter, infeasible };

// A dense Hermitian SDP over one variable sigma (n x n, sigma >= 0):
//   min/max  tr(C sigma)
//   s.t.     tr(A_k sigma)  = b_k
//            tr(G_j sigma) >= h_j
//            tr_out(sigma) <= cap   (optional, over dims/traced_subsystem)
struct SdpProblem {
  int n = 0;
  bool maximize = false;
  ComplexMatrix objective;
  std::vector<std::pair<ComplexMatrix, double>> equalities;
  std::vector<std::pair<ComplexMatrix, double>> inequalities;

  struct PartialTraceCap {
    std::vector<int> dims;      // subsystem dimensions of sigma
    int traced_subsystem = 1;   // index traced out
    ComplexMatrix bound;        // Hermitian cap on the remaining marginal
  };
  std::optional<PartialTraceCap> trace_cap;
};

struct SdpSolution {
  ComplexMatrix sigma;
  double primal_value = 0.0;
  double dual_value = 0.0;
  double max_equality_violation = 0.0;
  double min_eigenvalue = 0.0;       // of sigma
  double cap_slack_min_eigenvalue = 0.0;  // of cap - tr_out(sigma), 0 if no cap
  SolveStatus status = SolveStatus::max_iter;
  int iterations = 0;
};

SdpSolution solve(const SdpProblem& p);

// max lambda s.t. exists sigma >= 0 with tr_B sigma <= diag(lambda, 1-lambda),
// tr sigma = p_i, tr(Phi+ sigma) = f_i p_i. Matches the lambda_i closed form.
// As f_i -> 1 the feasible set collapses to a single boundary point and the
// first-order solver stalls; expect a convergence error there. Use the closed
// form for that edge.
double lambda_max_sdp(double f_i, double p_i);

// min tr(sigma Phi+) s.t. tr(T sigma T Phi+) >= f_o, tr_B sigma = I/2,
// sigma >= 0, with T = diag(sqrt(2 lambda), sqrt(2(1-lambda))) (x) I.
double g_sdp(double f_o, double lambda);

// Closed form of g_sdp (the analytic optimum), used for cross-checks.
double g_closed_form(double f_o, double lambda);

// max / min of tr(T_B sigma T_B) subject to
//   tr(sigma T_A Phi+ T_A) >= (1+t)/2 f_o p_o,
//   tr(T_A sigma T_A) >= (1+t)/2 p_o,
//   tr_B sigma <= I/2, sigma >= 0,
// with T_A = diag(1, sqrt(t)) (x) I and T_B = I (x) diag(1, sqrt(t)).
double b_max_sdp(double f_o, double p_o, double t);
double b_min_sdp(double f_o, double p_o, double t);

struct DualCertificate {
  double min_eigenvalue = 0.0;  // of the certificate operator
  bool psd = false;             // min_eigenvalue >= -1e-10
  double implied_bound = 0.0;   // analytic bound produced by the certificate
  double sdp_value = 0.0;       // matching SDP optimum
  double gap = 0.0;             // |implied_bound - sdp_value|
};

// T = |1><1| (x) I + c I + d Phi+ certifies the lambda_max program.
DualCertificate verify_dual_T(double f_i, double p_i);

// W = Phi+ - a T Phi+ T + b |0><0| (x) I certifies the G program.
DualCertificate verify_dual_W(double f_o, double lambda);

}  // namespace memcert::sdp
