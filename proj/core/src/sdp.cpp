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

#include "memcert/sdp.hpp"

#include <cmath>

#include "sdp_engine.hpp"

namespace memcert::sdp {

namespace {

ComplexMatrix phi_plus() {
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  m(0, 0) = m(0, 3) = m(3, 0) = m(3, 3) = 0.5;
  return m;
}

ComplexMatrix basis_op(int n, int j, int k) {
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  m(j, k) = 1.0;
  return m;
}

ComplexMatrix kron(const ComplexMatrix& x, const ComplexMatrix& y) {
  ComplexMatrix m(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      m.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
  return m;
}

// Hermitian matrices H with tr(H sigma) equal to the real/imaginary part of
// the (j,k) entry of the marginal left after tracing out `traced`.
struct MarginalEntry {
  ComplexMatrix h;  // acts on the full space of sigma
  int j, k;
  bool imag_part;
};

std::vector<MarginalEntry> marginal_entries(const std::vector<int>& dims,
                                            int traced) {
  if (dims.size() != 2 || (traced != 0 && traced != 1))
    throw std::invalid_argument("marginal_entries: bipartite only");
  const int kept = 1 - traced;
  const int dk = dims[kept];
  const int dt = dims[traced];
  const ComplexMatrix id = ComplexMatrix::Identity(dt, dt);
  auto lifted = [&](const ComplexMatrix& on_kept) {
    return kept == 0 ? kron(on_kept, id) : kron(id, on_kept);
  };
  std::vector<MarginalEntry> out;
  const Complex i_unit(0.0, 1.0);
  for (int j = 0; j < dk; ++j) {
    out.push_back({lifted(basis_op(dk, j, j)), j, j, false});
    for (int k = j + 1; k < dk; ++k) {
      // tr(sigma (|k><j| (x) I)) = marginal_{jk}
      ComplexMatrix re = 0.5 * (basis_op(dk, j, k) + basis_op(dk, k, j));
      ComplexMatrix im = 0.5 * (i_unit * basis_op(dk, j, k) - i_unit * basis_op(dk, k, j));
      out.push_back({lifted(re), j, k, false});
      out.push_back({lifted(im), j, k, true});
    }
  }
  return out;
}

ComplexMatrix filter_t(double lambda) {
  ComplexMatrix t = ComplexMatrix::Zero(4, 4);
  const double ta = std::sqrt(2.0 * lambda);
  const double tb = std::sqrt(2.0 * (1.0 - lambda));
  t.diagonal() << ta, ta, tb, tb;
  return t;
}

SdpSolution solve_pair(const SdpProblem& p, double sign) {
  using detail::EngineProblem;
  EngineProblem e;
  const int sigma = e.add_hermitian_block(p.n);
  e.set_objective(sigma, sign * p.objective);

  for (const auto& [mat, rhs] : p.equalities)
    e.add_constraint({{sigma, mat}}, rhs);

  for (const auto& [mat, rhs] : p.inequalities) {
    const int slack = e.add_real_block(1);
    ComplexMatrix minus_one = -ComplexMatrix::Identity(1, 1);
    e.add_constraint({{sigma, mat}, {slack, minus_one}}, rhs);
  }

  int cap_block = -1;
  std::vector<MarginalEntry> entries;
  if (p.trace_cap) {
    const auto& cap = *p.trace_cap;
    const int dk = static_cast<int>(cap.bound.rows());
    cap_block = e.add_hermitian_block(dk);
    entries = marginal_entries(cap.dims, cap.traced_subsystem);
    for (const auto& en : entries) {
      ComplexMatrix slack_h;
      const Complex i_unit(0.0, 1.0);
      if (en.j == en.k) {
        slack_h = basis_op(dk, en.j, en.j);
      } else if (!en.imag_part) {
        slack_h = 0.5 * (basis_op(dk, en.j, en.k) + basis_op(dk, en.k, en.j));
      } else {
        slack_h = 0.5 * (i_unit * basis_op(dk, en.j, en.k) -
                         i_unit * basis_op(dk, en.k, en.j));
      }
      const Complex entry = cap.bound(en.j, en.k);
      const double rhs = en.imag_part ? entry.imag() : entry.real();
      e.add_constraint({{sigma, en.h}, {cap_block, slack_h}}, rhs);
    }
  }

  detail::EngineResult r = detail::solve_engine(e);

  SdpSolution sol;
  sol.sigma = r.x[sigma];
  sol.primal_value = sign * r.primal;
  sol.dual_value = sign * r.dual;
  sol.max_equality_violation = r.max_equality_violation;
  sol.min_eigenvalue = min_eigenvalue(sol.sigma);
  if (cap_block >= 0) {
    sol.cap_slack_min_eigenvalue = min_eigenvalue(r.x[cap_block]);
  }
  sol.status = r.status;
  sol.iterations = r.iterations;
  return sol;
}

void check_solved(const SdpSolution& sol, const char* what) {
  if (sol.status == SolveStatus::infeasible)
    throw std::runtime_error(std::string(what) + ": SDP infeasible (residual " +
                             std::to_string(sol.max_equality_violation) + ")");
  if (sol.status == SolveStatus::max_iter)
    throw std::runtime_error(std::string(what) +
                             ": SDP did not converge (residual " +
                             std::to_string(sol.max_equality_violation) + ")");
}

}  // namespace

SdpSolution solve(const SdpProblem& p) {
  if (p.n <= 0 || p.n > 16) throw std::invalid_argument("solve: bad dimension");
  if (p.objective.rows() != p.n || p.objective.cols() != p.n)
    throw std::invalid_argument("solve: objective shape mismatch");
  const double tol = 1e-12;
  if (!is_hermitian(p.objective, tol))
    throw std::invalid_argument("solve: objective not Hermitian");
  for (const auto& [mat, rhs] : p.equalities)
    if (!is_hermitian(mat, tol))
      throw std::invalid_argument("solve: equality matrix not Hermitian");
  for (const auto& [mat, rhs] : p.inequalities)
    if (!is_hermitian(mat, tol))
      throw std::invalid_argument("solve: inequality matrix not Hermitian");
  if (p.trace_cap && !is_hermitian(p.trace_cap->bound, tol))
    throw std::invalid_argument("solve: cap bound not Hermitian");
  return solve_pair(p, p.maximize ? -1.0 : 1.0);
}

double lambda_max_sdp(double f_i, double p_i) {
  if (f_i < 0.5 || f_i > 1.0)
    throw std::invalid_argument("lambda_max_sdp: f_i outside [1/2, 1]");
  if (p_i < 0.0 || p_i > 1.0)
    throw std::invalid_argument("lambda_max_sdp: p_i outside [0, 1]");

  using detail::EngineProblem;
  EngineProblem e;
  const int sigma = e.add_hermitian_block(4);
  const int slack = e.add_hermitian_block(2);
  const int lam = e.add_real_block(1);

  // maximize lambda
  e.set_objective(lam, -ComplexMatrix::Identity(1, 1));

  // tr_B sigma + slack = diag(lambda, 1 - lambda)
  const ComplexMatrix one = ComplexMatrix::Identity(1, 1);
  for (const auto& en : marginal_entries({2, 2}, 1)) {
    ComplexMatrix slack_h;
    const Complex i_unit(0.0, 1.0);
    if (en.j == en.k) {
      slack_h = basis_op(2, en.j, en.j);
    } else if (!en.imag_part) {
      slack_h = 0.5 * (basis_op(2, en.j, en.k) + basis_op(2, en.k, en.j));
    } else {
      slack_h = 0.5 * (i_unit * basis_op(2, en.j, en.k) -
                       i_unit * basis_op(2, en.k, en.j));
    }
    if (en.j == 0 && en.k == 0) {
      e.add_constraint({{sigma, en.h}, {slack, slack_h}, {lam, -one}}, 0.0);
    } else if (en.j == 1 && en.k == 1) {
      e.add_constraint({{sigma, en.h}, {slack, slack_h}, {lam, one}}, 1.0);
    } else {
      e.add_constraint({{sigma, en.h}, {slack, slack_h}}, 0.0);
    }
  }

  e.add_constraint({{sigma, ComplexMatrix::Identity(4, 4)}}, p_i);
  e.add_constraint({{sigma, phi_plus()}}, f_i * p_i);

  detail::EngineResult r = detail::solve_engine(e);
  SdpSolution sol;
  sol.status = r.status;
  sol.max_equality_violation = r.max_equality_violation;
  check_solved(sol, "lambda_max_sdp");
  return -r.primal;
}

double g_closed_form(double f_o, double lambda) {
  const double num = std::sqrt(2.0 * f_o) - (std::sqrt(lambda) - std::sqrt(1.0 - lambda));
  return (num * num) / (4.0 * (1.0 - lambda));
}

double g_sdp(double f_o, double lambda) {
  if (f_o < 0.5 || f_o > 1.0) throw std::invalid_argument("g_sdp: f_o outside [1/2, 1]");
  if (lambda < 0.5 - 1e-12 || lambda > 1.0 / (2.0 * f_o) + 1e-12)
    throw std::invalid_argument("g_sdp: lambda outside [1/2, 1/(2 f_o)]");

  SdpProblem p;
  p.n = 4;
  p.objective = phi_plus();
  for (const auto& en : marginal_entries({2, 2}, 1)) {
    double rhs = 0.0;
    if (en.j == en.k && !en.imag_part) rhs = 0.5;
    p.equalities.emplace_back(en.h, rhs);
  }
  const ComplexMatrix t = filter_t(lambda);
  p.inequalities.emplace_back(t * phi_plus() * t, f_o);

  SdpSolution sol = solve(p);
  check_solved(sol, "g_sdp");
  return sol.primal_value;
}

namespace {

SdpProblem b_problem(double f_o, double p_o, double t, bool maximize) {
  if (t <= 0.0 || t > 1.0) throw std::invalid_argument("b_sdp: t outside (0, 1]");
  if (f_o < 0.0 || f_o > 1.0 || p_o < 0.0 || p_o > 1.0)
    throw std::invalid_argument("b_sdp: f_o or p_o outside [0, 1]");

  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = t;
  ComplexMatrix ta2 = kron(d, ComplexMatrix::Identity(2, 2));  // T_A^2
  ComplexMatrix tb2 = kron(ComplexMatrix::Identity(2, 2), d);  // T_B^2

  ComplexMatrix ta = ComplexMatrix::Zero(4, 4);
  ta.diagonal() << 1.0, 1.0, std::sqrt(t), std::sqrt(t);

  SdpProblem p;
  p.n = 4;
  p.maximize = maximize;
  p.objective = tb2;
  p.inequalities.emplace_back(ta * phi_plus() * ta, 0.5 * (1.0 + t) * f_o * p_o);
  p.inequalities.emplace_back(ta2, 0.5 * (1.0 + t) * p_o);
  p.trace_cap = SdpProblem::PartialTraceCap{
      {2, 2}, 1, 0.5 * ComplexMatrix::Identity(2, 2)};
  return p;
}

}  // namespace

double b_max_sdp(double f_o, double p_o, double t) {
  SdpSolution sol = solve(b_problem(f_o, p_o, t, true));
  check_solved(sol, "b_max_sdp");
  return sol.primal_value;
}

double b_min_sdp(double f_o, double p_o, double t) {
  SdpSolution sol = solve(b_problem(f_o, p_o, t, false));
  check_solved(sol, "b_min_sdp");
  return sol.primal_value;
}

DualCertificate verify_dual_T(double f_i, double p_i) {
  if (f_i < 0.5 || f_i >= 1.0)
    throw std::invalid_argument("verify_dual_T: f_i outside [1/2, 1)");
  const double s = std::sqrt(f_i * (1.0 - f_i));
  const double c = (f_i - 1.0 + s) / (2.0 * (1.0 - f_i));
  const double d = (1.0 - 2.0 * f_i) / (2.0 * s);

  ComplexMatrix a_op = ComplexMatrix::Zero(4, 4);
  a_op(2, 2) = a_op(3, 3) = 1.0;  // |1><1| (x) I
  ComplexMatrix t = a_op + c * ComplexMatrix::Identity(4, 4) + d * phi_plus();

  DualCertificate cert;
  cert.min_eigenvalue = min_eigenvalue(t);
  cert.psd = cert.min_eigenvalue >= -1e-10;
  cert.implied_bound = 1.0 + c * p_i + d * f_i * p_i;
  cert.sdp_value = lambda_max_sdp(f_i, p_i);
  cert.gap = std::abs(cert.implied_bound - cert.sdp_value);
  return cert;
}

DualCertificate verify_dual_W(double f_o, double lambda) {
  if (f_o < 0.5 || f_o > 1.0)
    throw std::invalid_argument("verify_dual_W: f_o outside [1/2, 1]");
  if (lambda < 0.5 - 1e-12 || lambda >= 1.0)
    throw std::invalid_argument("verify_dual_W: lambda outside [1/2, 1)");

  const double root = std::sqrt(2.0 * f_o);
  const double r = std::sqrt(lambda) - std::sqrt(1.0 - lambda);
  const double a = (root - r) / (2.0 * root * (1.0 - lambda));
  const double b = (root - r) * r / (2.0 * (1.0 - lambda));

  const ComplexMatrix t = filter_t(lambda);
  ComplexMatrix zero_proj = ComplexMatrix::Zero(4, 4);
  zero_proj(0, 0) = zero_proj(1, 1) = 1.0;  // |0><0| (x) I
  ComplexMatrix w = phi_plus() - a * (t * phi_plus() * t) + b * zero_proj;

  DualCertificate cert;
  cert.min_eigenvalue = min_eigenvalue(w);
  cert.psd = cert.min_eigenvalue >= -1e-10;
  cert.implied_bound = a * f_o - 0.5 * b;
  cert.sdp_value = g_sdp(f_o, lambda);
  cert.gap = std::abs(cert.implied_bound - cert.sdp_value);
  return cert;
}

}  // namespace memcert::sdp
