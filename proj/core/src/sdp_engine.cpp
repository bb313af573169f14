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

#include "sdp_engine.hpp"

#include <algorithm>
#include <cmath>

namespace memcert::sdp::detail {

Eigen::MatrixXd embed_hermitian(const ComplexMatrix& m) {
  const auto n = m.rows();
  Eigen::MatrixXd e(2 * n, 2 * n);
  e.topLeftCorner(n, n) = m.real();
  e.bottomRightCorner(n, n) = m.real();
  e.topRightCorner(n, n) = -m.imag();
  e.bottomLeftCorner(n, n) = m.imag();
  return e;
}

ComplexMatrix unembed_hermitian(const Eigen::MatrixXd& e) {
  const auto n = e.rows() / 2;
  Eigen::MatrixXd re =
      0.5 * (e.topLeftCorner(n, n) + e.bottomRightCorner(n, n));
  Eigen::MatrixXd im =
      0.5 * (e.bottomLeftCorner(n, n) - e.topRightCorner(n, n));
  ComplexMatrix m(n, n);
  m.real() = re;
  m.imag() = im;
  return m;
}

int EngineProblem::add_hermitian_block(int n) {
  Block b{n, true, 2 * n, total_size_};
  total_size_ += b.embedded * b.embedded;
  blocks_.push_back(b);
  objective_.emplace_back(Eigen::VectorXd::Zero(b.embedded * b.embedded));
  return static_cast<int>(blocks_.size()) - 1;
}

int EngineProblem::add_real_block(int n) {
  Block b{n, false, n, total_size_};
  total_size_ += n * n;
  blocks_.push_back(b);
  objective_.emplace_back(Eigen::VectorXd::Zero(n * n));
  return static_cast<int>(blocks_.size()) - 1;
}

Eigen::VectorXd EngineProblem::embed(int block, const ComplexMatrix& m) const {
  const Block& b = blocks_.at(block);
  if (m.rows() != b.n || m.cols() != b.n)
    throw std::invalid_argument("EngineProblem: matrix does not match block size");
  Eigen::MatrixXd e;
  if (b.hermitian) {
    // Half weight so that <embed(A), embed(X)> = tr(A sigma) exactly.
    e = 0.5 * embed_hermitian(m);
  } else {
    e = m.real();
  }
  return Eigen::Map<Eigen::VectorXd>(e.data(), e.size());
}

void EngineProblem::set_objective(int block, const ComplexMatrix& c) {
  objective_.at(block) = embed(block, c);
}

void EngineProblem::add_constraint(const std::vector<Term>& terms, double rhs) {
  std::vector<std::pair<int, Eigen::VectorXd>> row;
  row.reserve(terms.size());
  for (const Term& t : terms) row.emplace_back(t.block, embed(t.block, t.a));
  constraints_.push_back(std::move(row));
  rhs_.push_back(rhs);
}

namespace {

void psd_project(Eigen::MatrixXd& m) {
  Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
  m = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

EngineResult solve_engine(const EngineProblem& p, const EngineSettings& s) {
  const int nblocks = static_cast<int>(p.blocks_.size());
  const int total = p.total_size_;
  const int ncons = static_cast<int>(p.constraints_.size());

  Eigen::VectorXd c = Eigen::VectorXd::Zero(total);
  for (int i = 0; i < nblocks; ++i)
    c.segment(p.blocks_[i].offset, p.objective_[i].size()) = p.objective_[i];

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(ncons, total);
  Eigen::VectorXd b(ncons);
  for (int k = 0; k < ncons; ++k) {
    for (const auto& [blk, vec] : p.constraints_[k])
      a.row(k).segment(p.blocks_[blk].offset, vec.size()) += vec;
    b(k) = p.rhs_[k];
  }

  Eigen::MatrixXd gram = a * a.transpose();
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> gram_solver(gram);

  Eigen::VectorXd x = Eigen::VectorXd::Zero(total);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(total);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(total);
  Eigen::VectorXd nu = Eigen::VectorXd::Zero(ncons);

  double rho = s.rho;
  const double alpha = s.over_relaxation;

  auto project_blocks = [&](Eigen::VectorXd& v) {
    for (int i = 0; i < nblocks; ++i) {
      const auto& blk = p.blocks_[i];
      Eigen::Map<Eigen::MatrixXd> m(v.data() + blk.offset, blk.embedded,
                                    blk.embedded);
      Eigen::MatrixXd mat = m;
      psd_project(mat);
      m = mat;
    }
  };

  EngineResult out;
  double best_resid = std::numeric_limits<double>::infinity();
  int last_improvement = 0;
  double z_change = std::numeric_limits<double>::infinity();

  int iter = 0;
  for (; iter < s.max_iterations; ++iter) {
    // affine step: project z - u - c/rho onto {A x = b}
    Eigen::VectorXd v = z - u - c / rho;
    nu = gram_solver.solve(a * v - b);
    x = v - a.transpose() * nu;

    // PSD step with over-relaxation
    Eigen::VectorXd w = alpha * x + (1.0 - alpha) * z + u;
    Eigen::VectorXd z_prev = std::move(z);
    z = w;
    project_blocks(z);
    u = w - z;

    const double r_split = (x - z).cwiseAbs().maxCoeff();
    const double r_eq = ncons ? (a * z - b).cwiseAbs().maxCoeff() : 0.0;
    z_change = (z - z_prev).cwiseAbs().maxCoeff();

    const double pv = c.dot(z);
    const double dv = -rho * nu.dot(b);
    const double gap = std::abs(pv - dv) / std::max({1.0, std::abs(pv), std::abs(dv)});

    if (r_split <= s.eps && r_eq <= s.eps && gap <= s.eps) {
      out.status = SolveStatus::optimal;
      ++iter;
      break;
    }

    const double combined = std::max(r_split, r_eq);
    if (combined < 0.999 * best_resid) {
      best_resid = combined;
      last_improvement = iter;
    }
    if (iter - last_improvement >= s.stall_window &&
        best_resid > s.infeasible_level) {
      out.status = SolveStatus::infeasible;
      ++iter;
      break;
    }

    // residual balancing
    if ((iter + 1) % 100 == 0) {
      const double r_dual = rho * z_change;
      if (r_split > 10.0 * r_dual && rho < 1e6) {
        rho *= 2.0;
        u *= 0.5;
      } else if (r_dual > 10.0 * r_split && rho > 1e-4) {
        rho *= 0.5;
        u *= 2.0;
      }
    }
  }

  out.iterations = iter;
  out.primal = c.dot(z);
  out.dual = -rho * nu.dot(b);
  out.gap = std::abs(out.primal - out.dual);
  out.max_equality_violation =
      ncons ? (a * z - b).cwiseAbs().maxCoeff() : 0.0;

  out.min_block_eigenvalue = 0.0;
  out.x.reserve(nblocks);
  for (int i = 0; i < nblocks; ++i) {
    const auto& blk = p.blocks_[i];
    Eigen::Map<const Eigen::MatrixXd> m(z.data() + blk.offset, blk.embedded,
                                        blk.embedded);
    ComplexMatrix xc;
    if (blk.hermitian) {
      xc = unembed_hermitian(m);
      xc = 0.5 * (xc + xc.adjoint()).eval();
    } else {
      Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
      xc = sym.cast<Complex>();
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(xc, Eigen::EigenvaluesOnly);
    out.min_block_eigenvalue =
        std::min(out.min_block_eigenvalue, es.eigenvalues().minCoeff());
    out.x.push_back(std::move(xc));
  }
  return out;
}

}  // namespace memcert::sdp::detail
