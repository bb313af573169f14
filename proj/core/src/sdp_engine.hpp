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

#include <vector>

#include "memcert/sdp.hpp"

namespace memcert::sdp::detail {

// Operator-splitting (ADMM) engine for small block-diagonal SDPs:
//   minimize   sum_i tr(C_i X_i)
//   subject to sum_i tr(A_{k,i} X_i) = b_k,   X_i >= 0.
// Complex Hermitian blocks are embedded as real symmetric matrices of twice
// the size, [[Re, -Im], [Im, Re]]; real blocks are used as-is. The embedding
// round-trips bit-exactly.
class EngineProblem {
 public:
  int add_hermitian_block(int n);
  int add_real_block(int n);

  // Objective contribution tr(C X_block); for real blocks the real part of c
  // is used. Defaults to zero.
  void set_objective(int block, const ComplexMatrix& c);

  struct Term {
    int block;
    ComplexMatrix a;
  };
  void add_constraint(const std::vector<Term>& terms, double rhs);

  int block_count() const { return static_cast<int>(blocks_.size()); }

  // Solver-facing data; this header is internal to the library.
  struct Block {
    int n;             // logical size
    bool hermitian;    // embedded if true
    int embedded;      // n or 2n
    int offset;        // position in the stacked vector
  };
  std::vector<Block> blocks_;
  std::vector<Eigen::VectorXd> objective_;       // embedded per block
  std::vector<std::vector<std::pair<int, Eigen::VectorXd>>> constraints_;
  std::vector<double> rhs_;
  int total_size_ = 0;

  Eigen::VectorXd embed(int block, const ComplexMatrix& m) const;
};

struct EngineSettings {
  int max_iterations = 50000;
  double eps = 1e-9;
  double over_relaxation = 1.6;
  double rho = 1.0;
  double infeasible_level = 1e-4;
  int stall_window = 5000;
};

struct EngineResult {
  std::vector<ComplexMatrix> x;  // one per block; real blocks have zero imag
  double primal = 0.0;
  double dual = 0.0;
  double max_equality_violation = 0.0;
  double min_block_eigenvalue = 0.0;
  double gap = 0.0;
  SolveStatus status = SolveStatus::max_iter;
  int iterations = 0;
};

EngineResult solve_engine(const EngineProblem& p, const EngineSettings& s = {});

// Exposed for the bit-exact embedding round-trip test.
Eigen::MatrixXd embed_hermitian(const ComplexMatrix& m);
ComplexMatrix unembed_hermitian(const Eigen::MatrixXd& e);

}  // namespace memcert::sdp::detail
