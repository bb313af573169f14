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

#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace memcert {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// Tolerances shared across the library. All validation goes through one
// instance so the thresholds stay consistent repo-wide.
struct Tolerances {
  double hermiticity = 1e-10;
  double positivity = 1e-10;  // min eigenvalue >= -positivity
  double unit_trace = 1e-10;
};

const Tolerances& default_tolerances();

bool is_hermitian(const ComplexMatrix& m, double tol = 1e-10);
double min_eigenvalue(const ComplexMatrix& m);
bool is_positive_semidefinite(const ComplexMatrix& m, double tol = 1e-10);

// Largest absolute entry of a - b; the distance used by most test tolerances.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

// Hermitian square root, clamping eigenvalues in [-tol, 0) to 0.
// Eigenvalues below -tol are an error.
ComplexMatrix matrix_sqrt(const ComplexMatrix& m, double tol = 1e-10);

// A (possibly sub-normalized) quantum state on a tensor product of
// subsystems. Immutable after construction; construction validates
// hermiticity, positivity and trace <= 1.
class DensityOperator {
 public:
  DensityOperator(std::vector<int> dims, ComplexMatrix matrix);

  const std::vector<int>& dims() const { return dims_; }
  const ComplexMatrix& matrix() const { return matrix_; }
  int dim() const { return static_cast<int>(matrix_.rows()); }
  double trace() const { return trace_; }
  bool normalized() const;

  // Rescales to unit trace. Throws if the trace is numerically zero.
  DensityOperator normalize() const;

 private:
  std::vector<int> dims_;
  ComplexMatrix matrix_;
  double trace_;
};

class PureState {
 public:
  PureState(std::vector<int> dims, ComplexVector amplitudes);

  const std::vector<int>& dims() const { return dims_; }
  const ComplexVector& amplitudes() const { return amplitudes_; }
  DensityOperator to_density() const;

 private:
  std::vector<int> dims_;
  ComplexVector amplitudes_;
};

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b);

// Traces out every subsystem not listed in keep (0-based, strictly
// increasing order of the kept subsystems is implied by the set).
DensityOperator partial_trace(const DensityOperator& rho,
                              const std::vector<int>& keep);

// Uhlmann fidelity F(rho, sigma) = (tr |sqrt(rho) sqrt(sigma)|)^2.
// Both states must be normalized. When one argument is (numerically) pure
// the <psi|rho|psi> fast path is taken.
double fidelity(const DensityOperator& rho, const DensityOperator& sigma);

struct SchmidtDecomposition {
  std::vector<double> coefficients;  // descending, sum of squares = 1
  ComplexMatrix left_basis;          // columns are left Schmidt vectors
  ComplexMatrix right_basis;         // columns are right Schmidt vectors
};

SchmidtDecomposition schmidt_decompose(const PureState& psi);

// Convenience constructors used throughout.
ComplexMatrix pauli(int i);              // 0 -> I, 1 -> X, 2 -> Y, 3 -> Z
PureState max_entangled_state();         // |Phi+> on dims [2,2]
DensityOperator max_entangled_density();

}  // namespace memcert
