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

#include "memcert/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace memcert {

namespace {

int product(const std::vector<int>& dims) {
  int p = 1;
  for (int d : dims) {
    if (d <= 0) throw std::invalid_argument("subsystem dimension must be positive");
    p *= d;
  }
  return p;
}

}  // namespace

const Tolerances& default_tolerances() {
  static const Tolerances tol{};
  return tol;
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

double min_eigenvalue(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool is_positive_semidefinite(const ComplexMatrix& m, double tol) {
  return is_hermitian(m, tol) && min_eigenvalue(m) >= -tol;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("max_abs_diff: shape mismatch");
  return (a - b).cwiseAbs().maxCoeff();
}

ComplexMatrix matrix_sqrt(const ComplexMatrix& m, double tol) {
  if (!is_hermitian(m, tol)) throw std::invalid_argument("matrix_sqrt: not Hermitian");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m);
  Eigen::VectorXd ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < -tol) throw std::invalid_argument("matrix_sqrt: negative eigenvalue");
    ev(i) = std::sqrt(std::max(ev(i), 0.0));
  }
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

DensityOperator::DensityOperator(std::vector<int> dims, ComplexMatrix matrix)
    : dims_(std::move(dims)), matrix_(std::move(matrix)) {
  const int d = product(dims_);
  if (matrix_.rows() != d || matrix_.cols() != d)
    throw std::invalid_argument("DensityOperator: matrix does not match dims");
  const Tolerances& tol = default_tolerances();
  if (!is_hermitian(matrix_, tol.hermiticity))
    throw std::invalid_argument("DensityOperator: not Hermitian");
  if (min_eigenvalue(matrix_) < -tol.positivity)
    throw std::invalid_argument("DensityOperator: negative eigenvalue");
  trace_ = matrix_.trace().real();
  if (trace_ > 1.0 + tol.unit_trace)
    throw std::invalid_argument("DensityOperator: trace exceeds 1");
}

bool DensityOperator::normalized() const {
  return std::abs(trace_ - 1.0) <= default_tolerances().unit_trace;
}

DensityOperator DensityOperator::normalize() const {
  if (trace_ <= 1e-14)
    throw std::invalid_argument("DensityOperator::normalize: zero trace");
  return DensityOperator(dims_, matrix_ / trace_);
}

PureState::PureState(std::vector<int> dims, ComplexVector amplitudes)
    : dims_(std::move(dims)), amplitudes_(std::move(amplitudes)) {
  const int d = product(dims_);
  if (amplitudes_.size() != d)
    throw std::invalid_argument("PureState: amplitude count does not match dims");
  if (std::abs(amplitudes_.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("PureState: not normalized");
}

DensityOperator PureState::to_density() const {
  return DensityOperator(dims_, amplitudes_ * amplitudes_.adjoint());
}

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
  std::vector<int> dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  ComplexMatrix m(a.dim() * b.dim(), a.dim() * b.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j)
      m.block(i * b.dim(), j * b.dim(), b.dim(), b.dim()) =
          a.matrix()(i, j) * b.matrix();
  return DensityOperator(std::move(dims), std::move(m));
}

DensityOperator partial_trace(const DensityOperator& rho,
                              const std::vector<int>& keep) {
  const std::vector<int>& dims = rho.dims();
  const int n = static_cast<int>(dims.size());
  std::vector<bool> kept(n, false);
  for (int k : keep) {
    if (k < 0 || k >= n) throw std::invalid_argument("partial_trace: bad subsystem index");
    if (kept[k]) throw std::invalid_argument("partial_trace: repeated subsystem index");
    kept[k] = true;
  }

  std::vector<int> kept_dims, traced_dims;
  for (int s = 0; s < n; ++s) (kept[s] ? kept_dims : traced_dims).push_back(dims[s]);
  const int dk = product(kept_dims);
  const int dt = product(traced_dims);

  // strides of each subsystem in the row-major composite index
  std::vector<int> stride(n, 1);
  for (int s = n - 2; s >= 0; --s) stride[s] = stride[s + 1] * dims[s + 1];

  // map (kept multi-index, traced multi-index) -> composite index
  auto composite = [&](int ik, int it) {
    int idx = 0;
    int rk = ik, rt = it;
    // decode from the last subsystem backwards
    for (int s = n - 1; s >= 0; --s) {
      int d = dims[s];
      int digit;
      if (kept[s]) {
        digit = rk % d;
        rk /= d;
      } else {
        digit = rt % d;
        rt /= d;
      }
      idx += digit * stride[s];
    }
    return idx;
  };

  ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
  for (int i = 0; i < dk; ++i)
    for (int j = 0; j < dk; ++j) {
      Complex sum = 0.0;
      for (int t = 0; t < dt; ++t) sum += rho.matrix()(composite(i, t), composite(j, t));
      out(i, j) = sum;
    }
  if (kept_dims.empty()) kept_dims.push_back(1);
  return DensityOperator(std::move(kept_dims), std::move(out));
}

double fidelity(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.dims() != sigma.dims())
    throw std::invalid_argument("fidelity: dimension mismatch");
  if (!rho.normalized() || !sigma.normalized())
    throw std::invalid_argument("fidelity: states must be normalized");

  auto purity = [](const DensityOperator& s) {
    return (s.matrix() * s.matrix()).trace().real();
  };
  auto overlap = [](const DensityOperator& pure, const DensityOperator& mixed) {
    return std::clamp((pure.matrix() * mixed.matrix()).trace().real(), 0.0, 1.0);
  };
  if (purity(sigma) >= 1.0 - 1e-11) return overlap(sigma, rho);
  if (purity(rho) >= 1.0 - 1e-11) return overlap(rho, sigma);

  ComplexMatrix sr = matrix_sqrt(rho.matrix());
  ComplexMatrix inner = sr * sigma.matrix() * sr;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(inner, Eigen::EigenvaluesOnly);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    sum += std::sqrt(std::max(es.eigenvalues()(i), 0.0));
  return std::clamp(sum * sum, 0.0, 1.0);
}

SchmidtDecomposition schmidt_decompose(const PureState& psi) {
  if (psi.dims().size() != 2)
    throw std::invalid_argument("schmidt_decompose: state is not bipartite");
  const int da = psi.dims()[0];
  const int db = psi.dims()[1];
  // amplitudes as a da x db matrix: psi(i,j) = <ij|psi>
  ComplexMatrix m(da, db);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < db; ++j) m(i, j) = psi.amplitudes()(i * db + j);
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  SchmidtDecomposition out;
  const int r = static_cast<int>(std::min(da, db));
  out.coefficients.assign(svd.singularValues().data(),
                          svd.singularValues().data() + r);
  out.left_basis = svd.matrixU();
  out.right_basis = svd.matrixV().conjugate();
  return out;
}

ComplexMatrix pauli(int i) {
  ComplexMatrix m(2, 2);
  switch (i) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, Complex(0, -1), Complex(0, 1), 0; break;
    case 3: m << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("pauli: index out of range");
  }
  return m;
}

PureState max_entangled_state() {
  ComplexVector amp(4);
  amp << 1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0);
  return PureState({2, 2}, amp);
}

DensityOperator max_entangled_density() { return max_entangled_state().to_density(); }

}  // namespace memcert
