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

#include "memcert/channels.hpp"

#include <cmath>

namespace memcert {

namespace {

// Lifts K acting on `subsystem` to the full space of rho.
ComplexMatrix lift(const ComplexMatrix& k, const std::vector<int>& dims,
                   int subsystem) {
  ComplexMatrix full = ComplexMatrix::Identity(1, 1);
  for (int s = 0; s < static_cast<int>(dims.size()); ++s) {
    const ComplexMatrix& factor =
        (s == subsystem) ? k
                         : static_cast<ComplexMatrix>(
                               ComplexMatrix::Identity(dims[s], dims[s]));
    ComplexMatrix next(full.rows() * factor.rows(), full.cols() * factor.cols());
    for (Eigen::Index i = 0; i < full.rows(); ++i)
      for (Eigen::Index j = 0; j < full.cols(); ++j)
        next.block(i * factor.rows(), j * factor.cols(), factor.rows(),
                   factor.cols()) = full(i, j) * factor;
    full = std::move(next);
  }
  return full;
}

ComplexMatrix apply_to_matrix(const KrausChannel& k, const ComplexMatrix& m) {
  ComplexMatrix out = ComplexMatrix::Zero(k.out_dim, k.out_dim);
  for (const ComplexMatrix& op : k.kraus_ops) out += op * m * op.adjoint();
  return out;
}

}  // namespace

ComplexMatrix KrausChannel::kraus_sum() const {
  ComplexMatrix s = ComplexMatrix::Zero(in_dim, in_dim);
  for (const ComplexMatrix& op : kraus_ops) s += op.adjoint() * op;
  return s;
}

bool KrausChannel::trace_preserving(double tol) const {
  return max_abs_diff(kraus_sum(), ComplexMatrix::Identity(in_dim, in_dim)) <= tol;
}

void KrausChannel::validate(double tol) const {
  if (in_dim <= 0 || out_dim <= 0)
    throw std::invalid_argument("KrausChannel: non-positive dimension");
  if (kraus_ops.empty()) throw std::invalid_argument("KrausChannel: no Kraus operators");
  for (const ComplexMatrix& op : kraus_ops)
    if (op.rows() != out_dim || op.cols() != in_dim)
      throw std::invalid_argument("KrausChannel: operator shape mismatch");
  ComplexMatrix s = kraus_sum();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(s, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().maxCoeff() > 1.0 + tol)
    throw std::invalid_argument("KrausChannel: trace increasing (sum K^dag K > I)");
}

KrausChannel KrausChannel::identity(int dim) {
  return {dim, dim, {ComplexMatrix::Identity(dim, dim)}};
}

ChoiState choi_of(const KrausChannel& k) {
  const int d = k.in_dim;
  ComplexVector amp = ComplexVector::Zero(d * d);
  for (int i = 0; i < d; ++i) amp(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
  DensityOperator phi({d, d}, amp * amp.adjoint());
  return {k.in_dim, k.out_dim, apply(k, phi, 1)};
}

KrausChannel kraus_of(const ChoiState& c) {
  // Choi-Jamiolkowski matrix J = in_dim * sigma; J_{(i,m),(j,n)} = E(|i><j|)_{mn}
  ComplexMatrix j = static_cast<double>(c.in_dim) * c.matrix.matrix();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(j);
  KrausChannel k{c.in_dim, c.out_dim, {}};
  for (Eigen::Index e = es.eigenvalues().size() - 1; e >= 0; --e) {
    const double mu = es.eigenvalues()(e);
    if (mu <= 1e-10) continue;
    ComplexMatrix op(c.out_dim, c.in_dim);
    for (int i = 0; i < c.in_dim; ++i)
      for (int m = 0; m < c.out_dim; ++m)
        op(m, i) = std::sqrt(mu) * es.eigenvectors()(i * c.out_dim + m, e);
    k.kraus_ops.push_back(std::move(op));
  }
  if (k.kraus_ops.empty())
    k.kraus_ops.push_back(ComplexMatrix::Zero(c.out_dim, c.in_dim));
  return k;
}

DensityOperator apply(const KrausChannel& k, const DensityOperator& rho,
                      int subsystem) {
  const std::vector<int>& dims = rho.dims();
  if (subsystem < 0 || subsystem >= static_cast<int>(dims.size()))
    throw std::invalid_argument("apply: bad subsystem index");
  if (dims[subsystem] != k.in_dim)
    throw std::invalid_argument("apply: subsystem dimension mismatch");

  std::vector<int> out_dims = dims;
  out_dims[subsystem] = k.out_dim;
  int total = 1;
  for (int d : out_dims) total *= d;

  ComplexMatrix out = ComplexMatrix::Zero(total, total);
  for (const ComplexMatrix& op : k.kraus_ops) {
    ComplexMatrix full = lift(op, dims, subsystem);
    out += full * rho.matrix() * full.adjoint();
  }
  return DensityOperator(std::move(out_dims), std::move(out));
}

KrausChannel compose(const KrausChannel& outer, const KrausChannel& inner) {
  if (inner.out_dim != outer.in_dim)
    throw std::invalid_argument("compose: dimension mismatch");
  KrausChannel k{inner.in_dim, outer.out_dim, {}};
  for (const ComplexMatrix& a : outer.kraus_ops)
    for (const ComplexMatrix& b : inner.kraus_ops) k.kraus_ops.push_back(a * b);
  return k;
}

AffineQubitChannel affine_of(const KrausChannel& k) {
  if (k.in_dim != 2 || k.out_dim != 2)
    throw std::invalid_argument("affine_of: channel is not qubit to qubit");
  if (!k.trace_preserving())
    throw std::invalid_argument("affine_of: channel is not trace preserving");
  AffineQubitChannel a;
  ComplexMatrix ei = apply_to_matrix(k, pauli(0));
  for (int i = 0; i < 3; ++i)
    a.translation(i) = 0.5 * (ei * pauli(i + 1)).trace().real();
  for (int j = 0; j < 3; ++j) {
    ComplexMatrix ej = apply_to_matrix(k, pauli(j + 1));
    for (int i = 0; i < 3; ++i)
      a.linear(i, j) = 0.5 * (ej * pauli(i + 1)).trace().real();
  }
  return a;
}

ChoiState choi_of_affine(const AffineQubitChannel& a) {
  // Phi+ = (1/4)(I(x)I + sx(x)sx - sy(x)sy + sz(x)sz); applying id (x) E
  // maps each B-side Pauli through the affine data.
  auto kron = [](const ComplexMatrix& x, const ComplexMatrix& y) {
    ComplexMatrix m(4, 4);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) m.block(i * 2, j * 2, 2, 2) = x(i, j) * y;
    return m;
  };
  auto dot_sigma = [](const Eigen::Vector3d& v) {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    for (int i = 0; i < 3; ++i) m += v(i) * pauli(i + 1);
    return m;
  };
  const double sign[3] = {1.0, -1.0, 1.0};
  ComplexMatrix choi =
      kron(pauli(0), pauli(0) + dot_sigma(a.translation));
  for (int j = 0; j < 3; ++j)
    choi += sign[j] * kron(pauli(j + 1), dot_sigma(a.linear.col(j)));
  choi *= 0.25;
  return {2, 2, DensityOperator({2, 2}, std::move(choi))};
}

AffineQubitChannel extremal_affine(const ExtremalChannelParams& p) {
  const double ca = std::cos(p.a), cb = std::cos(p.b);
  Eigen::Matrix3d d = Eigen::Matrix3d::Zero();
  d(0, 0) = std::cos(p.a - p.b);
  d(1, 1) = std::cos(p.a + p.b);
  d(2, 2) = ca * ca + cb * cb - 1.0;
  AffineQubitChannel aff;
  aff.linear = p.R * d * p.Rp;
  aff.translation = (ca * ca - cb * cb) * p.R * Eigen::Vector3d::UnitZ();
  return aff;
}

KrausChannel extremal_channel(const ExtremalChannelParams& p) {
  return kraus_of(choi_of_affine(extremal_affine(p)));
}

KrausChannel conjugate(const KrausChannel& k) {
  KrausChannel out{k.in_dim, k.out_dim, {}};
  for (const ComplexMatrix& op : k.kraus_ops) out.kraus_ops.push_back(op.conjugate());
  return out;
}

}  // namespace memcert
