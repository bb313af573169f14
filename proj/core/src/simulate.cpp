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

#include "memcert/simulate.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace memcert {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

ComplexMatrix kron(const ComplexMatrix& x, const ComplexMatrix& y) {
  ComplexMatrix m(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      m.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
  return m;
}

}  // namespace

bool Povm::has_noclick(double tol) const {
  return elements[kOutcomeNoClick].size() > 0 &&
         elements[kOutcomeNoClick].cwiseAbs().maxCoeff() > tol;
}

void Povm::validate(double tol) const {
  const int d = dim();
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (const ComplexMatrix& e : elements) {
    if (e.rows() != d || e.cols() != d)
      throw std::invalid_argument("Povm: element shape mismatch");
    if (!is_hermitian(e, tol)) throw std::invalid_argument("Povm: element not Hermitian");
    if (min_eigenvalue(e) < -tol)
      throw std::invalid_argument("Povm: element not positive semidefinite");
    sum += e;
  }
  if (max_abs_diff(sum, ComplexMatrix::Identity(d, d)) > tol)
    throw std::invalid_argument("Povm: elements do not sum to identity");
}

Povm Povm::projective(const ComplexMatrix& observable) {
  if (!is_hermitian(observable, 1e-10))
    throw std::invalid_argument("Povm::projective: observable not Hermitian");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(observable);
  const int d = static_cast<int>(observable.rows());
  Povm p;
  p.elements[kOutcomeZero] = ComplexMatrix::Zero(d, d);
  p.elements[kOutcomeOne] = ComplexMatrix::Zero(d, d);
  p.elements[kOutcomeNoClick] = ComplexMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    ComplexMatrix proj =
        es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
    if (es.eigenvalues()(i) >= 0.0)
      p.elements[kOutcomeZero] += proj;
    else
      p.elements[kOutcomeOne] += proj;
  }
  return p;
}

void ExperimentModel::validate() const {
  if (source.dims().size() != 2)
    throw std::invalid_argument("ExperimentModel: source must be bipartite");
  if (!source.normalized())
    throw std::invalid_argument("ExperimentModel: source must be normalized");
  const int da = source.dims()[0];
  int db = source.dims()[1];
  if (memory) {
    memory->validate();
    if (memory->in_dim != db)
      throw std::invalid_argument("ExperimentModel: memory input dimension mismatch");
    db = memory->out_dim;
  }
  for (const Povm& p : povms_a) {
    p.validate();
    if (p.dim() != da)
      throw std::invalid_argument("ExperimentModel: A-side POVM dimension mismatch");
  }
  for (const Povm& p : povms_b) {
    p.validate();
    if (p.dim() != db)
      throw std::invalid_argument("ExperimentModel: B-side POVM dimension mismatch");
  }
}

Correlations exact_correlations(const ExperimentModel& m) {
  m.validate();
  const DensityOperator stored =
      m.memory ? apply(*m.memory, m.source, 1) : m.source;

  Correlations out;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      for (int a = 0; a < 3; ++a) {
        const ComplexMatrix& ea = m.povms_a[x].elements[a];
        // memory failure branch: A clicks as on the source, B never does
        const double deficit =
            (kron(ea, ComplexMatrix::Identity(m.source.dims()[1],
                                              m.source.dims()[1])) *
             m.source.matrix())
                .trace()
                .real() -
            (kron(ea, ComplexMatrix::Identity(stored.dims()[1],
                                              stored.dims()[1])) *
             stored.matrix())
                .trace()
                .real();
        for (int b = 0; b < 3; ++b) {
          double p = (kron(ea, m.povms_b[y].elements[b]) * stored.matrix())
                         .trace()
                         .real();
          if (b == kOutcomeNoClick) p += deficit;
          out.p[x][y][a][b] = std::max(p, 0.0);
          if ((a == kOutcomeNoClick || b == kOutcomeNoClick) &&
              out.p[x][y][a][b] > 1e-12)
            out.three_outcome = true;
        }
      }
    }
  return out;
}

CountsTable sample_counts(const ExperimentModel& m,
                          std::uint64_t shots_per_setting, std::uint64_t seed) {
  if (shots_per_setting == 0)
    throw std::invalid_argument("sample_counts: shots must be >= 1");
  const Correlations exact = exact_correlations(m);

  CountsTable out;
  const std::uint64_t base = splitmix64(seed);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      std::mt19937_64 engine(splitmix64(base + 2 * x + y + 1));
      double cdf[9];
      double acc = 0.0;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          acc += exact.p[x][y][a][b];
          cdf[a * 3 + b] = acc;
        }
      for (std::uint64_t s = 0; s < shots_per_setting; ++s) {
        const double u =
            static_cast<double>(engine() >> 11) * 0x1.0p-53 * acc;
        int cell = 8;
        for (int c = 0; c < 9; ++c)
          if (u < cdf[c]) {
            cell = c;
            break;
          }
        ++out.counts[x][y][cell / 3][cell % 3];
      }
    }
  return out;
}

Povm lossy_povm(const Povm& base, double efficiency, LossMode mode) {
  if (efficiency < 0.0 || efficiency > 1.0)
    throw std::invalid_argument("lossy_povm: efficiency outside [0, 1]");
  if (base.has_noclick())
    throw std::invalid_argument("lossy_povm: base POVM already has a noclick element");
  Povm out = base;
  const int d = base.dim();
  if (mode == LossMode::state_independent) {
    out.elements[kOutcomeZero] *= efficiency;
    out.elements[kOutcomeOne] *= efficiency;
    out.elements[kOutcomeNoClick] =
        (1.0 - efficiency) * ComplexMatrix::Identity(d, d);
  } else {
    out.elements[kOutcomeZero] = efficiency * base.elements[kOutcomeZero];
    out.elements[kOutcomeNoClick] =
        (1.0 - efficiency) * base.elements[kOutcomeZero];
  }
  out.validate();
  return out;
}

Povm filtered_povm(const Povm& base, const ComplexMatrix& r) {
  if (base.has_noclick())
    throw std::invalid_argument("filtered_povm: base POVM already has a noclick element");
  const int d = base.dim();
  if (r.rows() != d || r.cols() != d)
    throw std::invalid_argument("filtered_povm: filter shape mismatch");
  ComplexMatrix gram = r.adjoint() * r;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(gram, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().maxCoeff() > 1.0 + 1e-10)
    throw std::invalid_argument("filtered_povm: filter is not a contraction");
  Povm out;
  out.elements[kOutcomeZero] = r.adjoint() * base.elements[kOutcomeZero] * r;
  out.elements[kOutcomeOne] = r.adjoint() * base.elements[kOutcomeOne] * r;
  out.elements[kOutcomeNoClick] = ComplexMatrix::Identity(d, d) - gram;
  out.validate();
  return out;
}

Povm chsh_povm_a(int x) {
  if (x != 0 && x != 1) throw std::invalid_argument("chsh_povm_a: setting must be 0 or 1");
  return Povm::projective(x == 0 ? pauli(3) : pauli(1));
}

Povm chsh_povm_b(int y) {
  if (y != 0 && y != 1) throw std::invalid_argument("chsh_povm_b: setting must be 0 or 1");
  const double inv = 1.0 / std::sqrt(2.0);
  ComplexMatrix obs =
      y == 0 ? static_cast<ComplexMatrix>(inv * (pauli(3) + pauli(1)))
             : static_cast<ComplexMatrix>(inv * (pauli(3) - pauli(1)));
  return Povm::projective(obs);
}

ExperimentModel ideal_chsh_model() {
  return ExperimentModel{max_entangled_density(),
                         std::nullopt,
                         {chsh_povm_a(0), chsh_povm_a(1)},
                         {chsh_povm_b(0), chsh_povm_b(1)}};
}

}  // namespace memcert
