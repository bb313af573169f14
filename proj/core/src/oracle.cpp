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

#include "memcert/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Geometry>

#include "memcert/correlations.hpp"
#include "memcert/simulate.hpp"

namespace memcert::oracle {

namespace {

using Eigen::Matrix2cd;
using Eigen::Matrix3d;
using Eigen::Matrix4cd;
using Eigen::Vector2cd;
using Eigen::Vector3d;
using Eigen::VectorXd;

// Reflects x into [lo, hi] (triangle wave), keeping the objective continuous
// while the simplex roams all of R.
double fold(double x, double lo, double hi) {
  const double w = hi - lo;
  double t = std::fmod(x - lo, 2.0 * w);
  if (t < 0.0) t += 2.0 * w;
  return lo + (t <= w ? t : 2.0 * w - t);
}

Matrix3d rotation(const Vector3d& r) {
  const double angle = r.norm();
  if (angle < 1e-14) return Matrix3d::Identity();
  return Eigen::AngleAxisd(angle, r / angle).toRotationMatrix();
}

ExtremalChannelParams decode_extremal(const double* q) {
  ExtremalChannelParams p;
  p.a = fold(q[0], 0.0, M_PI / 2.0);
  p.b = fold(q[1], 0.0, M_PI / 2.0);
  p.R = rotation(Vector3d(q[2], q[3], q[4]));
  p.Rp = rotation(Vector3d(q[5], q[6], q[7]));
  return p;
}

// Hermitian contraction P = U diag(k1, k2) U^dag from (k1, k2, theta, phi).
// A general single-Kraus filter polar-decomposes into such a P times a
// unitary, and the unitary is absorbed by the adjacent extremal channel, so
// this family loses no generality.
Matrix2cd decode_filter(const double* q) {
  const double k1 = fold(q[0], 0.0, 1.0);
  const double k2 = fold(q[1], 0.0, 1.0);
  const Complex e = std::polar(1.0, q[3]);
  Vector2cd u1, u2;
  u1 << std::cos(q[2]), e * std::sin(q[2]);
  u2 << -std::conj(e) * std::sin(q[2]), std::cos(q[2]);
  return k1 * (u1 * u1.adjoint()) + k2 * (u2 * u2.adjoint());
}

// For qubit CPTP maps, <Phi+|(id (x) N)[Phi+]|Phi+> = (1 + tr M_N) / 4 with
// M_N the Bloch linear part; translations drop out. The composite trace is
// all the deterministic search needs.
double deterministic_value(const Matrix3d& memory_bloch, const double* q) {
  const Matrix3d md = extremal_affine(decode_extremal(q)).linear;
  const Matrix3d mv = extremal_affine(decode_extremal(q + 8)).linear;
  return 0.25 * (1.0 + (md * memory_bloch * mv).trace());
}

// Applies a qubit affine map to the second-subsystem blocks of a two-qubit
// operator. Extended by complex linearity to non-Hermitian blocks
// B = x0 I + x . sigma -> x0 (I + t . sigma) + (M x) . sigma.
Matrix4cd apply_affine_second(const AffineQubitChannel& ch,
                              const Matrix4cd& y) {
  const Complex im(0.0, 1.0);
  Matrix4cd out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const Matrix2cd blk = y.block<2, 2>(2 * i, 2 * j);
      const Complex x0 = 0.5 * blk.trace();
      Eigen::Vector3cd x;
      x << 0.5 * (blk(1, 0) + blk(0, 1)),
          0.5 * im * (blk(0, 1) - blk(1, 0)),
          0.5 * (blk(0, 0) - blk(1, 1));
      const Eigen::Vector3cd xo =
          ch.linear.cast<Complex>() * x + x0 * ch.translation.cast<Complex>();
      Matrix2cd nb;
      nb(0, 0) = x0 + xo(2);
      nb(1, 1) = x0 - xo(2);
      nb(0, 1) = xo(0) - im * xo(1);
      nb(1, 0) = xo(0) + im * xo(1);
      out.block<2, 2>(2 * i, 2 * j) = nb;
    }
  }
  return out;
}

Matrix4cd lift_second(const Matrix2cd& g) {
  Matrix4cd out = Matrix4cd::Zero();
  out.block<2, 2>(0, 0) = g;
  out.block<2, 2>(2, 2) = g;
  return out;
}

Matrix4cd phi_plus4() {
  Matrix4cd out = Matrix4cd::Zero();
  const int idx[2] = {0, 3};
  for (int a : idx)
    for (int b : idx) out(a, b) = 0.5;
  return out;
}

struct ConditionalValue {
  double fidelity = 0.0;
  double success = 0.0;
};

// Heralded strategy: filter, extremal channel, memory, extremal channel,
// filter; the figure of merit is the overlap of the renormalised survivor
// with Phi+. Layout of q: D-side extremal 0..7, D-side filter 8..11,
// V-side extremal 12..19, V-side filter 20..23.
ConditionalValue heralded_value(const std::vector<Matrix4cd>& memory_lift,
                                const double* q) {
  const Matrix4cd gv = lift_second(decode_filter(q + 20));
  const Matrix4cd gd = lift_second(decode_filter(q + 8));
  Matrix4cd y = gv * phi_plus4() * gv.adjoint();
  y = apply_affine_second(extremal_affine(decode_extremal(q + 12)), y);
  Matrix4cd z = Matrix4cd::Zero();
  for (const Matrix4cd& l : memory_lift) z += l * y * l.adjoint();
  z = apply_affine_second(extremal_affine(decode_extremal(q)), z);
  z = gd * z * gd.adjoint();

  ConditionalValue v;
  v.success = z.trace().real();
  if (v.success < 1e-12) return v;
  const double overlap =
      0.5 * (z(0, 0) + z(0, 3) + z(3, 0) + z(3, 3)).real();
  v.fidelity = std::clamp(overlap / v.success, 0.0, 1.0);
  return v;
}

// Standard Nelder-Mead with reflection 1, expansion 2, contraction 1/2,
// shrink 1/2. Returns the best value found; x is overwritten with its point.
double nelder_mead(const std::function<double(const VectorXd&)>& f,
                   VectorXd& x, double step, int max_evals) {
  const int n = static_cast<int>(x.size());
  std::vector<VectorXd> pts(n + 1, x);
  std::vector<double> val(n + 1);
  for (int i = 1; i <= n; ++i) pts[i](i - 1) += step;
  int evals = 0;
  for (int i = 0; i <= n; ++i) val[i] = f(pts[i]);
  evals += n + 1;

  std::vector<int> order(n + 1);
  while (evals < max_evals) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return val[a] < val[b]; });
    const int best = order[0], second = order[n - 1], worst = order[n];
    if (val[worst] - val[best] < 1e-12) break;

    VectorXd centroid = VectorXd::Zero(n);
    for (int i = 0; i <= n; ++i)
      if (i != worst) centroid += pts[i];
    centroid /= n;

    const VectorXd xr = centroid + (centroid - pts[worst]);
    const double fr = f(xr);
    ++evals;
    if (fr < val[best]) {
      const VectorXd xe = centroid + 2.0 * (centroid - pts[worst]);
      const double fe = f(xe);
      ++evals;
      if (fe < fr) {
        pts[worst] = xe;
        val[worst] = fe;
      } else {
        pts[worst] = xr;
        val[worst] = fr;
      }
    } else if (fr < val[second]) {
      pts[worst] = xr;
      val[worst] = fr;
    } else {
      const bool outside = fr < val[worst];
      const VectorXd xc =
          centroid + 0.5 * ((outside ? xr : pts[worst]) - centroid);
      const double fc = f(xc);
      ++evals;
      if (fc < (outside ? fr : val[worst])) {
        pts[worst] = xc;
        val[worst] = fc;
      } else {
        for (int i = 0; i <= n; ++i) {
          if (i == best) continue;
          pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
          val[i] = f(pts[i]);
          ++evals;
        }
      }
    }
  }

  int best = 0;
  for (int i = 1; i <= n; ++i)
    if (val[i] < val[best]) best = i;
  x = pts[best];
  return val[best];
}

// Restart draws: angle pairs uniform on their fold window, rotation vectors
// with Gaussian axis and uniform angle in [0, pi).
void fill_extremal_draw(std::mt19937_64& eng, double* q) {
  std::uniform_real_distribution<double> angle(0.0, M_PI / 2.0);
  std::uniform_real_distribution<double> rotang(0.0, M_PI);
  std::normal_distribution<double> gauss(0.0, 1.0);
  q[0] = angle(eng);
  q[1] = angle(eng);
  for (int block = 0; block < 2; ++block) {
    Vector3d axis(gauss(eng), gauss(eng), gauss(eng));
    if (axis.norm() < 1e-12) axis = Vector3d::UnitZ();
    axis.normalize();
    const Vector3d r = rotang(eng) * axis;
    for (int i = 0; i < 3; ++i) q[2 + 3 * block + i] = r(i);
  }
}

void fill_filter_draw(std::mt19937_64& eng, double* q) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> half_pi(0.0, M_PI / 2.0);
  std::uniform_real_distribution<double> full(0.0, 2.0 * M_PI);
  q[0] = unit(eng);
  q[1] = unit(eng);
  q[2] = half_pi(eng);
  q[3] = full(eng);
}

void check_qubit_memory(const KrausChannel& memory, const char* who) {
  if (memory.in_dim != 2 || memory.out_dim != 2)
    throw std::invalid_argument(std::string(who) +
                                ": memory must map qubits to qubits");
  memory.validate();
}

// Pulls a POVM back through a trace-nonincreasing extraction map:
// E -> Ext^dag(E), with the extraction's failure branch added to noclick.
Povm pull_through(const Povm& base, const KrausChannel& ext) {
  const int d = ext.in_dim;
  Povm out;
  for (int o = 0; o < 3; ++o) {
    ComplexMatrix e = ComplexMatrix::Zero(d, d);
    if (base.elements[o].size() > 0) {
      for (const ComplexMatrix& k : ext.kraus_ops)
        e += k.adjoint() * base.elements[o] * k;
    }
    out.elements[o] = e;
  }
  out.elements[kOutcomeNoClick] +=
      ComplexMatrix::Identity(d, d) - ext.kraus_sum();
  return out;
}

}  // namespace

PureState phi_lambda(double lambda) {
  if (lambda < 0.0 || lambda > 1.0)
    throw std::invalid_argument("phi_lambda: lambda outside [0, 1]");
  ComplexVector amp = ComplexVector::Zero(4);
  amp(0) = std::sqrt(lambda);
  amp(3) = std::sqrt(1.0 - lambda);
  return PureState({2, 2}, amp);
}

KrausChannel filter_k_lambda(double lambda) {
  if (lambda < 0.5 || lambda > 1.0)
    throw std::invalid_argument("filter_k_lambda: lambda outside [1/2, 1]");
  ComplexMatrix k = ComplexMatrix::Zero(2, 2);
  k(0, 0) = 1.0;
  k(1, 1) = std::sqrt((1.0 - lambda) / lambda);
  return KrausChannel{2, 2, {k}};
}

FilterAttack filter_attack(double f, double p) {
  if (f < 0.5 || f > 1.0)
    throw std::invalid_argument("filter_attack: f outside [1/2, 1]");
  if (p <= 0.0 || p > 1.0)
    throw std::invalid_argument("filter_attack: p outside (0, 1]");
  FilterAttack out{phi_lambda(0.0), KrausChannel{}, 0.0, 0.0};
  out.lambda = 1.0 - (0.5 - std::sqrt(f * (1.0 - f))) * p;
  out.x = std::clamp((out.lambda - 1.0 + p) / out.lambda, 0.0, 1.0);
  out.source = phi_lambda(out.lambda);
  ComplexMatrix k = ComplexMatrix::Zero(2, 2);
  k(0, 0) = std::sqrt(out.x);
  k(1, 1) = 1.0;
  out.filter = KrausChannel{2, 2, {k}};
  return out;
}

KrausChannel amplitude_damping(double xi) {
  if (xi < 0.0 || xi > 1.0)
    throw std::invalid_argument("amplitude_damping: xi outside [0, 1]");
  ComplexMatrix k0 = ComplexMatrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - xi);
  ComplexMatrix k1 = ComplexMatrix::Zero(2, 2);
  k1(0, 1) = std::sqrt(xi);
  return KrausChannel{2, 2, {k0, k1}};
}

double optimal_damping_xi(double f_o, double lambda) {
  if (f_o < 0.5 || f_o >= 1.0)
    throw std::invalid_argument("optimal_damping_xi: f_o outside [1/2, 1)");
  if (lambda < 0.5 || lambda >= 1.0 ||
      lambda > 1.0 / (2.0 * f_o) + 1e-12)
    throw std::invalid_argument(
        "optimal_damping_xi: lambda outside [1/2, 1/(2 f_o)]");
  const double num = std::sqrt(2.0 * f_o) - std::sqrt(lambda);
  const double xi = 1.0 - num * num / (1.0 - lambda);
  if (xi < -1e-9 || xi > 1.0 + 1e-9)
    throw std::invalid_argument("optimal_damping_xi: parameters give no "
                                "valid decay probability");
  return std::clamp(xi, 0.0, 1.0);
}

ComplexMatrix optimal_sigma(double f_o, double lambda) {
  const double xi = optimal_damping_xi(f_o, lambda);
  const double g = std::sqrt(1.0 - xi) / 2.0;
  const double h = (1.0 - xi) / 2.0;
  ComplexMatrix s = ComplexMatrix::Zero(4, 4);
  s(0, 0) = 0.5;
  s(0, 3) = g;
  s(3, 0) = g;
  s(2, 2) = 0.5 - h;
  s(3, 3) = h;
  return s;
}

double damping_throughput_bound(double xi) {
  if (xi < 0.0 || xi > 1.0)
    throw std::invalid_argument("damping_throughput_bound: xi outside [0, 1]");
  if (xi <= std::sqrt(3.0) / 2.0)
    return (2.0 - xi + 2.0 * std::sqrt(1.0 - xi)) / 4.0;
  return (1.0 + xi) / 4.0;
}

double extraction_fidelity_estimate(const KrausChannel& memory, int restarts,
                                    std::uint64_t seed) {
  check_qubit_memory(memory, "extraction_fidelity_estimate");
  if (!memory.trace_preserving(1e-8))
    throw std::invalid_argument(
        "extraction_fidelity_estimate: trace-preserving memory required");
  if (restarts < 1)
    throw std::invalid_argument(
        "extraction_fidelity_estimate: restarts must be positive");

  const Matrix3d mb = affine_of(memory).linear;
  const auto objective = [&](const VectorXd& q) {
    return -deterministic_value(mb, q.data());
  };

  std::mt19937_64 eng(seed);
  double best = -0.5;
  for (int r = 0; r < restarts; ++r) {
    VectorXd q = VectorXd::Zero(16);
    if (r > 0) {
      fill_extremal_draw(eng, q.data());
      fill_extremal_draw(eng, q.data() + 8);
    }
    const double v = -nelder_mead(objective, q, 0.35, 2000);
    best = std::max(best, v);
  }
  return std::clamp(best, 0.0, 1.0);
}

HeraldedEstimate heralded_extraction_estimate(const KrausChannel& memory,
                                              int restarts,
                                              std::uint64_t seed) {
  check_qubit_memory(memory, "heralded_extraction_estimate");
  if (restarts < 1)
    throw std::invalid_argument(
        "heralded_extraction_estimate: restarts must be positive");

  std::vector<Matrix4cd> lift;
  lift.reserve(memory.kraus_ops.size());
  for (const ComplexMatrix& k : memory.kraus_ops)
    lift.push_back(lift_second(k));

  const auto objective = [&](const VectorXd& q) {
    return -heralded_value(lift, q.data()).fidelity;
  };

  std::mt19937_64 eng(seed);
  VectorXd best_q = VectorXd::Zero(24);
  best_q(8) = 1.0;   // filters start at the identity (k1 = k2 = 1)
  best_q(9) = 1.0;
  best_q(20) = 1.0;
  best_q(21) = 1.0;
  double best = -objective(best_q);
  for (int r = 0; r < restarts; ++r) {
    VectorXd q = best_q;
    if (r > 0) {
      fill_extremal_draw(eng, q.data());
      fill_filter_draw(eng, q.data() + 8);
      fill_extremal_draw(eng, q.data() + 12);
      fill_filter_draw(eng, q.data() + 20);
    } else {
      q = VectorXd::Zero(24);
      q(8) = q(9) = q(20) = q(21) = 1.0;
    }
    const double v = -nelder_mead(objective, q, 0.3, 3000);
    if (v > best) {
      best = v;
      best_q = q;
    }
  }

  const ConditionalValue v = heralded_value(lift, best_q.data());
  return HeraldedEstimate{v.fidelity, v.success};
}

SoundnessResult soundness_probe(const Realization& realization,
                                Scenario scenario, int restarts, double tol) {
  const Realization& rz = realization;
  rz.memory.validate();
  rz.extraction_in.validate();
  rz.extraction_out.validate();
  if (rz.extraction_in.out_dim != 2 || rz.extraction_out.out_dim != 2)
    throw std::invalid_argument(
        "soundness_probe: extraction maps must output qubits");
  if (scenario == Scenario::s1 &&
      (!rz.memory.trace_preserving() || !rz.extraction_in.trace_preserving() ||
       !rz.extraction_out.trace_preserving()))
    throw std::invalid_argument(
        "soundness_probe: scenario 1 needs a deterministic realization");

  ExperimentModel in_model{
      rz.source,
      std::nullopt,
      {chsh_povm_a(0), chsh_povm_a(1)},
      {pull_through(chsh_povm_b(0), rz.extraction_in),
       pull_through(chsh_povm_b(1), rz.extraction_in)}};
  ExperimentModel out_model{
      rz.source,
      rz.memory,
      {chsh_povm_a(0), chsh_povm_a(1)},
      {pull_through(chsh_povm_b(0), rz.extraction_out),
       pull_through(chsh_povm_b(1), rz.extraction_out)}};

  CertifyConfig config;
  config.scenario = scenario;
  config.assume_a = Assumption::none;
  switch (scenario) {
    case Scenario::s1:
      config.assume_b_in = Assumption::none;
      config.assume_b_out = Assumption::none;
      break;
    case Scenario::s2:
      config.assume_b_in = Assumption::none;
      config.assume_b_out = Assumption::sfs;
      break;
    case Scenario::s3:
      config.assume_b_in = Assumption::wfs;
      config.assume_b_out = Assumption::wfs;
      break;
  }

  std::optional<Correlations> corr_i;
  if (scenario != Scenario::s2) corr_i = exact_correlations(in_model);
  const Correlations corr_o = exact_correlations(out_model);

  SoundnessResult res;
  res.scenario = scenario;
  res.report = certify_correlations(corr_i, corr_o, config);
  res.certified = res.report.fidelity_bound;
  res.achievable =
      scenario == Scenario::s1
          ? extraction_fidelity_estimate(rz.memory, restarts)
          : heralded_extraction_estimate(rz.memory, restarts).fidelity;
  res.sound = res.certified <= res.achievable + tol;
  return res;
}

PairDecomposition decompose_pair(const DensityOperator& state) {
  if (state.dims() != std::vector<int>{2, 2})
    throw std::invalid_argument("decompose_pair: two-qubit state required");
  const DensityOperator rho = state.normalized() ? state : state.normalize();

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(rho.matrix());
  std::vector<int> kept;
  for (int k = 0; k < 4; ++k)
    if (eig.eigenvalues()(k) > 1e-12) kept.push_back(k);
  if (kept.empty()) throw std::invalid_argument("decompose_pair: zero state");
  const int rank = static_cast<int>(kept.size());

  // Purify with a rank-sized environment, then Schmidt-split across the
  // first qubit.
  ComplexVector amp = ComplexVector::Zero(4 * rank);
  for (int m = 0; m < rank; ++m) {
    const double w = std::sqrt(eig.eigenvalues()(kept[m]));
    for (int s = 0; s < 4; ++s)
      amp(s * rank + m) = w * eig.eigenvectors()(s, kept[m]);
  }
  const PureState purified({2, 2 * rank}, amp);
  const SchmidtDecomposition sd = schmidt_decompose(purified);

  PairDecomposition out;
  out.lambda = sd.coefficients[0] * sd.coefficients[0];

  out.unitary = ComplexMatrix::Zero(2, 2);
  out.unitary.col(0) = sd.left_basis.col(0);
  if (sd.coefficients.size() > 1 && sd.coefficients[1] > 1e-12) {
    out.unitary.col(1) = sd.left_basis.col(1);
  } else {
    out.unitary(0, 1) = -std::conj(out.unitary(1, 0));
    out.unitary(1, 1) = std::conj(out.unitary(0, 0));
  }

  // Isometry columns on the joint (second qubit, environment) space; a
  // missing second Schmidt vector is completed orthonormally.
  ComplexMatrix iso = ComplexMatrix::Zero(2 * rank, 2);
  iso.col(0) = sd.right_basis.col(0);
  if (sd.coefficients.size() > 1 && sd.coefficients[1] > 1e-12) {
    iso.col(1) = sd.right_basis.col(1);
  } else {
    for (int b = 0; b < 2 * rank; ++b) {
      ComplexVector cand = ComplexVector::Zero(2 * rank);
      cand(b) = 1.0;
      cand -= iso.col(0) * (iso.col(0).dot(cand));
      if (cand.norm() > 1e-6) {
        iso.col(1) = cand / cand.norm();
        break;
      }
    }
  }

  KrausChannel xi;
  xi.in_dim = 2;
  xi.out_dim = 2;
  for (int m = 0; m < rank; ++m) {
    ComplexMatrix k(2, 2);
    for (int b = 0; b < 2; ++b)
      for (int j = 0; j < 2; ++j) k(b, j) = iso(b * rank + m, j);
    xi.kraus_ops.push_back(k);
  }
  out.channel = xi;
  return out;
}

}  // namespace memcert::oracle
