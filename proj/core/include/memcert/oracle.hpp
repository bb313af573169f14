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

// Reference constructions and adversarial searches used to validate the
// certification bounds: states and channels that saturate them, a maximal
// extractable-fidelity estimator over extremal qubit channels, and a
// structural decomposition of two-qubit states into a rotated partially
// entangled pair followed by a local channel.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "memcert/channels.hpp"
#include "memcert/qcore.hpp"
#include "memcert/selftest.hpp"

namespace memcert::oracle {

// |phi_lambda> = sqrt(lambda)|00> + sqrt(1-lambda)|11>, lambda in [0, 1].
PureState phi_lambda(double lambda);

// Local filter K = diag(1, sqrt((1-lambda)/lambda)) on the second qubit;
// trace-nonincreasing for lambda >= 1/2. Conditioned on success it maps the
// maximally entangled pair onto |phi_lambda>.
KrausChannel filter_k_lambda(double lambda);

// State-and-filter pair that meets a target entangled-fraction / success
// budget with equality: the source is |phi_lambda> with
// lambda = 1 - (1/2 - sqrt(f (1-f))) p and the second qubit passes through
// the single-Kraus filter diag(sqrt(x), 1) with x = (lambda - 1 + p) / lambda.
// Requires f in [1/2, 1] and p in (0, 1] with x >= 0.
struct FilterAttack {
  PureState source;      // two qubits
  KrausChannel filter;   // acts on the second qubit, trace-nonincreasing
  double lambda = 0.0;
  double x = 0.0;
};
FilterAttack filter_attack(double f, double p);

// Amplitude-damping channel with decay probability xi.
KrausChannel amplitude_damping(double xi);

// Decay probability of the extremal channel attaining the deterministic
// extraction bound at entangled fraction lambda:
// xi = 1 - (sqrt(2 f_o) - sqrt(lambda))^2 / (1 - lambda).
// Requires 1/2 <= lambda <= 1/(2 f_o) and f_o in [1/2, 1).
double optimal_damping_xi(double f_o, double lambda);

// The bipartite operator reaching the filtered-overlap minimum in closed
// form; equals the partial application of amplitude damping with
// optimal_damping_xi to one half of the maximally entangled pair.
ComplexMatrix optimal_sigma(double f_o, double lambda);

// Largest overlap with the maximally entangled pair reachable by sandwiching
// amplitude damping of strength xi between arbitrary qubit channels:
// (2 - xi + 2 sqrt(1-xi)) / 4 for xi <= sqrt(3)/2, else (1 + xi) / 4.
double damping_throughput_bound(double xi);

// Numerical estimate of the maximal overlap of (id (x) D . E . V)[Phi+] with
// Phi+ over extremal qubit channels D, V for a fixed memory channel E
// (qubit to qubit, trace preserving). Multi-start Nelder-Mead; restart 0 is
// the identity pair, the rest draw from `seed`. Deterministic for fixed
// arguments. Lower-bounds the true maximum; the acceptance suite brackets it
// against damping_throughput_bound.
double extraction_fidelity_estimate(const KrausChannel& memory,
                                    int restarts = 200,
                                    std::uint64_t seed = 0x6d656d63);

// Same search over heralded strategies: each side may additionally apply a
// single-Kraus local filter, and the figure of merit is the overlap of the
// renormalised conditional state with Phi+. Returns the best conditional
// overlap and the success probability of the strategy attaining it.
struct HeraldedEstimate {
  double fidelity = 0.0;
  double success = 0.0;
};
HeraldedEstimate heralded_extraction_estimate(const KrausChannel& memory,
                                              int restarts = 200,
                                              std::uint64_t seed = 0x6d656d63);

// A concrete experiment the certification pipeline can be checked against:
// a two-qubit source, a memory channel acting on the second qubit, and
// trace-nonincreasing extraction maps (qubit output) applied before the
// measurement on each phase. CPTP extractions with no losses model the
// deterministic scenario.
struct Realization {
  DensityOperator source;        // dims {2, d}
  KrausChannel memory;           // d -> d
  KrausChannel extraction_in;    // d -> 2, trace-nonincreasing
  KrausChannel extraction_out;   // d -> 2, trace-nonincreasing
};

// Certified-versus-achievable comparison for one realization and scenario.
// `achievable` is the best extractable overlap of the realized memory over
// the matching strategy class (deterministic or heralded), and `sound` holds
// when certified <= achievable + tol.
struct SoundnessResult {
  Scenario scenario = Scenario::s3;
  CertificationReport report;
  double certified = 0.0;
  double achievable = 0.0;
  bool sound = false;
};
SoundnessResult soundness_probe(const Realization& realization,
                                Scenario scenario, int restarts = 120,
                                double tol = 1e-6);

// Splits any two-qubit state into (u (x) Xi)[phi_lambda]: a local unitary u
// on the first qubit, a partially entangled pure pair, and a qubit channel
// Xi on the second. lambda is the square of the leading Schmidt coefficient
// of the purified state across the first-qubit cut, so lambda >= 1/2 always.
struct PairDecomposition {
  double lambda = 0.0;
  ComplexMatrix unitary;   // 2 x 2, acts on the first qubit
  KrausChannel channel;    // qubit -> second original subsystem
};
PairDecomposition decompose_pair(const DensityOperator& state);

}  // namespace memcert::oracle
