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

#include <array>
#include <cstdint>
#include <optional>

#include "memcert/channels.hpp"
#include "memcert/correlations.hpp"
#include "memcert/qcore.hpp"

namespace memcert {

// Measurement with outcomes {0, 1, noclick}. Two-outcome measurements carry a
// zero noclick element. Elements are PSD and sum to the identity.
struct Povm {
  std::array<ComplexMatrix, 3> elements;

  int dim() const { return static_cast<int>(elements[0].rows()); }
  bool has_noclick(double tol = 1e-12) const;
  void validate(double tol = 1e-10) const;

  static Povm projective(const ComplexMatrix& observable);  // +1 -> outcome 0
};

// Source state, optional memory channel on the stored subsystem (index 1),
// and one POVM per setting and party. When the memory is trace non-increasing
// its failure branch shows up as B-side no-click events.
struct ExperimentModel {
  DensityOperator source;
  std::optional<KrausChannel> memory;
  std::array<Povm, 2> povms_a;
  std::array<Povm, 2> povms_b;

  void validate() const;
};

// P(a,b|x,y) = tr((A_{a|x} (x) B_{b|y}) rho') with rho' the stored state.
Correlations exact_correlations(const ExperimentModel& m);

// Multinomial sampling per setting pair via inverse CDF over the nine
// (a,b) cells in row-major (a-major) order. Each setting pair uses its own
// mt19937_64 engine seeded with splitmix64(splitmix64(seed) + 2x + y + 1);
// uniforms are (engine() >> 11) * 2^-53. Fixed seeds give identical tables
// on any platform.
CountsTable sample_counts(const ExperimentModel& m,
                          std::uint64_t shots_per_setting, std::uint64_t seed);

enum class LossMode { state_independent, setting_dependent };

// state_independent: both elements scaled by efficiency, noclick picks up
// (1 - efficiency) I; satisfies strong fair sampling (filter sqrt(eff) I).
// setting_dependent: loss tied to the outcome-0 element only; applied across
// settings this produces setting-dependent no-click rates (breaks both
// fair-sampling assumptions), useful for loophole demonstrations.
Povm lossy_povm(const Povm& base, double efficiency, LossMode mode);

// Pulls a two-outcome POVM through the local filter R (contraction):
// elements become R^dag E R, noclick = I - R^dag R. This is the weak
// fair-sampling structure.
Povm filtered_povm(const Povm& base, const ComplexMatrix& r);

// Standard optimal CHSH measurements: A0 = sz, A1 = sx,
// B0 = (sz + sx)/sqrt(2), B1 = (sz - sx)/sqrt(2).
Povm chsh_povm_a(int x);
Povm chsh_povm_b(int y);

// Phi+ source with the optimal angles and no memory; gives S = 2 sqrt(2).
ExperimentModel ideal_chsh_model();

}  // namespace memcert
