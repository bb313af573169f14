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

namespace memcert {

enum class Phase { input, output };

// Outcome indices used in the fixed-size tables below.
inline constexpr int kOutcomeZero = 0;
inline constexpr int kOutcomeOne = 1;
inline constexpr int kOutcomeNoClick = 2;

// Raw coincidence counts per setting pair (x, y) and outcome pair (a, b),
// with a, b in {0, 1, noclick}. `post_selected` marks data that was already
// conditioned on coincidences upstream (no-click rates unrecoverable).
struct CountsTable {
  Phase phase = Phase::output;
  bool post_selected = false;
  std::array<std::array<std::array<std::array<std::uint64_t, 3>, 3>, 2>, 2> counts{};

  std::uint64_t setting_total(int x, int y) const;
};

// Probability table p(a,b|x,y). three_outcome distinguishes the {0,1} and
// {0,1,noclick} alphabets; with a two-outcome alphabet all noclick cells are
// zero. `post_selected` records that a renormalization happened (either here
// or upstream of the counts).
struct Correlations {
  bool three_outcome = false;
  bool post_selected = false;
  std::array<std::array<std::array<std::array<double, 3>, 3>, 2>, 2> p{};
};

struct ChshScore {
  double value = 0.0;
  bool post_selected = false;
};

Correlations correlations_from_counts(const CountsTable& c);

// Drops noclick outcomes and renormalizes each setting pair by its
// conclusive mass. Throws if some setting pair has zero conclusive mass.
Correlations post_select(const Correlations& p);

// S = E00 + E01 + E10 - E11 with E_xy = sum (-1)^{a+b} p(a,b|x,y).
// Requires a two-outcome alphabet.
ChshScore chsh(const Correlations& p);

// min over settings (x,y) of P(b != noclick | a != noclick).
double conditional_detection(const Correlations& p);

// max - min over settings of the same conditional probability; large spreads
// indicate strained fair-sampling assumptions.
double conditional_detection_spread(const Correlations& p);

// Largest variation of a party's outcome marginal when the other party's
// setting changes. Quantum models give 0; raw data may not.
double signaling_diagnostic(const Correlations& p);

}  // namespace memcert
