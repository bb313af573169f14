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

#include "memcert/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace memcert {

std::uint64_t CountsTable::setting_total(int x, int y) const {
  std::uint64_t total = 0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) total += counts[x][y][a][b];
  return total;
}

Correlations correlations_from_counts(const CountsTable& c) {
  Correlations out;
  out.post_selected = c.post_selected;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      const std::uint64_t total = c.setting_total(x, y);
      if (total == 0)
        throw std::invalid_argument("correlations_from_counts: empty setting pair (" +
                                    std::to_string(x) + "," + std::to_string(y) + ")");
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          out.p[x][y][a][b] =
              static_cast<double>(c.counts[x][y][a][b]) / static_cast<double>(total);
          if ((a == kOutcomeNoClick || b == kOutcomeNoClick) && c.counts[x][y][a][b] > 0)
            out.three_outcome = true;
        }
    }
  return out;
}

Correlations post_select(const Correlations& p) {
  if (!p.three_outcome) {
    Correlations out = p;
    out.post_selected = true;
    return out;
  }
  Correlations out;
  out.three_outcome = false;
  out.post_selected = true;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      double mass = 0.0;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) mass += p.p[x][y][a][b];
      if (mass <= 0.0)
        throw std::invalid_argument("post_select: zero conclusive mass for setting (" +
                                    std::to_string(x) + "," + std::to_string(y) + ")");
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) out.p[x][y][a][b] = p.p[x][y][a][b] / mass;
    }
  return out;
}

ChshScore chsh(const Correlations& p) {
  if (p.three_outcome)
    throw std::invalid_argument("chsh: three-outcome table, post-select first");
  double s = 0.0;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      double e = 0.0;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          e += ((a + b) % 2 == 0 ? 1.0 : -1.0) * p.p[x][y][a][b];
      s += (x == 1 && y == 1) ? -e : e;
    }
  return {s, p.post_selected};
}

namespace {

double conditional_detection_at(const Correlations& p, int x, int y) {
  double conclusive_a = 0.0, both = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 3; ++b) {
      conclusive_a += p.p[x][y][a][b];
      if (b != kOutcomeNoClick) both += p.p[x][y][a][b];
    }
  if (conclusive_a <= 0.0)
    throw std::invalid_argument("conditional_detection: P(a != noclick) = 0 for setting (" +
                                std::to_string(x) + "," + std::to_string(y) + ")");
  return both / conclusive_a;
}

}  // namespace

double conditional_detection(const Correlations& p) {
  if (!p.three_outcome)
    throw std::invalid_argument("conditional_detection: table has no noclick outcomes");
  double m = 1.0;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) m = std::min(m, conditional_detection_at(p, x, y));
  return m;
}

double conditional_detection_spread(const Correlations& p) {
  if (!p.three_outcome)
    throw std::invalid_argument("conditional_detection_spread: table has no noclick outcomes");
  double lo = 1.0, hi = 0.0;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      const double v = conditional_detection_at(p, x, y);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  return hi - lo;
}

double signaling_diagnostic(const Correlations& p) {
  const int n = p.three_outcome ? 3 : 2;
  double worst = 0.0;
  // A marginal vs Bob's setting
  for (int x = 0; x < 2; ++x)
    for (int a = 0; a < n; ++a) {
      double m[2] = {0.0, 0.0};
      for (int y = 0; y < 2; ++y)
        for (int b = 0; b < n; ++b) m[y] += p.p[x][y][a][b];
      worst = std::max(worst, std::abs(m[0] - m[1]));
    }
  // B marginal vs Alice's setting
  for (int y = 0; y < 2; ++y)
    for (int b = 0; b < n; ++b) {
      double m[2] = {0.0, 0.0};
      for (int x = 0; x < 2; ++x)
        for (int a = 0; a < n; ++a) m[x] += p.p[x][y][a][b];
      worst = std::max(worst, std::abs(m[0] - m[1]));
    }
  return worst;
}

}  // namespace memcert
