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

#include "memcert/qcore.hpp"

namespace memcert {

// A completely positive, trace non-increasing map in Kraus form.
// sum K^dag K <= I within tolerance; equality within tolerance means the
// channel is trace preserving.
struct KrausChannel {
  int in_dim = 0;
  int out_dim = 0;
  std::vector<ComplexMatrix> kraus_ops;

  ComplexMatrix kraus_sum() const;  // sum K^dag K
  bool trace_preserving(double tol = 1e-10) const;
  void validate(double tol = 1e-10) const;  // throws on CPTN violation

  static KrausChannel identity(int dim);
};

// Choi state sigma = (id (x) E)[Phi+] on dims [in_dim, out_dim],
// normalized so tr sigma = 1 for CPTP.
struct ChoiState {
  int in_dim = 0;
  int out_dim = 0;
  DensityOperator matrix;
};

// Qubit channel as an affine map of the Bloch ball: v -> translation + linear*v
// with Bloch components v_i = tr(rho sigma_i).
struct AffineQubitChannel {
  Eigen::Vector3d translation;
  Eigen::Matrix3d linear;
};

// Extremal qubit CPTP channels: two angles in [0, pi/2] plus input/output
// rotations (proper orthogonal 3x3).
struct ExtremalChannelParams {
  double a = 0.0;
  double b = 0.0;
  Eigen::Matrix3d R = Eigen::Matrix3d::Identity();
  Eigen::Matrix3d Rp = Eigen::Matrix3d::Identity();
};

ChoiState choi_of(const KrausChannel& k);
KrausChannel kraus_of(const ChoiState& c);

// Applies the channel to one subsystem of rho.
DensityOperator apply(const KrausChannel& k, const DensityOperator& rho,
                      int subsystem);

// compose(outer, inner) = outer after inner.
KrausChannel compose(const KrausChannel& outer, const KrausChannel& inner);

AffineQubitChannel affine_of(const KrausChannel& k);
ChoiState choi_of_affine(const AffineQubitChannel& a);

// Affine representation (R D(a,b) R', (cos^2 a - cos^2 b) R e_z) of the
// two-Kraus extremal channel family; returned in Kraus form via the Choi
// state.
KrausChannel extremal_channel(const ExtremalChannelParams& p);
AffineQubitChannel extremal_affine(const ExtremalChannelParams& p);

// Entrywise complex conjugation of all Kraus operators (the transposed map's
// Choi partner).
KrausChannel conjugate(const KrausChannel& k);

}  // namespace memcert
