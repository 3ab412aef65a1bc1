// Copyright 2026 The binned-gbs Authors
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

#include <memory>
#include <vector>

#include "gbs/types.hpp"

namespace gbs {

struct LogDet {
  double log_abs = 0.0;
  double arg = 0.0;  // a representative of the argument, mod 2*pi
};

/// Characteristic function of the common determinant form
///
///     X(eta) = exp(log_prefactor) / sqrt(det Q(eta)),
///
/// where Q is a complex symmetric matrix built from the phased Gram matrix
/// of the network, restricted to the active (non-vacuum) input modes. At
/// eta = 0, det Q equals exp(2*log_prefactor) so that X(0) = 1.
///
/// Q is model specific (squeezed, thermal, squashed); the square root
/// branch is selected by phase continuation, see BranchTracker.
class CharFnModel {
 public:
  virtual ~CharFnModel() = default;

  virtual int bin_count() const = 0;
  virtual int active_mode_count() const = 0;
  virtual int q_dim() const = 0;
  virtual double log_prefactor() const = 0;
  virtual Matrix q_matrix(const RealVector& eta) const = 0;

  /// log|det Q| and arg(det Q) mod 2*pi, via LU factorization.
  LogDet log_det_q(const RealVector& eta) const;

  /// Cheap convergence check: the Gaussian integral behind X exists iff
  /// Re Q is positive definite.
  bool q_real_part_positive_definite(const RealVector& eta) const;
};

/// Tracks the branch of sqrt(det Q) along a path in eta-space.
///
/// The characteristic function extends to a function of z_j = e^{i eta_j}
/// that is analytic and non-vanishing on the closed unit polydisk (it is a
/// power series with non-negative coefficients summing to 1, and det Q is a
/// polynomial in the z_j), so det Q has a globally consistent continuous
/// argument on the torus and the continued branch is path independent.
/// Numerically the argument is unwrapped step by step, anchored at
/// arg det Q(0) = 0; a step whose principal phase jump exceeds a threshold
/// is bisected until each sub-step stays well below pi.
class BranchTracker {
 public:
  explicit BranchTracker(const CharFnModel& model);

  /// Continue the branch from the current position to `eta` and return
  /// X(eta). Throws NumericError if continuity cannot be established.
  Complex advance(const RealVector& eta);

  Complex value() const;     // X at the current position
  Complex sqrt_det() const;  // branch-tracked sqrt(det Q) at the current position
  const RealVector& position() const { return eta_; }
  double unwrapped_arg() const { return phase_; }

 private:
  const CharFnModel& model_;
  RealVector eta_;
  double phase_;    // unwrapped arg det Q along the path from 0
  double log_abs_;  // log|det Q| at the current position
};

/// Values of X on the inverse-DFT grid eta_nu = 2*pi*nu/(points_per_axis),
/// nu in {0..points_per_axis-1}^B, in row-major order (axis 0 slowest).
struct CharGrid {
  int points_per_axis = 0;
  int bins = 0;
  std::vector<Complex> values;
};

/// Evaluates X over the full phase grid with n+1 points per axis. Grid
/// points are visited along axis-aligned paths from the origin so the
/// branch stays continuous; each single-axis step is refined adaptively.
CharGrid evaluate_char_grid(const CharFnModel& model, int n);

/// Path-continued sqrt(det Q(eta)) along a straight path from eta = 0.
Complex branch_sqrt_det(const CharFnModel& model, const RealVector& eta);

}  // namespace gbs
