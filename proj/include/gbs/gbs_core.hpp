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

#include <vector>

#include "gbs/char_fn.hpp"
#include "gbs/types.hpp"

namespace gbs {

/// Per-output-mode phases: theta_i = eta_j if mode i belongs to bin j,
/// theta_i = 0 for modes outside every bin (those are traced out).
RealVector theta_vector(const BinPartition& partition, const RealVector& eta);

/// Phased Gram matrix U = L^T H L* with H = diag(e^{i theta} - 1) over all
/// m modes. U = 0 when eta = 0.
Matrix phased_gram(const TransferMatrix& network, const RealVector& theta);

/// Characteristic function of squeezed vacuum through a (sub)unitary
/// network,
///
///     X(eta) = prod_active [2 sqrt(1+gamma_i)/gamma_i] / sqrt(det Q),
///
/// with Q = [[2 Gamma^-1 + I, -(I+U)], [-(I+U)^T, 2 Gamma^-1 + I]]
/// restricted to the active modes. The -(I+U) off-diagonal blocks reduce to
/// -L^T diag(e^{i theta}) L* when L is unitary; the (I+U) form is the one
/// that stays valid for lossy networks.
class SqueezedCharFn final : public CharFnModel {
 public:
  SqueezedCharFn(const SqueezedInput& input, const TransferMatrix& network,
                 const BinPartition& partition);

  int bin_count() const override { return static_cast<int>(bin_gram_.size()); }
  int active_mode_count() const override { return static_cast<int>(active_.size()); }
  int q_dim() const override { return 2 * active_mode_count(); }
  double log_prefactor() const override { return log_pref_; }
  Matrix q_matrix(const RealVector& eta) const override;

 private:
  std::vector<int> active_;
  RealVector gamma_;              // over active modes
  std::vector<Matrix> bin_gram_;  // per-bin Gram blocks over active modes
  double log_pref_;
};

/// Pointwise X(eta) with the branch continued along a straight path from
/// eta = 0. Checks that Re Q is positive definite at the target.
Complex char_fn_squeezed(const SqueezedInput& input, const TransferMatrix& network,
                         const BinPartition& partition, const RealVector& eta);

}  // namespace gbs
