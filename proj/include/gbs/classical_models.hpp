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

/// Thermal mock-up: X = N (2 pi)^{m_a} / sqrt(det Q) with
/// Q = [[2D - U - U^T, i(U - U^T)], [i(U^T - U), 2D - U - U^T]],
/// D = diag(1/nbar) over the active (nbar > 0) modes.
class ThermalCharFn final : public CharFnModel {
 public:
  ThermalCharFn(const ThermalInput& input, const TransferMatrix& network,
                const BinPartition& partition);

  int bin_count() const override { return static_cast<int>(bin_gram_.size()); }
  int active_mode_count() const override { return static_cast<int>(active_.size()); }
  int q_dim() const override { return 2 * active_mode_count(); }
  double log_prefactor() const override { return log_pref_; }
  Matrix q_matrix(const RealVector& eta) const override;

 private:
  std::vector<int> active_;
  RealVector nbar_;  // over active modes
  std::vector<Matrix> bin_gram_;
  double log_pref_;
};

/// Squashed mock-up (squeezed thermal with vacuum fluctuations in one
/// quadrature): X = N sqrt((2 pi)^{m_a} / det Q) with Q = 2D - U - U^T,
/// D = diag(2/lambda), lambda = e^{4r} - 1 over the active modes.
class SquashedCharFn final : public CharFnModel {
 public:
  SquashedCharFn(const SquashedInput& input, const TransferMatrix& network,
                 const BinPartition& partition);

  int bin_count() const override { return static_cast<int>(bin_gram_.size()); }
  int active_mode_count() const override { return static_cast<int>(active_.size()); }
  int q_dim() const override { return active_mode_count(); }
  double log_prefactor() const override { return log_pref_; }
  Matrix q_matrix(const RealVector& eta) const override;

 private:
  std::vector<int> active_;
  RealVector lambda_;
  std::vector<Matrix> bin_gram_;
  double log_pref_;
};

Complex char_fn_thermal(const ThermalInput& input, const TransferMatrix& network,
                        const BinPartition& partition, const RealVector& eta);

Complex char_fn_squashed(const SquashedInput& input, const TransferMatrix& network,
                         const BinPartition& partition, const RealVector& eta);

/// Squash parameter whose state has the same mean photon number
/// sinh^2(r_squeezed) as the squeezed vacuum it mimics:
/// (e^{4r} - 1)/4 = sinh^2(r_squeezed).
double matched_squash_parameter(double r_squeezed);

}  // namespace gbs
