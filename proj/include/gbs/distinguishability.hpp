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

#include "gbs/gbs_core.hpp"
#include "gbs/types.hpp"

namespace gbs {

/// Partial-distinguishability model: a fraction of the light becomes
/// non-interfering and propagates through per-mode virtual copies of the
/// network, controlled by a single indistinguishability efficiency in
/// [0, 1].
struct PartialDistInstance {
  RealVector r;            // base squeezing, length m
  TransferMatrix network;  // base m x m network
  double eta_ind;          // indistinguishability efficiency

  PartialDistInstance(RealVector r_in, TransferMatrix network_in, double eta_ind_in);
  int base_modes() const { return network.modes(); }
};

/// Squeezed-vacuum instance on the expanded port space, with the map from
/// each base output port to its copies across the indistinguishable and
/// virtual blocks. Bins are unioned across copies through port_map.
struct ExpandedInstance {
  SqueezedInput input;
  TransferMatrix network;
  std::vector<std::vector<int>> port_map;  // base port -> expanded ports

  BinPartition expand_partition(const BinPartition& base) const;
};

/// Builds the loss-absorbed big network
///
///     L~ = sqrt(eta) L  (+)  (sqrt(1-eta) L)^{(+) m}
///
/// on m(m+1) ports, feeding r_1..r_m into the first block and r_j into
/// port j of virtual block j. Blocks whose scale factor vanishes
/// (eta = 0 or 1) are pruned, so the active-mode count is 2m in the
/// interior and m at the endpoints.
ExpandedInstance build_partial_instance(const PartialDistInstance& p);

/// X(eta) of the expanded instance; delegates to the squeezed-vacuum
/// characteristic function.
Complex char_fn_partial(const PartialDistInstance& p, const BinPartition& partition,
                        const RealVector& eta);

/// Determinant-form model for a partial instance with a base-mode
/// partition (expanded internally).
std::unique_ptr<CharFnModel> make_partial_char_fn(const PartialDistInstance& p,
                                                  const BinPartition& partition);

}  // namespace gbs
