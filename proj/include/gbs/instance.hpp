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
#include <string>

#include "gbs/binned_dist.hpp"
#include "gbs/char_fn.hpp"
#include "gbs/distinguishability.hpp"
#include "gbs/types.hpp"

namespace gbs {

enum class InputModel { Squeezed, Thermal, Squashed, Partial };

std::string to_string(InputModel model);
InputModel input_model_from_string(const std::string& name);

/// One sampling instance: input model + per-mode parameters + network.
/// `params` holds squeezing for squeezed/squashed/partial inputs and mean
/// photon numbers for thermal ones.
struct GbsInstance {
  InputModel model;
  RealVector params;
  TransferMatrix network;
  double eta_ind = 1.0;  // partial model only

  GbsInstance(InputModel model_in, RealVector params_in, TransferMatrix network_in,
              double eta_ind_in = 1.0);
  int modes() const { return network.modes(); }
};

/// Determinant-form characteristic-function model for any input model;
/// partial instances are expanded onto the big port space internally.
std::unique_ptr<CharFnModel> make_char_fn_model(const GbsInstance& inst,
                                                const BinPartition& partition);

/// Routes cutoff selection: squeezed/partial instances use the
/// negative-binomial Chernoff bound with r_max (conservative for unequal
/// squeezing and for lossy networks, which only remove photons);
/// thermal/squashed instances use the exact single-bin tail.
CutoffResult select_cutoff(const GbsInstance& inst, const CutoffPolicy& policy);

/// Full pipeline: cutoff selection, branch-tracked grid evaluation,
/// inverse DFT.
BinnedDistribution compute_binned_distribution(const GbsInstance& inst,
                                               const BinPartition& partition,
                                               const CutoffPolicy& policy);

/// Recompute-with-merged-partition route for bin merging: bins i and j are
/// merged and the table is recomputed at cutoff 2n (alias control), then
/// the unmerged axes are truncated back to n.
BinnedDistribution merge_bins(const GbsInstance& inst, const BinPartition& partition,
                              int i, int j, int n);

// --- JSON interfaces (schemas documented in the README) ---

/// Parses {"modes", "input_model", "squeezing"/"nbar", "eta_ind",
/// "network": {"real", "imag"}} from a JSON file.
GbsInstance load_instance(const std::string& path);
GbsInstance parse_instance(const std::string& json_text);

/// Parses a partition given as a JSON array of arrays of 1-based mode
/// indices, e.g. [[1,2],[3]], or {"bins": [...]}.
BinPartition load_partition(const std::string& path, int modes);
BinPartition parse_partition(const std::string& json_text, int modes);

std::string instance_to_json(const GbsInstance& inst);

}  // namespace gbs
