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

#include "gbs/distinguishability.hpp"

#include <cmath>

namespace gbs {

PartialDistInstance::PartialDistInstance(RealVector r_in, TransferMatrix network_in,
                                         double eta_ind_in)
    : r(std::move(r_in)), network(std::move(network_in)), eta_ind(eta_ind_in) {
  if (r.size() != network.modes()) {
    throw std::invalid_argument("squeezing vector length must equal mode count");
  }
  if ((r.array() < 0).any()) throw std::invalid_argument("squeezing parameters must be >= 0");
  if (!(eta_ind >= 0.0 && eta_ind <= 1.0)) {
    throw std::invalid_argument("indistinguishability efficiency must lie in [0, 1]");
  }
}

BinPartition ExpandedInstance::expand_partition(const BinPartition& base) const {
  if (base.modes() != static_cast<int>(port_map.size())) {
    throw std::invalid_argument("partition does not match the base port count");
  }
  std::vector<std::vector<int>> bins;
  bins.reserve(base.bin_count());
  for (const auto& bin : base.bins()) {
    std::vector<int> expanded;
    for (int port : bin) {
      expanded.insert(expanded.end(), port_map[port].begin(), port_map[port].end());
    }
    bins.push_back(std::move(expanded));
  }
  return BinPartition(std::move(bins), network.modes());
}

ExpandedInstance build_partial_instance(const PartialDistInstance& p) {
  const int m = p.base_modes();
  const Matrix& l = p.network.entries();
  const double eta = p.eta_ind;

  // Blocks with zero transmissivity carry no photons to the detectors;
  // pruning them keeps the reduced Q at its minimal dimension (2m at the
  // endpoints, 4m in the interior).
  if (eta == 1.0) {
    std::vector<std::vector<int>> port_map(m);
    for (int port = 0; port < m; ++port) port_map[port] = {port};
    return ExpandedInstance{SqueezedInput(p.r), p.network, std::move(port_map)};
  }
  if (eta == 0.0) {
    // Fully distinguishable limit: one copy of L per virtual mode.
    Matrix big = Matrix::Zero(m * m, m * m);
    RealVector r_big = RealVector::Zero(m * m);
    std::vector<std::vector<int>> port_map(m);
    for (int block = 0; block < m; ++block) {
      big.block(block * m, block * m, m, m) = l;
      r_big[block * m + block] = p.r[block];
      for (int port = 0; port < m; ++port) port_map[port].push_back(block * m + port);
    }
    return ExpandedInstance{SqueezedInput(std::move(r_big)), TransferMatrix(std::move(big)),
                            std::move(port_map)};
  }

  const int total = m * (m + 1);
  Matrix big = Matrix::Zero(total, total);
  RealVector r_big = RealVector::Zero(total);
  std::vector<std::vector<int>> port_map(m);
  big.topLeftCorner(m, m) = std::sqrt(eta) * l;
  for (int port = 0; port < m; ++port) {
    r_big[port] = p.r[port];
    port_map[port].push_back(port);
  }
  const double damp = std::sqrt(1.0 - eta);
  for (int block = 1; block <= m; ++block) {
    big.block(block * m, block * m, m, m) = damp * l;
    r_big[block * m + (block - 1)] = p.r[block - 1];
    for (int port = 0; port < m; ++port) port_map[port].push_back(block * m + port);
  }
  return ExpandedInstance{SqueezedInput(std::move(r_big)), TransferMatrix(std::move(big)),
                          std::move(port_map)};
}

std::unique_ptr<CharFnModel> make_partial_char_fn(const PartialDistInstance& p,
                                                  const BinPartition& partition) {
  ExpandedInstance expanded = build_partial_instance(p);
  BinPartition big_partition = expanded.expand_partition(partition);
  return std::make_unique<SqueezedCharFn>(expanded.input, expanded.network, big_partition);
}

Complex char_fn_partial(const PartialDistInstance& p, const BinPartition& partition,
                        const RealVector& eta) {
  ExpandedInstance expanded = build_partial_instance(p);
  BinPartition big_partition = expanded.expand_partition(partition);
  return char_fn_squeezed(expanded.input, expanded.network, big_partition, eta);
}

}  // namespace gbs
