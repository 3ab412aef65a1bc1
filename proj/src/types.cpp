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

#include "gbs/types.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

namespace gbs {

NetworkReport validate_network(const Matrix& network, double tol) {
  if (network.rows() != network.cols() || network.rows() < 1) {
    throw std::invalid_argument("network matrix must be square with at least one mode");
  }
  Eigen::JacobiSVD<Matrix> svd(network);
  NetworkReport report;
  report.singular_values = svd.singularValues();
  report.sigma_max = report.singular_values(0);
  report.is_subunitary = report.sigma_max <= 1.0 + tol;
  report.is_unitary =
      (report.singular_values.array() - 1.0).abs().maxCoeff() <= tol;
  return report;
}

TransferMatrix::TransferMatrix(Matrix entries, double tol) : entries_(std::move(entries)) {
  NetworkReport report = validate_network(entries_, tol);
  if (!report.is_subunitary) {
    throw std::invalid_argument("network is not subunitary: sigma_max = " +
                                std::to_string(report.sigma_max));
  }
}

SqueezedInput::SqueezedInput(RealVector r_in) : r(std::move(r_in)) {
  if (r.size() < 1) throw std::invalid_argument("empty squeezing vector");
  if ((r.array() < 0).any()) throw std::invalid_argument("squeezing parameters must be >= 0");
}

RealVector SqueezedInput::gamma() const { return (2.0 * r.array()).exp() - 1.0; }

ThermalInput::ThermalInput(RealVector nbar_in) : nbar(std::move(nbar_in)) {
  if (nbar.size() < 1) throw std::invalid_argument("empty nbar vector");
  if ((nbar.array() < 0).any()) throw std::invalid_argument("mean photon numbers must be >= 0");
}

SquashedInput::SquashedInput(RealVector r_in) : r(std::move(r_in)) {
  if (r.size() < 1) throw std::invalid_argument("empty squash vector");
  if ((r.array() < 0).any()) throw std::invalid_argument("squash parameters must be >= 0");
}

RealVector SquashedInput::lambda() const { return (4.0 * r.array()).exp() - 1.0; }

BinPartition::BinPartition(std::vector<std::vector<int>> bins, int modes)
    : bins_(std::move(bins)), modes_(modes) {
  if (modes_ < 1) throw std::invalid_argument("partition needs at least one mode");
  if (bins_.empty()) throw std::invalid_argument("partition needs at least one bin");
  std::vector<char> seen(modes_, 0);
  for (auto& bin : bins_) {
    if (bin.empty()) throw std::invalid_argument("empty bin in partition");
    std::sort(bin.begin(), bin.end());
    for (int idx : bin) {
      if (idx < 0 || idx >= modes_) {
        throw std::invalid_argument("mode index out of range in partition");
      }
      if (seen[idx]) throw std::invalid_argument("bins overlap at mode " + std::to_string(idx));
      seen[idx] = 1;
    }
  }
}

std::vector<int> BinPartition::bin_sizes() const {
  std::vector<int> sizes;
  sizes.reserve(bins_.size());
  for (const auto& bin : bins_) sizes.push_back(static_cast<int>(bin.size()));
  return sizes;
}

std::vector<double> BinPartition::bin_fractions() const {
  std::vector<double> q;
  q.reserve(bins_.size());
  for (const auto& bin : bins_) q.push_back(static_cast<double>(bin.size()) / modes_);
  return q;
}

bool BinPartition::covers_all_modes() const {
  std::size_t covered = 0;
  for (const auto& bin : bins_) covered += bin.size();
  return covered == static_cast<std::size_t>(modes_);
}

BinPartition BinPartition::without_bin(int drop) const {
  if (bin_count() < 2) throw std::invalid_argument("cannot drop the only bin");
  if (drop < 0 || drop >= bin_count()) throw std::invalid_argument("bin index out of range");
  std::vector<std::vector<int>> rest;
  for (int j = 0; j < bin_count(); ++j) {
    if (j != drop) rest.push_back(bins_[j]);
  }
  return BinPartition(std::move(rest), modes_);
}

BinPartition BinPartition::with_merged_bins(int i, int j) const {
  if (i == j) throw std::invalid_argument("cannot merge a bin with itself");
  if (i < 0 || j < 0 || i >= bin_count() || j >= bin_count()) {
    throw std::invalid_argument("bin index out of range");
  }
  if (i > j) std::swap(i, j);
  std::vector<std::vector<int>> merged = bins_;
  merged[i].insert(merged[i].end(), merged[j].begin(), merged[j].end());
  merged.erase(merged.begin() + j);
  return BinPartition(std::move(merged), modes_);
}

}  // namespace gbs
