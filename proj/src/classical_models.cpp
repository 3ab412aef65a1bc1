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

#include "gbs/classical_models.hpp"

#include <cmath>

namespace gbs {

namespace {

std::vector<int> active_indices(const RealVector& values) {
  std::vector<int> active;
  for (int i = 0; i < values.size(); ++i) {
    if (values[i] > 0.0) active.push_back(i);
  }
  return active;
}

std::vector<Matrix> bin_gram_blocks(const Matrix& l, const BinPartition& partition,
                                    const std::vector<int>& active) {
  const int a = static_cast<int>(active.size());
  std::vector<Matrix> blocks;
  blocks.reserve(partition.bin_count());
  Matrix cols(l.rows(), a);
  for (int c = 0; c < a; ++c) cols.col(c) = l.col(active[c]);
  for (int j = 0; j < partition.bin_count(); ++j) {
    Matrix rows(static_cast<int>(partition.bin(j).size()), a);
    int r = 0;
    for (int mode : partition.bin(j)) rows.row(r++) = cols.row(mode);
    blocks.push_back(rows.transpose() * rows.conjugate());
  }
  return blocks;
}

Matrix phased_gram_active(const std::vector<Matrix>& blocks, const RealVector& eta, int dim) {
  Matrix u = Matrix::Zero(dim, dim);
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    u += (std::polar(1.0, eta[j]) - 1.0) * blocks[j];
  }
  return u;
}

void check_dims(int input_modes, const TransferMatrix& network, const BinPartition& partition) {
  if (input_modes != network.modes() || partition.modes() != network.modes()) {
    throw std::invalid_argument("input, network and partition mode counts differ");
  }
}

}  // namespace

ThermalCharFn::ThermalCharFn(const ThermalInput& input, const TransferMatrix& network,
                             const BinPartition& partition) {
  check_dims(input.modes(), network, partition);
  active_ = active_indices(input.nbar);
  nbar_.resize(active_.size());
  log_pref_ = 0.0;
  for (std::size_t a = 0; a < active_.size(); ++a) {
    nbar_[a] = input.nbar[active_[a]];
    // N (2 pi)^{m_a} = prod 2 / nbar_i
    log_pref_ += std::log(2.0) - std::log(nbar_[a]);
  }
  bin_gram_ = bin_gram_blocks(network.entries(), partition, active_);
}

Matrix ThermalCharFn::q_matrix(const RealVector& eta) const {
  const int a = active_mode_count();
  Matrix u = phased_gram_active(bin_gram_, eta, a);
  Matrix sym = -u - u.transpose().eval();
  for (int i = 0; i < a; ++i) sym(i, i) += 2.0 / nbar_[i];
  Matrix anti = Complex(0.0, 1.0) * (u - u.transpose().eval());
  Matrix q(2 * a, 2 * a);
  q.topLeftCorner(a, a) = sym;
  q.bottomRightCorner(a, a) = sym;
  q.topRightCorner(a, a) = anti;
  q.bottomLeftCorner(a, a) = -anti;
  return q;
}

SquashedCharFn::SquashedCharFn(const SquashedInput& input, const TransferMatrix& network,
                               const BinPartition& partition) {
  check_dims(input.modes(), network, partition);
  active_ = active_indices(input.r);
  lambda_.resize(active_.size());
  log_pref_ = 0.0;
  for (std::size_t a = 0; a < active_.size(); ++a) {
    lambda_[a] = std::expm1(4.0 * input.r[active_[a]]);
    // N sqrt((2 pi)^{m_a}) = prod 2 / sqrt(lambda_i)
    log_pref_ += std::log(2.0) - 0.5 * std::log(lambda_[a]);
  }
  bin_gram_ = bin_gram_blocks(network.entries(), partition, active_);
}

Matrix SquashedCharFn::q_matrix(const RealVector& eta) const {
  const int a = active_mode_count();
  Matrix u = phased_gram_active(bin_gram_, eta, a);
  Matrix q = -u - u.transpose().eval();
  for (int i = 0; i < a; ++i) q(i, i) += 4.0 / lambda_[i];
  return q;
}

namespace {

Complex pointwise(const CharFnModel& model, const RealVector& eta) {
  if (!model.q_real_part_positive_definite(eta)) {
    throw NumericError("Re Q is not positive definite: Gaussian integral diverges");
  }
  BranchTracker tracker(model);
  return tracker.advance(eta);
}

}  // namespace

Complex char_fn_thermal(const ThermalInput& input, const TransferMatrix& network,
                        const BinPartition& partition, const RealVector& eta) {
  return pointwise(ThermalCharFn(input, network, partition), eta);
}

Complex char_fn_squashed(const SquashedInput& input, const TransferMatrix& network,
                         const BinPartition& partition, const RealVector& eta) {
  return pointwise(SquashedCharFn(input, network, partition), eta);
}

double matched_squash_parameter(double r_squeezed) {
  if (r_squeezed < 0.0) throw std::invalid_argument("squeezing must be >= 0");
  double sh = std::sinh(r_squeezed);
  return 0.25 * std::log1p(4.0 * sh * sh);
}

}  // namespace gbs
