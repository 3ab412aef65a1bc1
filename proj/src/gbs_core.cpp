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

#include "gbs/gbs_core.hpp"

#include <cmath>

namespace gbs {

RealVector theta_vector(const BinPartition& partition, const RealVector& eta) {
  if (eta.size() != partition.bin_count()) {
    throw std::invalid_argument("eta length must equal the number of bins");
  }
  RealVector theta = RealVector::Zero(partition.modes());
  for (int j = 0; j < partition.bin_count(); ++j) {
    for (int mode : partition.bin(j)) theta[mode] = eta[j];
  }
  return theta;
}

Matrix phased_gram(const TransferMatrix& network, const RealVector& theta) {
  const Matrix& l = network.entries();
  if (theta.size() != l.rows()) throw std::invalid_argument("theta length must equal mode count");
  Matrix h = Matrix::Zero(l.rows(), l.rows());
  for (int i = 0; i < l.rows(); ++i) {
    h(i, i) = std::polar(1.0, theta[i]) - 1.0;
  }
  return l.transpose() * h * l.conjugate();
}

namespace {

// Per-bin Gram blocks over the active columns: M_j(a,b) =
// sum_{l in K_j} L(l, act_a) conj(L(l, act_b)), so that
// U(eta) = sum_j (e^{i eta_j} - 1) M_j restricted to active modes.
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

std::vector<int> active_indices(const RealVector& values) {
  std::vector<int> active;
  for (int i = 0; i < values.size(); ++i) {
    if (values[i] > 0.0) active.push_back(i);
  }
  return active;
}

}  // namespace

SqueezedCharFn::SqueezedCharFn(const SqueezedInput& input, const TransferMatrix& network,
                               const BinPartition& partition) {
  if (input.modes() != network.modes() || partition.modes() != network.modes()) {
    throw std::invalid_argument("input, network and partition mode counts differ");
  }
  active_ = active_indices(input.r);
  gamma_.resize(active_.size());
  log_pref_ = 0.0;
  for (std::size_t a = 0; a < active_.size(); ++a) {
    double g = std::exp(2.0 * input.r[active_[a]]) - 1.0;
    gamma_[a] = g;
    log_pref_ += std::log(2.0) + 0.5 * std::log1p(g) - std::log(g);
  }
  bin_gram_ = bin_gram_blocks(network.entries(), partition, active_);
}

Matrix SqueezedCharFn::q_matrix(const RealVector& eta) const {
  const int a = active_mode_count();
  Matrix u = Matrix::Zero(a, a);
  for (std::size_t j = 0; j < bin_gram_.size(); ++j) {
    u += (std::polar(1.0, eta[j]) - 1.0) * bin_gram_[j];
  }
  Matrix q(2 * a, 2 * a);
  q.setZero();
  for (int i = 0; i < a; ++i) {
    q(i, i) = 2.0 / gamma_[i] + 1.0;
    q(a + i, a + i) = q(i, i);
  }
  Matrix off = -(Matrix::Identity(a, a) + u);
  q.topRightCorner(a, a) = off;
  q.bottomLeftCorner(a, a) = off.transpose();
  return q;
}

Complex char_fn_squeezed(const SqueezedInput& input, const TransferMatrix& network,
                         const BinPartition& partition, const RealVector& eta) {
  SqueezedCharFn model(input, network, partition);
  if (!model.q_real_part_positive_definite(eta)) {
    throw NumericError("Re Q is not positive definite: Gaussian integral diverges");
  }
  BranchTracker tracker(model);
  return tracker.advance(eta);
}

}  // namespace gbs
