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

#include <cstdint>
#include <vector>

#include "gbs/types.hpp"

namespace gbs {

/// log(n choose k) via lgamma.
double log_binomial(double n, double k);

/// Regularized upper incomplete gamma Q(a, x); used for chi-square p-values.
/// Series expansion for x < a + 1, continued fraction otherwise.
double regularized_gamma_q(double a, double x);

/// Chi-square survival function P[X > stat] with `dof` degrees of freedom.
double chi_square_p_value(double stat, int dof);

/// SplitMix64 step; also used to derive independent per-trial seeds.
std::uint64_t splitmix64(std::uint64_t& state);

/// Seed for sub-stream `index` of a master seed. Stable across platforms
/// and independent of scheduling order.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Deterministic random source (xoshiro256** core, explicit Box-Muller),
/// so that draws do not depend on any standard-library distribution
/// implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();
  double uniform();  // [0, 1)
  double normal();
  Complex complex_normal();  // Re, Im ~ N(0, 1/2): E|z|^2 = 1

 private:
  std::uint64_t s_[4];
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Row-major layout over a rectangular table {0..e_1-1} x ... x {0..e_B-1}
/// (axis 0 slowest). Extents are per-axis sizes, not cutoffs.
class GridShape {
 public:
  GridShape() = default;
  explicit GridShape(std::vector<int> extents);

  int axes() const { return static_cast<int>(extents_.size()); }
  const std::vector<int>& extents() const { return extents_; }
  std::size_t size() const { return total_; }
  std::size_t stride(int axis) const { return strides_.at(axis); }

  std::size_t index(const std::vector<int>& k) const;
  void unrank(std::size_t idx, std::vector<int>& k) const;

 private:
  std::vector<int> extents_;
  std::vector<std::size_t> strides_;
  std::size_t total_ = 0;
};

}  // namespace gbs
