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

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gbs {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr double kDefaultSubunitaryTol = 1e-8;
inline constexpr double kDefaultSymTol = 1e-10;

/// Numerical failure (singular determinant, lost branch continuity,
/// excessive imaginary residue, ...).
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Cutoff selection could not satisfy the requested tail probability.
struct PolicyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Combinatorial blow-up guard of the brute-force simulator.
struct SizeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NetworkReport {
  RealVector singular_values;  // descending
  double sigma_max = 0.0;
  bool is_unitary = false;
  bool is_subunitary = false;
};

/// Checks that L is a valid (sub)unitary mode transformation: reports the
/// singular values, whether all of them are 1 within tol (unitary) and
/// whether the largest is <= 1 + tol (subunitary).
NetworkReport validate_network(const Matrix& network, double tol = kDefaultSubunitaryTol);

/// Mode-transformation matrix of a passive, possibly lossy linear optical
/// network. Construction enforces squareness and subunitarity.
class TransferMatrix {
 public:
  explicit TransferMatrix(Matrix entries, double tol = kDefaultSubunitaryTol);

  const Matrix& entries() const { return entries_; }
  int modes() const { return static_cast<int>(entries_.rows()); }

 private:
  Matrix entries_;
};

/// Per-mode squeezing parameters r_j >= 0; modes with r_j = 0 enter as
/// vacuum and are dropped from the Gaussian integral.
struct SqueezedInput {
  RealVector r;

  explicit SqueezedInput(RealVector r_in);
  int modes() const { return static_cast<int>(r.size()); }
  RealVector gamma() const;  // e^{2r} - 1, elementwise
};

/// Per-mode thermal mean photon numbers.
struct ThermalInput {
  RealVector nbar;

  explicit ThermalInput(RealVector nbar_in);
  int modes() const { return static_cast<int>(nbar.size()); }
};

/// Per-mode squash parameters; lambda_j = e^{4 r_j} - 1.
struct SquashedInput {
  RealVector r;

  explicit SquashedInput(RealVector r_in);
  int modes() const { return static_cast<int>(r.size()); }
  RealVector lambda() const;
};

/// Disjoint, non-empty groups of output-mode indices (0-based). The union
/// may cover only part of the modes; unbinned modes are traced out, which
/// realizes marginal distributions.
class BinPartition {
 public:
  BinPartition(std::vector<std::vector<int>> bins, int modes);

  int bin_count() const { return static_cast<int>(bins_.size()); }
  int modes() const { return modes_; }
  const std::vector<std::vector<int>>& bins() const { return bins_; }
  const std::vector<int>& bin(int j) const { return bins_.at(j); }

  std::vector<int> bin_sizes() const;
  std::vector<double> bin_fractions() const;  // q_j = |K_j| / m
  bool covers_all_modes() const;

  /// Partition with bin `drop` removed.
  BinPartition without_bin(int drop) const;
  /// Partition with bins i and j merged into one (at position min(i,j)).
  BinPartition with_merged_bins(int i, int j) const;

 private:
  std::vector<std::vector<int>> bins_;  // each sorted ascending
  int modes_;
};

}  // namespace gbs
