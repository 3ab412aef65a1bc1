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

#include "gbs/binned_dist.hpp"
#include "gbs/instance.hpp"
#include "gbs/types.hpp"

namespace gbs {

// Brute-force truncated-Fock-space simulator for desk-scale instances. It
// shares no code path with the determinant-based engine and serves as the
// independent oracle for every analytic result.

/// Amplitudes of |2k> in S(r)|0>: tanh^k(r) sqrt((2k)!)/(2^k k!)/sqrt(cosh r).
std::vector<double> squeezed_fock_coeffs(double r, int k_max);

/// Column <n|S(r)|q> for n = 0..n_trunc, via the recursion
/// S|q+1> = (cosh r a^dag - sinh r a) S|q> / sqrt(q+1).
Eigen::VectorXd squeezed_number_column(double r, int q, int n_trunc);

/// Permanent by Ryser's formula with Gray-code updates; exact for integer
/// matrices, O(2^n n) otherwise. n <= 20.
Complex permanent_ryser(const Matrix& a);

/// Fock transition amplitude <out| U |in> of a (loss-less) network:
/// permanent of the row/column-repeated submatrix over
/// sqrt(prod in_i! prod out_j!). Photon numbers must agree.
Complex transition_amplitude(const Matrix& u, const std::vector<int>& in,
                             const std::vector<int>& out);

/// Embeds a subunitary L as the top-left block of a 2m x 2m unitary via its
/// singular value decomposition (cosine-sine structure). Any completion is
/// equivalent once the environment is traced out. Unitary L returns L + I.
Matrix dilate_to_unitary(const Matrix& l, double tol = kDefaultSubunitaryTol);

/// All occupation vectors of `total` photons in `modes` modes, with an
/// index lookup. Enumeration order is stable.
class FockBasis {
 public:
  FockBasis(int modes, int total);

  int modes() const { return modes_; }
  int total() const { return total_; }
  std::size_t size() const { return count_; }
  const int* state(std::size_t idx) const { return states_.data() + idx * modes_; }
  std::size_t index_of(const int* occ) const;

 private:
  int modes_, total_;
  std::size_t count_;
  std::vector<int> states_;  // flattened
  std::vector<std::pair<std::uint64_t, std::uint32_t>> lookup_;  // sorted key -> index
};

struct OracleOptions {
  int table_cutoff = 12;      // per-bin photon cutoff of the output table
  int input_total_max = -1;   // input-photon truncation; default table_cutoff + 4
  double weight_floor = 1e-12;   // mixture components below this are dropped
  double amp_floor = 1e-14;      // input amplitudes below this are dropped
  std::size_t state_cap = 2'000'000;  // per-shell basis size guard
};

/// Binned output distribution by dilated-unitary Fock evolution and
/// environment-count summation. Independent blocks of the network are
/// simulated separately and their bin counts convolved. tail_bound reports
/// the truncated probability mass.
BinnedDistribution oracle_binned_distribution(const GbsInstance& inst,
                                              const BinPartition& partition,
                                              const OracleOptions& options = {});

}  // namespace gbs
