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
#include <functional>
#include <vector>

#include "gbs/binned_dist.hpp"
#include "gbs/types.hpp"

namespace gbs {

/// Parameters of the Haar-averaged closed forms: n photons in m modes,
/// detectors grouped into bins of the given sizes; sigma = 1 for
/// indistinguishable particles, 0 for distinguishable ones.
struct HaarParams {
  int n = 0;
  int m = 1;
  std::vector<int> bin_sizes;
  int sigma = 1;

  int bin_count() const { return static_cast<int>(bin_sizes.size()); }
  double particle_density() const { return static_cast<double>(n) / m; }
};

/// Haar average for distinguishable photons: multinomial
/// n!/prod(k_i!) prod q_i^{k_i} with q_i = |K_i|/m.
double haar_fock_distinguishable(const std::vector<int>& k, const HaarParams& p);

/// Haar average for indistinguishable photons: the multinomial times the
/// bunching factor prod_i prod_{l<k_i} (1 + l/|K_i|) / prod_{l<n} (1 + l/m).
double haar_fock_indistinguishable(const std::vector<int>& k, const HaarParams& p);

/// Gaussian asymptotic law in x_i = k_i/n with variance scale 1 + sigma*alpha,
/// alpha = n/m; reduces to the de Moivre-Laplace multinomial asymptotic at
/// sigma = 0.
double gaussian_asymptotic(const std::vector<int>& k, const HaarParams& p);

/// Haar-averaged binned GBS law for m identical squeezed vacua and bins
/// covering all modes: P_m(n/2) <P^sigma_Fock(k)> for even n = sum k,
/// exactly zero for odd totals.
double haar_gbs_asymptotic(const std::vector<int>& k, int m, double r,
                           const std::vector<int>& bin_sizes, int sigma);

/// Haar-distributed unitary via QR of a complex Ginibre matrix with the
/// R-diagonal phases folded in. Deterministic for a fixed seed.
Matrix random_haar_unitary(int m, std::uint64_t seed);

struct HaarAverageResult {
  BinPartition partition;
  std::vector<int> cutoffs;
  std::vector<double> mean;        // per-pattern sample mean over trials
  std::vector<double> std_error;   // standard error of the mean
  int trials = 0;

  GridShape shape() const {
    std::vector<int> extents;
    for (int c : cutoffs) extents.push_back(c + 1);
    return GridShape(extents);
  }
};

/// Monte Carlo Haar average of the binned distribution of m squeezed vacua
/// at fixed cutoff n. Trials run in parallel with per-trial derived seeds,
/// so the result does not depend on scheduling. A failing draw aborts with
/// the offending trial recorded. `unitary_source`, when given, replaces the
/// Haar sampler (used to pin the network in tests).
HaarAverageResult monte_carlo_haar_average(
    const RealVector& r, const BinPartition& partition, int n, int trials, std::uint64_t seed,
    const std::function<Matrix(int)>& unitary_source = {});

}  // namespace gbs
