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

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gbs/char_fn.hpp"
#include "gbs/numerics.hpp"
#include "gbs/types.hpp"

namespace gbs {

/// Cutoff selection policy. `epsilon` is the target tail probability. If
/// `alpha` is set the cutoff is taken directly from the Chernoff-bound
/// multiplier instead of searching for the smallest one meeting epsilon;
/// `n_override` bypasses selection entirely.
struct CutoffPolicy {
  double epsilon = 1e-6;
  std::optional<double> alpha;
  std::optional<int> n_override;
  double alpha_max = 1e6;
};

struct CutoffResult {
  int n = 0;            // photons per bin
  double tail_bound = 0.0;
  double alpha = 1.0;   // multiplier actually used (squeezed bound only)
};

/// Probability of k total photon pairs from m identical squeezed vacua,
///
///     P_m(k) = Gamma(k + m/2) / (Gamma(m/2) k!) sech^m(r) tanh^{2k}(r),
///
/// a negative binomial distribution (Gamma form covers odd m).
double total_pair_distribution(int m, double r, int k);

/// Chernoff-type bound on P[pairs > alpha * m sinh^2(r) / 2]:
///     exp(-m (alpha-1)^2 sinh^2 r tanh^2 r / (4 (1 + alpha sinh^2 r))).
/// Returns 1 (vacuous) for alpha <= 1.
double cutoff_tail_bound(int m, double r, double alpha);

/// Smallest even cutoff n = 2 ceil(alpha m sinh^2(r)/2) whose bound meets
/// policy.epsilon, searching over alpha. r_max = 0 yields n = 0.
CutoffResult select_cutoff_squeezed(int m, double r_max, const CutoffPolicy& policy);

/// Cutoff from the exact single-bin total-photon distribution of `model`
/// (which must have one bin covering all modes): the distribution is
/// computed at a provisional cutoff, doubled until the observed tail is
/// trustworthy, and the smallest n with tail <= epsilon is returned.
/// Used for thermal and squashed inputs, which the squeezed bound does not
/// cover.
CutoffResult select_cutoff_exact_tail(const CharFnModel& one_bin_model,
                                      const CutoffPolicy& policy);

/// Binned probability table over {0..n_1} x ... x {0..n_B} plus cutoff
/// metadata. Entries are clamped at zero when the inverse DFT leaves
/// negative rounding noise above -1e-9; anything below that threshold is
/// treated as an upstream bug, not noise.
struct BinnedDistribution {
  BinPartition partition;
  std::vector<int> cutoffs;   // per-axis photon cutoff (usually all equal)
  std::vector<double> probs;  // row-major, axis 0 slowest
  double tail_bound = 0.0;
  double imag_residue = 0.0;
  double clamped_mass = 0.0;

  int bin_count() const { return static_cast<int>(cutoffs.size()); }
  GridShape shape() const;
  double probability(const std::vector<int>& k) const;
  double sum() const;
  /// Max cutoff across axes (the nominal n when axes are uniform).
  int nominal_cutoff() const;
};

inline constexpr double kNegativeClampThreshold = 1e-9;
inline constexpr double kImagResidueThreshold = 1e-8;

/// Reconstructs P(k) from a branch-tracked characteristic-function model
/// by inverse discrete Fourier transform on the (n+1)^B grid.
BinnedDistribution binned_distribution(const CharFnModel& model, const BinPartition& partition,
                                       int n, double tail_bound = 0.0);

/// Same reconstruction for an externally supplied single-valued X(eta).
BinnedDistribution binned_distribution(
    const std::function<Complex(const RealVector&)>& char_fn, const BinPartition& partition,
    int n, double tail_bound = 0.0);

/// Forward transform: X(2 pi nu / (n+1)) = sum_k P(k) e^{2 pi i nu.k/(n+1)}
/// over the distribution's own grid. Round trip with the inverse DFT is
/// exact up to rounding.
std::vector<Complex> forward_characteristic(const BinnedDistribution& dist);

/// Sums out one bin's axis.
BinnedDistribution marginalize(const BinnedDistribution& dist, int drop_bin);

/// Distribution of k_i + k_j from the joint table; the merged axis range
/// doubles. For an alias-free merged table recompute from the instance
/// with the merged partition at cutoff 2n instead.
BinnedDistribution merge_bins(const BinnedDistribution& dist, int i, int j);

/// Truncates axes to the given cutoffs; dropped mass is added to
/// tail_bound.
BinnedDistribution truncate_axes(const BinnedDistribution& dist, const std::vector<int>& cutoffs);

/// 0.5 * L1 distance between the tables, padding missing cells with zero
/// and accounting for the two tail masses as one overflow cell each.
double tv_distance(const BinnedDistribution& a, const BinnedDistribution& b);

/// CSV export (header k_1,..,k_B,probability; 17 significant digits) plus a
/// JSON sidecar with {n, B, partition, tail_bound, imag_residue}.
void export_distribution(const BinnedDistribution& dist, const std::string& csv_path);

}  // namespace gbs
