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

#include "gbs/binned_dist.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

namespace gbs {

double total_pair_distribution(int m, double r, int k) {
  if (m < 1) throw std::invalid_argument("mode count must be >= 1");
  if (r <= 0.0) throw std::invalid_argument("squeezing must be > 0");
  if (k < 0) throw std::invalid_argument("pair count must be >= 0");
  double half_m = 0.5 * m;
  double log_p = std::lgamma(k + half_m) - std::lgamma(half_m) - std::lgamma(k + 1.0) +
                 m * std::log(1.0 / std::cosh(r)) + 2.0 * k * std::log(std::tanh(r));
  return std::exp(log_p);
}

double cutoff_tail_bound(int m, double r, double alpha) {
  if (m < 1) throw std::invalid_argument("mode count must be >= 1");
  if (r <= 0.0) throw std::invalid_argument("squeezing must be > 0");
  if (alpha <= 1.0) return 1.0;  // vacuous
  double sh2 = std::sinh(r) * std::sinh(r);
  double th2 = std::tanh(r) * std::tanh(r);
  double exponent = -m * (alpha - 1.0) * (alpha - 1.0) * sh2 * th2 / (4.0 * (1.0 + alpha * sh2));
  return std::exp(exponent);
}

namespace {

// Exact tail of the total-pair distribution beyond `pairs`.
double negbin_tail(int m, double r, int pairs) {
  double cum = 0.0;
  for (int k = 0; k <= pairs; ++k) cum += total_pair_distribution(m, r, k);
  return std::max(0.0, 1.0 - cum);
}

int even_cutoff_from_alpha(int m, double r, double alpha) {
  double pairs = 0.5 * alpha * m * std::sinh(r) * std::sinh(r);
  return 2 * static_cast<int>(std::ceil(pairs));
}

}  // namespace

CutoffResult select_cutoff_squeezed(int m, double r_max, const CutoffPolicy& policy) {
  if (policy.n_override) {
    int n = *policy.n_override;
    if (n < 0) throw std::invalid_argument("cutoff override must be >= 0");
    double tail = r_max > 0.0 ? negbin_tail(m, r_max, n / 2) : 0.0;
    return CutoffResult{n, tail, 1.0};
  }
  if (r_max <= 0.0) return CutoffResult{0, 0.0, 1.0};
  if (policy.alpha) {
    double alpha = *policy.alpha;
    if (alpha <= 1.0) throw std::invalid_argument("alpha must be > 1");
    return CutoffResult{even_cutoff_from_alpha(m, r_max, alpha), cutoff_tail_bound(m, r_max, alpha),
                        alpha};
  }
  if (!(policy.epsilon > 0.0 && policy.epsilon < 1.0)) {
    throw std::invalid_argument("epsilon must lie in (0, 1)");
  }
  if (cutoff_tail_bound(m, r_max, policy.alpha_max) > policy.epsilon) {
    throw PolicyError("no alpha <= alpha_max meets the requested tail");
  }
  double lo = 1.0, hi = policy.alpha_max;
  for (int it = 0; it < 200 && (hi - lo) > 1e-9 * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    (cutoff_tail_bound(m, r_max, mid) <= policy.epsilon ? hi : lo) = mid;
  }
  int n = even_cutoff_from_alpha(m, r_max, hi);
  // The even ceiling only increases the effective multiplier.
  double alpha_eff = std::max(hi, n / (m * std::sinh(r_max) * std::sinh(r_max)));
  return CutoffResult{n, cutoff_tail_bound(m, r_max, alpha_eff), hi};
}

namespace {

// P[count >= c] of the single-bin total-photon distribution, evaluated on
// a grid with `provisional` + 1 points.
std::vector<double> one_bin_suffix_sums(const CharFnModel& model, int provisional) {
  CharGrid grid = evaluate_char_grid(model, provisional);
  const int pts = provisional + 1;
  std::vector<double> suffix(pts + 1, 0.0);
  for (int k = provisional; k >= 0; --k) {
    Complex acc = 0.0;
    for (int nu = 0; nu < pts; ++nu) {
      acc += grid.values[nu] * std::polar(1.0, -2.0 * M_PI * nu * k / pts);
    }
    suffix[k] = suffix[k + 1] + std::max(0.0, acc.real() / pts);
  }
  return suffix;
}

}  // namespace

CutoffResult select_cutoff_exact_tail(const CharFnModel& one_bin_model,
                                      const CutoffPolicy& policy) {
  if (one_bin_model.bin_count() != 1) {
    throw std::invalid_argument("exact-tail selection needs a single-bin model");
  }
  if (one_bin_model.active_mode_count() == 0) {
    return CutoffResult{policy.n_override.value_or(0), 0.0, 1.0};
  }
  if (policy.n_override) {
    int n = *policy.n_override;
    std::vector<double> suffix = one_bin_suffix_sums(one_bin_model, std::max(2 * n + 2, 32));
    return CutoffResult{n, suffix[n + 1], 1.0};
  }
  if (!(policy.epsilon > 0.0 && policy.epsilon < 1.0)) {
    throw std::invalid_argument("epsilon must lie in (0, 1)");
  }
  // Evaluate the total-photon distribution at a provisional cutoff and read
  // the smallest n whose observed tail is comfortably below epsilon. The
  // candidate must sit in the lower half of the provisional table, where
  // aliasing of the provisional grid itself is negligible; otherwise the
  // provisional cutoff is doubled.
  for (int provisional = 32; provisional <= 1 << 16; provisional *= 2) {
    std::vector<double> suffix = one_bin_suffix_sums(one_bin_model, provisional);
    for (int c = 0; c <= provisional / 2; ++c) {
      if (suffix[c + 1] <= 0.5 * policy.epsilon) {
        return CutoffResult{c, suffix[c + 1], 1.0};
      }
    }
  }
  throw PolicyError("exact-tail cutoff search exceeded the provisional limit");
}

GridShape BinnedDistribution::shape() const {
  std::vector<int> extents;
  extents.reserve(cutoffs.size());
  for (int c : cutoffs) extents.push_back(c + 1);
  return GridShape(extents);
}

double BinnedDistribution::probability(const std::vector<int>& k) const {
  return probs[shape().index(k)];
}

double BinnedDistribution::sum() const {
  double total = 0.0;
  for (double p : probs) total += p;
  return total;
}

int BinnedDistribution::nominal_cutoff() const {
  return *std::max_element(cutoffs.begin(), cutoffs.end());
}

namespace {

// Multidimensional DFT, one axis at a time. kernel(k, nu) is applied along
// every axis; extents are uniform.
void transform_axes(std::vector<Complex>& data, const GridShape& shape, const Matrix& kernel) {
  const int axes = shape.axes();
  std::vector<Complex> line(kernel.rows());
  for (int axis = 0; axis < axes; ++axis) {
    const std::size_t stride = shape.stride(axis);
    const int extent = shape.extents()[axis];
    const std::size_t blocks = shape.size() / (static_cast<std::size_t>(extent) * stride);
    for (std::size_t b = 0; b < blocks; ++b) {
      for (std::size_t off = 0; off < stride; ++off) {
        std::size_t base = b * extent * stride + off;
        for (int k = 0; k < extent; ++k) {
          Complex acc = 0.0;
          for (int nu = 0; nu < extent; ++nu) {
            acc += kernel(k, nu) * data[base + nu * stride];
          }
          line[k] = acc;
        }
        for (int k = 0; k < extent; ++k) data[base + k * stride] = line[k];
      }
    }
  }
}

BinnedDistribution distribution_from_grid(std::vector<Complex> values, const BinPartition& partition,
                                          int n, double tail_bound) {
  const int bins = partition.bin_count();
  std::vector<int> extents(bins, n + 1);
  GridShape shape(extents);

  const int pts = n + 1;
  Matrix kernel(pts, pts);
  for (int k = 0; k < pts; ++k) {
    for (int nu = 0; nu < pts; ++nu) {
      kernel(k, nu) = std::polar(1.0 / pts, -2.0 * M_PI * k * nu / pts);
    }
  }
  transform_axes(values, shape, kernel);

  BinnedDistribution dist{partition, std::vector<int>(bins, n), std::vector<double>(shape.size()),
                          tail_bound, 0.0, 0.0};
  for (std::size_t i = 0; i < shape.size(); ++i) {
    dist.imag_residue = std::max(dist.imag_residue, std::abs(values[i].imag()));
    double p = values[i].real();
    if (p < -kNegativeClampThreshold) {
      throw NumericError("negative probability beyond rounding noise: " + std::to_string(p));
    }
    if (p < 0.0) {
      dist.clamped_mass -= p;
      p = 0.0;
    }
    dist.probs[i] = p;
  }
  if (dist.imag_residue > kImagResidueThreshold) {
    throw NumericError("excessive imaginary residue " + std::to_string(dist.imag_residue) +
                       "; branch error upstream?");
  }
  return dist;
}

}  // namespace

BinnedDistribution binned_distribution(const CharFnModel& model, const BinPartition& partition,
                                       int n, double tail_bound) {
  if (model.bin_count() != partition.bin_count()) {
    throw std::invalid_argument("model and partition bin counts differ");
  }
  CharGrid grid = evaluate_char_grid(model, n);
  return distribution_from_grid(std::move(grid.values), partition, n, tail_bound);
}

BinnedDistribution binned_distribution(
    const std::function<Complex(const RealVector&)>& char_fn, const BinPartition& partition,
    int n, double tail_bound) {
  const int bins = partition.bin_count();
  std::vector<int> extents(bins, n + 1);
  GridShape shape(extents);
  std::vector<Complex> values(shape.size());
  std::vector<int> nu;
  RealVector eta(bins);
  for (std::size_t i = 0; i < shape.size(); ++i) {
    shape.unrank(i, nu);
    for (int a = 0; a < bins; ++a) eta[a] = 2.0 * M_PI * nu[a] / (n + 1);
    values[i] = char_fn(eta);
  }
  return distribution_from_grid(std::move(values), partition, n, tail_bound);
}

std::vector<Complex> forward_characteristic(const BinnedDistribution& dist) {
  GridShape shape = dist.shape();
  for (std::size_t a = 1; a < dist.cutoffs.size(); ++a) {
    if (dist.cutoffs[a] != dist.cutoffs[0]) {
      throw std::invalid_argument("forward transform requires uniform axis cutoffs");
    }
  }
  const int pts = dist.cutoffs[0] + 1;
  Matrix kernel(pts, pts);
  for (int nu = 0; nu < pts; ++nu) {
    for (int k = 0; k < pts; ++k) {
      kernel(nu, k) = std::polar(1.0, 2.0 * M_PI * k * nu / pts);
    }
  }
  std::vector<Complex> values(dist.probs.begin(), dist.probs.end());
  transform_axes(values, shape, kernel);
  return values;
}

BinnedDistribution marginalize(const BinnedDistribution& dist, int drop_bin) {
  const int bins = dist.bin_count();
  if (bins < 2) throw std::invalid_argument("cannot marginalize the only bin");
  if (drop_bin < 0 || drop_bin >= bins) throw std::invalid_argument("bin index out of range");

  std::vector<int> cutoffs = dist.cutoffs;
  cutoffs.erase(cutoffs.begin() + drop_bin);
  BinnedDistribution out{dist.partition.without_bin(drop_bin), std::move(cutoffs), {},
                         dist.tail_bound, dist.imag_residue, dist.clamped_mass};

  GridShape in_shape = dist.shape();
  GridShape out_shape = out.shape();
  out.probs.assign(out_shape.size(), 0.0);
  std::vector<int> k;
  std::vector<int> kk(bins - 1);
  for (std::size_t i = 0; i < in_shape.size(); ++i) {
    in_shape.unrank(i, k);
    int w = 0;
    for (int a = 0; a < bins; ++a) {
      if (a != drop_bin) kk[w++] = k[a];
    }
    out.probs[out_shape.index(kk)] += dist.probs[i];
  }
  return out;
}

BinnedDistribution merge_bins(const BinnedDistribution& dist, int i, int j) {
  const int bins = dist.bin_count();
  if (i == j) throw std::invalid_argument("cannot merge a bin with itself");
  if (i < 0 || j < 0 || i >= bins || j >= bins) {
    throw std::invalid_argument("bin index out of range");
  }
  if (i > j) std::swap(i, j);

  std::vector<int> cutoffs;
  for (int a = 0; a < bins; ++a) {
    if (a == i) {
      cutoffs.push_back(dist.cutoffs[i] + dist.cutoffs[j]);
    } else if (a != j) {
      cutoffs.push_back(dist.cutoffs[a]);
    }
  }
  BinnedDistribution out{dist.partition.with_merged_bins(i, j), std::move(cutoffs), {},
                         dist.tail_bound, dist.imag_residue, dist.clamped_mass};

  GridShape in_shape = dist.shape();
  GridShape out_shape = out.shape();
  out.probs.assign(out_shape.size(), 0.0);
  std::vector<int> k;
  std::vector<int> kk(bins - 1);
  for (std::size_t idx = 0; idx < in_shape.size(); ++idx) {
    in_shape.unrank(idx, k);
    int w = 0;
    for (int a = 0; a < bins; ++a) {
      if (a == i) {
        kk[w++] = k[i] + k[j];
      } else if (a != j) {
        kk[w++] = k[a];
      }
    }
    out.probs[out_shape.index(kk)] += dist.probs[idx];
  }
  return out;
}

BinnedDistribution truncate_axes(const BinnedDistribution& dist, const std::vector<int>& cutoffs) {
  if (static_cast<int>(cutoffs.size()) != dist.bin_count()) {
    throw std::invalid_argument("cutoff count mismatch");
  }
  BinnedDistribution out{dist.partition, cutoffs, {}, 0.0, dist.imag_residue,
                         dist.clamped_mass};
  GridShape in_shape = dist.shape();
  GridShape out_shape = out.shape();
  out.probs.assign(out_shape.size(), 0.0);
  double dropped = 0.0;
  std::vector<int> k;
  for (std::size_t i = 0; i < in_shape.size(); ++i) {
    in_shape.unrank(i, k);
    bool keep = true;
    for (int a = 0; a < out.bin_count(); ++a) {
      if (k[a] > cutoffs[a]) {
        keep = false;
        break;
      }
    }
    if (keep) {
      out.probs[out_shape.index(k)] = dist.probs[i];
    } else {
      dropped += dist.probs[i];
    }
  }
  out.tail_bound = dist.tail_bound + dropped;
  return out;
}

double tv_distance(const BinnedDistribution& a, const BinnedDistribution& b) {
  if (a.bin_count() != b.bin_count()) throw std::invalid_argument("bin count mismatch");
  std::vector<int> extents(a.bin_count());
  for (int ax = 0; ax < a.bin_count(); ++ax) {
    extents[ax] = std::max(a.cutoffs[ax], b.cutoffs[ax]) + 1;
  }
  GridShape shape(extents);
  GridShape sa = a.shape();
  GridShape sb = b.shape();
  double l1 = 0.0;
  std::vector<int> k;
  for (std::size_t i = 0; i < shape.size(); ++i) {
    shape.unrank(i, k);
    double pa = 0.0, pb = 0.0;
    bool in_a = true, in_b = true;
    for (int ax = 0; ax < a.bin_count(); ++ax) {
      in_a = in_a && k[ax] <= a.cutoffs[ax];
      in_b = in_b && k[ax] <= b.cutoffs[ax];
    }
    if (in_a) pa = a.probs[sa.index(k)];
    if (in_b) pb = b.probs[sb.index(k)];
    l1 += std::abs(pa - pb);
  }
  l1 += std::abs(a.tail_bound - b.tail_bound);
  return 0.5 * l1;
}

void export_distribution(const BinnedDistribution& dist, const std::string& csv_path) {
  std::ofstream csv(csv_path);
  if (!csv) throw std::runtime_error("cannot open " + csv_path);
  const int bins = dist.bin_count();
  for (int a = 0; a < bins; ++a) csv << "k_" << (a + 1) << ",";
  csv << "probability\n";
  GridShape shape = dist.shape();
  std::vector<int> k;
  char buffer[64];
  for (std::size_t i = 0; i < shape.size(); ++i) {
    shape.unrank(i, k);
    for (int a = 0; a < bins; ++a) csv << k[a] << ",";
    std::snprintf(buffer, sizeof(buffer), "%.17g", dist.probs[i]);
    csv << buffer << "\n";
  }
  csv.close();

  nlohmann::json meta;
  meta["n"] = dist.nominal_cutoff();
  meta["axis_cutoffs"] = dist.cutoffs;
  meta["B"] = bins;
  std::vector<std::vector<int>> bins_one_based;
  for (const auto& bin : dist.partition.bins()) {
    std::vector<int> b;
    for (int mode : bin) b.push_back(mode + 1);
    bins_one_based.push_back(std::move(b));
  }
  meta["partition"] = bins_one_based;
  meta["tail_bound"] = dist.tail_bound;
  meta["imag_residue"] = dist.imag_residue;
  meta["clamped_mass"] = dist.clamped_mass;

  std::string sidecar = csv_path;
  auto dot = sidecar.find_last_of('.');
  if (dot != std::string::npos && sidecar.substr(dot) == ".csv") {
    sidecar = sidecar.substr(0, dot);
  }
  sidecar += ".json";
  std::ofstream js(sidecar);
  if (!js) throw std::runtime_error("cannot open " + sidecar);
  js << meta.dump(2) << "\n";
}

}  // namespace gbs
