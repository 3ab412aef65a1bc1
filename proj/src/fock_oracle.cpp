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

#include "gbs/fock_oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>

#include <Eigen/SVD>

namespace gbs {

std::vector<double> squeezed_fock_coeffs(double r, int k_max) {
  if (r < 0.0) throw std::invalid_argument("squeezing must be >= 0");
  if (k_max < 0) throw std::invalid_argument("k_max must be >= 0");
  std::vector<double> amp(k_max + 1, 0.0);
  amp[0] = 1.0 / std::sqrt(std::cosh(r));
  double t = std::tanh(r);
  // amp[k]/amp[k-1] = tanh(r) sqrt((2k-1)/(2k))
  for (int k = 1; k <= k_max; ++k) {
    amp[k] = amp[k - 1] * t * std::sqrt((2.0 * k - 1.0) / (2.0 * k));
  }
  return amp;
}

Eigen::VectorXd squeezed_number_column(double r, int q, int n_trunc) {
  if (q < 0 || n_trunc < 0) throw std::invalid_argument("invalid column request");
  const int buf = n_trunc + q + 4;
  Eigen::VectorXd col = Eigen::VectorXd::Zero(buf + 1);
  std::vector<double> vac = squeezed_fock_coeffs(r, buf / 2);
  for (int k = 0; 2 * k <= buf; ++k) col[2 * k] = vac[k];
  // S|q+1> = (cosh r a^dag - sinh r a) S|q> / sqrt(q+1)
  const double ch = std::cosh(r), sh = std::sinh(r);
  Eigen::VectorXd next(buf + 1);
  for (int level = 0; level < q; ++level) {
    next.setZero();
    for (int n = 1; n <= buf; ++n) next[n] += ch * std::sqrt(static_cast<double>(n)) * col[n - 1];
    for (int n = 0; n < buf; ++n) next[n] -= sh * std::sqrt(n + 1.0) * col[n + 1];
    col = next / std::sqrt(level + 1.0);
  }
  return col.head(n_trunc + 1);
}

Complex permanent_ryser(const Matrix& a) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() != n) throw std::invalid_argument("permanent needs a square matrix");
  if (n == 0) return 1.0;
  if (n > 20) throw SizeError("permanent size cap exceeded");
  std::vector<Complex> row_sum(n, Complex(0.0, 0.0));
  Complex total = 0.0;
  std::uint64_t prev_gray = 0;
  const std::uint64_t end = std::uint64_t(1) << n;
  for (std::uint64_t k = 1; k < end; ++k) {
    std::uint64_t gray = k ^ (k >> 1);
    std::uint64_t diff = gray ^ prev_gray;
    int j = std::countr_zero(diff);
    double sign = (gray & diff) ? 1.0 : -1.0;
    for (int i = 0; i < n; ++i) row_sum[i] += sign * a(i, j);
    Complex prod = 1.0;
    for (int i = 0; i < n; ++i) prod *= row_sum[i];
    int bits = std::popcount(gray);
    total += ((n - bits) % 2 == 0 ? 1.0 : -1.0) * prod;
    prev_gray = gray;
  }
  return total;
}

Complex transition_amplitude(const Matrix& u, const std::vector<int>& in,
                             const std::vector<int>& out) {
  const int m = static_cast<int>(u.rows());
  if (static_cast<int>(in.size()) != m || static_cast<int>(out.size()) != m) {
    throw std::invalid_argument("occupation length must equal mode count");
  }
  long n_in = std::accumulate(in.begin(), in.end(), 0L);
  long n_out = std::accumulate(out.begin(), out.end(), 0L);
  if (n_in != n_out) throw std::invalid_argument("photon numbers of in and out patterns differ");
  if (n_in == 0) return 1.0;

  Matrix sub(n_out, n_in);
  int row = 0;
  for (int i = 0; i < m; ++i) {
    for (int rep = 0; rep < out[i]; ++rep) {
      int colidx = 0;
      for (int j = 0; j < m; ++j) {
        for (int cj = 0; cj < in[j]; ++cj) sub(row, colidx++) = u(i, j);
      }
      ++row;
    }
  }
  double log_norm = 0.0;
  for (int i = 0; i < m; ++i) log_norm += std::lgamma(in[i] + 1.0) + std::lgamma(out[i] + 1.0);
  return permanent_ryser(sub) * std::exp(-0.5 * log_norm);
}

Matrix dilate_to_unitary(const Matrix& l, double tol) {
  NetworkReport report = validate_network(l, tol);
  if (!report.is_subunitary) {
    throw std::invalid_argument("cannot dilate: matrix is not subunitary");
  }
  const int m = static_cast<int>(l.rows());
  Matrix t = Matrix::Zero(2 * m, 2 * m);
  if (report.is_unitary) {
    t.topLeftCorner(m, m) = l;
    t.bottomRightCorner(m, m) = Matrix::Identity(m, m);
    return t;
  }
  Eigen::JacobiSVD<Matrix> svd(l, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::VectorXd s = svd.singularValues().cwiseMin(1.0);
  Eigen::VectorXd c = (1.0 - s.array().square()).cwiseMax(0.0).sqrt();
  const Matrix& w = svd.matrixU();
  const Matrix& v = svd.matrixV();
  t.topLeftCorner(m, m) = l;  // exactly L, not its SVD reconstruction
  t.topRightCorner(m, m) = -w * c.asDiagonal() * w.adjoint();
  t.bottomLeftCorner(m, m) = v * c.asDiagonal() * v.adjoint();
  t.bottomRightCorner(m, m) = v * s.asDiagonal() * w.adjoint();
  return t;
}

namespace {

constexpr int kMaxOracleModes = 10;  // key packing: 6 bits per mode
constexpr int kMaxOracleTotal = 63;

std::uint64_t pack_state(const int* occ, int modes) {
  std::uint64_t key = 0;
  for (int i = 0; i < modes; ++i) key |= static_cast<std::uint64_t>(occ[i]) << (6 * i);
  return key;
}

double binomial_count(int n, int k) {
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

}  // namespace

FockBasis::FockBasis(int modes, int total) : modes_(modes), total_(total) {
  if (modes < 1 || modes > kMaxOracleModes) {
    throw SizeError("oracle supports 1.." + std::to_string(kMaxOracleModes) + " modes");
  }
  if (total < 0 || total > kMaxOracleTotal) throw SizeError("oracle photon total out of range");
  count_ = static_cast<std::size_t>(std::llround(binomial_count(total + modes - 1, modes - 1)));
  states_.reserve(count_ * modes);
  std::vector<int> occ(modes, 0);
  // lexicographic enumeration, first mode slowest
  std::function<void(int, int)> rec = [&](int at, int left) {
    if (at == modes - 1) {
      occ[at] = left;
      states_.insert(states_.end(), occ.begin(), occ.end());
      return;
    }
    for (int c = 0; c <= left; ++c) {
      occ[at] = c;
      rec(at + 1, left - c);
    }
  };
  rec(0, total);
  count_ = states_.size() / modes;
  lookup_.reserve(count_);
  for (std::size_t i = 0; i < count_; ++i) {
    lookup_.emplace_back(pack_state(state(i), modes_), static_cast<std::uint32_t>(i));
  }
  std::sort(lookup_.begin(), lookup_.end());
}

std::size_t FockBasis::index_of(const int* occ) const {
  std::uint64_t key = pack_state(occ, modes_);
  auto it = std::lower_bound(lookup_.begin(), lookup_.end(), std::make_pair(key, std::uint32_t(0)));
  if (it == lookup_.end() || it->first != key) throw std::out_of_range("state not in basis");
  return it->second;
}

namespace {

// Builds U|s> shell by shell as prod_j (sum_i T_ij a_i^dag)^{s_j} |0>,
// normalized by sqrt(prod s_j!).
class ShellEvolver {
 public:
  ShellEvolver(Matrix t, int max_total, std::size_t state_cap)
      : t_(std::move(t)), max_total_(max_total), state_cap_(state_cap) {
    bases_.resize(max_total + 1);
  }

  const FockBasis& basis(int total) {
    if (!bases_[total]) {
      double count = binomial_count(total + static_cast<int>(t_.rows()) - 1,
                                    static_cast<int>(t_.rows()) - 1);
      if (count > static_cast<double>(state_cap_)) {
        throw SizeError("oracle state space exceeds the cap");
      }
      bases_[total] = std::make_unique<FockBasis>(static_cast<int>(t_.rows()), total);
    }
    return *bases_[total];
  }

  std::vector<Complex> evolve(const std::vector<int>& s) {
    const int modes = static_cast<int>(t_.rows());
    std::vector<Complex> cur{Complex(1.0, 0.0)};
    int total = 0;
    double log_norm = 0.0;
    std::vector<int> occ;
    for (int j = 0; j < static_cast<int>(s.size()); ++j) {
      log_norm += std::lgamma(s[j] + 1.0);
      for (int rep = 0; rep < s[j]; ++rep) {
        const FockBasis& from = basis(total);
        const FockBasis& to = basis(total + 1);
        std::vector<Complex> next(to.size(), Complex(0.0, 0.0));
        for (std::size_t idx = 0; idx < from.size(); ++idx) {
          Complex amp = cur[idx];
          if (amp == Complex(0.0, 0.0)) continue;
          const int* st = from.state(idx);
          occ.assign(st, st + modes);
          for (int i = 0; i < modes; ++i) {
            Complex tij = t_(i, j);
            if (tij == Complex(0.0, 0.0)) continue;
            occ[i] += 1;
            next[to.index_of(occ.data())] += amp * tij * std::sqrt(static_cast<double>(occ[i]));
            occ[i] -= 1;
          }
        }
        cur = std::move(next);
        ++total;
      }
    }
    double norm = std::exp(-0.5 * log_norm);
    for (auto& amp : cur) amp *= norm;
    return cur;
  }

 private:
  Matrix t_;
  int max_total_;
  std::size_t state_cap_;
  std::vector<std::unique_ptr<FockBasis>> bases_;
};

// Compositions of `total` into `slots` parts.
template <typename Fn>
void for_each_composition(int total, int slots, Fn&& fn) {
  std::vector<int> parts(slots, 0);
  std::function<void(int, int)> rec = [&](int at, int left) {
    if (at == slots - 1) {
      parts[at] = left;
      fn(parts);
      return;
    }
    for (int c = 0; c <= left; ++c) {
      parts[at] = c;
      rec(at + 1, left - c);
    }
  };
  if (slots == 0) {
    if (total == 0) {
      std::vector<int> empty;
      fn(empty);
    }
    return;
  }
  rec(0, total);
}

std::vector<std::vector<int>> connected_components(const Matrix& l, double tol) {
  const int m = static_cast<int>(l.rows());
  std::vector<int> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (std::abs(l(i, j)) > tol) parent[find(i)] = find(j);
    }
  }
  std::map<int, std::vector<int>> groups;
  for (int p = 0; p < m; ++p) groups[find(p)].push_back(p);
  std::vector<std::vector<int>> components;
  for (auto& [root, ports] : groups) components.push_back(std::move(ports));
  return components;
}

struct Source {
  int local_port;
  double param;
};

// Joint table of binned counts contributed by one independent block of the
// network. Output states are weighted per input model and their system
// counts summed into bins; environment modes of the dilation are summed
// over implicitly.
std::vector<double> simulate_component(InputModel model, const Matrix& t,
                                       const std::vector<Source>& sources,
                                       const std::vector<std::vector<int>>& local_bins,
                                       int cap, int input_max, const OracleOptions& opts) {
  std::vector<int> extents(local_bins.size(), cap + 1);
  GridShape out_shape(extents);
  std::vector<double> table(out_shape.size(), 0.0);
  const int modes = static_cast<int>(t.rows());
  const int n_src = static_cast<int>(sources.size());
  ShellEvolver evolver(t, input_max, opts.state_cap);

  std::vector<int> pattern(local_bins.size());
  auto accumulate = [&](int total, const std::vector<Complex>& amps, double weight) {
    const FockBasis& shell = evolver.basis(total);
    for (std::size_t idx = 0; idx < shell.size(); ++idx) {
      double p = std::norm(amps[idx]) * weight;
      if (p == 0.0) continue;
      const int* st = shell.state(idx);
      bool keep = true;
      for (std::size_t b = 0; b < local_bins.size(); ++b) {
        int count = 0;
        for (int port : local_bins[b]) count += st[port];
        if (count > cap) {
          keep = false;
          break;
        }
        pattern[b] = count;
      }
      if (keep) table[out_shape.index(pattern)] += p;
      // overflowing patterns stay out of the table; the lost mass shows up
      // as 1 - sum(table)
    }
  };

  std::vector<int> occ(modes, 0);

  if (model == InputModel::Squeezed) {
    std::vector<std::vector<double>> amp(n_src);
    for (int s = 0; s < n_src; ++s) {
      amp[s] = squeezed_fock_coeffs(sources[s].param, input_max / 2);
    }
    for (int total = 0; total <= input_max; total += 2) {
      std::vector<Complex> acc(evolver.basis(total).size(), Complex(0.0, 0.0));
      bool any = false;
      for_each_composition(total / 2, n_src, [&](const std::vector<int>& pairs) {
        double coeff = 1.0;
        for (int s = 0; s < n_src; ++s) coeff *= amp[s][pairs[s]];
        if (std::abs(coeff) < opts.amp_floor) return;
        std::fill(occ.begin(), occ.end(), 0);
        for (int s = 0; s < n_src; ++s) occ[sources[s].local_port] = 2 * pairs[s];
        std::vector<Complex> evolved = evolver.evolve(occ);
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += coeff * evolved[i];
        any = true;
      });
      if (any) accumulate(total, acc, 1.0);
    }
    return table;
  }

  if (model == InputModel::Thermal) {
    for (int total = 0; total <= input_max; ++total) {
      for_each_composition(total, n_src, [&](const std::vector<int>& counts) {
        double w = 1.0;
        for (int s = 0; s < n_src; ++s) {
          double nb = sources[s].param;
          w *= std::pow(nb / (1.0 + nb), counts[s]) / (1.0 + nb);
        }
        if (w < opts.weight_floor) return;
        std::fill(occ.begin(), occ.end(), 0);
        for (int s = 0; s < n_src; ++s) occ[sources[s].local_port] = counts[s];
        accumulate(total, evolver.evolve(occ), w);
      });
    }
    return table;
  }

  if (model == InputModel::Squashed) {
    // Squeezed thermal mixture: rho = sum_q w_q (prod_i S(r_i)|q_i>)(...)^dag
    // with thermal weights at nbar = (e^{2r} - 1)/2.
    std::vector<double> nth(n_src);
    std::vector<int> q_max(n_src);
    std::vector<Eigen::MatrixXd> cols(n_src);
    for (int s = 0; s < n_src; ++s) {
      nth[s] = 0.5 * std::expm1(2.0 * sources[s].param);
      double ratio = nth[s] / (1.0 + nth[s]);
      q_max[s] = ratio > 0.0 ? std::min(
          40, static_cast<int>(std::ceil(std::log(opts.weight_floor) / std::log(ratio))))
                             : 0;
      cols[s].resize(input_max + 1, q_max[s] + 1);
      for (int q = 0; q <= q_max[s]; ++q) {
        cols[s].col(q) = squeezed_number_column(sources[s].param, q, input_max);
      }
    }
    // cache evolved basis inputs; they are shared across mixture components
    std::unordered_map<std::uint64_t, std::vector<Complex>> cache;
    std::vector<int> q(n_src, 0);
    std::function<void(int, double)> loop_q = [&](int at, double w) {
      if (w < opts.weight_floor) return;
      if (at == n_src) {
        for (int total = 0; total <= input_max; ++total) {
          std::vector<Complex> acc(evolver.basis(total).size(), Complex(0.0, 0.0));
          bool any = false;
          for_each_composition(total, n_src, [&](const std::vector<int>& counts) {
            double coeff = 1.0;
            for (int s = 0; s < n_src; ++s) {
              if ((counts[s] - q[s]) % 2 != 0) return;  // squeezing preserves parity
              coeff *= cols[s](counts[s], q[s]);
            }
            if (std::abs(coeff) < opts.amp_floor) return;
            std::fill(occ.begin(), occ.end(), 0);
            for (int s = 0; s < n_src; ++s) occ[sources[s].local_port] = counts[s];
            std::uint64_t key = pack_state(occ.data(), modes);
            auto it = cache.find(key);
            if (it == cache.end()) it = cache.emplace(key, evolver.evolve(occ)).first;
            const std::vector<Complex>& evolved = it->second;
            for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += coeff * evolved[i];
            any = true;
          });
          if (any) accumulate(total, acc, w);
        }
        return;
      }
      for (int qi = 0; qi <= q_max[at]; ++qi) {
        q[at] = qi;
        double wq = std::pow(nth[at] / (1.0 + nth[at]), qi) / (1.0 + nth[at]);
        loop_q(at + 1, w * wq);
      }
    };
    loop_q(0, 1.0);
    return table;
  }

  throw std::invalid_argument("unsupported input model in the oracle");
}

}  // namespace

BinnedDistribution oracle_binned_distribution(const GbsInstance& inst,
                                              const BinPartition& partition,
                                              const OracleOptions& options) {
  if (partition.modes() != inst.modes()) {
    throw std::invalid_argument("partition does not match the instance");
  }
  if (inst.model == InputModel::Partial) {
    PartialDistInstance p(inst.params, inst.network, inst.eta_ind);
    ExpandedInstance expanded = build_partial_instance(p);
    GbsInstance big(InputModel::Squeezed, expanded.input.r, expanded.network);
    BinnedDistribution dist =
        oracle_binned_distribution(big, expanded.expand_partition(partition), options);
    dist.partition = partition;  // report against the base ports
    return dist;
  }

  const int cap = options.table_cutoff;
  if (cap < 0) throw std::invalid_argument("table cutoff must be >= 0");
  const int input_max = options.input_total_max < 0 ? cap + 4 : options.input_total_max;
  if (input_max > kMaxOracleTotal) throw SizeError("oracle input cutoff out of range");

  const int bins = partition.bin_count();
  std::vector<int> extents(bins, cap + 1);
  GridShape shape(extents);
  std::vector<double> total(shape.size(), 0.0);
  total[0] = 1.0;  // identity for the bin-count convolution

  for (const auto& ports : connected_components(inst.network.entries(), 1e-14)) {
    std::vector<Source> sources;
    for (std::size_t i = 0; i < ports.size(); ++i) {
      if (inst.params[ports[i]] > 0.0) {
        sources.push_back(Source{static_cast<int>(i), inst.params[ports[i]]});
      }
    }
    if (sources.empty()) continue;  // vacuum block: contributes zero counts

    const int p = static_cast<int>(ports.size());
    Matrix sub(p, p);
    for (int i = 0; i < p; ++i) {
      for (int j = 0; j < p; ++j) sub(i, j) = inst.network.entries()(ports[i], ports[j]);
    }
    NetworkReport report = validate_network(sub);
    Matrix t = report.is_unitary ? sub : dilate_to_unitary(sub);

    std::vector<std::vector<int>> local_bins(bins);
    for (int b = 0; b < bins; ++b) {
      for (int i = 0; i < p; ++i) {
        const auto& bin = partition.bin(b);
        if (std::binary_search(bin.begin(), bin.end(), ports[i])) local_bins[b].push_back(i);
      }
    }

    std::vector<double> part =
        simulate_component(inst.model, t, sources, local_bins, cap, input_max, options);

    // convolve bin counts of independent blocks
    std::vector<double> next(shape.size(), 0.0);
    std::vector<int> ka, kb, kc(bins);
    for (std::size_t ia = 0; ia < shape.size(); ++ia) {
      if (total[ia] == 0.0) continue;
      shape.unrank(ia, ka);
      for (std::size_t ib = 0; ib < shape.size(); ++ib) {
        if (part[ib] == 0.0) continue;
        shape.unrank(ib, kb);
        bool keep = true;
        for (int b = 0; b < bins; ++b) {
          kc[b] = ka[b] + kb[b];
          if (kc[b] > cap) {
            keep = false;
            break;
          }
        }
        if (keep) next[shape.index(kc)] += total[ia] * part[ib];
      }
    }
    total = std::move(next);
  }

  BinnedDistribution dist{partition, std::vector<int>(bins, cap), std::move(total), 0.0, 0.0, 0.0};
  dist.tail_bound = std::max(0.0, 1.0 - dist.sum());
  return dist;
}

}  // namespace gbs
