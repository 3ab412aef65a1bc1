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

#include "gbs/haar.hpp"

#include <cmath>
#include <thread>

#include <Eigen/QR>

#include "gbs/gbs_core.hpp"
#include "gbs/numerics.hpp"

namespace gbs {

namespace {

void check_pattern(const std::vector<int>& k, const HaarParams& p) {
  if (static_cast<int>(k.size()) != p.bin_count()) {
    throw std::invalid_argument("pattern length must equal the number of bins");
  }
  int total = 0;
  int covered = 0;
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (k[i] < 0) throw std::invalid_argument("negative count in pattern");
    if (p.bin_sizes[i] < 1) throw std::invalid_argument("bin sizes must be >= 1");
    total += k[i];
    covered += p.bin_sizes[i];
  }
  if (covered > p.m) throw std::invalid_argument("bins cover more modes than available");
  if (total != p.n) throw std::invalid_argument("pattern total differs from photon number");
}

}  // namespace

double haar_fock_distinguishable(const std::vector<int>& k, const HaarParams& p) {
  check_pattern(k, p);
  if (p.n == 0) return 1.0;
  double log_p = std::lgamma(p.n + 1.0);
  for (std::size_t i = 0; i < k.size(); ++i) {
    log_p -= std::lgamma(k[i] + 1.0);
    log_p += k[i] * (std::log(static_cast<double>(p.bin_sizes[i])) - std::log(static_cast<double>(p.m)));
  }
  return std::exp(log_p);
}

double haar_fock_indistinguishable(const std::vector<int>& k, const HaarParams& p) {
  check_pattern(k, p);
  if (p.n == 0) return 1.0;
  double log_p = std::lgamma(p.n + 1.0);
  for (std::size_t i = 0; i < k.size(); ++i) {
    double size = p.bin_sizes[i];
    log_p -= std::lgamma(k[i] + 1.0);
    log_p += k[i] * (std::log(size) - std::log(static_cast<double>(p.m)));
    // prod_{l=0}^{k_i-1} (1 + l/|K_i|) = Gamma(|K_i|+k_i) / (Gamma(|K_i|) |K_i|^{k_i})
    log_p += std::lgamma(size + k[i]) - std::lgamma(size) - k[i] * std::log(size);
  }
  log_p -= std::lgamma(static_cast<double>(p.m) + p.n) - std::lgamma(static_cast<double>(p.m)) -
           p.n * std::log(static_cast<double>(p.m));
  return std::exp(log_p);
}

double gaussian_asymptotic(const std::vector<int>& k, const HaarParams& p) {
  check_pattern(k, p);
  if (p.n < 1) throw std::invalid_argument("gaussian asymptotic needs n >= 1");
  if (p.sigma != 0 && p.sigma != 1) throw std::invalid_argument("sigma must be 0 or 1");
  const double scale = 1.0 + p.sigma * p.particle_density();
  const int b = p.bin_count();
  double exponent = 0.0;
  double root_q = 1.0;
  for (int i = 0; i < b; ++i) {
    double q = static_cast<double>(p.bin_sizes[i]) / p.m;
    double x = static_cast<double>(k[i]) / p.n;
    exponent += (x - q) * (x - q) / (2.0 * scale * q);
    root_q *= std::sqrt(q);
  }
  double norm = std::pow(2.0 * M_PI * scale * p.n, 0.5 * (b - 1)) * root_q;
  return std::exp(-p.n * exponent) / norm;
}

double haar_gbs_asymptotic(const std::vector<int>& k, int m, double r,
                           const std::vector<int>& bin_sizes, int sigma) {
  int covered = 0;
  for (int size : bin_sizes) covered += size;
  if (covered != m) {
    throw std::invalid_argument("haar_gbs_asymptotic requires bins covering all modes");
  }
  int n = 0;
  for (int ki : k) {
    if (ki < 0) throw std::invalid_argument("negative count in pattern");
    n += ki;
  }
  if (n % 2 != 0) return 0.0;  // squeezed vacuum carries even photon totals only
  HaarParams p{n, m, bin_sizes, sigma};
  double fock = sigma == 1 ? haar_fock_indistinguishable(k, p) : haar_fock_distinguishable(k, p);
  if (n == 0) return std::exp(m * std::log(1.0 / std::cosh(r))) * fock;
  return total_pair_distribution(m, r, n / 2) * fock;
}

Matrix random_haar_unitary(int m, std::uint64_t seed) {
  if (m < 1) throw std::invalid_argument("mode count must be >= 1");
  Rng rng(seed);
  Matrix ginibre(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) ginibre(i, j) = rng.complex_normal();
  }
  Eigen::HouseholderQR<Matrix> qr(ginibre);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fold in the phases of the R diagonal; without this correction the QR
  // output is not Haar distributed.
  for (int j = 0; j < m; ++j) {
    Complex d = r(j, j);
    q.col(j) *= d / std::abs(d);
  }
  return q;
}

HaarAverageResult monte_carlo_haar_average(
    const RealVector& r, const BinPartition& partition, int n, int trials, std::uint64_t seed,
    const std::function<Matrix(int)>& unitary_source) {
  if (trials < 2) throw std::invalid_argument("need at least two trials");
  const int m = partition.modes();
  if (r.size() != m) throw std::invalid_argument("squeezing length must equal mode count");

  std::vector<int> extents(partition.bin_count(), n + 1);
  GridShape shape(extents);
  std::vector<std::vector<double>> tables(trials);
  std::vector<std::string> failures(trials);

  auto run_trial = [&](int t) {
    try {
      Matrix u = unitary_source ? unitary_source(t) : random_haar_unitary(m, derive_seed(seed, t));
      SqueezedCharFn model(SqueezedInput(r), TransferMatrix(std::move(u)), partition);
      BinnedDistribution dist = binned_distribution(model, partition, n);
      tables[t] = std::move(dist.probs);
    } catch (const std::exception& e) {
      failures[t] = e.what();
    }
  };

  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  if (static_cast<int>(workers) > trials) workers = trials;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      for (int t = static_cast<int>(w); t < trials; t += static_cast<int>(workers)) run_trial(t);
    });
  }
  for (auto& th : pool) th.join();

  for (int t = 0; t < trials; ++t) {
    if (!failures[t].empty()) {
      throw NumericError("Haar trial " + std::to_string(t) + " (seed " +
                         std::to_string(derive_seed(seed, t)) + ") failed: " + failures[t]);
    }
  }

  HaarAverageResult result{partition, std::vector<int>(partition.bin_count(), n),
                           std::vector<double>(shape.size(), 0.0),
                           std::vector<double>(shape.size(), 0.0), trials};
  for (int t = 0; t < trials; ++t) {
    for (std::size_t i = 0; i < shape.size(); ++i) result.mean[i] += tables[t][i];
  }
  for (std::size_t i = 0; i < shape.size(); ++i) result.mean[i] /= trials;
  for (int t = 0; t < trials; ++t) {
    for (std::size_t i = 0; i < shape.size(); ++i) {
      double d = tables[t][i] - result.mean[i];
      result.std_error[i] += d * d;
    }
  }
  for (std::size_t i = 0; i < shape.size(); ++i) {
    result.std_error[i] = std::sqrt(result.std_error[i] / (trials - 1.0) / trials);
  }
  return result;
}

}  // namespace gbs
