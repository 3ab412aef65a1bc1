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

#include <cmath>
#include <functional>
#include <vector>

#include <doctest.h>

#include "gbs/gbs_core.hpp"
#include "gbs/haar.hpp"

using gbs::BinPartition;
using gbs::HaarParams;
using gbs::Matrix;
using gbs::RealVector;

namespace {

// all patterns k >= 0 with sum(k) = n over b bins
void patterns(int n, int b, std::vector<int>& k, int at,
              const std::function<void(const std::vector<int>&)>& fn) {
  if (at == b - 1) {
    k[at] = n;
    fn(k);
    return;
  }
  for (int c = 0; c <= n; ++c) {
    k[at] = c;
    patterns(n - c, b, k, at + 1, fn);
  }
}

}  // namespace

TEST_SUITE("haar") {

TEST_CASE("distinguishable law: multinomial values and normalization") {
  HaarParams p{2, 2, {1, 1}, 0};
  CHECK(gbs::haar_fock_distinguishable({1, 1}, p) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(gbs::haar_fock_distinguishable({2, 0}, p) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(gbs::haar_fock_distinguishable({0, 2}, p) == doctest::Approx(0.25).epsilon(1e-12));

  HaarParams p0{0, 3, {1, 2}, 0};
  CHECK(gbs::haar_fock_distinguishable({0, 0}, p0) == 1.0);

  for (int n : {1, 4, 6}) {
    HaarParams pn{n, 8, {3, 5}, 0};
    double sum = 0.0;
    std::vector<int> k(2);
    patterns(n, 2, k, 0, [&](const std::vector<int>& kk) {
      sum += gbs::haar_fock_distinguishable(kk, pn);
    });
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(gbs::haar_fock_distinguishable({1, 0}, p), std::invalid_argument);
}

TEST_CASE("indistinguishable law: bunching values and normalization") {
  HaarParams p{2, 2, {1, 1}, 1};
  CHECK(gbs::haar_fock_indistinguishable({1, 1}, p) == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(gbs::haar_fock_indistinguishable({2, 0}, p) == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(gbs::haar_fock_indistinguishable({0, 2}, p) == doctest::Approx(1.0 / 3).epsilon(1e-12));

  // zero-count bins contribute empty products
  HaarParams pz{3, 6, {2, 4}, 1};
  double direct = gbs::haar_fock_indistinguishable({0, 3}, pz);
  double manual = gbs::haar_fock_distinguishable({0, 3}, pz) *
                  ((1.0) * (1.0 + 1.0 / 4) * (1.0 + 2.0 / 4)) /
                  ((1.0) * (1.0 + 1.0 / 6) * (1.0 + 2.0 / 6));
  CHECK(direct == doctest::Approx(manual).epsilon(1e-12));

  for (int n : {2, 4, 6}) {
    for (int m : {4, 8}) {
      HaarParams pn{n, m, {m / 2, m / 2}, 1};
      double sum = 0.0;
      std::vector<int> k(2);
      patterns(n, 2, k, 0, [&](const std::vector<int>& kk) {
        sum += gbs::haar_fock_indistinguishable(kk, pn);
      });
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("closed forms depend only on bin sizes, not mode assignment") {
  // identical bin sizes, different counts order: symmetric swap
  HaarParams p{5, 10, {4, 6}, 1};
  HaarParams swapped{5, 10, {6, 4}, 1};
  CHECK(gbs::haar_fock_indistinguishable({2, 3}, p) ==
        doctest::Approx(gbs::haar_fock_indistinguishable({3, 2}, swapped)).epsilon(1e-14));
}

TEST_CASE("bosonic bunching enhancement for a full bunch into a small bin") {
  for (int n : {2, 4, 6}) {
    HaarParams pi{n, 8, {3, 5}, 1};
    HaarParams pd{n, 8, {3, 5}, 0};
    std::vector<int> bunch = {n, 0};
    CHECK(gbs::haar_fock_indistinguishable(bunch, pi) >=
          gbs::haar_fock_distinguishable(bunch, pd));
  }
}

TEST_CASE("gaussian asymptotic: multinomial limit, peak position, accuracy") {
  HaarParams p{60, 120, {60, 60}, 1};
  // peak at k = n q
  double peak = gbs::gaussian_asymptotic({30, 30}, p);
  CHECK(peak >= gbs::gaussian_asymptotic({20, 40}, p));
  CHECK(peak >= gbs::gaussian_asymptotic({36, 24}, p));

  // sigma = 0 reduces to the de Moivre-Laplace form: scale = 1
  HaarParams pd{60, 120, {60, 60}, 0};
  double dm = std::exp(-60.0 * 0.0) / std::sqrt(2.0 * M_PI * 60.0 * 0.25);
  CHECK(gbs::gaussian_asymptotic({30, 30}, pd) == doctest::Approx(dm).epsilon(1e-12));

  // within 5% of the exact indistinguishable value at the peak
  double exact = gbs::haar_fock_indistinguishable({30, 30}, p);
  CHECK(std::abs(peak - exact) / exact <= 0.05);
}

TEST_CASE("haar gbs law: parity, normalization, composition") {
  CHECK(gbs::haar_gbs_asymptotic({1, 2}, 20, 0.4, {10, 10}, 1) == 0.0);
  CHECK(gbs::haar_gbs_asymptotic({3, 0}, 20, 0.4, {10, 10}, 1) == 0.0);

  double composed = gbs::haar_gbs_asymptotic({1, 1}, 20, 0.4, {10, 10}, 1);
  HaarParams p{2, 20, {10, 10}, 1};
  double direct = gbs::total_pair_distribution(20, 0.4, 1) * gbs::haar_fock_indistinguishable({1, 1}, p);
  CHECK(composed == doctest::Approx(direct).epsilon(1e-14));

  // total mass: sum over all patterns equals sum over even totals of P_m(n/2)
  double sum = 0.0;
  const int cap = 60;
  std::vector<int> k(2);
  for (int n = 0; n <= cap; ++n) {
    patterns(n, 2, k, 0, [&](const std::vector<int>& kk) {
      sum += gbs::haar_gbs_asymptotic(kk, 20, 0.4, {10, 10}, 1);
    });
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-8));

  CHECK_THROWS_AS(gbs::haar_gbs_asymptotic({1, 1}, 20, 0.4, {5, 10}, 1), std::invalid_argument);
}

TEST_CASE("random_haar_unitary: unitarity, determinism, first moment") {
  Matrix u = gbs::random_haar_unitary(7, 42);
  CHECK((u * u.adjoint() - Matrix::Identity(7, 7)).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((u.adjoint() * u - Matrix::Identity(7, 7)).cwiseAbs().maxCoeff() <= 1e-12);

  Matrix again = gbs::random_haar_unitary(7, 42);
  CHECK((u - again).cwiseAbs().maxCoeff() == 0.0);
  Matrix other = gbs::random_haar_unitary(7, 43);
  CHECK((u - other).cwiseAbs().maxCoeff() > 1e-3);

  // E|U_11|^2 = 1/m; |U_11|^2 ~ Beta(1, m-1) has variance (m-1)/(m^2 (m+1))
  const int m = 4, draws = 10000;
  double sum = 0.0;
  for (int t = 0; t < draws; ++t) {
    Matrix v = gbs::random_haar_unitary(m, gbs::derive_seed(900, t));
    sum += std::norm(v(0, 0));
  }
  double mean = sum / draws;
  double sigma = std::sqrt((m - 1.0) / (double(m) * m * (m + 1.0)) / draws);
  CHECK(std::abs(mean - 1.0 / m) <= 3.0 * sigma);
}

TEST_CASE("monte carlo haar average: degenerate fixed-unitary case") {
  RealVector r = RealVector::Constant(3, 0.35);
  BinPartition partition({{0, 1}, {2}}, 3);
  Matrix fixed = gbs::random_haar_unitary(3, 12);
  auto source = [&](int) { return fixed; };
  auto result = gbs::monte_carlo_haar_average(r, partition, 8, 5, 1, source);

  gbs::SqueezedCharFn model(gbs::SqueezedInput(r), gbs::TransferMatrix(fixed), partition);
  gbs::BinnedDistribution single = gbs::binned_distribution(model, partition, 8);
  for (std::size_t i = 0; i < result.mean.size(); ++i) {
    CHECK(result.mean[i] == doctest::Approx(single.probs[i]).epsilon(1e-12));
    CHECK(result.std_error[i] <= 1e-14);
  }
}

TEST_CASE("monte carlo haar average: swapping equal-size bins is a symmetry") {
  RealVector r = RealVector::Constant(4, 0.3);
  BinPartition ab({{0, 1}, {2, 3}}, 4);
  BinPartition ba({{2, 3}, {0, 1}}, 4);
  auto res_ab = gbs::monte_carlo_haar_average(r, ab, 6, 40, 7);
  auto res_ba = gbs::monte_carlo_haar_average(r, ba, 6, 40, 7);
  gbs::GridShape shape = res_ab.shape();
  std::vector<int> k;
  for (std::size_t i = 0; i < res_ab.mean.size(); ++i) {
    shape.unrank(i, k);
    std::vector<int> swapped = {k[1], k[0]};
    double difference = std::abs(res_ab.mean[i] - res_ba.mean[shape.index(swapped)]);
    double scale = res_ab.std_error[i] + res_ba.std_error[shape.index(swapped)] + 1e-12;
    CHECK(difference <= 6.0 * scale);
  }
}

TEST_CASE("monte carlo matches the composed asymptotic at small scale") {
  // m = 6, identical squeezing: the Haar mean must sit within a few
  // standard errors of P_m(n/2) <P_fock>. Odd cutoff: the alias period
  // n + 1 is then even, which keeps photon parity exact in the table.
  RealVector r = RealVector::Constant(6, 0.3);
  BinPartition partition({{0, 1, 2}, {3, 4, 5}}, 6);
  auto result = gbs::monte_carlo_haar_average(r, partition, 13, 60, 2026);
  gbs::GridShape shape = result.shape();
  std::vector<int> k;
  for (std::size_t i = 0; i < result.mean.size(); ++i) {
    shape.unrank(i, k);
    if (k[0] + k[1] > 4) continue;
    double asym = gbs::haar_gbs_asymptotic(k, 6, 0.3, {3, 3}, 1);
    // additive slack: the n = 13 table aliases ~1e-8 of tail mass onto the
    // vacuum pattern, whose across-trial variance is zero
    CHECK(std::abs(result.mean[i] - asym) <= 4.0 * result.std_error[i] + 5e-8);
  }
}

}  // TEST_SUITE
