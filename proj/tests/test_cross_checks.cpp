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

// Cross-module checks: every analytic characteristic function against the
// brute-force Fock oracle.

#include <cmath>

#include <doctest.h>

#include "gbs/fock_oracle.hpp"
#include "gbs/haar.hpp"
#include "gbs/instance.hpp"

using gbs::BinnedDistribution;
using gbs::BinPartition;
using gbs::Complex;
using gbs::GbsInstance;
using gbs::InputModel;
using gbs::Matrix;
using gbs::RealVector;
using gbs::TransferMatrix;

namespace {

Matrix beamsplitter_50_50() {
  Matrix l(2, 2);
  l << 1.0, 1.0, 1.0, -1.0;
  return l / std::sqrt(2.0);
}

// X(eta) reconstructed from an oracle table; truncation shows up as a
// deviation of the order of the lost mass.
Complex char_fn_from_table(const BinnedDistribution& dist, const RealVector& eta) {
  gbs::GridShape shape = dist.shape();
  std::vector<int> k;
  Complex x = 0.0;
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (dist.probs[i] == 0.0) continue;
    shape.unrank(i, k);
    double phase = 0.0;
    for (int a = 0; a < dist.bin_count(); ++a) phase += eta[a] * k[a];
    x += dist.probs[i] * std::polar(1.0, phase);
  }
  return x;
}

}  // namespace

TEST_SUITE("cross_checks") {

TEST_CASE("squeezed X vs oracle: beamsplitter with one dark port") {
  RealVector r(2);
  r << 0.5, 0.0;
  GbsInstance inst(InputModel::Squeezed, r, TransferMatrix(beamsplitter_50_50()));
  BinPartition partition({{0}, {1}}, 2);
  gbs::OracleOptions opts;
  opts.table_cutoff = 24;
  opts.input_total_max = 24;  // r = 0.5 needs ~12 pairs for 1e-9 truncation
  BinnedDistribution oracle = gbs::oracle_binned_distribution(inst, partition, opts);
  CHECK(oracle.tail_bound <= 1e-8);

  auto model = gbs::make_char_fn_model(inst, partition);
  gbs::BranchTracker tracker(*model);
  for (double a : {0.7, 2.4}) {
    for (double b : {0.3, 1.9}) {
      RealVector eta(2);
      eta << a, b;
      gbs::BranchTracker fresh(*model);
      Complex analytic = fresh.advance(eta);
      CHECK(std::abs(analytic - char_fn_from_table(oracle, eta)) <= 1e-8);
    }
  }
}

TEST_CASE("squeezed X vs oracle: unitary networks up to three modes") {
  // truncation at 16 pairs keeps the series tail below 1e-9 for r <= 0.6
  for (int m : {1, 2, 3}) {
    Matrix u = gbs::random_haar_unitary(m, 100 + m);
    RealVector r(m);
    for (int i = 0; i < m; ++i) r[i] = 0.6 - 0.15 * i;
    GbsInstance inst(InputModel::Squeezed, r, TransferMatrix(u));
    std::vector<std::vector<int>> bins;
    for (int i = 0; i < m; ++i) bins.push_back({i});
    BinPartition partition(bins, m);
    gbs::OracleOptions opts;
    opts.table_cutoff = 32;
    opts.input_total_max = 32;
    BinnedDistribution oracle = gbs::oracle_binned_distribution(inst, partition, opts);
    CHECK(oracle.tail_bound <= 1e-9);

    auto model = gbs::make_char_fn_model(inst, partition);
    RealVector eta(m);
    for (int i = 0; i < m; ++i) eta[i] = 0.9 + 0.7 * i;
    gbs::BranchTracker tracker(*model);
    Complex analytic = tracker.advance(eta);
    CHECK(std::abs(analytic - char_fn_from_table(oracle, eta)) <= 1e-8);
  }
}

TEST_CASE("binned table vs oracle: three modes, mixed bins") {
  RealVector r = RealVector::Constant(3, 0.3);
  Matrix u = gbs::random_haar_unitary(3, 42);
  GbsInstance inst(InputModel::Squeezed, r, TransferMatrix(u));
  BinPartition partition({{0}, {1, 2}}, 3);

  gbs::OracleOptions opts;
  opts.table_cutoff = 12;
  opts.input_total_max = 16;
  BinnedDistribution oracle = gbs::oracle_binned_distribution(inst, partition, opts);
  auto model = gbs::make_char_fn_model(inst, partition);
  BinnedDistribution analytic = gbs::binned_distribution(*model, partition, 12);
  CHECK(gbs::tv_distance(analytic, oracle) <= 1e-6);
}

TEST_CASE("thermal vs oracle: random unitary and lossy networks") {
  RealVector nbar(2);
  nbar << 0.5, 0.5;
  for (bool lossy : {false, true}) {
    Matrix l = gbs::random_haar_unitary(2, lossy ? 8 : 9);
    if (lossy) l *= 0.85;
    GbsInstance inst(InputModel::Thermal, nbar, TransferMatrix(l));
    BinPartition partition({{0}, {1}}, 2);
    gbs::OracleOptions opts;
    opts.table_cutoff = 12;
    opts.input_total_max = 22;  // geometric tails at nbar = 0.5 decay slowly
    opts.weight_floor = 1e-14;
    BinnedDistribution oracle = gbs::oracle_binned_distribution(inst, partition, opts);
    auto model = gbs::make_char_fn_model(inst, partition);
    for (double a : {0.8, 2.1}) {
      RealVector eta(2);
      eta << a, 1.3;
      gbs::BranchTracker tracker(*model);
      Complex analytic = tracker.advance(eta);
      CHECK(std::abs(analytic - char_fn_from_table(oracle, eta)) <= 1e-6);
    }
    BinnedDistribution table = gbs::binned_distribution(*model, partition, 12);
    CHECK(gbs::tv_distance(table, oracle) <= 2e-6);
  }
}

TEST_CASE("squashed vs oracle: mixture of squeezed thermal states") {
  RealVector rs(2);
  rs << 0.13, 0.1;
  Matrix l = 0.9 * gbs::random_haar_unitary(2, 19);
  GbsInstance inst(InputModel::Squashed, rs, TransferMatrix(l));
  BinPartition partition({{0}, {1}}, 2);
  gbs::OracleOptions opts;
  opts.table_cutoff = 10;
  opts.input_total_max = 14;
  BinnedDistribution oracle = gbs::oracle_binned_distribution(inst, partition, opts);
  CHECK(oracle.tail_bound <= 1e-7);
  auto model = gbs::make_char_fn_model(inst, partition);
  BinnedDistribution table = gbs::binned_distribution(*model, partition, 10);
  CHECK(gbs::tv_distance(table, oracle) <= 1e-6);
}

TEST_CASE("partial distinguishability vs oracle on the expanded network") {
  RealVector r = RealVector::Constant(2, 0.3);
  for (double eta_ind : {0.0, 0.5, 1.0}) {
    GbsInstance inst(InputModel::Partial, r, TransferMatrix(beamsplitter_50_50()), eta_ind);
    BinPartition partition({{0}, {1}}, 2);
    gbs::OracleOptions opts;
    opts.table_cutoff = 10;
    opts.input_total_max = 16;
    BinnedDistribution oracle = gbs::oracle_binned_distribution(inst, partition, opts);
    auto model = gbs::make_char_fn_model(inst, partition);
    BinnedDistribution analytic = gbs::binned_distribution(*model, partition, 10);
    CHECK(gbs::tv_distance(analytic, oracle) <= 1e-6);
  }
}

}  // TEST_SUITE
