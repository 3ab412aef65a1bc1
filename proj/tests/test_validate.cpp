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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <doctest.h>

#include "gbs/numerics.hpp"
#include "gbs/validate.hpp"

using gbs::BinnedDistribution;
using gbs::BinPartition;
using gbs::SampleSet;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
  std::string path = "/tmp/" + name;
  std::ofstream out(path);
  out << content;
  return path;
}

BinnedDistribution delta_distribution(const std::vector<int>& at, int n, int bins) {
  std::vector<std::vector<int>> bin_spec;
  for (int b = 0; b < bins; ++b) bin_spec.push_back({b});
  BinPartition partition(bin_spec, bins);
  std::vector<int> extents(bins, n + 1);
  gbs::GridShape shape(extents);
  BinnedDistribution dist{partition, std::vector<int>(bins, n),
                          std::vector<double>(shape.size(), 0.0), 0.0, 0.0, 0.0};
  dist.probs[shape.index(at)] = 1.0;
  return dist;
}

}  // namespace

TEST_SUITE("validate") {

TEST_CASE("regularized gamma / chi-square p-values match table values") {
  // classic critical points: P[X > 3.841; 1 dof] = 0.05, P[X > 5.991; 2] = 0.05
  CHECK(gbs::chi_square_p_value(3.841459, 1) == doctest::Approx(0.05).epsilon(1e-5));
  CHECK(gbs::chi_square_p_value(5.991465, 2) == doctest::Approx(0.05).epsilon(1e-5));
  CHECK(gbs::chi_square_p_value(6.634897, 1) == doctest::Approx(0.01).epsilon(1e-5));
  CHECK(gbs::chi_square_p_value(18.307038, 10) == doctest::Approx(0.05).epsilon(1e-5));
  CHECK(gbs::chi_square_p_value(0.0, 5) == 1.0);
  // chi2 with 2 dof is exponential(1/2): closed form e^{-x/2}
  CHECK(gbs::chi_square_p_value(7.0, 2) == doctest::Approx(std::exp(-3.5)).epsilon(1e-12));
}

TEST_CASE("ingest: jsonl happy path and error reporting") {
  std::string good = write_temp("gbs_samples_good.jsonl", "[0,2,0]\n[1,0,3]\n\n[0,0,0]\n");
  SampleSet samples = gbs::ingest_samples(good);
  CHECK(samples.columns == 3);
  CHECK(samples.count() == 3);
  CHECK(samples.records[1][2] == 3);

  std::string empty = write_temp("gbs_samples_empty.jsonl", "\n\n");
  CHECK_THROWS_AS(gbs::ingest_samples(empty), std::invalid_argument);

  std::string negative = write_temp("gbs_samples_neg.jsonl", "[0,1]\n[0,-1]\n");
  CHECK_THROWS_WITH_AS(gbs::ingest_samples(negative),
                       doctest::Contains("line 2"), std::invalid_argument);

  std::string ragged = write_temp("gbs_samples_ragged.jsonl", "[0,1]\n[0,1,2]\n");
  CHECK_THROWS_WITH_AS(gbs::ingest_samples(ragged),
                       doctest::Contains("line 2"), std::invalid_argument);

  std::string csv = write_temp("gbs_samples.csv", "0,2,0\n1,0,3\n");
  SampleSet from_csv = gbs::ingest_samples(csv, true);
  CHECK(from_csv.count() == 2);
  CHECK(from_csv.records[0][1] == 2);
}

TEST_CASE("bin_samples: accumulation and frequencies") {
  SampleSet samples;
  samples.columns = 3;
  samples.records = {{1, 0, 2}, {1, 0, 2}, {0, 1, 0}};
  BinPartition partition({{0, 1}, {2}}, 3);
  gbs::EmpiricalTable table = gbs::bin_samples(samples, partition);
  CHECK(table.frequency({1, 2}) == doctest::Approx(2.0 / 3).epsilon(1e-12));
  CHECK(table.frequency({1, 0}) == doctest::Approx(1.0 / 3).epsilon(1e-12));
  double sum = 0.0;
  for (auto c : table.counts) sum += static_cast<double>(c) / table.total;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("tv distance: identical tables and disjoint deltas") {
  BinnedDistribution d0 = delta_distribution({0}, 3, 1);
  BinnedDistribution d1 = delta_distribution({1}, 3, 1);
  CHECK(gbs::tv_distance(d0, d0) == 0.0);
  CHECK(gbs::tv_distance(d0, d1) == doctest::Approx(1.0).epsilon(1e-12));

  SampleSet zeros;
  zeros.columns = 1;
  zeros.records.assign(10, {0});
  gbs::EmpiricalTable table = gbs::bin_samples(zeros, BinPartition({{0}}, 1));
  CHECK(gbs::tv_distance(d0, table) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(gbs::tv_distance(d1, table) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("generate_samples: size, determinism, convergence") {
  BinnedDistribution dist = delta_distribution({2}, 4, 1);
  SampleSet none = gbs::generate_samples(dist, 0, 5);
  CHECK(none.count() == 0);

  SampleSet all_same = gbs::generate_samples(dist, 25, 5);
  for (const auto& rec : all_same.records) CHECK(rec[0] == 2);

  // empirical TV to the source table shrinks with the sample count
  BinPartition partition({{0}, {1}}, 2);
  std::vector<int> extents = {5, 9};
  gbs::GridShape shape(extents);
  BinnedDistribution wide{partition, {4, 8}, std::vector<double>(shape.size(), 0.0), 0.0, 0.0, 0.0};
  gbs::Rng rng(33);
  double total = 0.0;
  for (auto& p : wide.probs) total += (p = rng.uniform());
  for (auto& p : wide.probs) p /= total;

  SampleSet big = gbs::generate_samples(wide, 100000, 17);
  SampleSet rerun = gbs::generate_samples(wide, 100000, 17);
  CHECK(big.records == rerun.records);
  gbs::EmpiricalTable table = gbs::bin_samples(big, partition);
  CHECK(gbs::tv_distance(wide, table) <= 0.02);
}

TEST_CASE("chi-square: pooling and healthy p-value at the true hypothesis") {
  BinPartition partition({{0}}, 1);
  std::vector<double> p = {0.5, 0.3, 0.15, 0.04, 0.009, 0.001};
  BinnedDistribution dist{partition, {5}, p, 0.0, 0.0, 0.0};
  SampleSet samples = gbs::generate_samples(dist, 2000, 99);
  gbs::EmpiricalTable table = gbs::bin_samples(samples, BinPartition({{0}}, 1));
  auto res = gbs::chi_square(dist, table);
  CHECK(res.pooled_cells >= 1);  // expected count of the last cell is 2
  CHECK(res.dof >= 3);
  CHECK(res.p_value > 1e-4);
  CHECK(res.p_value <= 1.0);
}

TEST_CASE("chi-square p-value is roughly uniform under the true hypothesis") {
  BinPartition partition({{0}}, 1);
  std::vector<double> p = {0.35, 0.3, 0.2, 0.1, 0.05};
  BinnedDistribution dist{partition, {4}, p, 0.0, 0.0, 0.0};
  const int reps = 200, draws = 5000;
  std::vector<double> pvals;
  for (int rep = 0; rep < reps; ++rep) {
    SampleSet samples = gbs::generate_samples(dist, draws, gbs::derive_seed(4242, rep));
    auto res = gbs::chi_square(dist, gbs::bin_samples(samples, partition));
    pvals.push_back(res.p_value);
  }
  std::sort(pvals.begin(), pvals.end());
  double ks = 0.0;
  for (int i = 0; i < reps; ++i) {
    ks = std::max(ks, std::abs(pvals[i] - (i + 0.5) / reps));
  }
  // KS critical value at alpha = 0.001 for 200 draws is about 0.138; the
  // chi-square approximation adds some discreteness slack
  CHECK(ks <= 0.15);
}

TEST_CASE("log-likelihood ratio prefers the generating distribution") {
  BinPartition partition({{0}}, 1);
  std::vector<double> pa = {0.6, 0.25, 0.1, 0.05};
  std::vector<double> pb = {0.25, 0.25, 0.25, 0.25};
  BinnedDistribution a{partition, {3}, pa, 0.0, 0.0, 0.0};
  BinnedDistribution b{partition, {3}, pb, 0.0, 0.0, 0.0};
  SampleSet samples = gbs::generate_samples(a, 5000, 3);
  double llr = gbs::log_likelihood_ratio(samples, partition, a, b);
  CHECK(llr > 0.0);
  CHECK(gbs::log_likelihood_ratio(samples, partition, b, a) == doctest::Approx(-llr));
}

TEST_CASE("binning is invariant under mode relabeling within a bin") {
  SampleSet samples;
  samples.columns = 4;
  gbs::Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    samples.records.push_back({int(rng.next_u64() % 3), int(rng.next_u64() % 3),
                               int(rng.next_u64() % 3), int(rng.next_u64() % 3)});
  }
  SampleSet swapped = samples;
  for (auto& rec : swapped.records) std::swap(rec[0], rec[1]);  // both in bin 0

  BinPartition partition({{0, 1}, {2, 3}}, 4);
  gbs::EmpiricalTable ta = gbs::bin_samples(samples, partition);
  gbs::EmpiricalTable tb = gbs::bin_samples(swapped, partition);
  CHECK(ta.extents == tb.extents);
  CHECK(ta.counts == tb.counts);
}

TEST_CASE("validation report carries both hypotheses and serializes") {
  BinnedDistribution a = delta_distribution({0}, 2, 1);
  std::vector<double> pb = {0.5, 0.3, 0.2};
  BinnedDistribution b{BinPartition({{0}}, 1), {2}, pb, 0.0, 0.0, 0.0};
  SampleSet samples = gbs::generate_samples(b, 400, 12);
  auto report = gbs::validate_samples(samples, BinPartition({{0}}, 1), b, a, "true", "delta");
  CHECK(report.hypotheses.size() == 2);
  CHECK(report.log_likelihood_ratio > 0.0);
  CHECK(report.hypotheses[0].tv < report.hypotheses[1].tv);
  std::string json = report.to_json();
  CHECK(json.find("log_likelihood_ratio") != std::string::npos);
}

}  // TEST_SUITE
