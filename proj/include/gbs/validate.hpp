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
#include <string>
#include <vector>

#include "gbs/binned_dist.hpp"
#include "gbs/types.hpp"

namespace gbs {

/// Ingested per-mode photon-count records.
struct SampleSet {
  int columns = 0;
  std::vector<std::vector<int>> records;
  std::string provenance;

  std::size_t count() const { return records.size(); }
};

/// Reads one JSON integer array per line (JSONL), or CSV rows when
/// csv = true. Malformed lines raise an error naming the line number.
SampleSet ingest_samples(const std::string& path, bool csv = false);

/// Empirical joint table of binned counts.
struct EmpiricalTable {
  std::vector<int> extents;  // per-axis size = max observed count + 1
  std::vector<std::int64_t> counts;  // row-major
  std::int64_t total = 0;

  GridShape shape() const { return GridShape(extents); }
  double frequency(const std::vector<int>& k) const;
};

EmpiricalTable bin_samples(const SampleSet& samples, const BinPartition& partition);

/// TV distance between a hypothesis table and an empirical table; counts
/// outside the hypothesis support and the hypothesis tail_bound meet in a
/// single overflow cell.
double tv_distance(const BinnedDistribution& hypothesis, const EmpiricalTable& empirical);

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  int pooled_cells = 0;   // cells with expected count < 5 pooled into overflow
};

/// Pearson chi-square of observed counts against the hypothesis, with the
/// standard expected-count >= 5 pooling rule; the overflow cell carries the
/// hypothesis tail mass plus everything pooled.
ChiSquareResult chi_square(const BinnedDistribution& hypothesis, const EmpiricalTable& observed);

/// Sum over records of log P_a(binned k) - log P_b(binned k). Positive
/// values favor hypothesis a. Records outside a table's support score its
/// tail_bound (floored away from zero).
double log_likelihood_ratio(const SampleSet& samples, const BinPartition& partition,
                            const BinnedDistribution& hyp_a, const BinnedDistribution& hyp_b);

/// Categorical sampling from a binned distribution; records have one
/// column per bin. Reproducible for a fixed seed.
SampleSet generate_samples(const BinnedDistribution& dist, int count, std::uint64_t seed);

void write_samples_jsonl(const SampleSet& samples, const std::string& path);

struct HypothesisScore {
  std::string name;
  double tv = 0.0;
  ChiSquareResult chi2;
};

struct ValidationReport {
  std::vector<HypothesisScore> hypotheses;
  double log_likelihood_ratio = 0.0;  // a vs b
  std::int64_t sample_count = 0;
  std::string binning_spec;
  std::vector<std::string> warnings;

  std::string to_json() const;
};

ValidationReport validate_samples(const SampleSet& samples, const BinPartition& partition,
                                  const BinnedDistribution& hyp_a,
                                  const BinnedDistribution& hyp_b,
                                  const std::string& name_a = "hypothesis_a",
                                  const std::string& name_b = "hypothesis_b");

}  // namespace gbs
