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

#include "gbs/validate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gbs/numerics.hpp"

namespace gbs {

namespace {

constexpr double kProbabilityFloor = 1e-300;
constexpr double kPoolingThreshold = 5.0;  // minimum expected count per cell

std::vector<int> parse_csv_row(const std::string& line, int line_no) {
  std::vector<int> record;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      record.push_back(std::stoi(cell));
    } catch (const std::exception&) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": cannot parse \"" + cell +
                                  "\" as an integer");
    }
  }
  return record;
}

std::vector<int> parse_json_row(const std::string& line, int line_no) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(line);
  } catch (const std::exception& e) {
    throw std::invalid_argument("line " + std::to_string(line_no) + ": " + e.what());
  }
  if (!doc.is_array()) {
    throw std::invalid_argument("line " + std::to_string(line_no) + ": expected a JSON array");
  }
  std::vector<int> record;
  for (const auto& v : doc) {
    if (!v.is_number_integer()) {
      throw std::invalid_argument("line " + std::to_string(line_no) +
                                  ": expected integer photon counts");
    }
    record.push_back(v.get<int>());
  }
  return record;
}

}  // namespace

SampleSet ingest_samples(const std::string& path, bool csv) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  SampleSet samples;
  samples.provenance = path;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<int> record = csv ? parse_csv_row(line, line_no) : parse_json_row(line, line_no);
    for (int c : record) {
      if (c < 0) {
        throw std::invalid_argument("line " + std::to_string(line_no) + ": negative photon count");
      }
    }
    if (samples.records.empty()) {
      samples.columns = static_cast<int>(record.size());
      if (samples.columns == 0) {
        throw std::invalid_argument("line " + std::to_string(line_no) + ": empty record");
      }
    } else if (static_cast<int>(record.size()) != samples.columns) {
      throw std::invalid_argument("line " + std::to_string(line_no) +
                                  ": record length differs from previous lines");
    }
    samples.records.push_back(std::move(record));
  }
  if (samples.records.empty()) throw std::invalid_argument("no records in " + path);
  return samples;
}

EmpiricalTable bin_samples(const SampleSet& samples, const BinPartition& partition) {
  if (partition.modes() != samples.columns) {
    throw std::invalid_argument("partition does not match the sample columns");
  }
  const int bins = partition.bin_count();
  std::vector<std::vector<int>> binned(samples.records.size(), std::vector<int>(bins, 0));
  std::vector<int> extents(bins, 1);
  for (std::size_t rec = 0; rec < samples.records.size(); ++rec) {
    for (int b = 0; b < bins; ++b) {
      int count = 0;
      for (int mode : partition.bin(b)) count += samples.records[rec][mode];
      binned[rec][b] = count;
      extents[b] = std::max(extents[b], count + 1);
    }
  }
  EmpiricalTable table;
  table.extents = extents;
  GridShape shape(extents);
  table.counts.assign(shape.size(), 0);
  for (const auto& k : binned) ++table.counts[shape.index(k)];
  table.total = static_cast<std::int64_t>(samples.records.size());
  return table;
}

double EmpiricalTable::frequency(const std::vector<int>& k) const {
  for (std::size_t a = 0; a < extents.size(); ++a) {
    if (k[a] >= extents[a]) return 0.0;
  }
  return static_cast<double>(counts[shape().index(k)]) / static_cast<double>(total);
}

double tv_distance(const BinnedDistribution& hypothesis, const EmpiricalTable& empirical) {
  if (hypothesis.bin_count() != static_cast<int>(empirical.extents.size())) {
    throw std::invalid_argument("bin count mismatch");
  }
  GridShape hyp_shape = hypothesis.shape();
  double l1 = 0.0;
  double outside = 0.0;  // empirical mass beyond the hypothesis support
  std::vector<int> k;
  GridShape emp_shape = empirical.shape();
  std::vector<char> visited(hyp_shape.size(), 0);
  for (std::size_t i = 0; i < emp_shape.size(); ++i) {
    emp_shape.unrank(i, k);
    double f = static_cast<double>(empirical.counts[i]) / empirical.total;
    bool inside = true;
    for (int a = 0; a < hypothesis.bin_count(); ++a) {
      if (k[a] > hypothesis.cutoffs[a]) inside = false;
    }
    if (!inside) {
      outside += f;
      continue;
    }
    std::size_t idx = hyp_shape.index(k);
    visited[idx] = 1;
    l1 += std::abs(hypothesis.probs[idx] - f);
  }
  for (std::size_t i = 0; i < hyp_shape.size(); ++i) {
    if (!visited[i]) l1 += hypothesis.probs[i];
  }
  l1 += std::abs(hypothesis.tail_bound - outside);
  return 0.5 * l1;
}

ChiSquareResult chi_square(const BinnedDistribution& hypothesis, const EmpiricalTable& observed) {
  if (hypothesis.bin_count() != static_cast<int>(observed.extents.size())) {
    throw std::invalid_argument("bin count mismatch");
  }
  const double n = static_cast<double>(observed.total);
  GridShape hyp_shape = hypothesis.shape();
  GridShape obs_shape = observed.shape();

  // overflow cell: hypothesis tail mass and all observations outside the
  // table, plus every cell pooled away below the expected-count threshold
  double overflow_expected = n * hypothesis.tail_bound;
  double overflow_observed = 0.0;
  std::vector<int> k;
  std::vector<double> cell_expected;
  std::vector<double> cell_observed;
  for (std::size_t i = 0; i < obs_shape.size(); ++i) {
    obs_shape.unrank(i, k);
    bool inside = true;
    for (int a = 0; a < hypothesis.bin_count(); ++a) {
      if (k[a] > hypothesis.cutoffs[a]) inside = false;
    }
    if (!inside) overflow_observed += static_cast<double>(observed.counts[i]);
  }

  ChiSquareResult result;
  for (std::size_t i = 0; i < hyp_shape.size(); ++i) {
    hyp_shape.unrank(i, k);
    double expected = n * hypothesis.probs[i];
    double obs = 0.0;
    bool in_obs = true;
    for (int a = 0; a < hypothesis.bin_count(); ++a) {
      if (k[a] >= observed.extents[a]) in_obs = false;
    }
    if (in_obs) obs = static_cast<double>(observed.counts[obs_shape.index(k)]);
    if (expected < kPoolingThreshold) {
      overflow_expected += expected;
      overflow_observed += obs;
      ++result.pooled_cells;
    } else {
      cell_expected.push_back(expected);
      cell_observed.push_back(obs);
    }
  }
  if (overflow_expected > 0.0 || overflow_observed > 0.0) {
    cell_expected.push_back(std::max(overflow_expected, kProbabilityFloor));
    cell_observed.push_back(overflow_observed);
  }

  result.dof = static_cast<int>(cell_expected.size()) - 1;
  for (std::size_t c = 0; c < cell_expected.size(); ++c) {
    double d = cell_observed[c] - cell_expected[c];
    result.statistic += d * d / cell_expected[c];
  }
  result.p_value = result.dof > 0 ? chi_square_p_value(result.statistic, result.dof) : 1.0;
  return result;
}

double log_likelihood_ratio(const SampleSet& samples, const BinPartition& partition,
                            const BinnedDistribution& hyp_a, const BinnedDistribution& hyp_b) {
  if (partition.modes() != samples.columns) {
    throw std::invalid_argument("partition does not match the sample columns");
  }
  auto score = [](const BinnedDistribution& hyp, const std::vector<int>& k) {
    for (int a = 0; a < hyp.bin_count(); ++a) {
      if (k[a] > hyp.cutoffs[a]) {
        return std::max(hyp.tail_bound, kProbabilityFloor);
      }
    }
    return std::max(hyp.probability(k), kProbabilityFloor);
  };
  const int bins = partition.bin_count();
  std::vector<int> k(bins);
  double llr = 0.0;
  for (const auto& record : samples.records) {
    for (int b = 0; b < bins; ++b) {
      int count = 0;
      for (int mode : partition.bin(b)) count += record[mode];
      k[b] = count;
    }
    llr += std::log(score(hyp_a, k)) - std::log(score(hyp_b, k));
  }
  return llr;
}

SampleSet generate_samples(const BinnedDistribution& dist, int count, std::uint64_t seed) {
  if (count < 0) throw std::invalid_argument("sample count must be >= 0");
  double total = dist.sum();
  if (total <= 0.0) throw std::invalid_argument("cannot sample from an empty table");
  std::vector<double> cumulative(dist.probs.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < dist.probs.size(); ++i) {
    acc += dist.probs[i] / total;
    cumulative[i] = acc;
  }
  cumulative.back() = 1.0;

  GridShape shape = dist.shape();
  SampleSet samples;
  samples.columns = dist.bin_count();
  samples.provenance = "generated(seed=" + std::to_string(seed) + ")";
  samples.records.reserve(count);
  Rng rng(seed);
  std::vector<int> k;
  for (int i = 0; i < count; ++i) {
    double u = rng.uniform();
    auto it = std::lower_bound(cumulative.begin(), cumulative.end(), u);
    std::size_t idx = static_cast<std::size_t>(it - cumulative.begin());
    shape.unrank(idx, k);
    samples.records.push_back(k);
  }
  return samples;
}

void write_samples_jsonl(const SampleSet& samples, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  for (const auto& record : samples.records) {
    nlohmann::json row = record;
    out << row.dump() << "\n";
  }
}

std::string ValidationReport::to_json() const {
  nlohmann::json doc;
  doc["sample_count"] = sample_count;
  doc["binning"] = binning_spec;
  doc["log_likelihood_ratio"] = log_likelihood_ratio;
  doc["hypotheses"] = nlohmann::json::array();
  for (const auto& h : hypotheses) {
    doc["hypotheses"].push_back({{"name", h.name},
                                 {"tv_distance", h.tv},
                                 {"chi_square", h.chi2.statistic},
                                 {"dof", h.chi2.dof},
                                 {"p_value", h.chi2.p_value},
                                 {"pooled_cells", h.chi2.pooled_cells}});
  }
  doc["warnings"] = warnings;
  return doc.dump(2);
}

ValidationReport validate_samples(const SampleSet& samples, const BinPartition& partition,
                                  const BinnedDistribution& hyp_a,
                                  const BinnedDistribution& hyp_b,
                                  const std::string& name_a, const std::string& name_b) {
  EmpiricalTable table = bin_samples(samples, partition);
  ValidationReport report;
  report.sample_count = static_cast<std::int64_t>(samples.count());
  std::ostringstream spec;
  spec << partition.bin_count() << " bins over " << partition.modes() << " modes";
  report.binning_spec = spec.str();

  for (const auto& [name, hyp] : {std::pair<const std::string&, const BinnedDistribution&>(
                                      name_a, hyp_a),
                                  std::pair<const std::string&, const BinnedDistribution&>(
                                      name_b, hyp_b)}) {
    HypothesisScore score;
    score.name = name;
    score.tv = tv_distance(hyp, table);
    score.chi2 = chi_square(hyp, table);
    if (score.chi2.dof < 2) {
      report.warnings.push_back("few unpooled cells for " + name +
                                "; chi-square approximation is weak");
    }
    report.hypotheses.push_back(std::move(score));
  }
  report.log_likelihood_ratio = log_likelihood_ratio(samples, partition, hyp_a, hyp_b);

  // flag empirical mass outside both hypothesis tables
  GridShape emp_shape = table.shape();
  std::vector<int> k;
  std::int64_t outside = 0;
  for (std::size_t i = 0; i < emp_shape.size(); ++i) {
    emp_shape.unrank(i, k);
    bool beyond = false;
    for (int a = 0; a < partition.bin_count(); ++a) {
      if (k[a] > hyp_a.cutoffs[a] && k[a] > hyp_b.cutoffs[a]) beyond = true;
    }
    if (beyond) outside += table.counts[i];
  }
  if (outside > 0) {
    report.warnings.push_back(std::to_string(outside) +
                              " records fall beyond both hypothesis tables");
  }
  return report;
}

}  // namespace gbs
