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
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "gbs/classical_models.hpp"
#include "gbs/fock_oracle.hpp"
#include "gbs/haar.hpp"
#include "gbs/instance.hpp"
#include "gbs/validate.hpp"

namespace {

gbs::CutoffPolicy make_policy(double epsilon, std::optional<double> alpha,
                              std::optional<int> cutoff) {
  gbs::CutoffPolicy policy;
  policy.epsilon = epsilon;
  policy.alpha = alpha;
  policy.n_override = cutoff;
  return policy;
}

void write_or_print(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << text << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Binned photon-number distributions for GBS validation"};
  app.require_subcommand(1);

  std::string instance_path, partition_path, output_path, samples_path;
  std::string hyp_a_path, hyp_b_path, report_path;
  double epsilon = 1e-6;
  std::optional<double> alpha;
  std::optional<int> cutoff;
  bool csv_samples = false;
  bool match_mean_photon = false;

  // dist: binned probability table of one instance
  auto* dist_cmd = app.add_subcommand("dist", "Compute a binned probability distribution");
  dist_cmd->add_option("--instance", instance_path, "instance JSON file")->required();
  dist_cmd->add_option("--partition", partition_path, "partition JSON file")->required();
  dist_cmd->add_option("--epsilon", epsilon, "target tail probability");
  dist_cmd->add_option("--alpha", alpha, "fixed Chernoff multiplier (skips the search)");
  dist_cmd->add_option("--cutoff", cutoff, "explicit per-bin photon cutoff");
  dist_cmd->add_option("--output", output_path, "CSV output path (sidecar JSON next to it)")
      ->required();

  // cutoff: report the selected cutoff without computing the table
  auto* cutoff_cmd = app.add_subcommand("cutoff", "Select the energy cutoff for an instance");
  cutoff_cmd->add_option("--instance", instance_path)->required();
  cutoff_cmd->add_option("--epsilon", epsilon);
  cutoff_cmd->add_option("--alpha", alpha);

  // haar: Monte Carlo Haar average against the asymptotic law
  int haar_modes = 20, haar_trials = 100, haar_bins = 2;
  double haar_r = 0.4;
  std::uint64_t seed = 1;
  auto* haar_cmd = app.add_subcommand("haar", "Haar-averaged binned distribution (Monte Carlo)");
  haar_cmd->add_option("--modes", haar_modes);
  haar_cmd->add_option("--squeezing", haar_r, "identical squeezing per mode");
  haar_cmd->add_option("--bins", haar_bins, "number of (near-)even bins");
  haar_cmd->add_option("--trials", haar_trials);
  haar_cmd->add_option("--seed", seed);
  haar_cmd->add_option("--epsilon", epsilon);
  haar_cmd->add_option("--cutoff", cutoff);
  haar_cmd->add_option("--output", output_path, "CSV output path")->required();

  // validate: score samples against two hypothesis instances
  auto* validate_cmd = app.add_subcommand("validate", "Validate a sample file against hypotheses");
  validate_cmd->add_option("--samples", samples_path, "JSONL (or CSV) per-mode counts")
      ->required();
  validate_cmd->add_flag("--csv", csv_samples, "samples are CSV rows instead of JSONL");
  validate_cmd->add_option("--hypothesis-a", hyp_a_path)->required();
  validate_cmd->add_option("--hypothesis-b", hyp_b_path)->required();
  validate_cmd->add_option("--partition", partition_path)->required();
  validate_cmd->add_option("--epsilon", epsilon);
  validate_cmd->add_flag("--match-mean-photon", match_mean_photon,
                         "re-derive squashed parameters of hypothesis b to match the per-mode "
                         "mean photon numbers of squeezed hypothesis a");
  validate_cmd->add_option("--output", report_path, "report JSON path (stdout otherwise)");

  // oracle: brute-force cross-check for desk-scale instances
  std::optional<int> input_cutoff;
  auto* oracle_cmd = app.add_subcommand("oracle", "Brute-force Fock-space cross-check");
  oracle_cmd->add_option("--instance", instance_path)->required();
  oracle_cmd->add_option("--partition", partition_path)->required();
  oracle_cmd->add_option("--cutoff", cutoff, "table cutoff (default 12)");
  oracle_cmd->add_option("--input-cutoff", input_cutoff, "input photon truncation");
  oracle_cmd->add_option("--output", output_path, "CSV output path for the oracle table");

  // sample: draw synthetic binned samples from an instance
  int sample_count = 1000;
  auto* sample_cmd = app.add_subcommand("sample", "Generate synthetic binned samples");
  sample_cmd->add_option("--instance", instance_path)->required();
  sample_cmd->add_option("--partition", partition_path)->required();
  sample_cmd->add_option("--count", sample_count);
  sample_cmd->add_option("--seed", seed);
  sample_cmd->add_option("--epsilon", epsilon);
  sample_cmd->add_option("--output", output_path, "JSONL output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 3;
  }

  try {
    if (dist_cmd->parsed()) {
      gbs::GbsInstance inst = gbs::load_instance(instance_path);
      gbs::BinPartition partition = gbs::load_partition(partition_path, inst.modes());
      gbs::CutoffPolicy policy = make_policy(epsilon, alpha, cutoff);
      gbs::BinnedDistribution dist = gbs::compute_binned_distribution(inst, partition, policy);
      gbs::export_distribution(dist, output_path);
      std::printf("wrote %s: n=%d, B=%d, sum=%.12f, tail_bound=%.3e, imag_residue=%.3e\n",
                  output_path.c_str(), dist.nominal_cutoff(), dist.bin_count(), dist.sum(),
                  dist.tail_bound, dist.imag_residue);
      return 0;
    }

    if (cutoff_cmd->parsed()) {
      gbs::GbsInstance inst = gbs::load_instance(instance_path);
      gbs::CutoffResult res = gbs::select_cutoff(inst, make_policy(epsilon, alpha, cutoff));
      nlohmann::json doc{{"n", res.n}, {"tail_bound", res.tail_bound}, {"alpha", res.alpha}};
      std::cout << doc.dump(2) << "\n";
      return 0;
    }

    if (haar_cmd->parsed()) {
      if (haar_bins < 1 || haar_bins > haar_modes) {
        throw std::invalid_argument("--bins must lie in 1..modes");
      }
      std::vector<std::vector<int>> bins(haar_bins);
      for (int mode = 0; mode < haar_modes; ++mode) {
        bins[mode % haar_bins].push_back(mode);
      }
      gbs::BinPartition partition(bins, haar_modes);
      gbs::RealVector r = gbs::RealVector::Constant(haar_modes, haar_r);
      int n = cutoff ? *cutoff
                     : gbs::select_cutoff_squeezed(haar_modes, haar_r,
                                                   make_policy(epsilon, alpha, std::nullopt))
                           .n;
      auto result = gbs::monte_carlo_haar_average(r, partition, n, haar_trials, seed);

      std::ofstream out(output_path);
      if (!out) throw std::runtime_error("cannot open " + output_path);
      for (int b = 0; b < haar_bins; ++b) out << "k_" << (b + 1) << ",";
      out << "mc_mean,mc_stderr,asymptotic,asymptotic_distinguishable\n";
      gbs::GridShape shape = result.shape();
      std::vector<int> k;
      std::vector<int> sizes = partition.bin_sizes();
      char buf[256];
      for (std::size_t i = 0; i < result.mean.size(); ++i) {
        shape.unrank(i, k);
        for (int b = 0; b < haar_bins; ++b) out << k[b] << ",";
        double asym = gbs::haar_gbs_asymptotic(k, haar_modes, haar_r, sizes, 1);
        double asym_d = gbs::haar_gbs_asymptotic(k, haar_modes, haar_r, sizes, 0);
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", result.mean[i],
                      result.std_error[i], asym, asym_d);
        out << buf;
      }
      std::printf("wrote %s: %d trials, cutoff %d\n", output_path.c_str(), haar_trials, n);
      return 0;
    }

    if (validate_cmd->parsed()) {
      gbs::SampleSet samples = gbs::ingest_samples(samples_path, csv_samples);
      gbs::GbsInstance hyp_a = gbs::load_instance(hyp_a_path);
      gbs::GbsInstance hyp_b = gbs::load_instance(hyp_b_path);
      if (match_mean_photon) {
        if (hyp_a.model != gbs::InputModel::Squeezed ||
            hyp_b.model != gbs::InputModel::Squashed) {
          throw std::invalid_argument(
              "--match-mean-photon expects a squeezed hypothesis a and a squashed hypothesis b");
        }
        gbs::RealVector matched(hyp_a.params.size());
        for (int i = 0; i < hyp_a.params.size(); ++i) {
          matched[i] = gbs::matched_squash_parameter(hyp_a.params[i]);
        }
        hyp_b = gbs::GbsInstance(gbs::InputModel::Squashed, matched, hyp_b.network);
      }
      gbs::BinPartition partition = gbs::load_partition(partition_path, hyp_a.modes());
      gbs::CutoffPolicy policy = make_policy(epsilon, alpha, cutoff);
      gbs::BinnedDistribution dist_a = gbs::compute_binned_distribution(hyp_a, partition, policy);
      gbs::BinnedDistribution dist_b = gbs::compute_binned_distribution(hyp_b, partition, policy);

      // samples may carry per-mode counts (binned here through the
      // partition) or pre-binned counts with one column per bin
      std::vector<std::vector<int>> singletons(partition.bin_count());
      for (int b = 0; b < partition.bin_count(); ++b) singletons[b] = {b};
      gbs::BinPartition identity_bins(std::move(singletons), partition.bin_count());
      if (samples.columns != hyp_a.modes() && samples.columns != partition.bin_count()) {
        throw std::invalid_argument("sample columns match neither the modes nor the bins");
      }
      const gbs::BinPartition& sample_partition =
          samples.columns == hyp_a.modes() ? partition : identity_bins;

      gbs::ValidationReport report = gbs::validate_samples(samples, sample_partition, dist_a,
                                                           dist_b, hyp_a_path, hyp_b_path);
      write_or_print(report.to_json(), report_path);
      return report.warnings.empty() ? 0 : 2;
    }

    if (oracle_cmd->parsed()) {
      gbs::GbsInstance inst = gbs::load_instance(instance_path);
      gbs::BinPartition partition = gbs::load_partition(partition_path, inst.modes());
      gbs::OracleOptions opts;
      if (cutoff) opts.table_cutoff = *cutoff;
      if (input_cutoff) opts.input_total_max = *input_cutoff;
      gbs::BinnedDistribution oracle = gbs::oracle_binned_distribution(inst, partition, opts);
      auto model = gbs::make_char_fn_model(inst, partition);
      gbs::BinnedDistribution analytic =
          gbs::binned_distribution(*model, partition, opts.table_cutoff);
      double tv = gbs::tv_distance(analytic, oracle);
      std::printf("oracle mass %.12f (truncation %.3e), TV(analytic, oracle) = %.3e\n",
                  oracle.sum(), oracle.tail_bound, tv);
      if (!output_path.empty()) gbs::export_distribution(oracle, output_path);
      return 0;
    }

    if (sample_cmd->parsed()) {
      gbs::GbsInstance inst = gbs::load_instance(instance_path);
      gbs::BinPartition partition = gbs::load_partition(partition_path, inst.modes());
      gbs::BinnedDistribution dist =
          gbs::compute_binned_distribution(inst, partition, make_policy(epsilon, alpha, cutoff));
      gbs::SampleSet samples = gbs::generate_samples(dist, sample_count, seed);
      gbs::write_samples_jsonl(samples, output_path);
      std::printf("wrote %zu binned samples to %s\n", samples.count(), output_path.c_str());
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
