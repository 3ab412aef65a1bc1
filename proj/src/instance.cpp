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

#include "gbs/instance.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gbs/classical_models.hpp"
#include "gbs/gbs_core.hpp"

namespace gbs {

std::string to_string(InputModel model) {
  switch (model) {
    case InputModel::Squeezed: return "squeezed";
    case InputModel::Thermal: return "thermal";
    case InputModel::Squashed: return "squashed";
    case InputModel::Partial: return "partial";
  }
  return "unknown";
}

InputModel input_model_from_string(const std::string& name) {
  if (name == "squeezed") return InputModel::Squeezed;
  if (name == "thermal") return InputModel::Thermal;
  if (name == "squashed") return InputModel::Squashed;
  if (name == "partial") return InputModel::Partial;
  throw std::invalid_argument("unknown input model: " + name);
}

GbsInstance::GbsInstance(InputModel model_in, RealVector params_in, TransferMatrix network_in,
                         double eta_ind_in)
    : model(model_in), params(std::move(params_in)), network(std::move(network_in)),
      eta_ind(eta_ind_in) {
  if (params.size() != network.modes()) {
    throw std::invalid_argument("parameter vector length must equal mode count");
  }
  if ((params.array() < 0).any()) throw std::invalid_argument("input parameters must be >= 0");
  if (model == InputModel::Partial && !(eta_ind >= 0.0 && eta_ind <= 1.0)) {
    throw std::invalid_argument("indistinguishability efficiency must lie in [0, 1]");
  }
}

std::unique_ptr<CharFnModel> make_char_fn_model(const GbsInstance& inst,
                                                const BinPartition& partition) {
  switch (inst.model) {
    case InputModel::Squeezed:
      return std::make_unique<SqueezedCharFn>(SqueezedInput(inst.params), inst.network, partition);
    case InputModel::Thermal:
      return std::make_unique<ThermalCharFn>(ThermalInput(inst.params), inst.network, partition);
    case InputModel::Squashed:
      return std::make_unique<SquashedCharFn>(SquashedInput(inst.params), inst.network, partition);
    case InputModel::Partial: {
      PartialDistInstance p(inst.params, inst.network, inst.eta_ind);
      return make_partial_char_fn(p, partition);
    }
  }
  throw std::invalid_argument("unsupported input model");
}

CutoffResult select_cutoff(const GbsInstance& inst, const CutoffPolicy& policy) {
  switch (inst.model) {
    case InputModel::Squeezed:
      return select_cutoff_squeezed(inst.modes(), inst.params.maxCoeff(), policy);
    case InputModel::Partial: {
      // The expanded instance generates photons from its active squeezers;
      // losses inside the big network only remove photons, so the loss-free
      // bound with the active-mode count stays conservative.
      PartialDistInstance p(inst.params, inst.network, inst.eta_ind);
      ExpandedInstance expanded = build_partial_instance(p);
      int active = 0;
      for (int i = 0; i < expanded.input.r.size(); ++i) {
        if (expanded.input.r[i] > 0.0) ++active;
      }
      if (active == 0) return CutoffResult{0, 0.0, 1.0};
      return select_cutoff_squeezed(active, inst.params.maxCoeff(), policy);
    }
    case InputModel::Thermal:
    case InputModel::Squashed: {
      std::vector<int> all(inst.modes());
      for (int i = 0; i < inst.modes(); ++i) all[i] = i;
      BinPartition one_bin({all}, inst.modes());
      auto model = make_char_fn_model(inst, one_bin);
      return select_cutoff_exact_tail(*model, policy);
    }
  }
  throw std::invalid_argument("unsupported input model");
}

BinnedDistribution compute_binned_distribution(const GbsInstance& inst,
                                               const BinPartition& partition,
                                               const CutoffPolicy& policy) {
  CutoffResult cutoff = select_cutoff(inst, policy);
  auto model = make_char_fn_model(inst, partition);
  return binned_distribution(*model, partition, cutoff.n, cutoff.tail_bound);
}

BinnedDistribution merge_bins(const GbsInstance& inst, const BinPartition& partition,
                              int i, int j, int n) {
  BinPartition merged = partition.with_merged_bins(i, j);
  auto model = make_char_fn_model(inst, merged);
  BinnedDistribution wide = binned_distribution(*model, merged, 2 * n);
  // merged bin keeps the doubled range; the others go back to n
  std::vector<int> cutoffs(merged.bin_count(), n);
  cutoffs[std::min(i, j)] = 2 * n;
  return truncate_axes(wide, cutoffs);
}

namespace {

Matrix parse_network(const nlohmann::json& spec, int modes) {
  if (!spec.contains("real")) throw std::invalid_argument("network needs a \"real\" matrix");
  auto real = spec.at("real").get<std::vector<std::vector<double>>>();
  std::vector<std::vector<double>> imag;
  if (spec.contains("imag")) {
    imag = spec.at("imag").get<std::vector<std::vector<double>>>();
  } else {
    imag.assign(real.size(), std::vector<double>(real.size(), 0.0));
  }
  if (static_cast<int>(real.size()) != modes) {
    throw std::invalid_argument("network size does not match \"modes\"");
  }
  Matrix l(modes, modes);
  for (int i = 0; i < modes; ++i) {
    if (static_cast<int>(real[i].size()) != modes || static_cast<int>(imag[i].size()) != modes) {
      throw std::invalid_argument("network rows must have length \"modes\"");
    }
    for (int j = 0; j < modes; ++j) l(i, j) = Complex(real[i][j], imag[i][j]);
  }
  return l;
}

}  // namespace

GbsInstance parse_instance(const std::string& json_text) {
  nlohmann::json doc = nlohmann::json::parse(json_text);
  int modes = doc.at("modes").get<int>();
  InputModel model = input_model_from_string(doc.at("input_model").get<std::string>());
  Matrix l = parse_network(doc.at("network"), modes);

  std::vector<double> params;
  if (model == InputModel::Thermal) {
    params = doc.at("nbar").get<std::vector<double>>();
  } else {
    params = doc.at("squeezing").get<std::vector<double>>();
  }
  if (static_cast<int>(params.size()) != modes) {
    throw std::invalid_argument("parameter vector length must equal \"modes\"");
  }
  RealVector p(modes);
  for (int i = 0; i < modes; ++i) p[i] = params[i];

  double eta_ind = 1.0;
  if (model == InputModel::Partial) {
    if (!doc.contains("eta_ind")) {
      throw std::invalid_argument("partial model needs a scalar \"eta_ind\"");
    }
    if (!doc.at("eta_ind").is_number()) {
      // per-mode efficiencies are not part of the model
      throw std::invalid_argument("\"eta_ind\" must be a single number");
    }
    eta_ind = doc.at("eta_ind").get<double>();
  }
  return GbsInstance(model, std::move(p), TransferMatrix(std::move(l)), eta_ind);
}

GbsInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_instance(buffer.str());
}

BinPartition parse_partition(const std::string& json_text, int modes) {
  nlohmann::json doc = nlohmann::json::parse(json_text);
  if (doc.is_object() && doc.contains("bins")) doc = doc.at("bins");
  auto one_based = doc.get<std::vector<std::vector<int>>>();
  std::vector<std::vector<int>> bins;
  bins.reserve(one_based.size());
  for (const auto& bin : one_based) {
    std::vector<int> zero_based;
    zero_based.reserve(bin.size());
    for (int idx : bin) zero_based.push_back(idx - 1);
    bins.push_back(std::move(zero_based));
  }
  return BinPartition(std::move(bins), modes);
}

BinPartition load_partition(const std::string& path, int modes) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_partition(buffer.str(), modes);
}

std::string instance_to_json(const GbsInstance& inst) {
  nlohmann::json doc;
  doc["modes"] = inst.modes();
  doc["input_model"] = to_string(inst.model);
  std::vector<double> params(inst.params.data(), inst.params.data() + inst.params.size());
  if (inst.model == InputModel::Thermal) {
    doc["nbar"] = params;
  } else {
    doc["squeezing"] = params;
  }
  if (inst.model == InputModel::Partial) doc["eta_ind"] = inst.eta_ind;
  const Matrix& l = inst.network.entries();
  std::vector<std::vector<double>> real(inst.modes(), std::vector<double>(inst.modes()));
  std::vector<std::vector<double>> imag = real;
  for (int i = 0; i < inst.modes(); ++i) {
    for (int j = 0; j < inst.modes(); ++j) {
      real[i][j] = l(i, j).real();
      imag[i][j] = l(i, j).imag();
    }
  }
  doc["network"] = {{"real", real}, {"imag", imag}};
  return doc.dump(2);
}

}  // namespace gbs
