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

#include "gbs/char_fn.hpp"

#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "gbs/numerics.hpp"

namespace gbs {

namespace {

constexpr double kMaxPhaseStep = 1.0;  // rad; accepted principal jump per sub-step
constexpr double kMaxEtaStep = 0.45;   // rad; larger moves are always subdivided
constexpr int kMaxBisectionDepth = 48;

// Advances the unwrapped arg(det Q) from (eta_from, phase_from) to eta_to.
// A sub-step is accepted only when it is short in eta and its principal
// phase jump stays below kMaxPhaseStep; anything else is bisected.
void continue_phase(const CharFnModel& model, const RealVector& eta_from, double phase_from,
                    const RealVector& eta_to, double& phase_out, double& log_abs_out,
                    int depth = 0) {
  double move = (eta_to - eta_from).cwiseAbs().maxCoeff();
  LogDet ld = model.log_det_q(eta_to);
  if (!std::isfinite(ld.log_abs) || !std::isfinite(ld.arg)) {
    throw NumericError("det Q is not finite or vanished during branch continuation");
  }
  double delta = std::remainder(ld.arg - phase_from, 2.0 * M_PI);
  if (move < 1e-13) {
    // Degenerate step: a residual jump here means det Q is effectively
    // discontinuous (singular) at this point.
    if (std::abs(delta) > kMaxPhaseStep) {
      throw NumericError("branch continuity lost: phase jump on a vanishing step");
    }
    phase_out = phase_from + delta;
    log_abs_out = ld.log_abs;
    return;
  }
  if (std::abs(delta) <= kMaxPhaseStep && move <= kMaxEtaStep) {
    phase_out = phase_from + delta;
    log_abs_out = ld.log_abs;
    return;
  }
  if (depth >= kMaxBisectionDepth) {
    throw NumericError("branch continuity lost: bisection depth exceeded");
  }
  RealVector mid = 0.5 * (eta_from + eta_to);
  double phase_mid = 0.0, log_abs_mid = 0.0;
  continue_phase(model, eta_from, phase_from, mid, phase_mid, log_abs_mid, depth + 1);
  continue_phase(model, mid, phase_mid, eta_to, phase_out, log_abs_out, depth + 1);
}

Complex x_from_tracked(const CharFnModel& model, double log_abs, double phase) {
  double mag = std::exp(model.log_prefactor() - 0.5 * log_abs);
  return std::polar(mag, -0.5 * phase);
}

}  // namespace

LogDet CharFnModel::log_det_q(const RealVector& eta) const {
  const int dim = q_dim();
  if (dim == 0) return LogDet{0.0, 0.0};  // no active modes: det of the empty matrix
  Matrix q = q_matrix(eta);
  Eigen::PartialPivLU<Matrix> lu(q);
  double log_abs = 0.0;
  double arg = lu.permutationP().determinant() < 0 ? M_PI : 0.0;
  for (int i = 0; i < dim; ++i) {
    Complex pivot = lu.matrixLU()(i, i);
    double mag = std::abs(pivot);
    if (mag == 0.0 || !std::isfinite(mag)) {
      throw NumericError("singular or non-finite Q determinant");
    }
    log_abs += std::log(mag);
    arg += std::arg(pivot);
  }
  return LogDet{log_abs, std::remainder(arg, 2.0 * M_PI)};
}

bool CharFnModel::q_real_part_positive_definite(const RealVector& eta) const {
  if (q_dim() == 0) return true;
  RealMatrix re = q_matrix(eta).real();
  // LLT requires a symmetric matrix; Re Q is symmetric by construction, but
  // symmetrize against rounding.
  re = 0.5 * (re + re.transpose()).eval();
  Eigen::LLT<RealMatrix> llt(re);
  return llt.info() == Eigen::Success;
}

BranchTracker::BranchTracker(const CharFnModel& model)
    : model_(model), eta_(RealVector::Zero(model.bin_count())) {
  LogDet ld = model_.log_det_q(eta_);
  // det Q(0) = exp(2 log_prefactor) > 0: anchor the branch on the positive
  // real axis and make sure the model satisfies its own normalization.
  if (std::abs(std::remainder(ld.arg, 2.0 * M_PI)) > 1e-6) {
    throw NumericError("det Q(0) is not positive real; invalid model");
  }
  double expected = 2.0 * model_.log_prefactor();
  if (std::abs(ld.log_abs - expected) > 1e-6 * (1.0 + std::abs(expected))) {
    throw NumericError("det Q(0) does not match the model prefactor");
  }
  phase_ = std::remainder(ld.arg, 2.0 * M_PI);
  log_abs_ = ld.log_abs;
}

Complex BranchTracker::advance(const RealVector& eta) {
  if (eta.size() != eta_.size()) throw std::invalid_argument("eta length mismatch");
  // Split long moves so the first evaluation already lands near the
  // accepted-step regime; bisection handles the rest adaptively.
  double dist = (eta - eta_).cwiseAbs().maxCoeff();
  int segments = std::max(1, static_cast<int>(std::ceil(dist / 0.5)));
  for (int s = 1; s <= segments; ++s) {
    RealVector target = eta_ + (static_cast<double>(s) / segments) * (eta - eta_);
    double phase = 0.0, log_abs = 0.0;
    continue_phase(model_, eta_, phase_, target, phase, log_abs);
    phase_ = phase;
    log_abs_ = log_abs;
  }
  eta_ = eta;
  return value();
}

Complex BranchTracker::value() const { return x_from_tracked(model_, log_abs_, phase_); }

Complex BranchTracker::sqrt_det() const {
  return std::polar(std::exp(0.5 * log_abs_), 0.5 * phase_);
}

Complex branch_sqrt_det(const CharFnModel& model, const RealVector& eta) {
  BranchTracker tracker(model);
  tracker.advance(eta);
  return tracker.sqrt_det();
}

CharGrid evaluate_char_grid(const CharFnModel& model, int n) {
  if (n < 0) throw std::invalid_argument("cutoff must be >= 0");
  const int bins = model.bin_count();
  const int pts = n + 1;
  std::vector<int> extents(bins, pts);
  GridShape shape(extents);
  if (shape.size() > (std::size_t(1) << 28)) {
    throw SizeError("characteristic grid too large: " + std::to_string(shape.size()));
  }

  CharGrid grid;
  grid.points_per_axis = pts;
  grid.bins = bins;
  grid.values.resize(shape.size());
  std::vector<double> phases(shape.size());

  const double step = 2.0 * M_PI / pts;
  std::vector<int> nu;
  RealVector eta(bins), eta_pred(bins);

  // Anchor at the origin, then walk in lexicographic order: each point's
  // predecessor decrements its last non-zero coordinate, so every step is a
  // single-axis grid step on a path from the origin.
  BranchTracker anchor(model);
  phases[0] = anchor.unwrapped_arg();
  grid.values[0] = anchor.value();

  for (std::size_t idx = 1; idx < shape.size(); ++idx) {
    shape.unrank(idx, nu);
    int last = bins - 1;
    while (nu[last] == 0) --last;
    std::size_t pred = idx - shape.stride(last);
    for (int a = 0; a < bins; ++a) {
      eta[a] = step * nu[a];
      eta_pred[a] = eta[a];
    }
    eta_pred[last] -= step;
    double phase = 0.0, log_abs = 0.0;
    continue_phase(model, eta_pred, phases[pred], eta, phase, log_abs);
    phases[idx] = phase;
    grid.values[idx] = x_from_tracked(model, log_abs, phase);
  }
  return grid;
}

}  // namespace gbs
