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

#include "gbs/numerics.hpp"

#include <cmath>
#include <limits>

namespace gbs {

double log_binomial(double n, double k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

namespace {

// Lower regularized gamma P(a,x) by power series; converges fast for x < a+1.
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  double ap = a;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper regularized gamma Q(a,x) by Lentz continued fraction; for x >= a+1.
double gamma_q_cont_fraction(double a, double x) {
  const double tiny = std::numeric_limits<double>::min() * 1e10;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double regularized_gamma_q(double a, double x) {
  if (a <= 0.0) throw std::invalid_argument("regularized_gamma_q: a must be positive");
  if (x < 0.0) throw std::invalid_argument("regularized_gamma_q: x must be >= 0");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cont_fraction(a, x);
}

double chi_square_p_value(double stat, int dof) {
  if (dof <= 0) return 1.0;
  if (stat <= 0.0) return 1.0;
  return regularized_gamma_q(0.5 * dof, 0.5 * stat);
}

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t state = master ^ (0xD1B54A32D192ED03ull * (index + 1));
  splitmix64(state);
  return splitmix64(state);
}

// xoshiro256** seeded through splitmix64, as recommended by its authors.
Rng::Rng(std::uint64_t seed) {
  std::uint64_t state = seed;
  for (auto& word : s_) word = splitmix64(state);
}

namespace {
inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
}  // namespace

std::uint64_t Rng::next_u64() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = 0.0;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  double u2 = uniform();
  double radius = std::sqrt(-2.0 * std::log(u1));
  double angle = 2.0 * M_PI * u2;
  spare_ = radius * std::sin(angle);
  have_spare_ = true;
  return radius * std::cos(angle);
}

Complex Rng::complex_normal() {
  return Complex(normal(), normal()) / std::sqrt(2.0);
}

GridShape::GridShape(std::vector<int> extents) : extents_(std::move(extents)) {
  if (extents_.empty()) throw std::invalid_argument("GridShape: no axes");
  strides_.assign(extents_.size(), 1);
  total_ = 1;
  for (int a = static_cast<int>(extents_.size()) - 1; a >= 0; --a) {
    if (extents_[a] < 1) throw std::invalid_argument("GridShape: extent < 1");
    strides_[a] = total_;
    total_ *= static_cast<std::size_t>(extents_[a]);
  }
}

std::size_t GridShape::index(const std::vector<int>& k) const {
  std::size_t idx = 0;
  for (std::size_t a = 0; a < extents_.size(); ++a) {
    if (k[a] < 0 || k[a] >= extents_[a]) throw std::out_of_range("GridShape: index out of range");
    idx += static_cast<std::size_t>(k[a]) * strides_[a];
  }
  return idx;
}

void GridShape::unrank(std::size_t idx, std::vector<int>& k) const {
  k.resize(extents_.size());
  for (std::size_t a = 0; a < extents_.size(); ++a) {
    k[a] = static_cast<int>(idx / strides_[a]);
    idx %= strides_[a];
  }
}

}  // namespace gbs
