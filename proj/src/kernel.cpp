// Copyright 2026 The CDR Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cdr/kernel.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include "cdr/regression.hpp"

namespace cdr {

namespace {

using Distributions = std::vector<const OutcomeDistribution*>;

double sampled_kappa(const Distributions& a, const Distributions& b, std::size_t shots,
                     const RngStream& rng) {
  auto eng = rng.engine();
  std::uniform_int_distribution<std::size_t> pick(0, a.size() - 1);
  double acc = 0.0;
  for (std::size_t s = 0; s < shots; ++s) {
    const std::size_t j = pick(eng);
    const double x = sample_once(*a[j], eng);
    const double y = sample_once(*b[j], eng);
    acc += x * y;
  }
  return 1.0 + static_cast<double>(a.size()) * acc / static_cast<double>(shots);
}

double exact_kappa(const Distributions& a, const Distributions& b) {
  double acc = 1.0;
  for (std::size_t j = 0; j < a.size(); ++j) acc += a[j]->mean() * b[j]->mean();
  return acc;
}

}  // namespace

KernelSystem kernel_system(const TrainingSet& ts, const FeatureMapSpec& spec,
                           const NoiseModel& noise, const Observable& obs, const Circuit& u,
                           Shots shots, const RngStream& rng) {
  const std::size_t S = ts.size();
  if (S == 0) throw std::invalid_argument("kernel estimate needs at least one training circuit");
  if (shots && *shots == 0) throw std::invalid_argument("need at least one shot");
  const auto perturbations = spec.perturbations();

  // Circuit S is U itself.
  std::vector<OutcomeCache> caches;
  caches.reserve(S + 1);
  for (const auto& p : ts.pairs) caches.emplace_back(p.circuit, noise, obs, spec.insertion);
  caches.emplace_back(u, noise, obs, spec.insertion);
  std::vector<Distributions> dists(S + 1);
  for (std::size_t c = 0; c <= S; ++c) {
    for (const auto& p : perturbations) dists[c].push_back(&caches[c].outcomes(p));
  }

  auto kappa = [&](std::size_t a, std::size_t b) {
    if (!shots) return exact_kappa(dists[a], dists[b]);
    return sampled_kappa(dists[a], dists[b], *shots, rng.child(std::min(a, b)).child(std::max(a, b)));
  };

  KernelSystem sys;
  const auto n = static_cast<Eigen::Index>(S);
  sys.K.resize(n, n);
  sys.k.resize(n);
  sys.f.resize(n);
  for (std::size_t i = 0; i < S; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    sys.f(ii) = ts.pairs[i].f;
    sys.k(ii) = kappa(i, S);
    for (std::size_t j = i; j < S; ++j) {
      const double v = kappa(i, j);
      sys.K(ii, static_cast<Eigen::Index>(j)) = v;
      sys.K(static_cast<Eigen::Index>(j), ii) = v;
    }
  }
  return sys;
}

double kernel_predict(const KernelSystem& sys, double mu) {
  if (!(mu >= 0.0)) throw std::invalid_argument("mu must be >= 0");
  Eigen::MatrixXd a = sys.K;
  a.diagonal().array() += mu;
  // Sampled kernels need not be positive semidefinite, so use a pivoted LU.
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible()) throw NumericError("kernel system K + mu I is singular");
  const Eigen::VectorXd w = lu.solve(sys.k);
  return sys.f.dot(w);
}

double kernel_estimate(const TrainingSet& ts, const FeatureMapSpec& spec, const NoiseModel& noise,
                       const Observable& obs, double mu, const Circuit& u, Shots shots,
                       const RngStream& rng) {
  return kernel_predict(kernel_system(ts, spec, noise, obs, u, shots, rng), mu);
}

}  // namespace cdr
