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

#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cdr/circuit.hpp"
#include "cdr/noise.hpp"
#include "cdr/observable.hpp"
#include "cdr/rng.hpp"
#include "cdr/simulator.hpp"

namespace cdr {

enum class FeatureMapKind { Classical, Geometric, Zne, Insertion, InsertionZne };

std::string_view to_string(FeatureMapKind kind);
FeatureMapKind feature_map_kind_from_string(std::string_view name);

/// How noise levels are produced for ZNE-style maps.
///
///   Incremental  level m folds m CNOT pairs one at a time, lambda = 1 + 2m/k
///   Uniform      level m adds m pairs after every CNOT, lambda = 2m + 1
enum class FoldScheme { Incremental, Uniform };

std::string_view to_string(FoldScheme s);
FoldScheme fold_scheme_from_string(std::string_view name);

/// One perturbed version of a circuit. `copies` > 1 is the geometric map;
/// `t` inserts the layer V^t; `fold_level` raises the noise level.
struct Perturbation {
  int copies = 1;
  std::optional<double> t;
  std::size_t fold_level = 0;
  FoldScheme scheme = FoldScheme::Incremental;

  std::string label() const;
  /// Stable 64-bit identifier, used to derive the sampling stream so the same
  /// perturbation gets the same shots whichever map asks for it.
  std::uint64_t key() const;

  friend auto operator<=>(const Perturbation&, const Perturbation&) = default;
};

/// Where and what the insertion maps insert.
struct InsertionConfig {
  std::vector<LayerRotation> layer{{0, Axis::X, 0.39269908169872414}};  // RX(pi/8) on qubit 0
  /// Gate index of the split; unset means floor(l / 2).
  std::optional<std::size_t> split;

  std::size_t split_for(const Circuit& c) const;
  friend bool operator==(const InsertionConfig&, const InsertionConfig&) = default;
};

/// Which feature map to build and its sizes. J is the number of perturbed
/// columns (J1 for InsertionZne), J2 the number of noise levels.
struct FeatureMapSpec {
  FeatureMapKind kind = FeatureMapKind::Classical;
  std::size_t J = 1;
  std::size_t J2 = 1;
  InsertionConfig insertion;
  /// Insertion powers t_1..t_J; empty means t_i = i - 1.
  std::vector<double> t_schedule;
  FoldScheme scheme = FoldScheme::Incremental;

  static FeatureMapSpec classical();
  static FeatureMapSpec geometric(std::size_t J);
  static FeatureMapSpec zne(std::size_t J, FoldScheme scheme = FoldScheme::Incremental);
  static FeatureMapSpec insertion_map(std::size_t J);
  static FeatureMapSpec insertion_zne(std::size_t J1, std::size_t J2);

  /// Throws std::invalid_argument when sizes or schedules are inconsistent.
  void validate() const;
  std::size_t dimension() const;
  double t(std::size_t i) const;
  /// Perturbations behind columns 1..dimension()-1, in column order.
  /// InsertionZne lists noise level m = 0..J2-1 as the outer loop and
  /// t_1..t_J1 as the inner loop.
  std::vector<Perturbation> perturbations() const;
  /// e.g. "classical", "geometric", "insertion_zne".
  std::string name() const;
  bool needs_cnots() const;
};

nlohmann::json to_json(const FeatureMapSpec& s);
FeatureMapSpec feature_map_from_json(const nlohmann::json& j);

/// Perturbed circuit (ignoring `copies`) and the noise it runs under.
struct PerturbedRun {
  Circuit circuit;
  NoiseModel noise;
};
PerturbedRun perturbed_run(const Circuit& u, const Perturbation& p, const InsertionConfig& ins,
                           const NoiseModel& noise);

/// Memoized outcome distributions of the perturbations of one circuit under
/// one noise model. Several feature maps can share one cache as long as they
/// share the insertion configuration. Not thread-safe; use one per task.
class OutcomeCache {
 public:
  OutcomeCache(Circuit u, NoiseModel noise, Observable obs, InsertionConfig insertion = {});

  const Circuit& circuit() const { return u_; }
  const NoiseModel& noise() const { return noise_; }
  const Observable& observable() const { return obs_; }
  const InsertionConfig& insertion() const { return insertion_; }

  const OutcomeDistribution& outcomes(const Perturbation& p);
  double exact(const Perturbation& p) { return outcomes(p).mean(); }
  std::size_t simulations() const { return simulations_; }

 private:
  Circuit u_;
  NoiseModel noise_;
  Observable obs_;
  InsertionConfig insertion_;
  std::map<Perturbation, OutcomeDistribution> memo_;
  // Output of the most copies evaluated so far, for incremental geometric runs.
  std::unique_ptr<DensityMatrix> geometric_state_;
  int geometric_copies_ = 0;
  std::size_t simulations_ = 0;
};

/// Shot budget per feature entry; nullopt = exact expectation values.
using Shots = std::optional<std::size_t>;

/// [1, phi(P_1(U)), ..., phi(P_J(U))]. In sampled mode entry j is the mean of
/// `shots` draws from the stream rng.child(perturbation key).
std::vector<double> feature_vector(OutcomeCache& cache, const FeatureMapSpec& spec, Shots shots,
                                   const RngStream& rng);

std::vector<double> feature_vector(const Circuit& u, const FeatureMapSpec& spec,
                                   const NoiseModel& noise, const Observable& obs, Shots shots,
                                   const RngStream& rng);

}  // namespace cdr
