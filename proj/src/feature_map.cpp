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

#include "cdr/feature_map.hpp"

#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace cdr {

std::string_view to_string(FeatureMapKind kind) {
  switch (kind) {
    case FeatureMapKind::Classical: return "classical";
    case FeatureMapKind::Geometric: return "geometric";
    case FeatureMapKind::Zne: return "zne";
    case FeatureMapKind::Insertion: return "insertion";
    case FeatureMapKind::InsertionZne: return "insertion_zne";
  }
  return "classical";
}

FeatureMapKind feature_map_kind_from_string(std::string_view name) {
  if (name == "classical") return FeatureMapKind::Classical;
  if (name == "geometric") return FeatureMapKind::Geometric;
  if (name == "zne") return FeatureMapKind::Zne;
  if (name == "insertion") return FeatureMapKind::Insertion;
  if (name == "insertion_zne") return FeatureMapKind::InsertionZne;
  throw std::invalid_argument("unknown feature map '" + std::string(name) + "'");
}

std::string_view to_string(FoldScheme s) {
  return s == FoldScheme::Incremental ? "incremental" : "uniform";
}

FoldScheme fold_scheme_from_string(std::string_view name) {
  if (name == "incremental") return FoldScheme::Incremental;
  if (name == "uniform") return FoldScheme::Uniform;
  throw std::invalid_argument("unknown fold scheme '" + std::string(name) + "'");
}

std::string Perturbation::label() const {
  std::ostringstream out;
  out << "copies" << copies;
  if (t) out << "_t" << *t;
  if (fold_level > 0) out << "_fold" << fold_level << (scheme == FoldScheme::Uniform ? "u" : "");
  return out.str();
}

std::uint64_t Perturbation::key() const {
  std::uint64_t h = mix64(0x9e3779b97f4a7c15ULL, static_cast<std::uint64_t>(copies));
  h = mix64(h, t ? std::bit_cast<std::uint64_t>(*t) : 0xffffffffffffffffULL);
  h = mix64(h, fold_level);
  return mix64(h, fold_level == 0 ? 0 : static_cast<std::uint64_t>(scheme));
}

std::size_t InsertionConfig::split_for(const Circuit& c) const {
  const std::size_t s = split.value_or(c.size() / 2);
  if (s > c.size()) throw std::invalid_argument("insertion split beyond circuit end");
  return s;
}

FeatureMapSpec FeatureMapSpec::classical() { return {}; }

FeatureMapSpec FeatureMapSpec::geometric(std::size_t J) {
  FeatureMapSpec s;
  s.kind = FeatureMapKind::Geometric;
  s.J = J;
  return s;
}

FeatureMapSpec FeatureMapSpec::zne(std::size_t J, FoldScheme scheme) {
  FeatureMapSpec s;
  s.kind = FeatureMapKind::Zne;
  s.J = J;
  s.scheme = scheme;
  return s;
}

FeatureMapSpec FeatureMapSpec::insertion_map(std::size_t J) {
  FeatureMapSpec s;
  s.kind = FeatureMapKind::Insertion;
  s.J = J;
  return s;
}

FeatureMapSpec FeatureMapSpec::insertion_zne(std::size_t J1, std::size_t J2) {
  FeatureMapSpec s;
  s.kind = FeatureMapKind::InsertionZne;
  s.J = J1;
  s.J2 = J2;
  return s;
}

void FeatureMapSpec::validate() const {
  if (J == 0) throw std::invalid_argument("feature map needs J >= 1");
  if (kind == FeatureMapKind::Classical && J != 1) {
    throw std::invalid_argument("classical map has exactly one perturbed column");
  }
  if (kind == FeatureMapKind::InsertionZne && J2 == 0) {
    throw std::invalid_argument("insertion_zne needs J2 >= 1");
  }
  if (!t_schedule.empty() && t_schedule.size() != J) {
    throw std::invalid_argument("t schedule must list exactly J values");
  }
  for (double t : t_schedule) {
    if (!std::isfinite(t)) throw std::invalid_argument("t schedule values must be finite");
  }
}

std::size_t FeatureMapSpec::dimension() const {
  switch (kind) {
    case FeatureMapKind::Classical: return 2;
    case FeatureMapKind::InsertionZne: return J * J2 + 1;
    default: return J + 1;
  }
}

double FeatureMapSpec::t(std::size_t i) const {
  return t_schedule.empty() ? static_cast<double>(i) : t_schedule.at(i);
}

std::vector<Perturbation> FeatureMapSpec::perturbations() const {
  validate();
  std::vector<Perturbation> out;
  switch (kind) {
    case FeatureMapKind::Classical:
      out.push_back({});
      break;
    case FeatureMapKind::Geometric:
      for (std::size_t j = 1; j <= J; ++j) out.push_back({static_cast<int>(j), std::nullopt, 0, scheme});
      break;
    case FeatureMapKind::Zne:
      for (std::size_t m = 0; m < J; ++m) out.push_back({1, std::nullopt, m, scheme});
      break;
    case FeatureMapKind::Insertion:
      for (std::size_t i = 0; i < J; ++i) out.push_back({1, t(i), 0, scheme});
      break;
    case FeatureMapKind::InsertionZne:
      for (std::size_t m = 0; m < J2; ++m) {
        for (std::size_t i = 0; i < J; ++i) out.push_back({1, t(i), m, scheme});
      }
      break;
  }
  // Level-0 folds are the same circuit whatever the scheme, and V^0 is the
  // identity rather than a physical gate; normalize so equal circuits share
  // cache entries and shot streams.
  for (auto& p : out) {
    if (p.fold_level == 0) p.scheme = FoldScheme::Incremental;
    if (p.t && *p.t == 0.0) p.t.reset();
  }
  return out;
}

std::string FeatureMapSpec::name() const { return std::string(to_string(kind)); }

bool FeatureMapSpec::needs_cnots() const {
  return kind == FeatureMapKind::Zne || (kind == FeatureMapKind::InsertionZne && J2 > 1);
}

nlohmann::json to_json(const FeatureMapSpec& s) {
  nlohmann::json j{{"kind", to_string(s.kind)}, {"J", s.J}};
  if (s.kind == FeatureMapKind::InsertionZne) j["J2"] = s.J2;
  if (s.kind == FeatureMapKind::Zne || s.kind == FeatureMapKind::InsertionZne) {
    j["fold"] = to_string(s.scheme);
  }
  if (s.kind == FeatureMapKind::Insertion || s.kind == FeatureMapKind::InsertionZne) {
    nlohmann::json layer = nlohmann::json::array();
    for (const auto& r : s.insertion.layer) {
      layer.push_back({{"qubit", r.qubit}, {"axis", to_string(r.axis)}, {"angle", r.angle}});
    }
    j["layer"] = layer;
    if (s.insertion.split) j["split"] = *s.insertion.split;
    if (!s.t_schedule.empty()) j["t"] = s.t_schedule;
  }
  return j;
}

FeatureMapSpec feature_map_from_json(const nlohmann::json& j) {
  FeatureMapSpec s;
  s.kind = feature_map_kind_from_string(j.at("kind").get<std::string>());
  s.J = j.value("J", s.kind == FeatureMapKind::Classical ? 1 : 0);
  if (j.contains("J1")) s.J = j.at("J1").get<std::size_t>();
  s.J2 = j.value("J2", std::size_t{1});
  if (j.contains("fold")) s.scheme = fold_scheme_from_string(j.at("fold").get<std::string>());
  if (j.contains("layer")) {
    s.insertion.layer.clear();
    for (const auto& r : j.at("layer")) {
      s.insertion.layer.push_back({r.at("qubit").get<int>(),
                                   axis_from_string(r.at("axis").get<std::string>()),
                                   r.at("angle").get<double>()});
    }
  }
  if (j.contains("split")) s.insertion.split = j.at("split").get<std::size_t>();
  if (j.contains("t")) s.t_schedule = j.at("t").get<std::vector<double>>();
  s.validate();
  return s;
}

PerturbedRun perturbed_run(const Circuit& u, const Perturbation& p, const InsertionConfig& ins,
                           const NoiseModel& noise) {
  Circuit c = p.t && *p.t != 0.0 ? insert_layer(u, ins.split_for(u), ins.layer, *p.t) : u;
  if (p.fold_level == 0) return {std::move(c), noise};
  const std::size_t k = c.cnot_count();
  if (p.scheme == FoldScheme::Incremental) {
    const double lambda = fold_noise_factor(k, p.fold_level);
    return {fold_cnots(c, p.fold_level), noise.amplified(lambda)};
  }
  if (k == 0) throw std::invalid_argument("cannot fold a circuit without CNOTs");
  const double lambda = 2.0 * static_cast<double>(p.fold_level) + 1.0;
  return {fold_cnots_uniform(c, p.fold_level), noise.amplified(lambda)};
}

OutcomeCache::OutcomeCache(Circuit u, NoiseModel noise, Observable obs, InsertionConfig insertion)
    : u_(std::move(u)), noise_(noise), obs_(std::move(obs)), insertion_(std::move(insertion)) {
  if (obs_.num_qubits() != u_.num_qubits()) throw std::invalid_argument("observable size mismatch");
}

const OutcomeDistribution& OutcomeCache::outcomes(const Perturbation& p) {
  if (auto it = memo_.find(p); it != memo_.end()) return it->second;
  if (p.copies < 1) throw std::invalid_argument("perturbation needs at least one copy");
  OutcomeDistribution dist;
  if (p.copies == 1) {
    const PerturbedRun run = perturbed_run(u_, p, insertion_, noise_);
    dist = circuit_outcomes(run.circuit, run.noise, obs_);
    ++simulations_;
  } else {
    if (p.t || p.fold_level > 0) {
      throw std::invalid_argument("geometric copies cannot be combined with insertion or folding");
    }
    if (!geometric_state_ || geometric_copies_ > p.copies) {
      geometric_state_ = std::make_unique<DensityMatrix>(DensityMatrix::zero_state(u_.num_qubits()));
      geometric_copies_ = 0;
    }
    while (geometric_copies_ < p.copies) {
      evolve(*geometric_state_, u_, noise_);
      ++geometric_copies_;
      ++simulations_;
    }
    dist = outcome_distribution(*geometric_state_, obs_);
  }
  return memo_.emplace(p, std::move(dist)).first->second;
}

std::vector<double> feature_vector(OutcomeCache& cache, const FeatureMapSpec& spec, Shots shots,
                                   const RngStream& rng) {
  if (spec.kind == FeatureMapKind::Insertion || spec.kind == FeatureMapKind::InsertionZne) {
    if (!(spec.insertion == cache.insertion())) {
      throw std::invalid_argument("feature map insertion config differs from the cache's");
    }
  }
  if (spec.needs_cnots() && cache.circuit().cnot_count() == 0) {
    throw std::invalid_argument("ZNE feature maps need a circuit with at least one CNOT");
  }
  if (shots && *shots == 0) throw std::invalid_argument("need at least one shot");
  std::vector<double> phi{1.0};
  for (const Perturbation& p : spec.perturbations()) {
    const OutcomeDistribution& dist = cache.outcomes(p);
    if (!shots) {
      phi.push_back(dist.mean());
    } else {
      auto eng = rng.child(p.key()).engine();
      phi.push_back(sample_mean(dist, *shots, eng));
    }
  }
  return phi;
}

std::vector<double> feature_vector(const Circuit& u, const FeatureMapSpec& spec,
                                   const NoiseModel& noise, const Observable& obs, Shots shots,
                                   const RngStream& rng) {
  OutcomeCache cache(u, noise, obs, spec.insertion);
  return feature_vector(cache, spec, shots, rng);
}

}  // namespace cdr
