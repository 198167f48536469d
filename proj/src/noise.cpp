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

#include "cdr/noise.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cdr {

namespace {

NoiseModel checked(NoiseKind kind, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("noise probability must lie in [0, 1]");
  return NoiseModel{kind, p};
}

}  // namespace

std::string_view to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::None: return "none";
    case NoiseKind::CnotDepolarizing: return "cnot_depolarizing";
    case NoiseKind::LayerDepolarizing: return "layer_depolarizing";
    case NoiseKind::GlobalDepolarizing: return "global_depolarizing";
  }
  return "none";
}

NoiseKind noise_kind_from_string(std::string_view name) {
  for (auto k : {NoiseKind::None, NoiseKind::CnotDepolarizing, NoiseKind::LayerDepolarizing,
                 NoiseKind::GlobalDepolarizing}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown noise kind: " + std::string(name));
}

NoiseModel NoiseModel::cnot_depolarizing(double p) {
  return checked(NoiseKind::CnotDepolarizing, p);
}
NoiseModel NoiseModel::layer_depolarizing(double p) {
  return checked(NoiseKind::LayerDepolarizing, p);
}
NoiseModel NoiseModel::global_depolarizing(double p) {
  return checked(NoiseKind::GlobalDepolarizing, p);
}

NoiseModel NoiseModel::amplified(double lambda) const {
  if (kind != NoiseKind::GlobalDepolarizing) return *this;
  return NoiseModel{kind, 1.0 - std::pow(1.0 - p, lambda)};
}

nlohmann::json to_json(const NoiseModel& n) {
  return {{"kind", std::string(to_string(n.kind))}, {"p", n.p}};
}

NoiseModel noise_from_json(const nlohmann::json& j) {
  const NoiseKind kind = noise_kind_from_string(j.at("kind").get<std::string>());
  const double p = j.value("p", 0.0);
  if (kind == NoiseKind::None) return NoiseModel::none();
  return checked(kind, p);
}

}  // namespace cdr
