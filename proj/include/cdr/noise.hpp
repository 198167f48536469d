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

#include <string_view>

#include <json.hpp>

namespace cdr {

enum class NoiseKind { None, CnotDepolarizing, LayerDepolarizing, GlobalDepolarizing };

std::string_view to_string(NoiseKind kind);
NoiseKind noise_kind_from_string(std::string_view name);

/// Where depolarizing noise is placed and how strong it is.
///
///   CnotDepolarizing   single-qubit D_p on control, then target, after each CNOT
///   LayerDepolarizing  D_p on every qubit after each greedily packed layer
///   GlobalDepolarizing (1-p) rho + p I/2^n once on the circuit output
struct NoiseModel {
  NoiseKind kind = NoiseKind::None;
  double p = 0.0;

  static NoiseModel none() { return {}; }
  static NoiseModel cnot_depolarizing(double p);
  static NoiseModel layer_depolarizing(double p);
  static NoiseModel global_depolarizing(double p);

  /// Noise seen by a circuit whose two-qubit noise was amplified by `lambda`
  /// through folding. Gate-local models amplify themselves through the extra
  /// gates and are returned unchanged; the global model becomes
  /// 1 - (1-p)^lambda.
  NoiseModel amplified(double lambda) const;

  friend bool operator==(const NoiseModel&, const NoiseModel&) = default;
};

nlohmann::json to_json(const NoiseModel& n);
NoiseModel noise_from_json(const nlohmann::json& j);

}  // namespace cdr
