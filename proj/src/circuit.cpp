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

#include "cdr/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cdr {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct KindName {
  GateKind kind;
  std::string_view name;
};

constexpr std::array<KindName, 12> kKindNames{{
    {GateKind::CNOT, "CNOT"},   {GateKind::RX, "RX"},       {GateKind::RY, "RY"},
    {GateKind::RZ, "RZ"},       {GateKind::I, "I"},         {GateKind::X, "X"},
    {GateKind::Y, "Y"},         {GateKind::Z, "Z"},         {GateKind::SqrtX, "SqrtX"},
    {GateKind::SqrtY, "SqrtY"}, {GateKind::SqrtZ, "SqrtZ"}, {GateKind::H, "H"},
}};

GateKind rotation_kind(Axis axis) {
  switch (axis) {
    case Axis::X: return GateKind::RX;
    case Axis::Y: return GateKind::RY;
    case Axis::Z: return GateKind::RZ;
  }
  throw std::invalid_argument("bad axis");
}

Gate random_cnot(int n, std::mt19937_64& eng) {
  std::uniform_int_distribution<int> pick_control(0, n - 1);
  std::uniform_int_distribution<int> pick_target(0, n - 2);
  int control = pick_control(eng);
  int target = pick_target(eng);
  if (target >= control) ++target;
  return Gate::cnot(control, target);
}

}  // namespace

std::string_view to_string(GateKind kind) {
  for (const auto& kn : kKindNames) {
    if (kn.kind == kind) return kn.name;
  }
  return "?";
}

GateKind gate_kind_from_string(std::string_view name) {
  for (const auto& kn : kKindNames) {
    if (kn.name == name) return kn.kind;
  }
  throw std::invalid_argument("unknown gate kind: " + std::string(name));
}

std::string_view to_string(Axis axis) {
  switch (axis) {
    case Axis::X: return "X";
    case Axis::Y: return "Y";
    case Axis::Z: return "Z";
  }
  return "?";
}

Axis axis_from_string(std::string_view name) {
  if (name == "X" || name == "x") return Axis::X;
  if (name == "Y" || name == "y") return Axis::Y;
  if (name == "Z" || name == "z") return Axis::Z;
  throw std::invalid_argument("unknown axis: " + std::string(name));
}

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::None: return "none";
    case Provenance::Random: return "random";
    case Provenance::Qft: return "qft";
    case Provenance::Training: return "training";
    case Provenance::Folded: return "folded";
    case Provenance::Insertion: return "insertion";
  }
  return "none";
}

double canonical_angle(double radians) {
  double a = std::fmod(radians, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  // fmod of a tiny negative value can round back up to exactly 2*pi.
  if (a >= kTwoPi) a = 0.0;
  return a;
}

Gate Gate::cnot(int control, int target) {
  if (control == target) {
    throw std::invalid_argument("CNOT control and target must differ");
  }
  return Gate{GateKind::CNOT, 0.0, {control, target}};
}

Gate Gate::rotation(Axis axis, int qubit, double angle) {
  return Gate{rotation_kind(axis), canonical_angle(angle), {qubit, -1}};
}

Gate Gate::single(GateKind kind, int qubit) {
  if (kind == GateKind::CNOT) throw std::invalid_argument("CNOT is not single-qubit");
  if (kind == GateKind::RX || kind == GateKind::RY || kind == GateKind::RZ) {
    throw std::invalid_argument("rotations need an angle; use Gate::rotation");
  }
  return Gate{kind, 0.0, {qubit, -1}};
}

bool Gate::is_rotation() const {
  return kind == GateKind::RX || kind == GateKind::RY || kind == GateKind::RZ;
}

Axis Gate::axis() const {
  switch (kind) {
    case GateKind::RX: return Axis::X;
    case GateKind::RY: return Axis::Y;
    case GateKind::RZ: return Axis::Z;
    default: throw std::invalid_argument("gate is not a rotation");
  }
}

Circuit::Circuit(int num_qubits, Provenance provenance)
    : n_(num_qubits), provenance_(provenance) {
  if (num_qubits < 1) throw std::invalid_argument("circuit needs at least one qubit");
}

Circuit::Circuit(int num_qubits, std::vector<Gate> gates, Provenance provenance)
    : Circuit(num_qubits, provenance) {
  for (auto& g : gates) {
    if (g.is_rotation()) g.angle = canonical_angle(g.angle);
    validate(g);
  }
  gates_ = std::move(gates);
}

void Circuit::validate(const Gate& g) const {
  auto in_range = [this](int q) { return q >= 0 && q < n_; };
  if (!in_range(g.qubits[0])) throw std::invalid_argument("gate qubit index out of range");
  if (g.is_two_qubit()) {
    if (!in_range(g.qubits[1])) throw std::invalid_argument("gate qubit index out of range");
    if (g.qubits[0] == g.qubits[1]) {
      throw std::invalid_argument("CNOT control and target must differ");
    }
  } else if (g.qubits[1] != -1) {
    throw std::invalid_argument("single-qubit gate carries a second qubit");
  }
}

void Circuit::append(const Gate& g) {
  Gate copy = g;
  if (copy.is_rotation()) copy.angle = canonical_angle(copy.angle);
  validate(copy);
  gates_.push_back(copy);
}

void Circuit::append(const Circuit& other) {
  if (other.n_ != n_) throw std::invalid_argument("qubit count mismatch");
  gates_.insert(gates_.end(), other.gates_.begin(), other.gates_.end());
}

bool Circuit::is_clifford() const {
  return std::none_of(gates_.begin(), gates_.end(),
                      [](const Gate& g) { return g.is_rotation(); });
}

std::size_t Circuit::cnot_count() const {
  return static_cast<std::size_t>(std::count_if(
      gates_.begin(), gates_.end(), [](const Gate& g) { return g.is_two_qubit(); }));
}

std::vector<std::size_t> Circuit::rotation_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < gates_.size(); ++i) {
    if (gates_[i].is_rotation()) out.push_back(i);
  }
  return out;
}

Circuit random_circuit(int num_qubits, std::size_t num_gates, const RngStream& rng,
                       std::optional<std::size_t> min_cnots) {
  if (num_qubits < 2) throw std::invalid_argument("random circuits need n >= 2");
  if (num_gates < 1) throw std::invalid_argument("random circuits need at least one gate");
  if (min_cnots && *min_cnots > num_gates) {
    throw std::invalid_argument("min_cnots exceeds the gate count");
  }
  auto eng = rng.engine();
  std::uniform_int_distribution<int> pick_kind(0, 3);
  std::uniform_int_distribution<int> pick_qubit(0, num_qubits - 1);
  std::uniform_real_distribution<double> pick_angle(0.0, kTwoPi);

  std::vector<Gate> gates;
  gates.reserve(num_gates);
  for (std::size_t i = 0; i < num_gates; ++i) {
    int kind = pick_kind(eng);
    if (kind == 3) {
      gates.push_back(random_cnot(num_qubits, eng));
    } else {
      int q = pick_qubit(eng);
      gates.push_back(Gate::rotation(static_cast<Axis>(kind), q, pick_angle(eng)));
    }
  }

  if (min_cnots) {
    auto count = static_cast<std::size_t>(std::count_if(
        gates.begin(), gates.end(), [](const Gate& g) { return g.is_two_qubit(); }));
    while (count < *min_cnots) {
      std::vector<std::size_t> rotations;
      for (std::size_t i = 0; i < gates.size(); ++i) {
        if (gates[i].is_rotation()) rotations.push_back(i);
      }
      std::uniform_int_distribution<std::size_t> pick(0, rotations.size() - 1);
      gates[rotations[pick(eng)]] = random_cnot(num_qubits, eng);
      ++count;
    }
  }
  return Circuit(num_qubits, std::move(gates), Provenance::Random);
}

Circuit random_clifford_circuit(int num_qubits, std::size_t num_gates,
                                const RngStream& rng) {
  static constexpr std::array<GateKind, 8> kKinds{
      GateKind::H, GateKind::SqrtX, GateKind::SqrtY, GateKind::SqrtZ,
      GateKind::X, GateKind::Y,     GateKind::Z,     GateKind::CNOT};
  auto eng = rng.engine();
  const int kinds = num_qubits >= 2 ? 8 : 7;
  std::uniform_int_distribution<int> pick_kind(0, kinds - 1);
  std::uniform_int_distribution<int> pick_qubit(0, num_qubits - 1);
  Circuit c(num_qubits, Provenance::Random);
  for (std::size_t i = 0; i < num_gates; ++i) {
    GateKind kind = kKinds[pick_kind(eng)];
    if (kind == GateKind::CNOT) {
      c.append(random_cnot(num_qubits, eng));
    } else {
      c.append(Gate::single(kind, pick_qubit(eng)));
    }
  }
  return c;
}

void append_controlled_phase(Circuit& c, int control, int target, double theta) {
  c.append(Gate::rotation(Axis::Z, control, theta / 2.0));
  c.append(Gate::cnot(control, target));
  c.append(Gate::rotation(Axis::Z, target, -theta / 2.0));
  c.append(Gate::cnot(control, target));
  c.append(Gate::rotation(Axis::Z, target, theta / 2.0));
}

Circuit qft_circuit(int num_qubits) {
  if (num_qubits < 1) throw std::invalid_argument("QFT needs n >= 1");
  Circuit c(num_qubits, Provenance::Qft);
  for (int q = 0; q < num_qubits; ++q) c.append(Gate::single(GateKind::H, q));
  for (int j = 0; j < num_qubits; ++j) {
    c.append(Gate::single(GateKind::H, j));
    for (int k = j + 1; k < num_qubits; ++k) {
      const double theta = kTwoPi / std::ldexp(1.0, k - j + 1);
      append_controlled_phase(c, k, j, theta);
    }
  }
  for (int a = 0, b = num_qubits - 1; a < b; ++a, --b) {
    c.append(Gate::cnot(a, b));
    c.append(Gate::cnot(b, a));
    c.append(Gate::cnot(a, b));
  }
  return c;
}

Circuit fold_cnots(const Circuit& c, std::size_t steps) {
  if (steps == 0) return c;
  const std::size_t k = c.cnot_count();
  if (k == 0) throw std::invalid_argument("cannot fold a circuit without CNOTs");
  Circuit out(c.num_qubits(), Provenance::Folded);
  std::size_t original = 0;
  for (const Gate& g : c.gates()) {
    out.append(g);
    if (!g.is_two_qubit()) continue;
    const std::size_t pairs = steps / k + (original < steps % k ? 1 : 0);
    for (std::size_t p = 0; p < 2 * pairs; ++p) out.append(g);
    ++original;
  }
  return out;
}

Circuit fold_cnots_uniform(const Circuit& c, std::size_t pairs_per_cnot) {
  if (pairs_per_cnot == 0) return c;
  Circuit out(c.num_qubits(), Provenance::Folded);
  for (const Gate& g : c.gates()) {
    out.append(g);
    if (!g.is_two_qubit()) continue;
    for (std::size_t p = 0; p < 2 * pairs_per_cnot; ++p) out.append(g);
  }
  return out;
}

double fold_noise_factor(std::size_t cnot_count, std::size_t steps) {
  if (steps == 0) return 1.0;
  if (cnot_count == 0) throw std::invalid_argument("cannot fold a circuit without CNOTs");
  return 1.0 + 2.0 * static_cast<double>(steps) / static_cast<double>(cnot_count);
}

Circuit insert_layer(const Circuit& c, std::size_t split,
                     std::span<const LayerRotation> layer, double t) {
  if (split > c.size()) throw std::invalid_argument("split point beyond circuit end");
  Circuit out(c.num_qubits(), Provenance::Insertion);
  for (std::size_t i = 0; i < split; ++i) out.append(c[i]);
  for (const auto& r : layer) out.append(Gate::rotation(r.axis, r.qubit, t * r.angle));
  for (std::size_t i = split; i < c.size(); ++i) out.append(c[i]);
  return out;
}

nlohmann::json to_json(const Circuit& c) {
  nlohmann::json gates = nlohmann::json::array();
  for (const Gate& g : c.gates()) {
    nlohmann::json jg;
    jg["kind"] = std::string(to_string(g.kind));
    if (g.is_rotation()) jg["angle"] = g.angle;
    if (g.is_two_qubit()) {
      jg["qubits"] = {g.qubits[0], g.qubits[1]};
    } else {
      jg["qubits"] = {g.qubits[0]};
    }
    gates.push_back(std::move(jg));
  }
  nlohmann::json j{{"n", c.num_qubits()}, {"gates", std::move(gates)}};
  if (c.provenance() != Provenance::None) {
    j["metadata"] = std::string(to_string(c.provenance()));
  }
  return j;
}

Circuit circuit_from_json(const nlohmann::json& j) {
  const int n = j.at("n").get<int>();
  std::vector<Gate> gates;
  for (const auto& jg : j.at("gates")) {
    const GateKind kind = gate_kind_from_string(jg.at("kind").get<std::string>());
    const auto qubits = jg.at("qubits").get<std::vector<int>>();
    Gate g;
    g.kind = kind;
    if (kind == GateKind::CNOT) {
      if (qubits.size() != 2) throw std::invalid_argument("CNOT needs two qubits");
      g.qubits = {qubits[0], qubits[1]};
    } else {
      if (qubits.size() != 1) throw std::invalid_argument("single-qubit gate needs one qubit");
      g.qubits = {qubits[0], -1};
    }
    if (g.is_rotation()) {
      g.angle = jg.at("angle").get<double>();
    } else if (jg.contains("angle")) {
      throw std::invalid_argument("angle given for a non-rotation gate");
    }
    gates.push_back(g);
  }
  Provenance prov = Provenance::None;
  if (j.contains("metadata")) {
    const auto tag = j.at("metadata").get<std::string>();
    for (auto p : {Provenance::Random, Provenance::Qft, Provenance::Training,
                   Provenance::Folded, Provenance::Insertion}) {
      if (tag == to_string(p)) prov = p;
    }
  }
  return Circuit(n, std::move(gates), prov);
}

}  // namespace cdr
