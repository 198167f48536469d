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

#include <doctest.h>

#include <numbers>
#include <stdexcept>

#include "cdr/circuit.hpp"
#include "cdr/rng.hpp"
#include "cdr/simulator.hpp"
#include "oracle.hpp"

using namespace cdr;

namespace {

constexpr double kPi = std::numbers::pi;

double max_abs_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) { return (a - b).cwiseAbs().maxCoeff(); }

Circuit three_cnot_circuit() {
  Circuit c(3);
  c.append(Gate::rotation(Axis::X, 0, 0.3));
  c.append(Gate::cnot(0, 1));
  c.append(Gate::rotation(Axis::Y, 2, 1.1));
  c.append(Gate::cnot(1, 2));
  c.append(Gate::cnot(2, 0));
  c.append(Gate::rotation(Axis::Z, 1, -0.4));
  return c;
}

}  // namespace

TEST_CASE("rng streams are reproducible and independent") {
  const RngStream a(42);
  CHECK(a.child(3).engine()() == RngStream(42).child(3).engine()());
  CHECK(a.child(3).engine()() != a.child(4).engine()());
  CHECK(a.child(1).child(2) != a.child(2).child(1));
  CHECK(RngStream(1).child(0).engine()() != RngStream(2).child(0).engine()());
}

TEST_CASE("gates validate their operands") {
  Circuit c(2);
  CHECK_THROWS_AS(c.append(Gate::cnot(0, 0)), std::invalid_argument);
  CHECK_THROWS_AS(c.append(Gate::cnot(0, 2)), std::invalid_argument);
  CHECK_THROWS_AS(c.append(Gate::rotation(Axis::X, -1, 0.1)), std::invalid_argument);
  c.append(Gate::rotation(Axis::Y, 1, 0.2));
  CHECK(c.size() == 1);
  CHECK(!c.is_clifford());
  CHECK(c[0].axis() == Axis::Y);
}

TEST_CASE("random circuits") {
  const RngStream rng(2024);
  SUBCASE("deterministic under a fixed stream") {
    const Circuit a = random_circuit(3, 30, rng);
    CHECK(a.size() == 30);
    CHECK(a.num_qubits() == 3);
    CHECK(a == random_circuit(3, 30, rng));
    CHECK(!(a == random_circuit(3, 30, rng.child(1))));
  }
  SUBCASE("only the four generator kinds") {
    for (std::uint64_t s = 0; s < 50; ++s) {
      const Circuit c = random_circuit(2, 1, rng.child(s));
      REQUIRE(c.size() == 1);
      const GateKind k = c[0].kind;
      CHECK((k == GateKind::CNOT || k == GateKind::RX || k == GateKind::RY || k == GateKind::RZ));
    }
  }
  SUBCASE("minimum CNOT count") {
    for (std::uint64_t s = 0; s < 50; ++s) {
      const Circuit c = random_circuit(3, 25, rng.child(s), std::size_t{6});
      CHECK(c.cnot_count() >= 6);
      CHECK(c.size() == 25);
    }
  }
  SUBCASE("invalid requests") {
    CHECK_THROWS_AS(random_circuit(1, 5, rng), std::invalid_argument);
    CHECK_THROWS_AS(random_circuit(3, 0, rng), std::invalid_argument);
    CHECK_THROWS_AS(random_circuit(3, 5, rng, std::size_t{6}), std::invalid_argument);
  }
  SUBCASE("Clifford generator emits Clifford gates") {
    for (std::uint64_t s = 0; s < 20; ++s) CHECK(random_clifford_circuit(4, 40, rng.child(s)).is_clifford());
  }
}

TEST_CASE("QFT circuit") {
  SUBCASE("single qubit is H H") {
    const Circuit c = qft_circuit(1);
    REQUIRE(c.size() == 2);
    CHECK(c[0].kind == GateKind::H);
    CHECK(c[1].kind == GateKind::H);
  }
  SUBCASE("matches the Fourier matrix after a Hadamard layer") {
    for (int n = 2; n <= 5; ++n) {
      const auto dim = Eigen::Index{1} << n;
      Eigen::MatrixXcd f(dim, dim);
      for (Eigen::Index j = 0; j < dim; ++j) {
        for (Eigen::Index k = 0; k < dim; ++k) {
          f(j, k) = std::polar(1.0 / std::sqrt(static_cast<double>(dim)),
                               2 * kPi * static_cast<double>(j * k) / static_cast<double>(dim));
        }
      }
      Eigen::MatrixXcd h = Eigen::MatrixXcd::Identity(1, 1);
      for (int q = 0; q < n; ++q) h = oracle::kron(h, oracle::single_qubit(Gate::single(GateKind::H, 0)));
      const Eigen::MatrixXcd u = oracle::unitary(qft_circuit(n));
      CHECK(std::abs((u.adjoint() * (f * h)).trace()) == doctest::Approx(static_cast<double>(dim)).epsilon(1e-12));
    }
  }
  SUBCASE("uses only enum gates, no raw controlled phase") {
    const Circuit c = qft_circuit(3);
    for (const Gate& g : c.gates()) {
      CHECK((g.is_rotation() || g.kind == GateKind::H || g.kind == GateKind::CNOT));
    }
    CHECK(c.provenance() == Provenance::Qft);
  }
}

TEST_CASE("CNOT folding") {
  const Circuit c = three_cnot_circuit();
  REQUIRE(c.cnot_count() == 3);
  SUBCASE("zero steps leaves the circuit unchanged") { CHECK(fold_cnots(c, 0) == c); }
  SUBCASE("one step adds a pair after the first CNOT") {
    const Circuit f = fold_cnots(c, 1);
    CHECK(f.cnot_count() == 5);
    CHECK(f.size() == c.size() + 2);
    CHECK(f[1] == Gate::cnot(0, 1));
    CHECK(f[2] == Gate::cnot(0, 1));
    CHECK(f[3] == Gate::cnot(0, 1));
    CHECK(f[4].kind == GateKind::RY);
  }
  SUBCASE("k steps add one pair after every CNOT") {
    const Circuit f = fold_cnots(c, 3);
    CHECK(f.cnot_count() == 9);
    CHECK(f == fold_cnots_uniform(c, 1));
  }
  SUBCASE("noise factors") {
    CHECK(fold_noise_factor(3, 0) == 1.0);
    CHECK(fold_noise_factor(3, 1) == doctest::Approx(1.0 + 2.0 / 3.0));
    CHECK(fold_noise_factor(3, 3) == doctest::Approx(3.0));
    CHECK_THROWS_AS(fold_noise_factor(0, 1), std::invalid_argument);
  }
  SUBCASE("ideal action unchanged") {
    const Eigen::MatrixXcd u = oracle::unitary(c);
    for (std::size_t steps : {1, 2, 4, 7}) CHECK(max_abs_diff(oracle::unitary(fold_cnots(c, steps)), u) < 1e-12);
    CHECK(max_abs_diff(oracle::unitary(fold_cnots_uniform(c, 3)), u) < 1e-12);
  }
  SUBCASE("no CNOTs to fold") {
    Circuit r(2);
    r.append(Gate::rotation(Axis::X, 0, 0.1));
    CHECK_THROWS_AS(fold_cnots(r, 1), std::invalid_argument);
  }
}

TEST_CASE("layer insertion") {
  const Circuit c = random_circuit(3, 16, RngStream(5));
  const std::vector<LayerRotation> v{{0, Axis::X, kPi / 8}};
  SUBCASE("t = 2 inserts RX(pi/4) at the split") {
    const Circuit out = insert_layer(c, 8, v, 2.0);
    REQUIRE(out.size() == 17);
    CHECK(out[8].kind == GateKind::RX);
    CHECK(out[8].qubits[0] == 0);
    CHECK(out[8].angle == doctest::Approx(kPi / 4));
  }
  SUBCASE("t = 0 is the identity") {
    CHECK(max_abs_diff(oracle::unitary(insert_layer(c, 8, v, 0.0)), oracle::unitary(c)) < 1e-12);
  }
  SUBCASE("additive in t") {
    const Circuit twice = insert_layer(insert_layer(c, 8, v, 1.0), 8, v, 1.0);
    CHECK(max_abs_diff(oracle::unitary(twice), oracle::unitary(insert_layer(c, 8, v, 2.0))) < 1e-12);
  }
  SUBCASE("split beyond the end") { CHECK_THROWS_AS(insert_layer(c, 17, v, 1.0), std::invalid_argument); }
}

TEST_CASE("circuit JSON round trip") {
  const Circuit c = random_circuit(4, 40, RngStream(99));
  const Circuit back = circuit_from_json(nlohmann::json::parse(to_json(c).dump()));
  CHECK(back == c);
  CHECK(back.provenance() == c.provenance());
  CHECK_THROWS(circuit_from_json(nlohmann::json::parse(R"({"n": 2, "gates": [{"kind": "CNOT", "qubits": [0, 0]}]})")));
  CHECK_THROWS(circuit_from_json(nlohmann::json::parse(R"({"n": 2, "gates": [{"kind": "CZ", "qubits": [0, 1]}]})")));
}

TEST_CASE("dense unitary agrees with the Kronecker oracle") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Circuit c = random_circuit(3, 20, RngStream(7).child(s));
    CHECK(max_abs_diff(circuit_unitary(c), oracle::unitary(c)) < 1e-12);
  }
  Circuit all(2);
  for (GateKind k : {GateKind::I, GateKind::X, GateKind::Y, GateKind::Z, GateKind::SqrtX, GateKind::SqrtY,
                     GateKind::SqrtZ, GateKind::H}) {
    all.append(Gate::single(k, 1));
  }
  all.append(Gate::cnot(1, 0));
  CHECK(max_abs_diff(circuit_unitary(all), oracle::unitary(all)) < 1e-12);
}
