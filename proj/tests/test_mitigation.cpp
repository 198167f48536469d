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

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "cdr/branches.hpp"
#include "cdr/feature_map.hpp"
#include "cdr/kernel.hpp"
#include "cdr/regression.hpp"
#include "cdr/simulator.hpp"
#include "cdr/training.hpp"
#include "oracle.hpp"

using namespace cdr;

namespace {

constexpr double kPi = std::numbers::pi;

FeatureMatrix matrix_from(const std::vector<std::vector<double>>& rows, const std::vector<double>& f) {
  FeatureMatrix fm(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) fm.set_row(i, rows[i], f[i]);
  return fm;
}

}  // namespace

TEST_CASE("rotation coefficients") {
  SUBCASE("values at pi/8") {
    const RotationCoefficients c = rotation_coefficients(kPi / 8);
    CHECK(c.identity == doctest::Approx(0.7705980500730985).epsilon(1e-14));
    CHECK(c.pauli == doctest::Approx(-0.15328148243818826).epsilon(1e-14));
    CHECK(c.sqrt_pauli == doctest::Approx(0.3826834323650898).epsilon(1e-14));
    CHECK(c.l1_norm() == doctest::Approx(1.3065629648763766).epsilon(1e-14));
    const auto p = c.sampling_probabilities();
    CHECK(p[0] == doctest::Approx(0.5897902135516372).epsilon(1e-14));
    CHECK(p[1] == doctest::Approx(0.11731656763491022).epsilon(1e-14));
    CHECK(p[2] == doctest::Approx(0.2928932188134525).epsilon(1e-14));
    CHECK(p[0] + p[1] + p[2] == doctest::Approx(1.0));
  }
  SUBCASE("the three Clifford branches reproduce the rotation") {
    for (Axis axis : {Axis::X, Axis::Y, Axis::Z}) {
      for (double theta : {0.0, 0.3, kPi / 8, 2.0, 4.5, -1.2}) {
        const Gate r = Gate::rotation(axis, 0, theta);
        const RotationCoefficients c = rotation_coefficients(theta);
        // Superoperator action on a generic Hermitian input.
        Eigen::MatrixXcd rho(2, 2);
        rho << 0.6, std::complex<double>(0.1, 0.2), std::complex<double>(0.1, -0.2), 0.4;
        const Eigen::MatrixXcd u = oracle::single_qubit(r);
        const Eigen::MatrixXcd want = u * rho * u.adjoint();
        Eigen::MatrixXcd got = Eigen::MatrixXcd::Zero(2, 2);
        for (Substitute s : {Substitute::Identity, Substitute::Pauli, Substitute::SqrtPauli}) {
          const Eigen::MatrixXcd v = oracle::single_qubit(clifford_substitute(r, s));
          got += c[s] * v * rho * v.adjoint();
        }
        CHECK((got - want).cwiseAbs().maxCoeff() < 1e-12);
      }
    }
  }
  SUBCASE("substitutes keep axis and qubit") {
    const Gate r = Gate::rotation(Axis::Y, 2, 0.4);
    CHECK(clifford_substitute(r, Substitute::Pauli) == Gate::single(GateKind::Y, 2));
    CHECK(clifford_substitute(r, Substitute::SqrtPauli) == Gate::single(GateKind::SqrtY, 2));
    CHECK(clifford_substitute(r, Substitute::Identity) == Gate::single(GateKind::I, 2));
    CHECK_THROWS_AS(clifford_substitute(Gate::single(GateKind::H, 0), Substitute::Pauli), std::invalid_argument);
  }
}

TEST_CASE("branch decomposition") {
  const Observable obs = Observable::default_for(3);
  const Circuit c = random_circuit(3, 25, RngStream(8), std::size_t{2});
  const auto rot = c.rotation_indices();
  REQUIRE(rot.size() >= 4);
  SUBCASE("no free rotations is the circuit itself") {
    const BranchDecomposition bd = decompose_branches(c, {});
    REQUIRE(bd.branches().size() == 1);
    CHECK(bd.branches()[0].weight == 1.0);
    CHECK(branch_expectation(bd, NoiseModel::none(), obs) == doctest::Approx(noiseless_expectation(c, obs)));
  }
  SUBCASE("four free rotations, with and without noise") {
    const std::vector<std::size_t> ids(rot.begin(), rot.begin() + 4);
    const BranchDecomposition bd = decompose_branches(c, ids);
    CHECK(bd.branches().size() == 81);
    CHECK(bd.weight_sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(bd.normalization() == doctest::Approx(normalization_factor(c, ids)).epsilon(1e-12));
    for (const NoiseModel& noise : {NoiseModel::none(), NoiseModel::cnot_depolarizing(0.1)}) {
      const double want = oracle::expectation(oracle::evolve(c, noise), obs.matrix());
      CHECK(std::abs(branch_expectation(bd, noise, obs) - want) < 1e-10);
    }
  }
  SUBCASE("invalid ids") {
    const std::size_t not_rotation = c[rot[0] + 1].is_rotation() ? c.size() : rot[0] + 1;
    CHECK_THROWS_AS(decompose_branches(c, std::vector<std::size_t>{not_rotation}), std::invalid_argument);
    CHECK_THROWS_AS(decompose_branches(c, std::vector<std::size_t>{rot[0], rot[0]}), std::invalid_argument);
  }
  SUBCASE("resource ceiling") {
    const Circuit big = random_circuit(2, 60, RngStream(9));
    auto ids = big.rotation_indices();
    REQUIRE(ids.size() > kMaxFreeRotations);
    CHECK_THROWS_AS(decompose_branches(big, ids), ResourceError);
  }
}

TEST_CASE("training sets") {
  const Observable obs = Observable::default_for(3);
  const Circuit u = random_circuit(3, 30, RngStream(10), std::size_t{1});
  const auto rot = u.rotation_indices();
  REQUIRE(rot.size() >= 7);
  SUBCASE("size, structure and kept rotations") {
    const TrainingSet ts = generate_training_set(u, 120, 7, RngStream(1), obs);
    CHECK(ts.size() == 120);
    CHECK(ts.fixed_ids.size() == 7);
    CHECK(ts.substituted_ids.size() == rot.size() - 7);
    double n_theta = 1.0;
    for (std::size_t id : ts.substituted_ids) n_theta *= rotation_coefficients(u[id].angle).l1_norm();
    CHECK(ts.n_theta == doctest::Approx(n_theta));
    for (const auto& p : ts.pairs) {
      REQUIRE(p.circuit.size() == u.size());
      CHECK(p.circuit.rotation_indices().size() <= 7);
      for (std::size_t i = 0; i < u.size(); ++i) {
        const Gate& g = p.circuit[i];
        CHECK(g.qubits == u[i].qubits);
        if (!u[i].is_rotation()) CHECK(g == u[i]);
      }
      for (std::size_t id : ts.fixed_ids) CHECK(p.circuit[id] == u[id]);
      CHECK(std::abs(p.f) <= 1.0 + 1e-12);
      CHECK(p.f == doctest::Approx(noiseless_expectation(p.circuit, obs)).epsilon(1e-12));
      int sign = 1;
      for (std::size_t k = 0; k < ts.substituted_ids.size(); ++k) {
        if (rotation_coefficients(u[ts.substituted_ids[k]].angle)[p.choices[k]] < 0) sign = -sign;
      }
      CHECK(p.sign == sign);
    }
  }
  SUBCASE("all-Clifford circuit") {
    const Circuit c = random_clifford_circuit(3, 20, RngStream(2));
    const TrainingSet ts = generate_training_set(c, 5, 0, RngStream(3), obs);
    for (const auto& p : ts.pairs) {
      CHECK(p.circuit == c);
      CHECK(p.f == doctest::Approx(noiseless_expectation(c, obs)));
    }
  }
  SUBCASE("substitution frequencies follow |c|/z") {
    Circuit one(3);
    one.append(Gate::rotation(Axis::X, 0, kPi / 8));
    const TrainingSet ts = generate_training_set(one, 20000, 0, RngStream(4), obs);
    std::array<double, 3> counts{};
    for (const auto& p : ts.pairs) counts[static_cast<std::size_t>(p.choices[0])] += 1.0;
    const auto probs = rotation_coefficients(kPi / 8).sampling_probabilities();
    for (std::size_t k = 0; k < 3; ++k) {
      const double se = std::sqrt(probs[k] * (1 - probs[k]) / 20000.0);
      CHECK(std::abs(counts[k] / 20000.0 - probs[k]) < 5 * se);
    }
  }
  SUBCASE("reproducible and JSON-serializable") {
    const TrainingSet a = generate_training_set(u, 10, 7, RngStream(5), obs);
    const TrainingSet b = generate_training_set(u, 10, 7, RngStream(5), obs);
    CHECK(to_json(a) == to_json(b));
    CHECK(to_json(a).at("pairs").size() == 10);
  }
  SUBCASE("too many fixed rotations") {
    CHECK_THROWS_AS(generate_training_set(u, 10, rot.size() + 1, RngStream(6), obs), std::invalid_argument);
  }
}

TEST_CASE("feature maps") {
  const Observable obs = Observable::default_for(3);
  const Circuit u = random_circuit(3, 30, RngStream(12), std::size_t{2});
  const NoiseModel noise = NoiseModel::cnot_depolarizing(0.1);
  const RngStream rng(13);

  SUBCASE("dimensions") {
    CHECK(FeatureMapSpec::classical().dimension() == 2);
    CHECK(FeatureMapSpec::geometric(7).dimension() == 8);
    CHECK(FeatureMapSpec::zne(7).dimension() == 8);
    CHECK(FeatureMapSpec::insertion_map(7).dimension() == 8);
    CHECK(FeatureMapSpec::insertion_zne(7, 3).dimension() == 22);
    CHECK_THROWS_AS(FeatureMapSpec::zne(0).validate(), std::invalid_argument);
  }
  SUBCASE("classical without noise is [1, f]") {
    const auto phi = feature_vector(u, FeatureMapSpec::classical(), NoiseModel::none(), obs, std::nullopt, rng);
    REQUIRE(phi.size() == 2);
    CHECK(phi[0] == 1.0);
    CHECK(phi[1] == doctest::Approx(noiseless_expectation(u, obs)).epsilon(1e-12));
  }
  SUBCASE("insertion at t = 0 equals the classical column") {
    const auto cls = feature_vector(u, FeatureMapSpec::classical(), noise, obs, std::nullopt, rng);
    const auto ins = feature_vector(u, FeatureMapSpec::insertion_map(4), noise, obs, std::nullopt, rng);
    CHECK(ins[1] == cls[1]);
  }
  SUBCASE("insertion columns against the oracle") {
    const FeatureMapSpec spec = FeatureMapSpec::insertion_map(4);
    const auto phi = feature_vector(u, spec, noise, obs, std::nullopt, rng);
    for (std::size_t i = 0; i < 4; ++i) {
      const Circuit v = insert_layer(u, u.size() / 2, spec.insertion.layer, static_cast<double>(i));
      CHECK(std::abs(phi[i + 1] - oracle::expectation(oracle::evolve(v, noise), obs.matrix())) < 1e-12);
    }
  }
  SUBCASE("geometric copies are independently noisy") {
    const auto phi = feature_vector(u, FeatureMapSpec::geometric(3), noise, obs, std::nullopt, rng);
    Circuit copies(3);
    for (std::size_t j = 1; j <= 3; ++j) {
      copies.append(u);
      CHECK(std::abs(phi[j] - oracle::expectation(oracle::evolve(copies, noise), obs.matrix())) < 1e-12);
    }
    // Global depolarizing: each copy contracts by (1 - p).
    const double p = 0.2;
    const auto g = feature_vector(u, FeatureMapSpec::geometric(3), NoiseModel::global_depolarizing(p), obs,
                                  std::nullopt, rng);
    Circuit c2(3);
    for (std::size_t j = 1; j <= 3; ++j) {
      c2.append(u);
      CHECK(g[j] == doctest::Approx(std::pow(1 - p, j) * noiseless_expectation(c2, obs)).epsilon(1e-10));
    }
  }
  SUBCASE("ZNE folds incrementally") {
    const auto phi = feature_vector(u, FeatureMapSpec::zne(4), noise, obs, std::nullopt, rng);
    for (std::size_t m = 0; m < 4; ++m) {
      CHECK(std::abs(phi[m + 1] - oracle::expectation(oracle::evolve(fold_cnots(u, m), noise), obs.matrix())) < 1e-12);
    }
    const auto uni = feature_vector(u, FeatureMapSpec::zne(3, FoldScheme::Uniform), noise, obs, std::nullopt, rng);
    for (std::size_t m = 0; m < 3; ++m) {
      CHECK(std::abs(uni[m + 1] - oracle::expectation(oracle::evolve(fold_cnots_uniform(u, m), noise), obs.matrix())) <
            1e-12);
    }
  }
  SUBCASE("ZNE under global depolarizing decays toward Tr(O)/2^n") {
    const double f = noiseless_expectation(u, obs);
    const Circuit v = std::abs(f) > 1e-3 ? u : random_circuit(3, 30, RngStream(99), std::size_t{2});
    const double fv = noiseless_expectation(v, obs);
    const auto phi = feature_vector(v, FeatureMapSpec::zne(5), NoiseModel::global_depolarizing(0.1), obs,
                                    std::nullopt, rng);
    for (std::size_t m = 1; m < 5; ++m) CHECK(std::abs(phi[m + 1]) < std::abs(phi[m]));
    const double lambda = fold_noise_factor(v.cnot_count(), 4);
    CHECK(phi[5] == doctest::Approx(std::pow(0.9, lambda) * fv).epsilon(1e-10));
  }
  SUBCASE("insertion-ZNE ordering: noise level outer, t inner") {
    const FeatureMapSpec spec = FeatureMapSpec::insertion_zne(3, 2);
    const auto ps = spec.perturbations();
    REQUIRE(ps.size() == 6);
    for (std::size_t m = 0; m < 2; ++m) {
      for (std::size_t i = 0; i < 3; ++i) {
        CHECK(ps[m * 3 + i].fold_level == m);
        CHECK(ps[m * 3 + i].t.value_or(0.0) == doctest::Approx(static_cast<double>(i)));
      }
    }
    const auto phi = feature_vector(u, spec, noise, obs, std::nullopt, rng);
    const Circuit inserted = insert_layer(u, u.size() / 2, spec.insertion.layer, 2.0);
    CHECK(std::abs(phi[6] - oracle::expectation(oracle::evolve(fold_cnots(inserted, 1), noise), obs.matrix())) < 1e-12);
  }
  SUBCASE("sampled entries") {
    const FeatureMapSpec spec = FeatureMapSpec::insertion_zne(3, 2);
    const auto a = feature_vector(u, spec, noise, obs, std::size_t{100}, rng);
    const auto b = feature_vector(u, spec, noise, obs, std::size_t{100}, rng);
    CHECK(a == b);
    CHECK(a[0] == 1.0);
    for (std::size_t j = 1; j < a.size(); ++j) {
      CHECK(std::abs(a[j]) <= 1.0);
      // 100 outcomes of +-1: the mean is a multiple of 0.02.
      CHECK(std::abs(a[j] * 50 - std::round(a[j] * 50)) < 1e-9);
    }
    // Identical perturbations draw identical shots across maps.
    const auto cls = feature_vector(u, FeatureMapSpec::classical(), noise, obs, std::size_t{100}, rng);
    CHECK(a[1] == cls[1]);
  }
  SUBCASE("ZNE needs CNOTs") {
    Circuit r(3);
    r.append(Gate::rotation(Axis::X, 0, 0.2));
    CHECK_THROWS_AS(feature_vector(r, FeatureMapSpec::zne(2), noise, obs, std::nullopt, rng), std::invalid_argument);
  }
  SUBCASE("outcome cache memoizes") {
    OutcomeCache cache(u, noise, obs);
    (void)feature_vector(cache, FeatureMapSpec::insertion_map(4), std::nullopt, rng);
    const std::size_t sims = cache.simulations();
    (void)feature_vector(cache, FeatureMapSpec::insertion_map(4), std::size_t{10}, rng);
    (void)feature_vector(cache, FeatureMapSpec::classical(), std::nullopt, rng);
    CHECK(cache.simulations() == sims);
  }
  SUBCASE("JSON round trip") {
    for (const auto& spec : {FeatureMapSpec::classical(), FeatureMapSpec::geometric(3), FeatureMapSpec::zne(5, FoldScheme::Uniform),
                             FeatureMapSpec::insertion_map(7), FeatureMapSpec::insertion_zne(7, 3)}) {
      const FeatureMapSpec back = feature_map_from_json(to_json(spec));
      CHECK(back.kind == spec.kind);
      CHECK(back.dimension() == spec.dimension());
      CHECK(back.perturbations() == spec.perturbations());
      CHECK(back.insertion == spec.insertion);
    }
  }
}

TEST_CASE("ridge regression") {
  SUBCASE("exact linear fit") {
    const FeatureMatrix fm = matrix_from({{1, 1}, {1, 2}, {1, 3}}, {1, 2, 3});
    const RegressionModel m = fit_ridge(fm, 1e-12);
    CHECK(m.alpha(0) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(m.alpha(1) == doctest::Approx(1.0).epsilon(1e-9));
    const RegressionModel z = fit_ridge(fm, 0.0);
    CHECK(z.alpha(1) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("large mu shrinks to zero") {
    const FeatureMatrix fm = matrix_from({{1, 1}, {1, 2}, {1, 3}}, {1, 2, 3});
    CHECK(fit_ridge(fm, 1e12).alpha.norm() < 1e-10);
  }
  SUBCASE("matches the normal equations") {
    std::mt19937_64 eng(3);
    std::normal_distribution<double> g;
    FeatureMatrix fm(120, 8);
    for (std::size_t i = 0; i < 120; ++i) {
      std::vector<double> row{1.0};
      for (int j = 1; j < 8; ++j) row.push_back(g(eng));
      fm.set_row(i, row, g(eng));
    }
    const double mu = 1e-3;
    const RegressionModel m = fit_ridge(fm, mu);
    const Eigen::MatrixXd a = fm.phi.transpose() * fm.phi + mu * Eigen::MatrixXd::Identity(8, 8);
    const Eigen::VectorXd want = a.colPivHouseholderQr().solve(fm.phi.transpose() * fm.f);
    CHECK((m.alpha - want).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((a * m.alpha - fm.phi.transpose() * fm.f).norm() <= 1e-9 * (fm.phi.transpose() * fm.f).norm());
  }
  SUBCASE("singular system without regularization") {
    const FeatureMatrix fm = matrix_from({{1, 2}, {1, 2}, {1, 2}}, {1, 2, 3});
    CHECK_THROWS_AS(fit_ridge(fm, 0.0), NumericError);
    CHECK_THROWS_AS(fit_ridge(fm, -1.0), std::invalid_argument);
  }
  SUBCASE("clipping") {
    RegressionModel m;
    m.alpha = Eigen::Vector2d(0.0, 1.0);
    m.obs_norm = 1.0;
    CHECK(m.predict(std::vector<double>{1.0, 1.5}) == 1.0);
    CHECK(m.predict(std::vector<double>{1.0, -2.0}) == -1.0);
    CHECK(m.predict(std::vector<double>{1.0, 0.3}) == doctest::Approx(0.3));
    CHECK(m.raw_predict(std::vector<double>{1.0, 1.5}) == 1.5);
    CHECK_THROWS_AS(m.predict(std::vector<double>{1.0}), std::invalid_argument);
  }
  SUBCASE("CSV layout") {
    FeatureMatrix fm = matrix_from({{1, 0.5}}, {0.25});
    std::ostringstream out;
    fm.write_csv(out);
    CHECK(out.str().rfind("f,one,phi1\n", 0) == 0);
  }
}

TEST_CASE("rmse and bootstrap") {
  const std::vector<double> a{1, 2, 3};
  CHECK(rmse(a, a) == 0.0);
  CHECK(rmse(std::vector<double>{0, 0}, std::vector<double>{1, 1}) == doctest::Approx(1.0));
  CHECK(rmse(a, std::vector<double>{2, 2, 5}) == doctest::Approx(1.2909944487358056).epsilon(1e-15));
  CHECK_THROWS_AS(rmse(std::vector<double>{}, std::vector<double>{}), std::invalid_argument);
  CHECK_THROWS_AS(rmse(a, std::vector<double>{1}), std::invalid_argument);

  const std::vector<double> truth{0, 0, 0, 0};
  const std::vector<double> good{0.1, -0.1, 0.1, -0.1};
  const std::vector<double> bad{0.5, -0.5, 0.4, -0.6};
  const auto d = paired_bootstrap_rmse_difference(good, bad, truth, 200, 1);
  CHECK(d.size() == 200);
  for (double x : d) CHECK(x < 0);
  CHECK(d == paired_bootstrap_rmse_difference(good, bad, truth, 200, 1));
}

TEST_CASE("kernel estimator") {
  const Observable obs = Observable::default_for(3);
  const NoiseModel noise = NoiseModel::cnot_depolarizing(0.1);
  const Circuit u = random_circuit(3, 30, RngStream(14), std::size_t{1});
  const RngStream rng(15);
  SUBCASE("single training circuit") {
    const TrainingSet ts = generate_training_set(u, 1, 7, RngStream(16), obs);
    const FeatureMapSpec spec = FeatureMapSpec::insertion_map(3);
    const auto w = feature_vector(ts.pairs[0].circuit, spec, noise, obs, std::nullopt, rng);
    const auto x = feature_vector(u, spec, noise, obs, std::nullopt, rng);
    double K = 0.0;
    double k = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) {
      K += w[j] * w[j];
      k += w[j] * x[j];
    }
    const double mu = 0.1;
    CHECK(kernel_estimate(ts, spec, noise, obs, mu, u, std::nullopt, rng) ==
          doctest::Approx(ts.pairs[0].f * k / (K + mu)).epsilon(1e-12));
  }
  SUBCASE("dual equals primal") {
    const TrainingSet ts = generate_training_set(u, 20, 7, RngStream(17), obs);
    const FeatureMapSpec spec = FeatureMapSpec::insertion_map(7);
    FeatureMatrix fm(ts.size(), spec.dimension());
    for (std::size_t i = 0; i < ts.size(); ++i) {
      fm.set_row(i, feature_vector(ts.pairs[i].circuit, spec, noise, obs, std::nullopt, rng), ts.pairs[i].f);
    }
    const double primal = fit_ridge(fm, 1e-3).raw_predict(feature_vector(u, spec, noise, obs, std::nullopt, rng));
    CHECK(std::abs(kernel_estimate(ts, spec, noise, obs, 1e-3, u, std::nullopt, rng) - primal) < 1e-8);
  }
  SUBCASE("sampled kernel diagonal is at least one when entries are bounded") {
    const TrainingSet ts = generate_training_set(u, 5, 7, RngStream(18), obs);
    const KernelSystem sys =
        kernel_system(ts, FeatureMapSpec::insertion_map(3), noise, obs, u, std::size_t{200}, rng);
    CHECK(sys.K.rows() == 5);
    CHECK((sys.K - sys.K.transpose()).cwiseAbs().maxCoeff() == 0.0);
    const KernelSystem exact = kernel_system(ts, FeatureMapSpec::insertion_map(3), noise, obs, u, std::nullopt, rng);
    for (Eigen::Index i = 0; i < 5; ++i) CHECK(exact.K(i, i) >= 1.0);
  }
}
