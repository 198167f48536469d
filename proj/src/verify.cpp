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

#include "cdr/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "cdr/branches.hpp"
#include "cdr/circuit.hpp"
#include "cdr/feature_map.hpp"
#include "cdr/kernel.hpp"
#include "cdr/regression.hpp"
#include "cdr/simulator.hpp"
#include "cdr/spectrum.hpp"
#include "cdr/stabilizer.hpp"
#include "cdr/training.hpp"

namespace cdr {

nlohmann::json to_json(const CheckResult& c) {
  return {{"name", c.name}, {"passed", c.passed}, {"slack", c.slack}, {"cases", c.cases}, {"detail", c.detail}};
}

bool SuiteReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

nlohmann::json to_json(const SuiteReport& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  return {{"suite", r.suite}, {"passed", r.passed()}, {"checks", checks}};
}

namespace {

constexpr double kPi = std::numbers::pi;

// Tolerance check: slack = tol - worst deviation.
CheckResult tolerance_check(std::string name, double worst, double tol, std::size_t cases,
                            nlohmann::json detail = nlohmann::json::object()) {
  CheckResult c;
  c.name = std::move(name);
  c.cases = cases;
  c.slack = tol - worst;
  c.passed = worst <= tol;
  detail["worst_deviation"] = worst;
  detail["tolerance"] = tol;
  c.detail = std::move(detail);
  return c;
}

// Folds a list of bound reports into one check; slack is the least slack.
CheckResult bound_check(std::string name, const std::vector<BoundReport>& reports) {
  CheckResult c;
  c.name = std::move(name);
  c.cases = reports.size();
  c.slack = reports.empty() ? 0.0 : reports.front().slack;
  std::size_t violations = 0;
  const BoundReport* worst = nullptr;
  for (const auto& r : reports) {
    if (!r.holds) ++violations;
    if (!worst || r.slack < worst->slack) worst = &r;
  }
  c.passed = violations == 0;
  c.slack = worst ? worst->slack : 0.0;
  c.detail = {{"violations", violations}};
  if (worst) c.detail["worst"] = to_json(*worst);
  return c;
}

std::string random_pauli_string(int n, std::mt19937_64& eng) {
  static constexpr char letters[] = {'I', 'X', 'Y', 'Z'};
  std::uniform_int_distribution<int> pick(0, 3);
  std::string s = std::uniform_int_distribution<int>(0, 1)(eng) ? "+" : "-";
  for (int q = 0; q < n; ++q) s.push_back(letters[pick(eng)]);
  return s;
}

// |tr(A^dag B)| == dim for equality up to global phase.
double phase_equivalence_gap(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return std::abs(std::abs((a.adjoint() * b).trace()) - static_cast<double>(a.rows()));
}

Eigen::MatrixXcd fourier_matrix(int n) {
  const auto dim = static_cast<Eigen::Index>(1) << n;
  Eigen::MatrixXcd f(dim, dim);
  const double norm = 1.0 / std::sqrt(static_cast<double>(dim));
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index k = 0; k < dim; ++k) {
      f(j, k) = std::polar(norm, 2.0 * kPi * static_cast<double>((j * k) % dim) / static_cast<double>(dim));
    }
  }
  return f;
}

Eigen::MatrixXcd hadamard_layer(int n) {
  Circuit c(n);
  for (int q = 0; q < n; ++q) c.append(Gate::single(GateKind::H, q));
  return circuit_unitary(c);
}

}  // namespace

// ---- circuits --------------------------------------------------------------------

SuiteReport run_circuits_suite() {
  SuiteReport r{"circuits", {}};
  const RngStream rng(7);

  {
    double worst = 0.0;
    std::size_t cases = 0;
    for (std::size_t i = 0; i < 50; ++i) {
      const int n = 2 + static_cast<int>(i % 3);
      const Circuit c = random_circuit(n, 20, rng.child(1).child(i), std::size_t{1});
      const Eigen::MatrixXcd u = circuit_unitary(c);
      for (std::size_t steps : {std::size_t{1}, c.cnot_count(), 2 * c.cnot_count() + 1}) {
        worst = std::max(worst, (circuit_unitary(fold_cnots(c, steps)) - u).cwiseAbs().maxCoeff());
        ++cases;
      }
      worst = std::max(worst, (circuit_unitary(fold_cnots_uniform(c, 2)) - u).cwiseAbs().maxCoeff());
      ++cases;
    }
    r.checks.push_back(tolerance_check("folding_preserves_unitary", worst, 1e-10, cases));
  }
  {
    double worst = 0.0;
    for (int n = 1; n <= 5; ++n) {
      const Eigen::MatrixXcd expected = fourier_matrix(n) * hadamard_layer(n);
      worst = std::max(worst, phase_equivalence_gap(circuit_unitary(qft_circuit(n)), expected));
    }
    r.checks.push_back(tolerance_check("qft_matches_fourier_transform", worst, 1e-9, 5));
  }
  {
    double worst = 0.0;
    const std::vector<LayerRotation> layer{{0, Axis::X, kPi / 8}, {1, Axis::Z, 0.3}};
    for (std::size_t i = 0; i < 20; ++i) {
      const Circuit c = random_circuit(3, 16, rng.child(2).child(i));
      const Circuit twice = insert_layer(insert_layer(c, 8, layer, 1.0), 8, layer, 1.0);
      const Circuit once = insert_layer(c, 8, layer, 2.0);
      worst = std::max(worst, (circuit_unitary(twice) - circuit_unitary(once)).cwiseAbs().maxCoeff());
      const Circuit zero = insert_layer(c, 8, layer, 0.0);
      worst = std::max(worst, (circuit_unitary(zero) - circuit_unitary(c)).cwiseAbs().maxCoeff());
    }
    r.checks.push_back(tolerance_check("insertion_additivity", worst, 1e-10, 40));
  }
  {
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < 50; ++i) {
      const Circuit c = random_circuit(4, 40, rng.child(3).child(i));
      if (!(circuit_from_json(nlohmann::json::parse(to_json(c).dump())) == c)) ++mismatches;
      if (!(random_circuit(4, 40, rng.child(3).child(i)) == c)) ++mismatches;
    }
    r.checks.push_back(tolerance_check("json_roundtrip_and_determinism", static_cast<double>(mismatches), 0.0, 100));
  }
  return r;
}

// ---- simulators ------------------------------------------------------------------

CheckResult check_backend_equivalence(std::size_t circuits, std::uint64_t seed) {
  const RngStream rng(seed);
  double worst = 0.0;
  std::size_t cases = 0;
  for (std::size_t i = 0; i < circuits; ++i) {
    const RngStream r = rng.child(i);
    auto eng = r.child(0).engine();
    const int n = std::uniform_int_distribution<int>(2, 4)(eng);
    const std::size_t len = std::uniform_int_distribution<std::size_t>(1, 40)(eng);
    const Circuit c = random_clifford_circuit(n, len, r.child(1));
    for (int k = 0; k < 4; ++k) {
      const Observable obs = Observable::pauli(random_pauli_string(n, eng));
      const double stab = stabilizer_expectation(c, obs);
      auto rho = DensityMatrix::zero_state(n);
      evolve(rho, c, NoiseModel::none());
      worst = std::max(worst, std::abs(stab - rho.expectation(obs)));
      ++cases;
    }
  }
  return tolerance_check("stabilizer_vs_dense", worst, 1e-12, cases);
}

CheckResult check_branch_agreement(std::size_t circuits, std::uint64_t seed) {
  const RngStream rng(seed);
  const Observable obs = Observable::default_for(3);
  double worst = 0.0;
  std::size_t cases = 0;
  for (std::size_t i = 0; i < circuits; ++i) {
    const Circuit c = random_circuit(3, 25, rng.child(i).child(0));
    const auto rotations = c.rotation_indices();
    const std::size_t ell_r = std::min<std::size_t>(i % 5, rotations.size());
    const auto free = choose_fixed_rotations(c, ell_r, rng.child(i).child(1));
    const BranchDecomposition bd = decompose_branches(c, free);
    for (const NoiseModel& noise : {NoiseModel::none(), NoiseModel::cnot_depolarizing(0.1)}) {
      const double dense = exact_expectation(c, noise, obs);
      worst = std::max(worst, std::abs(branch_expectation(bd, noise, obs) - dense));
      ++cases;
    }
    worst = std::max(worst, std::abs(bd.weight_sum() - 1.0));
  }
  return tolerance_check("branch_vs_dense", worst, 1e-10, cases);
}

CheckResult check_hoeffding(std::size_t trials, std::uint64_t seed) {
  const RngStream rng(seed);
  const Observable obs = Observable::default_for(3);
  const std::size_t shots = 200;
  const double delta = 0.1;
  const double radius = obs.spectral_norm() * std::sqrt(2.0 / static_cast<double>(shots) * std::log(2.0 / delta));
  std::size_t violations = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    // Ten circuits, each reused for trials / 10 shot batches.
    const Circuit c = random_circuit(3, 30, rng.child(0).child(t % 10));
    const NoiseModel noise = NoiseModel::cnot_depolarizing(0.1);
    const OutcomeDistribution dist = circuit_outcomes(c, noise, obs);
    auto eng = rng.child(1).child(t).engine();
    if (std::abs(sample_mean(dist, shots, eng) - dist.mean()) > radius) ++violations;
  }
  const double fraction = static_cast<double>(violations) / static_cast<double>(std::max<std::size_t>(trials, 1));
  return tolerance_check("hoeffding_conformance", fraction, delta + 0.03, trials,
                         {{"radius", radius}, {"violations", violations}});
}

CheckResult check_cptp(std::size_t circuits, std::uint64_t seed) {
  const RngStream rng(seed);
  double worst_trace = 0.0;
  double worst_eig = 0.0;
  double worst_herm = 0.0;
  for (std::size_t i = 0; i < circuits; ++i) {
    const Circuit c = random_circuit(3, 30, rng.child(i));
    for (const NoiseModel& noise : {NoiseModel::cnot_depolarizing(0.2), NoiseModel::layer_depolarizing(0.05),
                                    NoiseModel::global_depolarizing(0.3)}) {
      auto rho = DensityMatrix::zero_state(3);
      evolve(rho, c, noise);
      const Eigen::MatrixXcd m = rho.matrix();
      worst_trace = std::max(worst_trace, std::abs(rho.trace() - 1.0));
      worst_herm = std::max(worst_herm, (m - m.adjoint()).cwiseAbs().maxCoeff());
      const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(m, Eigen::EigenvaluesOnly);
      worst_eig = std::max(worst_eig, -eig.eigenvalues().minCoeff());
    }
  }
  CheckResult c = tolerance_check("cptp", std::max({worst_trace, worst_herm}), 1e-10, 3 * circuits,
                                  {{"worst_negative_eigenvalue", worst_eig}});
  if (worst_eig > 1e-9) c.passed = false;
  return c;
}

SuiteReport run_simulators_suite() {
  SuiteReport r{"simulators", {}};
  r.checks.push_back(check_backend_equivalence(200, 11));
  r.checks.push_back(check_branch_agreement(100, 12));
  r.checks.push_back(check_cptp(30, 13));
  r.checks.push_back(check_hoeffding(1000, 14));
  return r;
}

// ---- mitigation ------------------------------------------------------------------

namespace {

struct ExactCdr {
  std::vector<double> predictions;
  std::vector<double> truths;
  /// Whether phi(U) lies in the row space of the training feature matrix, so
  /// that every least-squares fit makes the same prediction.
  std::vector<bool> identifiable;
};

bool in_row_space(const Eigen::MatrixXd& phi, const std::vector<double>& x) {
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(phi, Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double cutoff = 1e-10 * std::max(1.0, sv.size() ? sv(0) : 0.0);
  const Eigen::Map<const Eigen::VectorXd> v(x.data(), static_cast<Eigen::Index>(x.size()));
  Eigen::VectorXd projected = Eigen::VectorXd::Zero(v.size());
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv(k) > cutoff) projected += svd.matrixV().col(k) * svd.matrixV().col(k).dot(v);
  }
  return (v - projected).norm() <= 1e-8 * std::max(1.0, v.norm());
}

// Exact-feature CDR on `count` random 3-qubit circuits.
ExactCdr exact_cdr(const FeatureMapSpec& spec, const NoiseModel& noise, double mu, std::size_t count,
                   const RngStream& rng) {
  const Observable obs = Observable::default_for(3);
  ExactCdr out;
  for (std::size_t i = 0; i < count; ++i) {
    const RngStream r = rng.child(i);
    const Circuit u = random_circuit(3, 30, r.child(0), std::size_t{1});
    const TrainingSet ts =
        generate_training_set(u, 40, std::min<std::size_t>(7, u.rotation_indices().size()), r.child(1), obs);
    FeatureMatrix fm(ts.size(), spec.dimension());
    for (std::size_t k = 0; k < ts.size(); ++k) {
      fm.set_row(k, feature_vector(ts.pairs[k].circuit, spec, noise, obs, std::nullopt, r), ts.pairs[k].f);
    }
    const RegressionModel model = fit_ridge(fm, mu, obs.spectral_norm());
    const auto phi = feature_vector(u, spec, noise, obs, std::nullopt, r);
    out.predictions.push_back(model.predict(phi));
    out.truths.push_back(noiseless_expectation(u, obs));
    out.identifiable.push_back(in_row_space(fm.phi, phi));
  }
  return out;
}

}  // namespace

CheckResult check_global_depolarizing_cdr(std::size_t test_circuits, std::uint64_t seed) {
  const ExactCdr res = exact_cdr(FeatureMapSpec::classical(), NoiseModel::global_depolarizing(0.1), 1e-12,
                                 test_circuits, RngStream(seed));
  const double e = test_circuits ? rmse(res.predictions, res.truths) : 0.0;
  return tolerance_check("global_depolarizing_classical_cdr", e, 1e-8, test_circuits);
}

CheckResult check_noiseless_consistency(std::size_t test_circuits, std::uint64_t seed) {
  double worst = 0.0;
  std::size_t cases = 0;
  std::size_t excluded = 0;
  double worst_unrestricted = 0.0;
  for (const FeatureMapSpec& spec : {FeatureMapSpec::classical(), FeatureMapSpec::insertion_map(4)}) {
    const ExactCdr res = exact_cdr(spec, NoiseModel::none(), 1e-12, test_circuits, RngStream(seed));
    std::vector<double> pred;
    std::vector<double> truth;
    for (std::size_t i = 0; i < res.truths.size(); ++i) {
      worst_unrestricted = std::max(worst_unrestricted, std::abs(res.predictions[i] - res.truths[i]));
      if (!res.identifiable[i]) {
        ++excluded;
        continue;
      }
      pred.push_back(res.predictions[i]);
      truth.push_back(res.truths[i]);
    }
    if (!pred.empty()) worst = std::max(worst, rmse(pred, truth));
    cases += pred.size();
  }
  return tolerance_check("noiseless_consistency", worst, 1e-8, cases,
                         {{"excluded_rank_deficient", excluded}, {"worst_abs_error_all_circuits", worst_unrestricted}});
}

CheckResult check_kernel_duality(std::size_t instances, std::uint64_t seed) {
  const RngStream rng(seed);
  const Observable obs = Observable::default_for(3);
  const NoiseModel noise = NoiseModel::cnot_depolarizing(0.1);
  const double mu = 1e-3;
  const std::vector<FeatureMapSpec> specs{FeatureMapSpec::insertion_map(7), FeatureMapSpec::zne(7),
                                          FeatureMapSpec::geometric(7)};
  double worst = 0.0;
  for (std::size_t i = 0; i < instances; ++i) {
    const RngStream r = rng.child(i);
    const FeatureMapSpec& spec = specs[i % specs.size()];
    const Circuit u = random_circuit(3, 30, r.child(0), std::size_t{1});
    const TrainingSet ts =
        generate_training_set(u, 20, std::min<std::size_t>(7, u.rotation_indices().size()), r.child(1), obs);
    FeatureMatrix fm(ts.size(), spec.dimension());
    for (std::size_t k = 0; k < ts.size(); ++k) {
      fm.set_row(k, feature_vector(ts.pairs[k].circuit, spec, noise, obs, std::nullopt, r), ts.pairs[k].f);
    }
    const double primal =
        fit_ridge(fm, mu, obs.spectral_norm()).raw_predict(feature_vector(u, spec, noise, obs, std::nullopt, r));
    const double dual = kernel_estimate(ts, spec, noise, obs, mu, u, std::nullopt, r.child(2));
    worst = std::max(worst, std::abs(primal - dual));
  }
  return tolerance_check("kernel_dual_vs_primal", worst, 1e-8, instances);
}

CheckResult check_signed_weights(std::size_t samples, std::uint64_t seed) {
  const RngStream rng(seed);
  const Observable obs = Observable::default_for(3);
  const Circuit u = random_circuit(3, 14, rng.child(0), std::size_t{2});
  const TrainingSet ts = generate_training_set(u, samples, std::min<std::size_t>(2, u.rotation_indices().size()),
                                               rng.child(1), obs);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (const auto& p : ts.pairs) {
    const double x = ts.n_theta * p.sign * p.f;
    sum += x;
    sum_sq += x * x;
  }
  const double n = static_cast<double>(samples);
  const double mean = sum / n;
  const double se = std::sqrt(std::max(0.0, sum_sq / n - mean * mean) / n);
  const double truth = noiseless_expectation(u, obs);
  const double z = se > 0.0 ? std::abs(mean - truth) / se : std::abs(mean - truth) * 1e12;
  return tolerance_check("signed_weight_estimate", z, 3.0, samples,
                         {{"estimate", mean}, {"truth", truth}, {"standard_error", se}, {"n_theta", ts.n_theta},
                          {"substituted", ts.substituted_ids.size()}});
}

SuiteReport run_mitigation_suite() {
  SuiteReport r{"mitigation", {}};
  r.checks.push_back(check_global_depolarizing_cdr(100, 21));
  r.checks.push_back(check_noiseless_consistency(20, 22));
  r.checks.push_back(check_kernel_duality(20, 23));
  r.checks.push_back(check_signed_weights(100000, 24));
  {
    // Feature entries stay within [-||O||, ||O||] for every map and mode.
    const Observable obs = Observable::default_for(3);
    const RngStream rng(25);
    double worst = 0.0;
    std::size_t cases = 0;
    for (std::size_t i = 0; i < 10; ++i) {
      const Circuit u = random_circuit(3, 30, rng.child(i), std::size_t{1});
      for (const auto& spec : {FeatureMapSpec::geometric(4), FeatureMapSpec::zne(4), FeatureMapSpec::insertion_map(4),
                               FeatureMapSpec::insertion_zne(3, 2)}) {
        for (Shots shots : {Shots{}, Shots{50}}) {
          const auto phi = feature_vector(u, spec, NoiseModel::cnot_depolarizing(0.1), obs, shots, rng.child(100 + i));
          for (std::size_t j = 1; j < phi.size(); ++j) worst = std::max(worst, std::abs(phi[j]) - obs.spectral_norm());
          ++cases;
        }
      }
    }
    r.checks.push_back(tolerance_check("feature_boundedness", std::max(worst, 0.0), 1e-12, cases));
  }
  return r;
}

// ---- bounds ----------------------------------------------------------------------

namespace {

// Random dense unitary on 1 or 2 qubits, alternating.
Eigen::MatrixXcd suite_unitary(std::size_t i, const RngStream& rng) {
  return random_unitary(i % 2 == 0 ? 4 : 2, rng);
}

std::vector<double> t_grid(unsigned p, std::size_t points) {
  std::vector<double> g;
  const double hi = static_cast<double>(p) / 4.0;
  for (std::size_t k = 0; k < points; ++k) {
    g.push_back(points == 1 ? 0.0 : hi * static_cast<double>(k) / static_cast<double>(points - 1));
  }
  return g;
}

}  // namespace

CheckResult check_periodic_approximant(const BoundSuiteOptions& o) {
  const RngStream rng(o.seed);
  std::vector<BoundReport> reports;
  for (std::size_t i = 0; i < o.unitaries; ++i) {
    const Eigen::MatrixXcd u = suite_unitary(i, rng.child(0).child(i));
    std::vector<Eigen::VectorXcd> states;
    for (std::size_t s = 0; s < o.random_states; ++s) {
      states.push_back(random_state(static_cast<std::size_t>(u.rows()), rng.child(1).child(i).child(s)));
    }
    for (unsigned p : o.primes) reports.push_back(verify_periodic_approximant(u, p, t_grid(p, o.t_points), states));
  }
  return bound_check("periodic_approximant", reports);
}

CheckResult check_lipschitz(const BoundSuiteOptions& o) {
  const RngStream rng(o.seed);
  // Spread the triples over 20 unitaries.
  const std::size_t unitaries = 20;
  std::vector<BoundReport> reports;
  for (std::size_t i = 0; i < unitaries; ++i) {
    const std::size_t trials = o.lipschitz_triples / unitaries + (i < o.lipschitz_triples % unitaries ? 1 : 0);
    if (trials == 0) continue;
    const Eigen::MatrixXcd u = suite_unitary(i, rng.child(2).child(i));
    const Observable obs = Observable::default_for(u.rows() == 4 ? 2 : 1);
    reports.push_back(verify_lipschitz(u, obs, trials, rng.child(3).child(i)));
  }
  return bound_check("lipschitz", reports);
}

CheckResult check_fourier_approximation(const BoundSuiteOptions& o) {
  const RngStream rng(o.seed);
  std::vector<BoundReport> reports;
  for (std::size_t i = 0; i < o.fourier_configs; ++i) {
    const Eigen::MatrixXcd u = suite_unitary(i, rng.child(4).child(i));
    const Observable obs = Observable::default_for(u.rows() == 4 ? 2 : 1);
    const unsigned p = o.primes[i % o.primes.size()];
    // Alternate between truncated (Q < p) and complete (Q >= p) models.
    const std::size_t Q = i % 2 == 0 ? p : std::max<std::size_t>(1, p / 2);
    reports.push_back(verify_fourier_approximation(u, obs, p, Q, t_grid(p, o.t_points)));
  }
  return bound_check("fourier_approximation", reports);
}

CheckResult check_expected_error(const BoundSuiteOptions& o) {
  const RngStream rng(o.seed);
  const Observable obs = Observable::default_for(3);
  const NoiseModel noise = NoiseModel::cnot_depolarizing(0.1);
  const std::size_t shots = 1000;
  const std::vector<FeatureMapSpec> specs{FeatureMapSpec::classical(), FeatureMapSpec::insertion_map(7),
                                          FeatureMapSpec::zne(3), FeatureMapSpec::insertion_zne(7, 3),
                                          FeatureMapSpec::geometric(3)};
  std::vector<BoundReport> reports;
  for (std::size_t i = 0; i < o.error_instances; ++i) {
    const RngStream r = rng.child(5).child(i);
    const FeatureMapSpec& spec = specs[i % specs.size()];
    const Circuit u = random_circuit(3, 30, r.child(0), std::size_t{1});
    const TrainingSet ts =
        generate_training_set(u, 120, std::min<std::size_t>(7, u.rotation_indices().size()), r.child(1), obs);
    FeatureMatrix fm(ts.size(), spec.dimension());
    for (std::size_t k = 0; k < ts.size(); ++k) {
      OutcomeCache cache(ts.pairs[k].circuit, noise, obs, spec.insertion);
      fm.set_row(k, feature_vector(cache, spec, std::nullopt, r), ts.pairs[k].f);
    }
    const RegressionModel model = fit_ridge(fm, 1e-3, obs.spectral_norm());
    OutcomeCache cache(u, noise, obs, spec.insertion);
    const double f = noiseless_expectation(u, obs);
    const double residual = std::abs(f - model.raw_predict(feature_vector(cache, spec, std::nullopt, r)));
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t s = 0; s < o.resamples; ++s) {
      const double err = std::abs(model.predict(feature_vector(cache, spec, shots, r.child(2).child(s))) - f);
      sum += err;
      sum_sq += err * err;
    }
    const double n = static_cast<double>(o.resamples);
    const double mean = sum / n;
    const double se = std::sqrt(std::max(0.0, sum_sq / n - mean * mean) / n);
    const double bound = expected_error_bound(model.alpha, obs.spectral_norm(), shots, residual);
    reports.push_back(BoundReport::make("expected_error", mean - 2.0 * se, bound,
                                        {{"method", spec.name()}, {"monte_carlo_mean", mean}, {"standard_error", se},
                                         {"alpha_norm", model.alpha.norm()}, {"residual", residual}}));
  }
  return bound_check("expected_error", reports);
}

SuiteReport run_bounds_suite(const BoundSuiteOptions& o) {
  SuiteReport r{"bounds", {}};
  r.checks.push_back(check_periodic_approximant(o));
  r.checks.push_back(check_lipschitz(o));
  r.checks.push_back(check_fourier_approximation(o));
  r.checks.push_back(check_expected_error(o));
  return r;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"circuits", "simulators", "mitigation", "bounds", "all"};
  return names;
}

std::vector<SuiteReport> run_suite(std::string_view name) {
  if (name == "circuits") return {run_circuits_suite()};
  if (name == "simulators") return {run_simulators_suite()};
  if (name == "mitigation") return {run_mitigation_suite()};
  if (name == "bounds") return {run_bounds_suite()};
  if (name == "all") {
    return {run_circuits_suite(), run_simulators_suite(), run_mitigation_suite(), run_bounds_suite()};
  }
  throw std::invalid_argument("unknown suite '" + std::string(name) + "'");
}

}  // namespace cdr
