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
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cdr/bounds.hpp"

namespace cdr {

/// One invariant check with its measured worst case.
struct CheckResult {
  std::string name;
  bool passed = true;
  /// Worst-case margin (positive = inside tolerance); meaning depends on the
  /// check and is described in `detail`.
  double slack = 0.0;
  std::size_t cases = 0;
  nlohmann::json detail = nlohmann::json::object();
};

nlohmann::json to_json(const CheckResult& c);

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;
  bool passed() const;
};

nlohmann::json to_json(const SuiteReport& r);

/// Sizes of the bound checks; defaults are the full-size suite.
struct BoundSuiteOptions {
  std::size_t unitaries = 50;
  std::vector<unsigned> primes{5, 13, 31};
  std::size_t t_points = 50;
  std::size_t random_states = 20;
  std::size_t lipschitz_triples = 10000;
  std::size_t fourier_configs = 20;
  std::size_t error_instances = 20;
  std::size_t resamples = 500;
  std::uint64_t seed = 2024;
};

/// Periodic-approximant inequality over random unitaries (n <= 2), primes and
/// a grid of t in [0, p/4].
CheckResult check_periodic_approximant(const BoundSuiteOptions& o);
/// Lipschitz bound over random (t1, t2, U) triples.
CheckResult check_lipschitz(const BoundSuiteOptions& o);
/// Fourier approximation bound over random configurations (U, p, Q).
CheckResult check_fourier_approximation(const BoundSuiteOptions& o);
/// Expected-error bound against Monte-Carlo shot resampling of trained CDR
/// estimates; an instance passes when mean - 2 SE <= bound.
CheckResult check_expected_error(const BoundSuiteOptions& o);

/// Stabilizer vs dense expectations on random Clifford circuits (n <= 4,
/// l <= 40) for random Pauli observables; tolerance 1e-12.
CheckResult check_backend_equivalence(std::size_t circuits, std::uint64_t seed);
/// branch_expectation vs dense on random 3-qubit, 25-gate circuits with up to
/// four free rotations, noiseless and with CNOT depolarizing p = 0.1;
/// tolerance 1e-10.
CheckResult check_branch_agreement(std::size_t circuits, std::uint64_t seed);
/// Classical CDR under global depolarizing noise with exact features: held-out
/// RMSE must be below 1e-8.
CheckResult check_global_depolarizing_cdr(std::size_t test_circuits, std::uint64_t seed);
/// Noise-free exact features: maps carrying the unperturbed column reproduce
/// f(U) with RMSE below 1e-8 at mu = 1e-12, over held-out circuits whose
/// feature vector lies in the row space of the training features. Other
/// circuits are counted in the detail: there the fit is not identifiable and
/// no least-squares method can be expected to recover f(U).
CheckResult check_noiseless_consistency(std::size_t test_circuits, std::uint64_t seed);
/// Exact-shot kernel estimate vs primal ridge prediction (S = 20, J = 7,
/// mu = 1e-3); tolerance 1e-8.
CheckResult check_kernel_duality(std::size_t instances, std::uint64_t seed);
/// Monte-Carlo sign-weighted estimate N(theta)/S sum s_i f(W_i) within three
/// standard errors of f(U).
CheckResult check_signed_weights(std::size_t samples, std::uint64_t seed);
/// Fraction of empirical means outside the Hoeffding radius at delta = 0.1
/// must stay below 0.13.
CheckResult check_hoeffding(std::size_t trials, std::uint64_t seed);
/// Trace 1 and eigenvalues >= -1e-9 for noisy random circuits.
CheckResult check_cptp(std::size_t circuits, std::uint64_t seed);

SuiteReport run_circuits_suite();
SuiteReport run_simulators_suite();
SuiteReport run_mitigation_suite();
SuiteReport run_bounds_suite(const BoundSuiteOptions& o = {});

/// Known suite names: circuits, simulators, mitigation, bounds, all.
const std::vector<std::string>& suite_names();
/// Throws std::invalid_argument for an unknown name.
std::vector<SuiteReport> run_suite(std::string_view name);

}  // namespace cdr
