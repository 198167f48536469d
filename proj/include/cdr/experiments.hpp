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
#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cdr/feature_map.hpp"
#include "cdr/generalization.hpp"
#include "cdr/noise.hpp"
#include "cdr/observable.hpp"
#include "cdr/rng.hpp"

namespace cdr {

/// Invalid experiment configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ExperimentKind {
  RmseVsJ,
  RmseVsMu,
  RmseVsN,
  ErrorHistogram,
  QftSweep,
  ZneImplCompare,
  DeltaScaling,
  GtPlot,
  BoundsReport,
};

std::string_view to_string(ExperimentKind k);
ExperimentKind experiment_kind_from_string(std::string_view name);

/// Display name of a method: the map name, with "_uniform" appended for
/// ZNE-style maps using uniform folding.
std::string method_label(const FeatureMapSpec& spec);

/// "exact" or the shot count.
std::string shots_label(Shots shots);

// ---- Grid evaluation --------------------------------------------------------

/// One (method, mu, shots) combination evaluated on every test circuit.
struct GridCell {
  FeatureMapSpec spec;
  double mu = 1e-3;
  Shots shots;
};

enum class CircuitSource { Random, Qft };

struct GridConfig {
  CircuitSource source = CircuitSource::Random;
  int n = 3;
  std::size_t gates = 30;
  std::optional<std::size_t> min_cnots = 1;
  std::size_t test_circuits = 100;
  NoiseModel noise = NoiseModel::cnot_depolarizing(0.1);
  std::optional<Observable> observable;  // unset: Z on qubit 0
  std::size_t S = 120;
  std::size_t n_fixed = 7;
  std::vector<GridCell> cells;
  /// Shot modes for which the unmitigated noisy value is also recorded.
  std::vector<Shots> baseline_shots;

  Observable obs() const;
};

struct GridResult {
  std::vector<double> truths;
  /// predictions[cell][circuit].
  std::vector<std::vector<double>> predictions;
  /// baseline[mode][circuit], aligned with GridConfig::baseline_shots.
  std::vector<std::vector<double>> baseline;
  /// |alpha| per cell and circuit, used by the bound experiments.
  std::vector<std::vector<double>> alpha_norms;
  double wall_time = 0.0;
};

/// Evaluates every cell on config.test_circuits circuits. Circuit c draws all
/// its randomness from rng.child(c), so results do not depend on `workers`.
GridResult run_grid(const GridConfig& config, const RngStream& rng, std::size_t workers = 1);

// ---- Result tables ----------------------------------------------------------

struct ResultRow {
  std::string method;
  std::size_t J = 0;
  std::size_t J2 = 0;
  double mu = 0.0;
  Shots shots;
  int n = 0;
  double p = 0.0;
  std::string metric;
  double value = 0.0;
  double std_error = 0.0;
  double wall_time = 0.0;
};

inline constexpr const char* kResultHeader = "method,J,J2,mu,N,n,p,metric,value,std_error,wall_time";

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows);

/// RMSE and mean absolute error rows for every cell and baseline mode.
std::vector<ResultRow> summarize_grid(const GridConfig& config, const GridResult& result);

struct HistogramBin {
  double left = 0.0;
  double right = 0.0;
  std::size_t count = 0;
};

/// `bins` uniform bins spanning [min, max] of `values`; the last bin is
/// closed on the right.
std::vector<HistogramBin> histogram(const std::vector<double>& values, std::size_t bins);

// ---- Config-driven runs -----------------------------------------------------

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::RmseVsJ;
  std::uint64_t seed = 0;
  std::string output = "results.csv";
  nlohmann::json raw;
};

/// Parses and validates a config document; throws ConfigError.
ExperimentConfig parse_experiment_config(const nlohmann::json& j);

/// Grid description of a grid-type experiment (rmse_vs_*, error_histogram,
/// zne_impl_compare), exposed for tests.
GridConfig grid_config_from_json(const nlohmann::json& j, ExperimentKind kind);

struct RunOptions {
  std::optional<std::filesystem::path> out_dir;
  std::size_t workers = 1;
  std::optional<std::uint64_t> seed_override;
};

/// Runs the experiment and writes its output file atomically (temp file +
/// rename). Returns the path written.
std::filesystem::path run_experiment(const ExperimentConfig& config, const RunOptions& options);

/// Writes `content` to `path` via a temporary sibling and a rename.
void write_file_atomically(const std::filesystem::path& path, const std::string& content);

/// Evaluates the closed-form bound evaluators for a parameter document and
/// returns their values as JSON.
nlohmann::json evaluate_bounds(const nlohmann::json& params);

}  // namespace cdr
