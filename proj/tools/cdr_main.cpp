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

// Command-line front end: config-driven experiments, property suites, QFT
// sweeps and closed-form bound evaluation.

#include <cstdint>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cdr/experiments.hpp"
#include "cdr/simulator.hpp"
#include "cdr/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;
constexpr int kExitResource = 3;

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw cdr::ConfigError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw cdr::ConfigError(path + ": " + e.what());
  }
}

// CDR_SEED wins over both the config file and --seed.
std::optional<std::uint64_t> seed_from_env(std::optional<std::uint64_t> flag) {
  const char* env = std::getenv("CDR_SEED");
  if (!env || !*env) return flag;
  try {
    std::size_t used = 0;
    const std::uint64_t v = std::stoull(env, &used);
    if (used != std::string(env).size()) throw std::invalid_argument(env);
    return v;
  } catch (const std::exception&) {
    throw cdr::ConfigError(std::string("CDR_SEED is not an unsigned integer: ") + env);
  }
}

int run_config(const nlohmann::json& doc, const cdr::RunOptions& options) {
  const cdr::ExperimentConfig config = cdr::parse_experiment_config(doc);
  std::cout << cdr::run_experiment(config, options).string() << '\n';
  return kExitOk;
}

int run_verify(const std::string& suite) {
  std::vector<cdr::SuiteReport> reports;
  try {
    reports = cdr::run_suite(suite);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  nlohmann::json out = nlohmann::json::array();
  bool passed = true;
  for (const auto& r : reports) {
    out.push_back(cdr::to_json(r));
    passed = passed && r.passed();
  }
  std::cout << out.dump(2) << '\n';
  return passed ? kExitOk : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clifford data regression experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> out_dir;
  std::size_t workers = 1;
  std::optional<std::uint64_t> seed;
  auto* run = app.add_subcommand("run", "Run an experiment described by a JSON config");
  run->add_option("--config", config_path, "Experiment config (JSON)")->required();
  run->add_option("--out", out_dir, "Output directory (overrides the config's directory)");
  run->add_option("--workers", workers, "Worker threads; 0 = all cores")->check(CLI::NonNegativeNumber);
  run->add_option("--seed", seed, "Master seed (overrides the config)");

  std::string suite;
  auto* verify = app.add_subcommand("verify", "Run a property suite and print a JSON report");
  verify->add_option("--suite", suite, "circuits | simulators | mitigation | bounds | all")->required();

  int qft_n = 3;
  double qft_p = 0.05;
  std::size_t realizations = 10;
  std::size_t qft_S = 500;
  double qft_mu = 1e-5;
  std::vector<std::string> qft_shots{"1000", "exact"};
  std::string qft_noise = "cnot_depolarizing";
  auto* qft = app.add_subcommand("qft", "Mitigate the QFT circuit for one (n, p)");
  qft->add_option("--n", qft_n, "Qubits")->required()->check(CLI::PositiveNumber);
  qft->add_option("--p", qft_p, "Noise strength")->required()->check(CLI::Range(0.0, 1.0));
  qft->add_option("--realizations", realizations, "Independent training sets")->check(CLI::PositiveNumber);
  qft->add_option("--S", qft_S, "Training set size")->check(CLI::PositiveNumber);
  qft->add_option("--mu", qft_mu, "Ridge parameter")->check(CLI::NonNegativeNumber);
  qft->add_option("--shots", qft_shots, "Shot modes: counts and/or 'exact'");
  qft->add_option("--noise", qft_noise, "Noise kind");
  qft->add_option("--out", out_dir, "Output directory");
  qft->add_option("--workers", workers, "Worker threads; 0 = all cores")->check(CLI::NonNegativeNumber);
  qft->add_option("--seed", seed, "Master seed");

  std::string params_path;
  auto* bounds = app.add_subcommand("bounds", "Evaluate the closed-form bounds for a parameter file");
  bounds->add_option("--params", params_path, "Parameter document (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) {
      return run_config(read_json_file(config_path), {out_dir ? std::optional<std::filesystem::path>(*out_dir) : std::nullopt,
                                      workers, seed_from_env(seed)});
    }
    if (*verify) return run_verify(suite);
    if (*qft) {
      nlohmann::json shots = nlohmann::json::array();
      for (const auto& s : qft_shots) {
        if (s == "exact") {
          shots.push_back(s);
        } else {
          try {
            shots.push_back(std::stoll(s));
          } catch (const std::exception&) {
            throw cdr::ConfigError("invalid shot mode '" + s + "'");
          }
        }
      }
      const nlohmann::json cfg = {{"experiment", "qft_sweep"},
                                  {"n_values", nlohmann::json::array({qft_n})},
                                  {"p_values", nlohmann::json::array({qft_p})},
                                  {"noise_kind", qft_noise},
                                  {"realizations", realizations},
                                  {"S", qft_S},
                                  {"mu", qft_mu},
                                  {"shots", shots},
                                  {"seed", 0},
                                  {"output", "qft_n" + std::to_string(qft_n) + ".csv"}};
      return run_config(cfg, {out_dir ? std::optional<std::filesystem::path>(*out_dir) : std::nullopt, workers,
                              seed_from_env(seed)});
    }
    if (*bounds) {
      std::cout << cdr::evaluate_bounds(read_json_file(params_path)).dump(2) << '\n';
      return kExitOk;
    }
  } catch (const cdr::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const cdr::ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return kExitResource;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFail;
  }
  return kExitOk;
}
