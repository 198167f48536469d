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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "cdr/experiments.hpp"

using namespace cdr;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& tag) {
  std::random_device rd;
  fs::path dir = fs::temp_directory_path() / ("cdr_test_" + tag + "_" + std::to_string(rd()));
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

json small_grid(const std::string& experiment) {
  json j = json::parse(R"({
    "seed": 5,
    "circuit": {"n": 3, "gates": 20},
    "test_circuits": 4,
    "training": {"S": 20, "n_fixed": 4},
    "noise": {"kind": "cnot_depolarizing", "p": 0.1},
    "methods": [{"kind": "classical"}, {"kind": "insertion", "J": 4}],
    "shots": [100, "exact"]
  })");
  j["experiment"] = experiment;
  return j;
}

int run_cli(const std::string& args) {
  const int status = std::system((std::string(CDR_CLI_PATH) + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("config validation") {
  CHECK_THROWS_AS(parse_experiment_config(json::parse(R"({"experiment": "nope"})")), ConfigError);
  CHECK_THROWS_AS(parse_experiment_config(json::parse(R"([1, 2])")), ConfigError);
  CHECK_THROWS_AS(parse_experiment_config(json::parse(R"({"seed": 1})")), ConfigError);
  json bad = small_grid("rmse_vs_J");
  bad["mu"] = -1.0;
  CHECK_THROWS_AS(parse_experiment_config(bad), ConfigError);
  bad = small_grid("rmse_vs_J");
  bad["J_values"] = {0};
  CHECK_THROWS_AS(parse_experiment_config(bad), ConfigError);
  bad = small_grid("rmse_vs_J");
  bad["noise"]["p"] = 2.0;
  CHECK_THROWS_AS(parse_experiment_config(bad), ConfigError);
  bad = small_grid("rmse_vs_J");
  bad["methods"] = json::array({{{"kind", "magic"}}});
  CHECK_THROWS_AS(parse_experiment_config(bad), ConfigError);
  CHECK_THROWS_AS(parse_experiment_config(json::parse(R"({"experiment": "qft_sweep", "p_values": [1.5]})")),
                  ConfigError);

  const ExperimentConfig ok = parse_experiment_config(small_grid("rmse_vs_J"));
  CHECK(ok.kind == ExperimentKind::RmseVsJ);
  CHECK(ok.seed == 5);
  CHECK(ok.output == "rmse_vs_J.csv");
  for (auto k : {ExperimentKind::RmseVsJ, ExperimentKind::QftSweep, ExperimentKind::BoundsReport}) {
    CHECK(experiment_kind_from_string(to_string(k)) == k);
  }
}

TEST_CASE("grid config expansion") {
  json j = small_grid("rmse_vs_J");
  j["J_values"] = {2, 3};
  j["mu"] = {0.0, 1e-3};
  const GridConfig g = grid_config_from_json(j, ExperimentKind::RmseVsJ);
  // classical ignores J: 1 variant; insertion: 2 variants; each x 2 shots x 2 mu.
  CHECK(g.cells.size() == (1 + 2) * 2 * 2);
  CHECK(g.baseline_shots.size() == 2);
  CHECK(g.obs().pauli_string().str() == "+ZII");
  const GridConfig zne = grid_config_from_json(json{{"experiment", "zne_impl_compare"}}, ExperimentKind::ZneImplCompare);
  REQUIRE(zne.cells.size() >= 2);
  CHECK(method_label(zne.cells.front().spec) == "zne");
  CHECK(method_label(zne.cells.back().spec) == "zne_uniform");
  CHECK(shots_label(std::nullopt) == "exact");
  CHECK(shots_label(Shots{100}) == "100");
}

TEST_CASE("grid runs") {
  const GridConfig g = grid_config_from_json(small_grid("rmse_vs_J"), ExperimentKind::RmseVsJ);
  SUBCASE("empty test set") {
    GridConfig empty = g;
    empty.test_circuits = 0;
    const GridResult r = run_grid(empty, RngStream(1));
    CHECK(r.truths.empty());
    std::ostringstream out;
    write_results_csv(out, summarize_grid(empty, r));
    CHECK(out.str() == std::string(kResultHeader) + "\n");
  }
  SUBCASE("independent of worker count") {
    const GridResult a = run_grid(g, RngStream(2), 1);
    const GridResult b = run_grid(g, RngStream(2), 3);
    CHECK(a.truths == b.truths);
    CHECK(a.predictions == b.predictions);
    CHECK(a.baseline == b.baseline);
    const auto rows = summarize_grid(g, a);
    // rmse and mean_abs_error per cell and per baseline mode.
    CHECK(rows.size() == 2 * (g.cells.size() + g.baseline_shots.size()));
    for (const auto& r : rows) CHECK(r.value >= 0.0);
  }
}

TEST_CASE("histogram") {
  CHECK(histogram({}, 3).empty());
  CHECK_THROWS_AS(histogram({1.0}, 0), std::invalid_argument);
  const auto bins = histogram({0.0, 0.1, 0.5, 0.9, 1.0}, 2);
  REQUIRE(bins.size() == 2);
  CHECK(bins[0].count == 2);
  CHECK(bins[1].count == 3);
  CHECK(bins[1].right == 1.0);
  const auto flat = histogram({2.0, 2.0}, 4);
  CHECK(flat[0].count == 2);
}

TEST_CASE("experiment runs write reproducible files") {
  const fs::path dir = scratch_dir("runs");
  for (const std::string kind : {"rmse_vs_J", "error_histogram"}) {
    json j = small_grid(kind);
    j["output"] = kind + ".csv";
    const ExperimentConfig c = parse_experiment_config(j);
    const fs::path p = run_experiment(c, {dir / "a", 1, std::nullopt});
    const fs::path q = run_experiment(c, {dir / "b", 2, std::nullopt});
    REQUIRE(fs::exists(p));
    CHECK(!fs::exists(fs::path(p) += ".tmp"));
    std::string a = slurp(p);
    std::string b = slurp(q);
    if (kind == "rmse_vs_J") {
      CHECK(a.rfind(std::string(kResultHeader) + "\n", 0) == 0);
      // Drop the trailing wall_time column before comparing.
      auto strip = [](const std::string& s) {
        std::istringstream in(s);
        std::string line;
        std::string out;
        while (std::getline(in, line)) out += line.substr(0, line.rfind(',')) + "\n";
        return out;
      };
      a = strip(a);
      b = strip(b);
    } else {
      CHECK(a.rfind("method,J,J2,mu,N,bin_left,bin_right,count\n", 0) == 0);
    }
    CHECK(a == b);
  }
  SUBCASE("seed override changes the output") {
    json j = small_grid("error_histogram");
    const ExperimentConfig c = parse_experiment_config(j);
    const std::string x = slurp(run_experiment(c, {dir / "c", 1, std::uint64_t{5}}));
    const std::string y = slurp(run_experiment(c, {dir / "d", 1, std::uint64_t{6}}));
    CHECK(x != y);
  }
  fs::remove_all(dir);
}

TEST_CASE("analysis experiments") {
  const fs::path dir = scratch_dir("analysis");
  SUBCASE("g(t) curve") {
    const json j = {{"experiment", "gt_plot"}, {"n", 2}, {"gates", 8}, {"p", 7}, {"Q", 3}, {"points", 10}};
    const std::string s = slurp(run_experiment(parse_experiment_config(j), {dir, 1, std::nullopt}));
    std::istringstream in(s);
    std::string line;
    std::size_t lines = 0;
    while (std::getline(in, line)) ++lines;
    CHECK(lines == 11);
  }
  SUBCASE("delta scaling") {
    const json j = json::parse(R"({"experiment": "delta_scaling", "S_values": [10, 20],
                                   "alpha_training_size": 20, "test_circuits": 3})");
    const std::string s = slurp(run_experiment(parse_experiment_config(j), {dir, 1, std::nullopt}));
    CHECK(s.rfind("parameter,mean,std,count\n", 0) == 0);
  }
  SUBCASE("bound evaluators") {
    const json out = evaluate_bounds(json::parse(R"({
      "fourier": {"p": 13, "Q": 5, "t": 1},
      "expected_error": {"alpha": [0, 1], "N": 1000},
      "generalization": {"J": 7, "S": 120, "delta": 0.05},
      "lower_bound": {"M": 1024, "P_eps": 0.1, "n": 3, "p": 0.1},
      "ntheta": {"ell_r": 1}
    })"));
    CHECK(out.at("fourier_approximation_bound").get<double>() == doctest::Approx(59.63080268331939));
    CHECK(out.at("expected_error_bound").get<double>() == doctest::Approx(0.03162277660168379));
    CHECK(out.at("generalization_bound_rhs").get<double>() == doctest::Approx(5.452067370656435));
    CHECK(out.at("sample_complexity_lower_bound").get<double>() == doctest::Approx(3.1596312616335998));
    CHECK(out.at("expected_ntheta_bounds")[1].get<double>() == doctest::Approx(1.909859317102744));
  }
  fs::remove_all(dir);
}

TEST_CASE("atomic writes") {
  const fs::path dir = scratch_dir("atomic");
  const fs::path p = dir / "nested" / "out.csv";
  write_file_atomically(p, "a\n");
  write_file_atomically(p, "b\n");
  CHECK(slurp(p) == "b\n");
  CHECK(!fs::exists(dir / "nested" / "out.csv.tmp"));
  fs::remove_all(dir);
}

TEST_CASE("command line exit codes") {
  const fs::path dir = scratch_dir("cli");
  {
    std::ofstream(dir / "bad.json") << R"({"experiment": "rmse_vs_J", "mu": -1})";
    std::ofstream(dir / "broken.json") << "{not json";
    std::ofstream(dir / "big.json") << R"({"experiment": "rmse_vs_J", "circuit": {"n": 13, "gates": 30},
                                           "test_circuits": 1, "shots": ["exact"]})";
    std::ofstream(dir / "tiny.json") << small_grid("rmse_vs_mu").dump();
    std::ofstream(dir / "params.json") << R"({"lipschitz": {}})";
  }
  const std::string out = " --out " + dir.string();
  CHECK(run_cli("verify --suite nonsense") == 2);
  CHECK(run_cli("run --config " + (dir / "bad.json").string() + out) == 2);
  CHECK(run_cli("run --config " + (dir / "broken.json").string() + out) == 2);
  CHECK(run_cli("run --config " + (dir / "missing.json").string() + out) == 2);
  CHECK(run_cli("run --config " + (dir / "big.json").string() + out) == 3);
  CHECK(run_cli("run --config " + (dir / "tiny.json").string() + out) == 0);
  CHECK(fs::exists(dir / "rmse_vs_mu.csv"));
  CHECK(run_cli("bounds --params " + (dir / "params.json").string()) == 0);
  CHECK(run_cli("--no-such-flag") == 2);
  fs::remove_all(dir);
}
