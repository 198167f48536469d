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

// Acceptance runner: one PASS/FAIL line per criterion. With no arguments every
// criterion runs; otherwise only the listed numbers (e.g. `acceptance 4 7`).
// Exit status is 0 iff every selected criterion passed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cdr/bounds.hpp"
#include "cdr/experiments.hpp"
#include "cdr/generalization.hpp"
#include "cdr/regression.hpp"
#include "cdr/verify.hpp"

using namespace cdr;
using nlohmann::json;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::size_t workers() { return std::max(1u, std::thread::hardware_concurrency()); }

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

Outcome from_check(const CheckResult& c) { return {c.passed, c.name + " " + to_json(c).dump()}; }

// One-sided 95% upper quantile of the paired bootstrap distribution of
// RMSE(a) - RMSE(b); a is confidently no worse than b when it is <= 0.
double upper_quantile(const std::vector<double>& a, const std::vector<double>& b, const std::vector<double>& truth,
                      std::uint64_t seed) {
  std::vector<double> d = paired_bootstrap_rmse_difference(a, b, truth, 2000, seed);
  std::sort(d.begin(), d.end());
  return d[static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(d.size()))) - 1];
}

Outcome criterion_backends() { return from_check(check_backend_equivalence(200, 101)); }
Outcome criterion_branches() { return from_check(check_branch_agreement(100, 102)); }
Outcome criterion_affine() { return from_check(check_global_depolarizing_cdr(100, 103)); }

Outcome criterion_ordering() {
  GridConfig g;
  g.n = 3;
  g.gates = 30;
  g.test_circuits = 500;
  g.noise = NoiseModel::cnot_depolarizing(0.1);
  g.S = 120;
  g.n_fixed = 7;
  const std::vector<FeatureMapSpec> methods{FeatureMapSpec::classical(), FeatureMapSpec::geometric(7),
                                            FeatureMapSpec::zne(7), FeatureMapSpec::insertion_map(7),
                                            FeatureMapSpec::insertion_zne(7, 3)};
  const std::vector<Shots> modes{Shots{1000}, std::nullopt};
  for (const auto& m : methods) {
    for (Shots s : modes) g.cells.push_back({m, 1e-3, s});
  }
  g.baseline_shots = modes;
  const GridResult r = run_grid(g, RngStream(104), workers());
  auto cell = [&](std::size_t method, std::size_t mode) -> const std::vector<double>& {
    return r.predictions[method * modes.size() + mode];
  };

  bool ok = true;
  std::ostringstream out;
  std::uint64_t seed = 1;
  out << "T=" << r.truths.size() << " unmitigated_rmse(N=1000)=" << fmt(rmse(r.baseline[0], r.truths));
  for (std::size_t m = 0; m < methods.size(); ++m) {
    const std::string name = method_label(methods[m]);
    const double sampled = rmse(cell(m, 0), r.truths);
    const double exact = rmse(cell(m, 1), r.truths);
    const double qa = upper_quantile(cell(m, 0), r.baseline[0], r.truths, seed++);
    const double qc = upper_quantile(cell(m, 1), cell(m, 0), r.truths, seed++);
    ok = ok && qa <= 0.0 && qc <= 0.0;
    out << "; " << name << " rmse(N=1000)=" << fmt(sampled) << " rmse(exact)=" << fmt(exact)
        << " (a)q95=" << fmt(qa) << " (c)q95=" << fmt(qc);
  }
  const double qb = upper_quantile(cell(4, 0), cell(0, 0), r.truths, seed++);
  const double qb_exact = upper_quantile(cell(4, 1), cell(0, 1), r.truths, seed++);
  ok = ok && qb <= 0.0 && qb_exact <= 0.0;
  out << "; (b) insertion_zne vs classical q95(N=1000)=" << fmt(qb) << " q95(exact)=" << fmt(qb_exact);
  return {ok, out.str()};
}

Outcome criterion_shot_scaling() {
  GridConfig g;
  g.test_circuits = 500;
  const std::vector<Shots> modes{Shots{100}, Shots{1000}, Shots{10000}, std::nullopt};
  for (Shots s : modes) g.cells.push_back({FeatureMapSpec::insertion_map(7), 1e-3, s});
  const GridResult r = run_grid(g, RngStream(105), workers());
  std::vector<double> e;
  for (const auto& p : r.predictions) e.push_back(rmse(p, r.truths));
  const bool monotone = e[0] > e[1] && e[1] > e[2];
  const double slope = std::log10(e[1] / e[0]);
  const bool ok = monotone && std::abs(slope + 0.5) <= 0.2;
  return {ok, "rmse N=1e2: " + fmt(e[0]) + ", 1e3: " + fmt(e[1]) + ", 1e4: " + fmt(e[2]) + ", exact: " + fmt(e[3]) +
                  "; slope(1e2->1e3)=" + fmt(slope) + "; slope(1e3->1e4)=" + fmt(std::log10(e[2] / e[1]))};
}

Outcome criterion_bound_suites() {
  const SuiteReport r = run_bounds_suite();
  std::ostringstream out;
  for (const auto& c : r.checks) {
    out << c.name << ": " << (c.passed ? "ok" : "VIOLATED") << " " << c.detail.dump() << "; ";
  }
  return {r.passed(), out.str()};
}

Outcome criterion_delta_scaling() {
  const DeltaScalingConfig c;  // 200 circuits, S in {25, 100, 400}
  const auto rows = delta_scaling(c, Observable::default_for(c.n), RngStream(107), workers());
  std::vector<double> s;
  std::vector<double> m;
  std::ostringstream out;
  for (const auto& r : rows) {
    s.push_back(static_cast<double>(r.S));
    m.push_back(r.mean_abs);
    out << "S=" << r.S << " mean|D|=" << fmt(r.mean_abs) << " (n=" << r.count << ", removed " << r.removed << "); ";
  }
  const double exponent = power_law_exponent(s, m);
  bool ok = std::abs(exponent + 0.5) <= 0.15;
  out << "exponent=" << fmt(exponent);
  for (std::size_t l = 1; l <= 3; ++l) {
    const auto [lo, hi] = expected_ntheta_bounds(l);
    const double mc = monte_carlo_ntheta(l, 1000000, RngStream(108).child(l));
    ok = ok && mc >= lo && mc <= hi;
    out << "; E[N] l_r=" << l << ": " << fmt(mc) << " in [" << fmt(lo) << ", " << fmt(hi) << "]";
  }
  return {ok, out.str()};
}

Outcome criterion_evaluators() {
  // Values recomputed independently in double precision from the closed forms.
  struct Case {
    const char* name;
    double got;
    double want;
  };
  const auto [nlo, nhi] = expected_ntheta_bounds(1);
  const std::vector<Case> cases{
      {"fourier_approximation_bound(p=13,Q=5,t=1)", fourier_approximation_bound(13, 5, 1.0, 1.0), 59.63080268331939},
      {"generalization_bound_rhs(J=7,S=120,delta=0.05)",
       generalization_bound_rhs(std::vector<double>(120, 0.0), 0.0, 1.0, 7, 120, 0.05, 1.0), 5.452067370656435},
      {"sample_complexity_lower_bound(global)", sample_complexity_lower_bound(1024, 0.1, 0.0, 3, 0.1), 3.1596312616335998},
      {"sample_complexity_lower_bound(layered,d=5)", sample_complexity_lower_bound(1024, 0.1, 0.0, 3, 0.1, {5}),
       8.15556056363761},
      {"expected_ntheta_bounds(1).lower", nlo, 1.7049296585513722},
      {"expected_ntheta_bounds(1).upper", nhi, 1.909859317102744},
  };
  bool ok = true;
  std::ostringstream out;
  for (const auto& c : cases) {
    const double rel = std::abs(c.got - c.want) / std::abs(c.want);
    ok = ok && rel < 5e-7;
    out << c.name << "=" << fmt(c.got) << " (rel err " << fmt(rel) << "); ";
  }
  return {ok, out.str()};
}

Outcome criterion_kernel() { return from_check(check_kernel_duality(20, 109)); }

std::string strip_column(const std::string& csv, const std::string& column) {
  std::istringstream in(csv);
  std::string line;
  std::string out;
  std::ptrdiff_t drop = -1;
  bool header = true;
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::stringstream ls(line);
    for (std::string f; std::getline(ls, f, ',');) fields.push_back(f);
    if (header) {
      const auto it = std::find(fields.begin(), fields.end(), column);
      if (it != fields.end()) drop = it - fields.begin();
      header = false;
    }
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (static_cast<std::ptrdiff_t>(i) == drop) continue;
      out += fields[i];
      out += ',';
    }
    out += '\n';
  }
  return out;
}

Outcome criterion_reproducibility() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("cdr_acceptance_" + std::to_string(std::random_device{}()));
  const std::vector<json> configs{
      json::parse(R"({"experiment": "rmse_vs_J", "seed": 7, "test_circuits": 20, "J_values": [1, 3],
                      "methods": [{"kind": "classical"}, {"kind": "insertion_zne", "J": 1, "J2": 2}, {"kind": "zne", "J": 3}],
                      "shots": [1000, "exact"]})"),
      json::parse(R"({"experiment": "rmse_vs_mu", "seed": 8, "test_circuits": 10, "mu": [0, 1e-3, 1],
                      "methods": [{"kind": "geometric", "J": 2}], "shots": [100]})"),
      json::parse(R"({"experiment": "error_histogram", "seed": 9, "test_circuits": 20, "bins": 10,
                      "methods": [{"kind": "insertion", "J": 3}]})"),
      json::parse(R"({"experiment": "qft_sweep", "seed": 10, "n_values": [2], "p_values": [0.05],
                      "realizations": 3, "S": 30, "shots": [500, "exact"]})"),
      json::parse(R"({"experiment": "delta_scaling", "seed": 11, "S_values": [10, 20], "test_circuits": 4,
                      "alpha_training_size": 20})"),
      json::parse(R"({"experiment": "gt_plot", "seed": 12, "points": 20})"),
  };
  bool ok = true;
  std::ostringstream out;
  for (const auto& j : configs) {
    const ExperimentConfig c = parse_experiment_config(j);
    std::string runs[2];
    for (int k = 0; k < 2; ++k) {
      const fs::path p = run_experiment(c, {dir / std::to_string(k), k == 0 ? 1 : workers(), std::nullopt});
      std::ifstream in(p, std::ios::binary);
      std::ostringstream s;
      s << in.rdbuf();
      runs[k] = strip_column(s.str(), "wall_time");
    }
    const bool same = !runs[0].empty() && runs[0] == runs[1];
    ok = ok && same;
    out << to_string(c.kind) << ": " << (same ? "identical" : "DIFFERENT") << "; ";
  }
  fs::remove_all(dir);
  return {ok, out.str()};
}

struct Criterion {
  int id;
  const char* title;
  double budget_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "backend equivalence", 30, criterion_backends},
      {2, "branch decomposition", 120, criterion_branches},
      {3, "affine-noise exactness", 60, criterion_affine},
      {4, "method ordering", 1800, criterion_ordering},
      {5, "shot-noise scaling", 1800, criterion_shot_scaling},
      {6, "bound suites", 600, criterion_bound_suites},
      {7, "generalization-gap scaling", 1200, criterion_delta_scaling},
      {8, "bound evaluators", 1, criterion_evaluators},
      {9, "kernel duality", 60, criterion_kernel},
      {10, "reproducibility", 600, criterion_reproducibility},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));

  bool all_passed = true;
  for (const auto& c : all) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.budget_seconds;
    const bool passed = o.passed && in_time;
    all_passed = all_passed && passed;
    std::printf("%s criterion %d (%s): %s [%.2f s of %.0f s%s]\n", passed ? "PASS" : "FAIL", c.id, c.title,
                o.detail.c_str(), secs, c.budget_seconds, in_time ? "" : ", OVER BUDGET");
    std::fflush(stdout);
  }
  return all_passed ? 0 : 1;
}
