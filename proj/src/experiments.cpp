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

#include "cdr/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "cdr/bounds.hpp"
#include "cdr/parallel.hpp"
#include "cdr/regression.hpp"
#include "cdr/simulator.hpp"
#include "cdr/spectrum.hpp"
#include "cdr/training.hpp"
#include "cdr/verify.hpp"

namespace cdr {

std::string_view to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::RmseVsJ: return "rmse_vs_J";
    case ExperimentKind::RmseVsMu: return "rmse_vs_mu";
    case ExperimentKind::RmseVsN: return "rmse_vs_N";
    case ExperimentKind::ErrorHistogram: return "error_histogram";
    case ExperimentKind::QftSweep: return "qft_sweep";
    case ExperimentKind::ZneImplCompare: return "zne_impl_compare";
    case ExperimentKind::DeltaScaling: return "delta_scaling";
    case ExperimentKind::GtPlot: return "gt_plot";
    case ExperimentKind::BoundsReport: return "bounds_report";
  }
  return "rmse_vs_J";
}

ExperimentKind experiment_kind_from_string(std::string_view name) {
  for (auto k : {ExperimentKind::RmseVsJ, ExperimentKind::RmseVsMu, ExperimentKind::RmseVsN,
                 ExperimentKind::ErrorHistogram, ExperimentKind::QftSweep,
                 ExperimentKind::ZneImplCompare, ExperimentKind::DeltaScaling,
                 ExperimentKind::GtPlot, ExperimentKind::BoundsReport}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("unknown experiment '" + std::string(name) + "'");
}

std::string method_label(const FeatureMapSpec& spec) {
  std::string name = spec.name();
  const bool folds = spec.kind == FeatureMapKind::Zne || spec.kind == FeatureMapKind::InsertionZne;
  if (folds && spec.scheme == FoldScheme::Uniform) name += "_uniform";
  return name;
}

std::string shots_label(Shots shots) { return shots ? std::to_string(*shots) : "exact"; }

Observable GridConfig::obs() const { return observable ? *observable : Observable::default_for(n); }

// ---- Grid evaluation --------------------------------------------------------

namespace {

struct CircuitOutcome {
  double truth = 0.0;
  std::vector<double> predictions;
  std::vector<double> baseline;
  std::vector<double> alpha_norms;
};

// Stream tag for a shot mode; exact mode draws nothing.
std::uint64_t shots_tag(Shots s) { return s ? *s : 0; }

CircuitOutcome evaluate_circuit(const GridConfig& cfg, const Observable& obs, const RngStream& r) {
  const Circuit u = cfg.source == CircuitSource::Qft
                        ? qft_circuit(cfg.n)
                        : random_circuit(cfg.n, cfg.gates, r.child(0), cfg.min_cnots);
  const std::size_t n_fixed = std::min(cfg.n_fixed, u.rotation_indices().size());
  const TrainingSet ts = generate_training_set(u, cfg.S, n_fixed, r.child(1), obs);
  const std::size_t S = ts.size();

  // One outcome cache per circuit and distinct insertion configuration; index
  // S is U itself.
  std::vector<InsertionConfig> configs;
  std::vector<std::vector<OutcomeCache>> caches;
  auto caches_for = [&](const InsertionConfig& ins) -> std::vector<OutcomeCache>& {
    for (std::size_t k = 0; k < configs.size(); ++k) {
      if (configs[k] == ins) return caches[k];
    }
    configs.push_back(ins);
    auto& set = caches.emplace_back();
    set.reserve(S + 1);
    for (const auto& p : ts.pairs) set.emplace_back(p.circuit, cfg.noise, obs, ins);
    set.emplace_back(u, cfg.noise, obs, ins);
    return set;
  };

  const RngStream features = r.child(2);
  struct Design {
    FeatureMatrix fm;
    std::vector<double> phi_u;
  };
  std::map<std::string, Design> designs;
  auto design_for = [&](const FeatureMapSpec& spec, Shots shots) -> const Design& {
    const std::string key = to_json(spec).dump() + "|" + shots_label(shots);
    if (auto it = designs.find(key); it != designs.end()) return it->second;
    auto& set = caches_for(spec.insertion);
    const RngStream stream = features.child(shots_tag(shots));
    Design d{FeatureMatrix(S, spec.dimension()), {}};
    for (std::size_t i = 0; i < S; ++i) {
      d.fm.set_row(i, feature_vector(set[i], spec, shots, stream.child(i)), ts.pairs[i].f);
    }
    d.phi_u = feature_vector(set[S], spec, shots, stream.child(S));
    const auto labels = spec.perturbations();
    for (std::size_t j = 0; j < labels.size(); ++j) d.fm.column_names[j + 1] = labels[j].label();
    return designs.emplace(key, std::move(d)).first->second;
  };

  CircuitOutcome out;
  out.truth = noiseless_expectation(u, obs);
  for (const GridCell& cell : cfg.cells) {
    const Design& d = design_for(cell.spec, cell.shots);
    const RegressionModel model = fit_ridge(d.fm, cell.mu, obs.spectral_norm());
    out.predictions.push_back(model.predict(d.phi_u));
    out.alpha_norms.push_back(model.alpha.norm());
  }
  for (Shots shots : cfg.baseline_shots) {
    auto& set = caches_for(InsertionConfig{});
    const RngStream stream = features.child(shots_tag(shots)).child(S);
    out.baseline.push_back(feature_vector(set[S], FeatureMapSpec::classical(), shots, stream)[1]);
  }
  return out;
}

}  // namespace

GridResult run_grid(const GridConfig& config, const RngStream& rng, std::size_t workers) {
  for (const auto& cell : config.cells) cell.spec.validate();
  const Observable obs = config.obs();
  if (obs.num_qubits() != config.n) throw std::invalid_argument("observable size does not match n");
  const auto start = std::chrono::steady_clock::now();
  const auto outcomes = parallel_map(config.test_circuits, workers, [&](std::size_t c) {
    return evaluate_circuit(config, obs, rng.child(c));
  });
  GridResult result;
  result.predictions.assign(config.cells.size(), {});
  result.alpha_norms.assign(config.cells.size(), {});
  result.baseline.assign(config.baseline_shots.size(), {});
  for (const auto& o : outcomes) {
    result.truths.push_back(o.truth);
    for (std::size_t k = 0; k < o.predictions.size(); ++k) {
      result.predictions[k].push_back(o.predictions[k]);
      result.alpha_norms[k].push_back(o.alpha_norms[k]);
    }
    for (std::size_t m = 0; m < o.baseline.size(); ++m) result.baseline[m].push_back(o.baseline[m]);
  }
  result.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

// ---- Result tables ----------------------------------------------------------

namespace {

std::string format_double(double x) {
  std::ostringstream s;
  s.precision(17);
  s << x;
  return s.str();
}

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double std_error_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

// RMSE and mean |error| rows with delta-method standard errors.
void error_rows(std::vector<ResultRow>& rows, const ResultRow& base, const std::vector<double>& pred,
                const std::vector<double>& truth) {
  if (truth.empty()) return;
  std::vector<double> sq;
  std::vector<double> ab;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double e = pred[i] - truth[i];
    sq.push_back(e * e);
    ab.push_back(std::abs(e));
  }
  ResultRow r = base;
  r.metric = "rmse";
  r.value = rmse(pred, truth);
  r.std_error = r.value > 0.0 ? std_error_of(sq) / (2.0 * r.value) : 0.0;
  rows.push_back(r);
  r.metric = "mean_abs_error";
  r.value = mean_of(ab);
  r.std_error = std_error_of(ab);
  rows.push_back(r);
}

ResultRow cell_row(const GridConfig& cfg, const GridCell& cell, double wall_time) {
  ResultRow r;
  r.method = method_label(cell.spec);
  r.J = cell.spec.J;
  r.J2 = cell.spec.kind == FeatureMapKind::InsertionZne ? cell.spec.J2 : 0;
  r.mu = cell.mu;
  r.shots = cell.shots;
  r.n = cfg.n;
  r.p = cfg.noise.p;
  r.wall_time = wall_time;
  return r;
}

ResultRow baseline_row(const GridConfig& cfg, Shots shots, double wall_time) {
  ResultRow r;
  r.method = "unmitigated";
  r.shots = shots;
  r.n = cfg.n;
  r.p = cfg.noise.p;
  r.wall_time = wall_time;
  return r;
}

}  // namespace

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kResultHeader << '\n';
  for (const auto& r : rows) {
    out << r.method << ',' << r.J << ',' << r.J2 << ',' << format_double(r.mu) << ','
        << shots_label(r.shots) << ',' << r.n << ',' << format_double(r.p) << ',' << r.metric << ','
        << format_double(r.value) << ',' << format_double(r.std_error) << ','
        << format_double(r.wall_time) << '\n';
  }
}

std::vector<ResultRow> summarize_grid(const GridConfig& config, const GridResult& result) {
  std::vector<ResultRow> rows;
  for (std::size_t k = 0; k < config.cells.size(); ++k) {
    error_rows(rows, cell_row(config, config.cells[k], result.wall_time), result.predictions[k],
               result.truths);
  }
  for (std::size_t m = 0; m < config.baseline_shots.size(); ++m) {
    error_rows(rows, baseline_row(config, config.baseline_shots[m], result.wall_time),
               result.baseline[m], result.truths);
  }
  return rows;
}

std::vector<HistogramBin> histogram(const std::vector<double>& values, std::size_t bins) {
  if (bins == 0) throw std::invalid_argument("need at least one bin");
  if (values.empty()) return {};
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  double hi = *hi_it;
  if (hi == lo) hi = lo + 1.0;
  const double width = (hi - lo) / static_cast<double>(bins);
  std::vector<HistogramBin> out(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    out[b].left = lo + width * static_cast<double>(b);
    out[b].right = b + 1 == bins ? hi : lo + width * static_cast<double>(b + 1);
  }
  for (double v : values) {
    auto b = static_cast<std::size_t>((v - lo) / width);
    out[std::min(b, bins - 1)].count++;
  }
  return out;
}

// ---- Config parsing -----------------------------------------------------------

namespace {

std::vector<Shots> parse_shots(const nlohmann::json& j) {
  std::vector<Shots> out;
  auto one = [&](const nlohmann::json& v) {
    if (v.is_string()) {
      if (v.get<std::string>() != "exact") throw ConfigError("shots must be a positive count or \"exact\"");
      out.push_back(std::nullopt);
    } else {
      const auto n = v.get<std::int64_t>();
      if (n <= 0) throw ConfigError("shot counts must be positive");
      out.push_back(static_cast<std::size_t>(n));
    }
  };
  if (j.is_array()) {
    for (const auto& v : j) one(v);
  } else {
    one(j);
  }
  if (out.empty()) throw ConfigError("need at least one shot mode");
  return out;
}

std::vector<double> parse_number_list(const nlohmann::json& j) {
  if (j.is_array()) return j.get<std::vector<double>>();
  return {j.get<double>()};
}

std::size_t positive_count(const nlohmann::json& j, const char* key, std::size_t fallback) {
  if (!j.contains(key)) return fallback;
  const auto v = j.at(key).get<std::int64_t>();
  if (v <= 0) throw ConfigError(std::string(key) + " must be positive");
  return static_cast<std::size_t>(v);
}

std::size_t count_or_zero(const nlohmann::json& j, const char* key, std::size_t fallback) {
  if (!j.contains(key)) return fallback;
  const auto v = j.at(key).get<std::int64_t>();
  if (v < 0) throw ConfigError(std::string(key) + " must be non-negative");
  return static_cast<std::size_t>(v);
}

std::vector<FeatureMapSpec> parse_methods(const nlohmann::json& j) {
  std::vector<FeatureMapSpec> out;
  if (!j.contains("methods")) {
    out = {FeatureMapSpec::classical(), FeatureMapSpec::geometric(7), FeatureMapSpec::zne(7),
           FeatureMapSpec::insertion_map(7), FeatureMapSpec::insertion_zne(7, 3)};
    return out;
  }
  for (const auto& m : j.at("methods")) out.push_back(feature_map_from_json(m));
  if (out.empty()) throw ConfigError("methods must not be empty");
  return out;
}

// Fills the circuit/noise/training part shared by every grid experiment.
GridConfig base_grid(const nlohmann::json& j) {
  GridConfig g;
  if (j.contains("circuit")) {
    const auto& c = j.at("circuit");
    g.n = static_cast<int>(positive_count(c, "n", 3));
    g.gates = positive_count(c, "gates", 30);
    if (c.contains("min_cnots")) {
      if (c.at("min_cnots").is_null()) {
        g.min_cnots.reset();
      } else {
        g.min_cnots = count_or_zero(c, "min_cnots", 1);
      }
    }
  }
  g.test_circuits = count_or_zero(j, "test_circuits", 100);
  if (j.contains("noise")) g.noise = noise_from_json(j.at("noise"));
  if (j.contains("observable")) g.observable = observable_from_json(j.at("observable"));
  if (j.contains("training")) {
    const auto& t = j.at("training");
    g.S = positive_count(t, "S", 120);
    g.n_fixed = count_or_zero(t, "n_fixed", 7);
  }
  if (g.observable && g.observable->num_qubits() != g.n) {
    throw ConfigError("observable acts on a different number of qubits than the circuit");
  }
  return g;
}

template <typename Fn>
auto with_config_errors(Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const std::domain_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

}  // namespace

GridConfig grid_config_from_json(const nlohmann::json& j, ExperimentKind kind) {
  return with_config_errors([&] {
    GridConfig g = base_grid(j);
    std::vector<FeatureMapSpec> methods = parse_methods(j);
    if (kind == ExperimentKind::ZneImplCompare && !j.contains("methods")) {
      methods = {FeatureMapSpec::zne(3, FoldScheme::Incremental), FeatureMapSpec::zne(3, FoldScheme::Uniform)};
    }
    const std::vector<double> mus = j.contains("mu") ? parse_number_list(j.at("mu")) : std::vector<double>{1e-3};
    for (double mu : mus) {
      if (!(mu >= 0.0) || !std::isfinite(mu)) throw ConfigError("mu values must be finite and >= 0");
    }
    const std::vector<Shots> shots =
        j.contains("shots") ? parse_shots(j.at("shots")) : std::vector<Shots>{1000, std::nullopt};
    std::vector<std::size_t> j_values;
    if (j.contains("J_values")) {
      for (const auto& v : j.at("J_values")) {
        const auto x = v.get<std::int64_t>();
        if (x <= 0) throw ConfigError("J values must be positive");
        j_values.push_back(static_cast<std::size_t>(x));
      }
    }
    for (const auto& base : methods) {
      std::vector<FeatureMapSpec> variants;
      if (j_values.empty() || base.kind == FeatureMapKind::Classical) {
        variants.push_back(base);
      } else {
        for (std::size_t J : j_values) {
          FeatureMapSpec s = base;
          s.J = J;
          if (!s.t_schedule.empty()) throw ConfigError("an explicit t schedule cannot be combined with J_values");
          variants.push_back(s);
        }
      }
      for (const auto& spec : variants) {
        spec.validate();
        for (Shots s : shots) {
          for (double mu : mus) g.cells.push_back({spec, mu, s});
        }
      }
    }
    g.baseline_shots = shots;
    return g;
  });
}

ExperimentConfig parse_experiment_config(const nlohmann::json& j) {
  return with_config_errors([&] {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    ExperimentConfig c;
    c.kind = experiment_kind_from_string(j.at("experiment").get<std::string>());
    c.seed = j.value("seed", std::uint64_t{0});
    c.output = j.value("output", std::string(to_string(c.kind)) + (c.kind == ExperimentKind::BoundsReport ? ".json" : ".csv"));
    c.raw = j;
    switch (c.kind) {
      case ExperimentKind::RmseVsJ:
      case ExperimentKind::RmseVsMu:
      case ExperimentKind::RmseVsN:
      case ExperimentKind::ErrorHistogram:
      case ExperimentKind::ZneImplCompare:
        (void)grid_config_from_json(j, c.kind);
        break;
      case ExperimentKind::QftSweep:
        if (j.contains("n_values")) {
          for (const auto& v : j.at("n_values")) {
            if (v.get<int>() < 1) throw ConfigError("n values must be positive");
          }
        }
        if (j.contains("p_values")) {
          for (double p : j.at("p_values").get<std::vector<double>>()) {
            if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("p values must lie in [0, 1]");
          }
        }
        (void)parse_methods(j);
        break;
      default:
        break;
    }
    return c;
  });
}

// ---- Runners -------------------------------------------------------------------

void write_file_atomically(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

namespace {

std::string run_grid_experiment(const nlohmann::json& j, ExperimentKind kind, const RngStream& rng,
                                std::size_t workers) {
  const GridConfig g = grid_config_from_json(j, kind);
  const GridResult result = run_grid(g, rng, workers);
  std::ostringstream out;
  if (kind != ExperimentKind::ErrorHistogram) {
    write_results_csv(out, summarize_grid(g, result));
    return out.str();
  }
  const std::size_t bins = positive_count(j, "bins", 60);
  out << "method,J,J2,mu,N,bin_left,bin_right,count\n";
  auto emit = [&](const ResultRow& r, const std::vector<double>& pred) {
    std::vector<double> errors;
    for (std::size_t i = 0; i < pred.size(); ++i) errors.push_back(pred[i] - result.truths[i]);
    for (const auto& b : histogram(errors, bins)) {
      out << r.method << ',' << r.J << ',' << r.J2 << ',' << format_double(r.mu) << ','
          << shots_label(r.shots) << ',' << format_double(b.left) << ',' << format_double(b.right)
          << ',' << b.count << '\n';
    }
  };
  for (std::size_t k = 0; k < g.cells.size(); ++k) emit(cell_row(g, g.cells[k], 0.0), result.predictions[k]);
  for (std::size_t m = 0; m < g.baseline_shots.size(); ++m) {
    emit(baseline_row(g, g.baseline_shots[m], 0.0), result.baseline[m]);
  }
  return out.str();
}

std::vector<double> default_qft_p_values() {
  std::vector<double> p;
  for (int i = 1; i <= 10; ++i) p.push_back(0.01 * i);
  return p;
}

std::string run_qft_sweep(const nlohmann::json& j, const RngStream& rng, std::size_t workers) {
  return with_config_errors([&] {
    const std::vector<int> ns = j.value("n_values", std::vector<int>{2, 3, 4, 5});
    const std::vector<double> ps =
        j.contains("p_values") ? j.at("p_values").get<std::vector<double>>() : default_qft_p_values();
    const NoiseKind kind =
        noise_kind_from_string(j.value("noise_kind", std::string("cnot_depolarizing")));
    const std::vector<FeatureMapSpec> methods = parse_methods(j);
    const std::vector<Shots> shots =
        j.contains("shots") ? parse_shots(j.at("shots")) : std::vector<Shots>{1000, std::nullopt};
    const double mu = j.value("mu", 1e-5);
    std::vector<ResultRow> rows;
    for (std::size_t a = 0; a < ns.size(); ++a) {
      for (std::size_t b = 0; b < ps.size(); ++b) {
        GridConfig g;
        g.source = CircuitSource::Qft;
        g.n = ns[a];
        g.test_circuits = count_or_zero(j, "realizations", 10);
        g.noise = noise_from_json({{"kind", to_string(kind)}, {"p", ps[b]}});
        g.S = positive_count(j, "S", 500);
        g.n_fixed = count_or_zero(j, "n_fixed", 7);
        for (const auto& m : methods) {
          for (Shots s : shots) g.cells.push_back({m, mu, s});
        }
        g.baseline_shots = shots;
        const GridResult res = run_grid(g, rng.child(a).child(b), workers);
        auto mean_rows = [&](ResultRow r, const std::vector<double>& values) {
          if (values.empty()) return;
          r.metric = "mean_estimate";
          r.value = mean_of(values);
          r.std_error = std_error_of(values);
          rows.push_back(r);
          error_rows(rows, r, values, res.truths);
        };
        for (std::size_t k = 0; k < g.cells.size(); ++k) {
          mean_rows(cell_row(g, g.cells[k], res.wall_time), res.predictions[k]);
        }
        for (std::size_t m = 0; m < g.baseline_shots.size(); ++m) {
          mean_rows(baseline_row(g, g.baseline_shots[m], res.wall_time), res.baseline[m]);
        }
        if (!res.truths.empty()) {
          ResultRow r = baseline_row(g, std::nullopt, res.wall_time);
          r.method = "ideal";
          r.metric = "mean_estimate";
          r.value = mean_of(res.truths);
          rows.push_back(r);
        }
      }
    }
    // error_rows appends rmse/mean_abs_error after each mean_estimate row;
    // their metric names make every row unambiguous.
    std::ostringstream out;
    write_results_csv(out, rows);
    return out.str();
  });
}

std::string run_delta_scaling(const nlohmann::json& j, const RngStream& rng, std::size_t workers) {
  return with_config_errors([&] {
    DeltaScalingConfig c;
    if (j.contains("circuit")) {
      const auto& cj = j.at("circuit");
      c.n = static_cast<int>(positive_count(cj, "n", 3));
      c.ell = positive_count(cj, "gates", 25);
      c.min_cnots = count_or_zero(cj, "min_cnots", 6);
    }
    c.n_fixed = count_or_zero(j, "n_fixed", c.n_fixed);
    if (j.contains("method")) c.spec = feature_map_from_json(j.at("method"));
    if (j.contains("noise")) c.noise = noise_from_json(j.at("noise"));
    c.alpha_training_size = positive_count(j, "alpha_training_size", c.alpha_training_size);
    c.mu = j.value("mu", c.mu);
    if (j.contains("S_values")) c.S_values = j.at("S_values").get<std::vector<std::size_t>>();
    for (std::size_t s : c.S_values) {
      if (s == 0) throw ConfigError("S values must be positive");
    }
    c.circuits = count_or_zero(j, "test_circuits", c.circuits);
    if (j.contains("outlier_threshold")) {
      if (j.at("outlier_threshold").is_null()) {
        c.outlier_threshold.reset();
      } else {
        c.outlier_threshold = j.at("outlier_threshold").get<double>();
      }
    }
    const Observable obs =
        j.contains("observable") ? observable_from_json(j.at("observable")) : Observable::default_for(c.n);
    std::ostringstream out;
    write_delta_csv(out, delta_scaling(c, obs, rng, workers));
    return out.str();
  });
}

std::string run_gt_plot(const nlohmann::json& j, const RngStream& rng) {
  return with_config_errors([&] {
    const int n = j.value("n", 2);
    const std::size_t gates = positive_count(j, "gates", 10);
    const auto p = static_cast<unsigned>(positive_count(j, "p", 13));
    const std::size_t Q = positive_count(j, "Q", 13);
    const double t_max = j.value("t_max", static_cast<double>(p));
    const std::size_t points = positive_count(j, "points", 200);
    const Circuit u = j.contains("circuit_json") ? circuit_from_json(j.at("circuit_json"))
                                                 : random_circuit(n, gates, rng.child(0));
    const Observable obs =
        j.contains("observable") ? observable_from_json(j.at("observable")) : Observable::default_for(u.num_qubits());
    const UnitarySpectrum spec_u(circuit_unitary(u));
    const UnitarySpectrum spec_y = periodic_approximant(spec_u, p);
    const std::size_t samples = 4 * p;
    std::vector<double> ts(samples);
    std::vector<double> ys(samples);
    for (std::size_t k = 0; k < samples; ++k) {
      ts[k] = static_cast<double>(p) * static_cast<double>(k) / static_cast<double>(samples);
      ys[k] = g_of_t(spec_y, obs, ts[k]);
    }
    const FourierModel model = fit_fourier(ts, ys, static_cast<double>(p), std::min<std::size_t>(Q, p - 1));
    std::ostringstream out;
    out.precision(17);
    out << "t,g_u,g_y,model\n";
    for (std::size_t k = 0; k < points; ++k) {
      const double t = points == 1 ? 0.0 : t_max * static_cast<double>(k) / static_cast<double>(points - 1);
      out << t << ',' << g_of_t(spec_u, obs, t) << ',' << g_of_t(spec_y, obs, t) << ',' << model(t) << '\n';
    }
    return out.str();
  });
}

std::string run_bounds_report(const nlohmann::json& j, std::uint64_t seed) {
  return with_config_errors([&] {
    BoundSuiteOptions o;
    o.seed = seed;
    o.unitaries = positive_count(j, "unitaries", o.unitaries);
    if (j.contains("primes")) o.primes = j.at("primes").get<std::vector<unsigned>>();
    for (unsigned p : o.primes) {
      if (!is_prime(p)) throw ConfigError("primes must be prime");
    }
    o.t_points = positive_count(j, "t_points", o.t_points);
    o.random_states = count_or_zero(j, "random_states", o.random_states);
    o.lipschitz_triples = positive_count(j, "lipschitz_triples", o.lipschitz_triples);
    o.fourier_configs = positive_count(j, "fourier_configs", o.fourier_configs);
    o.error_instances = positive_count(j, "error_instances", o.error_instances);
    o.resamples = positive_count(j, "resamples", o.resamples);
    nlohmann::json report = to_json(run_bounds_suite(o));
    if (j.contains("params")) report["evaluators"] = evaluate_bounds(j.at("params"));
    return report.dump(2) + "\n";
  });
}

}  // namespace

std::filesystem::path run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  const std::uint64_t seed = options.seed_override.value_or(config.seed);
  const RngStream rng(seed);
  const std::size_t workers = resolve_workers(options.workers);
  std::string content;
  switch (config.kind) {
    case ExperimentKind::RmseVsJ:
    case ExperimentKind::RmseVsMu:
    case ExperimentKind::RmseVsN:
    case ExperimentKind::ErrorHistogram:
    case ExperimentKind::ZneImplCompare:
      content = run_grid_experiment(config.raw, config.kind, rng, workers);
      break;
    case ExperimentKind::QftSweep: content = run_qft_sweep(config.raw, rng, workers); break;
    case ExperimentKind::DeltaScaling: content = run_delta_scaling(config.raw, rng, workers); break;
    case ExperimentKind::GtPlot: content = run_gt_plot(config.raw, rng); break;
    case ExperimentKind::BoundsReport: content = run_bounds_report(config.raw, seed); break;
  }
  std::filesystem::path path = config.output;
  if (options.out_dir) path = *options.out_dir / path.filename();
  write_file_atomically(path, content);
  return path;
}

nlohmann::json evaluate_bounds(const nlohmann::json& params) {
  return with_config_errors([&] {
    nlohmann::json out = nlohmann::json::object();
    if (params.contains("fourier")) {
      const auto& f = params.at("fourier");
      out["fourier_approximation_constant"] = fourier_approximation_constant();
      out["fourier_approximation_bound"] = fourier_approximation_bound(
          f.at("p").get<unsigned>(), f.at("Q").get<std::size_t>(), f.at("t").get<double>(),
          f.value("obs_norm", 1.0));
    }
    if (params.contains("lipschitz")) {
      out["lipschitz_bound"] = lipschitz_bound(params.at("lipschitz").value("obs_norm", 1.0));
    }
    if (params.contains("expected_error")) {
      const auto& e = params.at("expected_error");
      const auto a = e.at("alpha").get<std::vector<double>>();
      out["expected_error_bound"] =
          expected_error_bound(Eigen::Map<const Eigen::VectorXd>(a.data(), static_cast<Eigen::Index>(a.size())),
                               e.value("obs_norm", 1.0), e.at("N").get<std::size_t>(),
                               e.value("residual", 0.0));
    }
    if (params.contains("generalization")) {
      const auto& g = params.at("generalization");
      out["generalization_bound_rhs"] = generalization_bound_rhs(
          g.value("residuals", std::vector<double>{}), g.value("alpha_norm", 0.0),
          g.value("obs_norm", 1.0), g.at("J").get<std::size_t>(), g.at("S").get<std::size_t>(),
          g.at("delta").get<double>(), g.value("n_theta", 1.0));
    }
    if (params.contains("ntheta")) {
      const auto [lo, hi] = expected_ntheta_bounds(params.at("ntheta").at("ell_r").get<std::size_t>());
      out["expected_ntheta_bounds"] = {lo, hi};
    }
    if (params.contains("lower_bound")) {
      const auto& l = params.at("lower_bound");
      out["sample_complexity_lower_bound"] = sample_complexity_lower_bound(
          l.at("M").get<double>(), l.at("P_eps").get<double>(), l.value("beta", 0.0),
          l.at("n").get<std::size_t>(), l.at("p").get<double>(), {l.value("depth", std::size_t{0})});
    }
    return out;
  });
}

}  // namespace cdr
