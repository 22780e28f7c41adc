/*
 * Copyright 2026 The phmc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include <CLI11.hpp>

#include "cli.hpp"
#include "config.hpp"
#include "phmc/phmc.hpp"

namespace phmc::cli {

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

double median(std::vector<double> x) {
  if (x.empty()) throw std::invalid_argument("median: empty sample");
  std::sort(x.begin(), x.end());
  const std::size_t n = x.size();
  return n % 2 ? x[n / 2] : 0.5 * (x[n / 2 - 1] + x[n / 2]);
}

double sample_sd(const std::vector<double>& x) {
  if (x.size() < 2) return 0.0;
  double m = 0.0;
  for (double v : x) m += v;
  m /= static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

namespace {

namespace fs = std::filesystem;
using io::format_real;
using models::LinearGaussianModel;
using models::PoissonModel;

struct ModelSpec {
  std::string name = "poisson";
  std::size_t d = 1;
};

template <class F>
void with_model(const ModelSpec& m, F&& f) {
  if (m.name == "lgssm")
    f(LinearGaussianModel(m.d));
  else
    f(PoissonModel{});
}

ModelSpec read_model(ConfigReader& r) {
  ModelSpec m;
  m.name = r.choice("model", std::string("poisson"), {"poisson", "lgssm"});
  if (m.name == "lgssm")
    m.d = static_cast<std::size_t>(r.integer("d", 1, 1, 100000));
  else if (r.has("d"))
    r.problem("'d' applies only to model lgssm");
  return m;
}

std::vector<std::string> param_names(const ModelSpec& m) {
  std::vector<std::string> n;
  with_model(m, [&](const auto& model) { n = model.param_names(); });
  return n;
}

std::vector<double> theta_from_json(ConfigReader& r, const std::string& key, const json& v, const ModelSpec& m) {
  const auto names = param_names(m);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> th(names.size(), nan);
  bool ok = true;
  auto bad = [&](const std::string& msg) {
    r.problem("'" + key + "': " + msg);
    ok = false;
  };
  if (v.is_array()) {
    if (v.size() != names.size()) {
      bad("expected " + std::to_string(names.size()) + " values, got " + std::to_string(v.size()));
    } else {
      for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i].is_number())
          th[i] = v[i].get<double>();
        else
          bad("entry " + std::to_string(i + 1) + " is not a number");
    }
  } else if (v.is_object()) {
    bool any_kappa = false;
    for (const auto& [k, x] : v.items()) {
      if (m.name == "lgssm" && k == "kappa") {
        any_kappa = true;
        if (!x.is_array() || x.size() != m.d) {
          bad("'kappa' must be an array of " + std::to_string(m.d) + " numbers");
          continue;
        }
        for (std::size_t j = 0; j < m.d; ++j)
          if (x[j].is_number())
            th[j] = x[j].get<double>();
          else
            bad("'kappa' entries must be numbers");
        continue;
      }
      const auto it = std::find(names.begin(), names.end(), k);
      if (it == names.end()) {
        bad("unknown component '" + k + "'");
        continue;
      }
      if (!x.is_number()) {
        bad("component '" + k + "' is not a number");
        continue;
      }
      if (k.rfind("kappa_", 0) == 0) any_kappa = true;
      th[static_cast<std::size_t>(it - names.begin())] = x.get<double>();
    }
    if (m.name == "lgssm" && !any_kappa) {
      const auto ref = models::reference_kappas(m.d);
      std::copy(ref.begin(), ref.end(), th.begin());
    }
    for (std::size_t i = 0; i < th.size() && ok; ++i)
      if (std::isnan(th[i])) bad("missing component '" + names[i] + "'");
  } else {
    bad("must be an array or an object keyed by parameter name");
  }
  if (!ok) return {};
  bool support = false;
  with_model(m, [&](const auto& model) { support = model.in_support(th); });
  if (!support) {
    bad("lies outside the model support");
    return {};
  }
  return th;
}

std::optional<std::vector<double>> read_theta(ConfigReader& r, const std::string& key, const ModelSpec& m,
                                              bool required) {
  if (!r.has(key)) {
    if (required) r.problem("missing required key '" + key + "'");
    return std::nullopt;
  }
  auto th = theta_from_json(r, key, r.raw().at(key), m);
  if (th.empty()) return std::nullopt;
  return th;
}

json theta_json(const std::vector<std::string>& names, const std::vector<double>& th) {
  json j = json::object();
  for (std::size_t i = 0; i < th.size(); ++i) j[names[i]] = th[i];
  return j;
}

struct FilterSettings {
  double ess_threshold = 0.5;
  Resampling resampling = Resampling::kSystematic;
};

FilterSettings read_filter(ConfigReader& r) {
  FilterSettings f;
  f.ess_threshold = r.real("ess_threshold", 0.5, 0.0, 1.0, true, false);
  const std::string s = r.choice("resampling", std::string("systematic"), {"systematic", "stratified", "multinomial"});
  f.resampling = s == "stratified" ? Resampling::kStratified
                 : s == "multinomial" ? Resampling::kMultinomial
                                      : Resampling::kSystematic;
  return f;
}

ScoreKind read_score_kind(ConfigReader& r) {
  return r.choice("score_kind", std::string("quadratic"), {"linear", "quadratic"}) == "linear" ? ScoreKind::kLinear
                                                                                               : ScoreKind::kQuadratic;
}

/// Shared sampler keys. Grid-valued keys are read by the callers.
struct ChainSettings {
  SamplerConfig sc;
  std::size_t chains = 1;
  std::string init = "theta";
  ScoreKind score_kind = ScoreKind::kQuadratic;
};

ChainSettings read_chain_settings(ConfigReader& r, bool read_L, bool read_eps, bool read_N, bool read_rw) {
  ChainSettings s;
  const FilterSettings f = read_filter(r);
  s.sc.ess_threshold_fraction = f.ess_threshold;
  s.sc.resampling = f.resampling;
  s.sc.K = static_cast<std::size_t>(r.integer("K", 1000, 1));
  s.sc.burn_in = static_cast<std::size_t>(r.integer("burn_in", 0, 0));
  s.sc.thin = static_cast<std::size_t>(r.integer("thin", 1, 1));
  if (s.sc.burn_in >= s.sc.K) r.problem("'burn_in' must be smaller than 'K'");
  if (read_L) s.sc.L = static_cast<std::size_t>(r.integer("L", 5, 1));
  if (read_eps) s.sc.epsilon = r.real("epsilon", 0.05, 0.0, std::numeric_limits<double>::infinity(), true, true);
  if (read_N) s.sc.N = static_cast<std::size_t>(r.integer("N", 100, 1));
  if (read_rw) s.sc.rw_scale = r.real("rw_scale", 0.05, 0.0, std::numeric_limits<double>::infinity(), false, true);
  s.sc.reuse_current_loglik = r.boolean("reuse_current_loglik", false);
  s.sc.divergence_threshold =
      r.real("divergence_threshold", 1e6, 0.0, std::numeric_limits<double>::infinity(), true, true);
  s.chains = static_cast<std::size_t>(r.integer("chains", 1, 1, 100000));
  s.init = r.choice("init", std::string("theta"), {"theta", "prior"});
  s.score_kind = read_score_kind(r);
  return s;
}

/// Starting point of a chain: the configured theta, or a prior draw keyed by the chain.
template <class M>
std::vector<double> chain_start(const M& model, const ChainSettings& s, const std::optional<std::vector<double>>& theta,
                                std::uint64_t chain) {
  if (s.init == "theta") return *theta;
  Rng rng = make_stream(s.sc.seed, {chain, key(StreamRole::kInit), 1});
  for (int i = 0; i < 10000; ++i) {
    std::vector<double> th = model.sample_prior(rng);
    if (model.in_support(th)) return th;
  }
  throw std::runtime_error("could not draw an in-support starting point from the prior");
}

template <class M>
ChainOutput<typename M::state_type> run_chain(const M& model, std::span<const typename M::observation_type> y,
                                              const SamplerConfig& sc, const std::string& sampler, ScoreKind kind,
                                              std::span<const double> init) {
  if (sampler == "pmmh") return pmmh(model, y, sc, init);
  if (sampler == "phmc") return phmc(model, y, sc, init, kind);
  if constexpr (std::is_same_v<M, LinearGaussianModel>) {
    const std::size_t d = model.kappa_count();
    auto log_post = [&](std::span<const double> th) {
      if (!model.in_support(th)) return kNegInf;
      return kalman_log_likelihood(th, y, d) + model.log_prior(th);
    };
    auto grad = [&](std::span<const double> th) { return finite_difference_score(log_post, th); };
    auto out = hmc(log_post, grad, sc, init, model.param_names());
    for (auto& dr : out.draws) dr.log_z = kalman_log_likelihood(dr.theta.values(), y, d);
    return out;
  } else {
    throw std::invalid_argument("hmc-reference requires model lgssm");
  }
}

/// Output directory bookkeeping plus the manifest.
class Run {
 public:
  Run(std::string command, const json& config, RngSeed seed, const std::string& dir)
      : command_(std::move(command)), config_(config), seed_(seed), dir_(dir),
        start_(std::chrono::steady_clock::now()) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec || !fs::is_directory(dir_)) throw IoError("cannot create output directory " + dir_);
  }

  std::string path(const std::string& name) {
    outputs_.insert(name);
    return (fs::path(dir_) / name).string();
  }

  void write_json(const std::string& name, const json& j) {
    const std::string p = path(name);
    std::ofstream out(p);
    if (!out) throw IoError("cannot write " + p);
    out << j.dump(2) << '\n';
    out.close();
    if (!out) throw IoError("write failed: " + p);
  }

  void finish() {
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    json m;
    m["command"] = command_;
    m["version"] = std::string(kVersion);
    m["seed"] = seed_;
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a(config_.dump())));
    m["config_hash"] = std::string("fnv1a64:") + hex;
    m["config"] = config_;
    m["outputs"] = std::vector<std::string>(outputs_.begin(), outputs_.end());
    m["wall_clock_seconds"] = secs;
    write_json("manifest.json", m);
  }

 private:
  std::string command_;
  json config_;
  RngSeed seed_;
  std::string dir_;
  std::set<std::string> outputs_;
  std::chrono::steady_clock::time_point start_;
};

template <class Obs>
std::vector<Obs> load_observations(const std::string& path) {
  if (!fs::exists(path)) throw IoError("dataset not found: " + path);
  return io::read_dataset<Obs>(path).y;
}

// ---------------------------------------------------------------------------------------

int cmd_simulate(const json& cfg, std::ostream& out) {
  ConfigReader r(cfg);
  const ModelSpec m = read_model(r);
  const auto theta = read_theta(r, "theta", m, true);
  const auto T = static_cast<std::size_t>(r.integer("T", std::nullopt, 1));
  const RngSeed seed = r.seed("seed");
  const std::string dir = r.string("output", std::nullopt);
  r.finish();

  Run run("simulate", cfg, seed, dir);
  with_model(m, [&](const auto& model) {
    const auto sim = simulate_dataset(model, *theta, T, seed);
    io::write_dataset(run.path("data.csv"), sim.observations, &sim.states);
    json side;
    side["model"] = m.name;
    if (m.name == "lgssm") side["d"] = m.d;
    side["theta"] = theta_json(model.param_names(), *theta);
    side["T"] = T;
    side["seed"] = seed;
    run.write_json("data.json", side);
  });
  run.finish();
  out << "wrote " << T << " observations to " << (fs::path(dir) / "data.csv").string() << '\n';
  return kOk;
}

int cmd_grad_variance(const json& cfg, std::ostream& out, std::ostream& err) {
  ConfigReader r(cfg);
  const ModelSpec m = read_model(r);
  const auto theta = read_theta(r, "theta", m, true);
  const std::string data = r.string("data", std::nullopt);
  const auto grid = r.integer_list("N_grid", 1);
  const auto runs = static_cast<std::size_t>(r.integer("runs", 10, 1));
  if (runs < 2) {
    err << "warning: a variance needs at least 2 runs\n";
    r.problem("'runs' must be at least 2");
  }
  const FilterSettings f = read_filter(r);
  const RngSeed seed = r.seed("seed");
  const std::string dir = r.string("output", std::nullopt);
  r.finish();

  Run run("grad-variance", cfg, seed, dir);
  with_model(m, [&](const auto& model) {
    using Obs = typename std::decay_t<decltype(model)>::observation_type;
    const auto y = load_observations<Obs>(data);
    const std::size_t d = model.dim();
    // scores[g][est][r * d + c]
    std::vector<std::array<std::vector<double>, 2>> scores(grid.size());
    for (auto& s : scores)
      for (auto& v : s) v.assign(runs * d, 0.0);
    parallel_for(grid.size() * runs, worker_budget(), [&](std::size_t task) {
      const std::size_t g = task / runs, rep = task % runs;
      FilterConfig fc;
      fc.particles = static_cast<std::size_t>(grid[g]);
      fc.ess_threshold_fraction = f.ess_threshold;
      fc.resampling = f.resampling;
      Rng rng = make_stream(seed, {static_cast<std::uint64_t>(grid[g]), rep});
      const auto res = run_filter(model, *theta, std::span<const Obs>(y), fc, rng);
      const auto lin = score_linear(model, *theta, res.system, std::span<const Obs>(y));
      const auto quad = score_quadratic(model, *theta, res.system, std::span<const Obs>(y));
      for (std::size_t c = 0; c < d; ++c) {
        scores[g][0][rep * d + c] = lin.score[c];
        scores[g][1][rep * d + c] = quad.score[c];
      }
    });
    const auto names = model.param_names();
    io::CsvWriter w(run.path("grad_variance.csv"), {"estimator", "N", "component", "variance", "runs"});
    const char* est_names[2] = {"linear", "quadratic"};
    for (std::size_t g = 0; g < grid.size(); ++g)
      for (std::size_t e = 0; e < 2; ++e)
        for (std::size_t c = 0; c < d; ++c) {
          std::vector<double> x(runs);
          for (std::size_t rep = 0; rep < runs; ++rep) x[rep] = scores[g][e][rep * d + c];
          const double sd = sample_sd(x);
          w.row({est_names[e], std::to_string(grid[g]), names[c], format_real(sd * sd), std::to_string(runs)});
        }
    w.close();
  });
  run.finish();
  out << "wrote " << (fs::path(dir) / "grad_variance.csv").string() << '\n';
  return kOk;
}

json summary_json(const ParameterSummary& p) {
  json j;
  j["name"] = p.name;
  j["mean"] = p.mean;
  j["sd"] = p.sd;
  j["q025"] = p.q025;
  j["q50"] = p.q50;
  j["q975"] = p.q975;
  j["acf"] = p.acf.empty() ? json(nullptr) : json(p.acf);
  return j;
}

int cmd_sample(const json& cfg, std::ostream& out) {
  ConfigReader r(cfg);
  const ModelSpec m = read_model(r);
  const std::string sampler = r.choice("sampler", std::string("phmc"), {"phmc", "pmmh", "hmc-reference"});
  if (sampler == "hmc-reference" && m.name != "lgssm") r.problem("sampler 'hmc-reference' requires model lgssm");
  const std::string data = r.string("data", std::nullopt);
  ChainSettings s = read_chain_settings(r, true, true, true, true);
  const auto theta = read_theta(r, "theta", m, s.init == "theta");
  const auto max_lag = static_cast<std::size_t>(r.integer("acf_lag", 20, 0));
  s.sc.seed = r.seed("seed");
  const std::string dir = r.string("output", std::nullopt);
  r.finish();

  Run run("sample", cfg, s.sc.seed, dir);
  json summary;
  with_model(m, [&](const auto& model) {
    using Model = std::decay_t<decltype(model)>;
    using Obs = typename Model::observation_type;
    using State = typename Model::state_type;
    const auto y = load_observations<Obs>(data);
    std::vector<ChainOutput<State>> chains(s.chains);
    parallel_for(s.chains, worker_budget(), [&](std::size_t c) {
      SamplerConfig sc = s.sc;
      sc.chain = c;
      const auto init = chain_start(model, s, theta, c);
      chains[c] = run_chain(model, std::span<const Obs>(y), sc, sampler, s.score_kind, init);
    });

    const auto names = model.param_names();
    ChainOutput<State> pooled;
    summary["sampler"] = sampler;
    summary["model"] = m.name;
    summary["chains"] = s.chains;
    summary["K"] = s.sc.K;
    summary["burn_in"] = s.sc.burn_in;
    summary["thin"] = s.sc.thin;
    json per_chain = json::array();
    double acc_sum = 0.0;
    for (std::size_t c = 0; c < s.chains; ++c) {
      const auto& ch = chains[c];
      const std::string tag = std::to_string(c + 1);
      std::vector<std::string> header{"iter"};
      header.insert(header.end(), names.begin(), names.end());
      header.insert(header.end(), {"log_z", "accepted"});
      io::CsvWriter w(run.path("chain_" + tag + ".csv"), header);
      for (const auto& dr : ch.draws) {
        std::vector<std::string> row{std::to_string(dr.iteration)};
        for (double v : dr.theta.values()) row.push_back(format_real(v));
        row.push_back(format_real(dr.log_z));
        row.push_back(ch.accepted[dr.iteration - 1] ? "1" : "0");
        w.row(row);
      }
      w.close();
      if (sampler != "hmc-reference") {
        const std::size_t T = y.size();
        std::vector<std::string> lh{"iter"};
        for (std::size_t t = 1; t <= T; ++t) lh.push_back("h_" + std::to_string(t));
        io::CsvWriter lw(run.path("latents_" + tag + ".csv"), lh);
        for (const auto& dr : ch.draws) {
          std::vector<std::string> row{std::to_string(dr.iteration)};
          for (const auto& h : dr.trajectory) row.push_back(format_real(static_cast<double>(h)));
          lw.row(row);
        }
        lw.close();
      }
      const ChainSummary cs = summarize_chain(ch, max_lag);
      json jc;
      jc["chain"] = c + 1;
      jc["acceptance_rate"] = ch.acceptance_rate;
      jc["draws"] = ch.draws.size();
      jc["divergences"] = ch.divergences;
      jc["degenerate"] = ch.degenerate;
      jc["out_of_support"] = ch.out_of_support;
      jc["parameters"] = json::array();
      for (const auto& p : cs.parameters) jc["parameters"].push_back(summary_json(p));
      per_chain.push_back(jc);
      acc_sum += ch.acceptance_rate;
      pooled.draws.insert(pooled.draws.end(), ch.draws.begin(), ch.draws.end());
    }
    pooled.acceptance_rate = acc_sum / static_cast<double>(s.chains);
    summary["acceptance_rate"] = pooled.acceptance_rate;
    const ChainSummary ps = summarize_chain(pooled, max_lag);
    summary["parameters"] = json::array();
    for (const auto& p : ps.parameters) summary["parameters"].push_back(summary_json(p));
    summary["per_chain"] = per_chain;
    if (sampler != "hmc-reference") {
      const LatentSummary ls = summarize_latents(pooled);
      io::CsvWriter w(run.path("latent_summary.csv"), {"t", "mean", "lower", "upper"});
      for (std::size_t t = 0; t < ls.mean.size(); ++t)
        w.row({std::to_string(t + 1), format_real(ls.mean[t]), format_real(ls.lower[t]), format_real(ls.upper[t])});
      w.close();
    }
  });
  run.write_json("summary.json", summary);
  run.finish();
  out << "acceptance_rate " << format_real(summary["acceptance_rate"].get<double>()) << '\n';
  return kOk;
}

struct ChainStats {
  double acceptance = 0.0;
  std::size_t divergences = 0, degenerate = 0, out_of_support = 0;
};

template <class State>
ChainStats stats_of(const ChainOutput<State>& o) {
  return {o.acceptance_rate, o.divergences, o.degenerate, o.out_of_support};
}

/// One grid point of a sweep: the CSV key fields plus a runner for chain c.
struct SweepPoint {
  std::vector<std::string> key;
  std::function<ChainStats(std::size_t)> run;
};

int cmd_sweep(const json& cfg, std::ostream& out, std::ostream& err) {
  ConfigReader r(cfg);
  const std::string kind = r.choice("kind", std::nullopt, {"epsilon_L_grid", "particles", "dimension"});
  if (kind.empty()) r.finish();
  const bool eps_grid = kind == "epsilon_L_grid", particles = kind == "particles", dimension = kind == "dimension";

  ModelSpec m;
  std::string data;
  if (!dimension) {
    m = read_model(r);
    data = r.string("data", std::nullopt);
  }
  ChainSettings s = read_chain_settings(r, particles, particles, !particles, false);
  std::vector<double> eps_values;
  std::vector<std::int64_t> L_values, N_values, d_values;
  std::vector<std::string> samplers;
  double eps_scale = 0.0, L_scale = 0.0;
  std::size_t T = 0;
  RngSeed data_seed = 0;
  std::optional<std::vector<double>> theta;
  json dim_theta;
  if (eps_grid) {
    eps_values = r.real_list("epsilon_grid", 0.0, true);
    L_values = r.integer_list("L_grid", 1);
  }
  if (particles) N_values = r.integer_list("N_grid", 1);
  if (dimension) {
    d_values = r.integer_list("d_grid", 1);
    samplers = r.string_list("samplers", {"phmc", "pmmh"}, {"phmc", "pmmh"});
    eps_scale = r.real("epsilon_scale", 0.025, 0.0, std::numeric_limits<double>::infinity(), true, true);
    L_scale = r.real("L_scale", 5.0, 0.0, std::numeric_limits<double>::infinity(), true, true);
    T = static_cast<std::size_t>(r.integer("T", std::nullopt, 1));
    if (r.has("data_seed")) data_seed = r.seed("data_seed");
    if (r.has("theta")) {
      dim_theta = r.raw().at("theta");
      bool ok = dim_theta.is_object() && dim_theta.size() == 3;
      for (const char* k : {"sigma_y", "sigma_h", "rho"}) ok = ok && dim_theta.contains(k) && dim_theta[k].is_number();
      if (ok) {
        // Validate once at d = 1; every d shares the same non-kappa components.
        theta_from_json(r, "theta", dim_theta, ModelSpec{"lgssm", 1});
      } else {
        r.problem("'theta' must be an object with exactly sigma_y, sigma_h and rho for a dimension sweep");
      }
    } else {
      r.problem("missing required key 'theta'");
    }
  } else {
    theta = read_theta(r, "theta", m, s.init == "theta");
  }
  s.sc.seed = r.seed("seed");
  if (dimension && !cfg.contains("data_seed")) data_seed = s.sc.seed;
  const std::string dir = r.string("output", std::nullopt);
  r.finish();

  Run run("sweep", cfg, s.sc.seed, dir);
  std::vector<SweepPoint> points;
  std::vector<std::string> header;

  // Poisson observations are counts; LGSSM observations are reals.
  std::vector<Count> y_count;
  std::vector<double> y_real;
  std::map<std::int64_t, std::vector<double>> y_dim;

  auto chain_runner = [&](const ModelSpec& ms, const SamplerConfig& base, const std::string& sampler,
                          const std::optional<std::vector<double>>& th) {
    return [&, ms, base, sampler, th](std::size_t c) {
      ChainStats st;
      with_model(ms, [&](const auto& model) {
        using Model = std::decay_t<decltype(model)>;
        using Obs = typename Model::observation_type;
        const std::vector<Obs>* y;
        if constexpr (std::is_same_v<Obs, Count>)
          y = &y_count;
        else
          y = dimension ? &y_dim.at(static_cast<std::int64_t>(ms.d)) : &y_real;
        SamplerConfig sc = base;
        sc.chain = c;
        ChainSettings cs = s;
        cs.sc = sc;
        const auto init = chain_start(model, cs, th, c);
        st = stats_of(run_chain(model, std::span<const Obs>(*y), sc, sampler, s.score_kind, init));
      });
      return st;
    };
  };

  if (!dimension) {
    if (m.name == "poisson")
      y_count = load_observations<Count>(data);
    else
      y_real = load_observations<double>(data);
  }
  if (eps_grid) {
    header = {"epsilon", "L", "N", "chains", "median_acceptance", "sd_acceptance"};
    for (double e : eps_values)
      for (std::int64_t L : L_values) {
        SamplerConfig sc = s.sc;
        sc.epsilon = e;
        sc.L = static_cast<std::size_t>(L);
        points.push_back({{format_real(e), std::to_string(L), std::to_string(sc.N)},
                          chain_runner(m, sc, "phmc", theta)});
      }
  } else if (particles) {
    header = {"N", "chains", "median_acceptance", "sd_acceptance"};
    for (std::int64_t N : N_values) {
      SamplerConfig sc = s.sc;
      sc.N = static_cast<std::size_t>(N);
      points.push_back({{std::to_string(N)}, chain_runner(m, sc, "phmc", theta)});
    }
  } else {
    header = {"sampler", "d", "d_theta", "epsilon", "L", "chains", "median_acceptance", "sd_acceptance"};
    for (std::int64_t d : d_values) {
      const ModelSpec ms{"lgssm", static_cast<std::size_t>(d)};
      const auto th = theta_from_json(r, "theta", dim_theta, ms);
      const LinearGaussianModel model(ms.d);
      const auto sim = simulate_dataset(model, th, T, derive_seed(data_seed, {static_cast<std::uint64_t>(d)}));
      y_dim[d] = sim.observations;
      io::write_dataset(run.path("data_d" + std::to_string(d) + ".csv"), sim.observations, &sim.states);
      const double dt = static_cast<double>(model.dim());
      const double eps = eps_scale * std::pow(dt, -0.25);
      const auto L = static_cast<std::size_t>(std::max(1.0, std::round(L_scale * std::pow(dt, 0.25))));
      for (const auto& sampler : samplers) {
        SamplerConfig sc = s.sc;
        if (sampler == "phmc") {
          sc.epsilon = eps;
          sc.L = L;
        } else {
          sc.rw_scale = eps;
        }
        points.push_back({{sampler, std::to_string(d), std::to_string(model.dim()), format_real(eps),
                           sampler == "phmc" ? std::to_string(L) : "0"},
                          chain_runner(ms, sc, sampler, th)});
      }
    }
  }

  const std::size_t C = s.chains;
  std::vector<ChainStats> results(points.size() * C);
  parallel_for(results.size(), worker_budget(),
               [&](std::size_t task) { results[task] = points[task / C].run(task % C); });

  io::CsvWriter w(run.path("sweep.csv"), header);
  io::CsvWriter wc(run.path("sweep_chains.csv"),
                   {"row", "chain", "acceptance_rate", "divergences", "degenerate", "out_of_support"});
  std::vector<double> medians;
  for (std::size_t p = 0; p < points.size(); ++p) {
    std::vector<double> acc(C);
    for (std::size_t c = 0; c < C; ++c) {
      const ChainStats& st = results[p * C + c];
      acc[c] = st.acceptance;
      wc.row({std::to_string(p + 1), std::to_string(c + 1), format_real(st.acceptance), std::to_string(st.divergences),
              std::to_string(st.degenerate), std::to_string(st.out_of_support)});
    }
    medians.push_back(median(acc));
    std::vector<std::string> row = points[p].key;
    row.insert(row.end(), {std::to_string(C), format_real(medians.back()), format_real(sample_sd(acc))});
    w.row(row);
  }
  w.close();
  wc.close();
  if (particles) {
    std::vector<std::pair<std::int64_t, double>> by_n;
    for (std::size_t p = 0; p < points.size(); ++p) by_n.emplace_back(N_values[p], medians[p]);
    std::stable_sort(by_n.begin(), by_n.end());
    for (std::size_t i = 1; i < by_n.size(); ++i)
      if (by_n[i].second < by_n[i - 1].second)
        err << "warning: median acceptance decreases from N=" << by_n[i - 1].first << " to N=" << by_n[i].first
            << '\n';
  }
  run.finish();
  out << "wrote " << points.size() << " rows to " << (fs::path(dir) / "sweep.csv").string() << '\n';
  return kOk;
}

/// Parses `key=value`; the value is read as JSON when possible, else as a string.
bool apply_override(json& cfg, const std::string& kv, std::vector<std::string>& problems) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos || eq == 0) {
    problems.push_back("--set expects key=value, got '" + kv + "'");
    return false;
  }
  const std::string k = kv.substr(0, eq), v = kv.substr(eq + 1);
  json val = json::parse(v, nullptr, false);
  if (val.is_discarded()) val = v;
  if (val.is_structured()) {
    problems.push_back("--set " + k + ": only scalar values can be overridden");
    return false;
  }
  if (cfg.contains(k) && cfg[k].is_structured()) {
    problems.push_back("--set " + k + ": key holds a structured value in the config");
    return false;
  }
  cfg[k] = val;
  return true;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Particle HMC experiments", "phmc"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  std::string config_path, output;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"simulate", "Simulate a dataset (t,y,h CSV plus JSON sidecar)"},
      {"grad-variance", "Variance of the two score estimators over a particle grid"},
      {"sample", "Run PMMH, particle HMC or reference HMC chains"},
      {"sweep", "Acceptance-rate sweeps over (epsilon, L), N or dimension"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("-c,--config", config_path, "JSON config file")->required();
    sub->add_option("--set", sets, "Override a top-level scalar: key=value (repeatable)");
    sub->add_option("-o,--output", output, "Output directory (overrides 'output')");
    sub->add_option("--seed", seed, "Seed (overrides 'seed')");
  }

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  json cfg;
  std::vector<std::string> problems;
  {
    std::ifstream in(config_path);
    if (!in) {
      err << "error: cannot read config " << config_path << '\n';
      return kConfigError;
    }
    cfg = json::parse(in, nullptr, false, true);
    if (cfg.is_discarded() || !cfg.is_object()) {
      err << "error: " << config_path << " is not a JSON object\n";
      return kConfigError;
    }
  }
  if (cfg.contains("command")) {
    if (cfg["command"] != command) problems.push_back("config is for command " + cfg["command"].dump());
    cfg.erase("command");
  }
  for (const auto& kv : sets) apply_override(cfg, kv, problems);
  if (!output.empty()) cfg["output"] = output;
  if (seed) cfg["seed"] = *seed;
  if (!problems.empty()) {
    for (const auto& p : problems) err << "config error: " << p << '\n';
    return kConfigError;
  }

  try {
    if (command == "simulate") return cmd_simulate(cfg, out);
    if (command == "grad-variance") return cmd_grad_variance(cfg, out, err);
    if (command == "sample") return cmd_sample(cfg, out);
    return cmd_sweep(cfg, out, err);
  } catch (const ConfigError& e) {
    for (const auto& p : e.problems()) err << "config error: " << p << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
}

}  // namespace phmc::cli
