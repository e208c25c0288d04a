#include "bootlik/experiment.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "json.hpp"

#include "bootlik/blik.hpp"
#include "bootlik/csv.hpp"
#include "bootlik/ising.hpp"
#include "bootlik/models_ts.hpp"
#include "bootlik/numkit.hpp"
#include "bootlik/popgen.hpp"
#include "bootlik/samplers.hpp"

namespace bootlik {

namespace {

namespace fs = std::filesystem;

[[noreturn]] void cfg_fail(const std::string& path, const std::string& msg) {
  throw std::invalid_argument(path + ": " + msg);
}

const std::vector<std::string>& param_names_for(const std::string& model) {
  static const std::map<std::string, std::vector<std::string>> names = {
      {"normal", {"mu"}},
      {"garch", {"alpha0", "alpha1", "beta1"}},
      {"sde", {"theta1", "theta2"}},
      {"popgen", {"tau", "theta"}},
      {"ising", {"beta"}},
  };
  return names.at(model);
}

int sampler_id(const std::string& s) {
  if (s == "bcbl") return 1;
  if (s == "bcel") return 2;
  if (s == "abc") return 3;
  return 0;
}

void fill_defaults(ExperimentConfig& c) {
  c.samplers = {"bcbl"};
  if (c.model == "normal") {
    c.truth = {0.0};
    c.n = 50;
    c.bl_first = 100;
    c.bl_second = 200;
    c.draws = 200;
    c.resample_n = 2000;
    c.replicates = 10;
    c.budget = 20000;
    c.quantile = 0.01;
  } else if (c.model == "garch") {
    c.truth = {0.1, 0.15, 0.5};
    c.n = 300;
    c.bl_first = 100;
    c.bl_second = 1000;
    c.draws = 1000;
    c.resample_n = 2000;
    c.replicates = 10;
    c.budget = 10000;
    c.quantile = 0.01;
  } else if (c.model == "sde") {
    c.truth = {0.2, 0.3};
    c.n = 750;
    c.dt = 0.1;
    c.bl_first = 100;
    c.bl_second = 200;
    c.draws = 500;
    c.resample_n = 2000;
    c.replicates = 10;
    c.budget = 5000;
    c.epsilon = 0.1;
  } else if (c.model == "popgen") {
    c.truth = {0.5, 10.0};
    c.loci = 50;
    c.genes_per_deme = 20;
    c.m_max = 30;
    c.bl_first = 50;
    c.bl_second = 100;
    c.draws = 1000;
    c.resample_n = 2000;
    c.replicates = 10;
  } else if (c.model == "ising") {
    c.truth = {0.5};
    c.rows = 25;
    c.cols = 25;
    c.cycles = 200;
    c.window = 5;
    c.bl_first = 100;
    c.bl_second = 200;
    c.draws = 1000;
    c.resample_n = 2000;
    c.replicates = 1;
    c.budget = 20000;
    c.quantile = 0.01;
  }
}

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

struct SamplerAccum {
  std::vector<std::vector<double>> post_means;  // per parameter
  int failures = 0;
  int successes = 0;
  double seconds = 0.0;
  std::vector<std::vector<double>> first_posterior;  // per parameter, for plot data
  std::string last_error;
};

/// Shared replicate protocol across model families. Hooks:
///   make_data(rng)            simulate or load one dataset
///   write_data(data, stem)    persist it under out_dir
///   make_prior(data)          prior used by every sampler
///   bcel_fn/abc_fn            nullable per-model drivers
template <class Dataset>
ResultTable run_model(
    const ExperimentConfig& cfg, const ModelPlugin<Dataset>& plugin, const ResamplePlan& plan,
    const std::function<Dataset(RngStream&)>& make_data,
    const std::function<void(const Dataset&, const std::string&)>& write_data,
    const std::function<Prior(const Dataset&)>& make_prior,
    const std::function<WeightedSample(const Dataset&, const Prior&, RngStream&)>& bcel_fn,
    const std::function<WeightedSample(const Dataset&, const Prior&, RngStream&)>& abc_fn) {
  fs::create_directories(cfg.out_dir);
  const auto& params = plugin.param_names;

  std::map<std::string, SamplerAccum> acc;
  for (const auto& s : cfg.samplers) {
    acc[s].post_means.resize(params.size());
  }

  RngStream root(cfg.seed);
  for (int r = 1; r <= cfg.replicates; ++r) {
    RngStream rep = root.child(static_cast<std::uint64_t>(r));
    RngStream data_rng = rep.child(0);
    const Dataset data = make_data(data_rng);
    write_data(data, cfg.out_dir + "/data_r" + std::to_string(r));
    const Prior prior = make_prior(data);

    for (const auto& s : cfg.samplers) {
      SamplerAccum& a = acc.at(s);
      const double t0 = now_seconds();
      try {
        RngStream srng = rep.child(static_cast<std::uint64_t>(sampler_id(s)));
        WeightedSample ws;
        if (s == "bcbl") {
          RngStream crng = srng.child(0);
          auto curves = build_curve(data, plugin, plugin.estimator, cfg.bl_first, cfg.bl_second,
                                    plan, crng);
          save_curves_json(curves, cfg.out_dir + "/curves_r" + std::to_string(r) + ".json");
          RngStream wrng = srng.child(1);
          ws = bcbl_sample(curves, prior, cfg.draws, wrng);
        } else if (s == "bcel") {
          ws = bcel_fn(data, prior, srng);
        } else {
          ws = abc_fn(data, prior, srng);
        }
        write_weighted_csv(ws, params,
                           cfg.out_dir + "/samples_" + s + "_r" + std::to_string(r) + ".csv");

        RngStream rrng = rep.child(static_cast<std::uint64_t>(10 + sampler_id(s)));
        const auto post = importance_resample(ws, cfg.resample_n, rrng);
        WeightedSample pw;
        pw.draws = post;
        pw.weights.assign(post.size(), 1.0);
        write_weighted_csv(pw, params,
                           cfg.out_dir + "/posterior_" + s + "_r" + std::to_string(r) + ".csv");

        for (std::size_t c = 0; c < params.size(); ++c) {
          const auto summ = posterior_summaries(pw.component(c));
          a.post_means[c].push_back(summ.mean);
        }
        if (a.first_posterior.empty()) {
          a.first_posterior.resize(params.size());
          for (std::size_t c = 0; c < params.size(); ++c) {
            a.first_posterior[c] = pw.component(c);
          }
        }
        ++a.successes;
      } catch (const std::exception& e) {
        ++a.failures;
        a.last_error = e.what();
      }
      a.seconds += now_seconds() - t0;
    }
  }

  for (const auto& s : cfg.samplers) {
    const SamplerAccum& a = acc.at(s);
    if (a.failures * 2 > cfg.replicates) {
      throw std::runtime_error("run_experiment: sampler '" + s + "' failed on " +
                               std::to_string(a.failures) + "/" +
                               std::to_string(cfg.replicates) +
                               " replicates (last error: " + a.last_error + ")");
    }
  }

  ResultTable table;
  table.replicates = cfg.replicates;
  for (const auto& s : cfg.samplers) {
    const SamplerAccum& a = acc.at(s);
    for (std::size_t c = 0; c < params.size(); ++c) {
      ResultRow row;
      row.parameter = params[c];
      row.truth = cfg.truth[c];
      row.sampler = s;
      double mean = 0.0, mse = 0.0;
      for (double m : a.post_means[c]) {
        mean += m;
        mse += (m - cfg.truth[c]) * (m - cfg.truth[c]);
      }
      const double cnt = static_cast<double>(a.post_means[c].size());
      row.post_mean = mean / cnt;
      row.mse = mse / cnt;
      table.rows.push_back(row);
    }
    table.wall_clock.emplace_back(s, a.seconds);

    // density-plot data from the first successful replicate
    for (std::size_t c = 0; c < params.size(); ++c) {
      const auto& vals = a.first_posterior[c];
      std::vector<double> unit(vals.size(), 1.0);
      const auto grid = density_grid(vals, unit);
      std::ofstream out(cfg.out_dir + "/density_" + s + "_" + params[c] + ".csv");
      out << "x,density\n";
      for (const auto& [x, d] : grid) {
        out << format_double(x) << ',' << format_double(d) << '\n';
      }
    }
  }

  write_result_csv(table, cfg.model, cfg.out_dir + "/results.csv");
  {
    std::ofstream out(cfg.out_dir + "/timings.txt");
    for (const auto& [s, sec] : table.wall_clock) out << s << ' ' << sec << "\n";
  }
  return table;
}

std::vector<double> as_series(const ExperimentConfig& cfg, RngStream& rng,
                              const std::function<std::vector<double>(RngStream&)>& sim) {
  if (cfg.data_file.empty()) return sim(rng);
  return read_series_csv(cfg.data_file).values;
}

}  // namespace

ExperimentConfig validate_config(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    cfg_fail("$", std::string("invalid JSON (") + e.what() + ")");
  }
  if (!j.is_object()) cfg_fail("$", "config must be a JSON object");

  static const std::vector<std::string> known = {
      "model", "samplers", "truth",   "data",           "n",      "dt",    "loci",
      "genes_per_deme",    "rows",    "cols",           "cycles", "window", "m_max",
      "K",     "L",        "M",       "N",              "R",      "seed",  "epsilon",
      "quantile",          "budget",  "out_dir"};
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const auto& k : known) ok = ok || k == key;
    if (!ok) cfg_fail("$." + key, "unknown key");
  }

  if (!j.contains("model") || !j["model"].is_string()) {
    cfg_fail("$.model", "required string (normal|garch|sde|popgen|ising)");
  }
  ExperimentConfig c;
  c.model = j["model"].get<std::string>();
  if (c.model != "normal" && c.model != "garch" && c.model != "sde" && c.model != "popgen" &&
      c.model != "ising") {
    cfg_fail("$.model", "unknown model '" + c.model + "'");
  }
  fill_defaults(c);

  auto get_int = [&](const char* key, int& dst, int lo, const char* why) {
    if (!j.contains(key)) return;
    if (!j[key].is_number_integer()) cfg_fail(std::string("$.") + key, "must be an integer");
    dst = j[key].get<int>();
    if (dst < lo) {
      cfg_fail(std::string("$.") + key,
               "must be >= " + std::to_string(lo) + (why ? std::string(" (") + why + ")" : ""));
    }
  };
  auto get_double = [&](const char* key, double& dst, double lo) {
    if (!j.contains(key)) return;
    if (!j[key].is_number()) cfg_fail(std::string("$.") + key, "must be a number");
    dst = j[key].get<double>();
    if (!(dst > lo)) cfg_fail(std::string("$.") + key, "must be > " + std::to_string(lo));
  };

  if (j.contains("samplers")) {
    if (!j["samplers"].is_array() || j["samplers"].empty()) {
      cfg_fail("$.samplers", "must be a non-empty array");
    }
    c.samplers.clear();
    for (const auto& s : j["samplers"]) {
      if (!s.is_string()) cfg_fail("$.samplers", "entries must be strings");
      const std::string name = s.get<std::string>();
      if (sampler_id(name) == 0) cfg_fail("$.samplers", "unknown sampler '" + name + "'");
      for (const auto& seen : c.samplers) {
        if (seen == name) cfg_fail("$.samplers", "duplicate sampler '" + name + "'");
      }
      c.samplers.push_back(name);
    }
  }
  for (const auto& s : c.samplers) {
    if (s == "bcel" && (c.model == "sde" || c.model == "ising")) {
      cfg_fail("$.samplers", "bcel is unavailable for " + c.model +
                                 " (no tractable constraint set)");
    }
    if (s == "abc" && c.model == "popgen") {
      cfg_fail("$.samplers", "abc is unavailable for popgen (no summary set defined)");
    }
  }

  if (j.contains("truth")) {
    if (!j["truth"].is_array()) cfg_fail("$.truth", "must be an array of numbers");
    c.truth = j["truth"].get<std::vector<double>>();
  }
  const std::size_t want = param_names_for(c.model).size();
  if (c.truth.size() != want) {
    cfg_fail("$.truth", "expected " + std::to_string(want) + " components for " + c.model);
  }
  for (double v : c.truth) {
    if (!std::isfinite(v)) cfg_fail("$.truth", "components must be finite");
  }
  if (c.model == "garch") {
    const GarchParams p{c.truth[0], c.truth[1], c.truth[2]};
    if (!p.valid()) cfg_fail("$.truth", "requires alpha0,alpha1,beta1 > 0 and alpha1+beta1 < 1");
  } else if (c.model == "sde") {
    const SdeParams p{c.truth[0], c.truth[1]};
    if (!p.valid()) cfg_fail("$.truth", "requires theta1, theta2 in [0,1]");
  } else if (c.model == "popgen") {
    if (!(c.truth[0] > 0.0 && c.truth[1] > 0.0)) cfg_fail("$.truth", "requires tau, theta > 0");
  } else if (c.model == "ising") {
    if (!(c.truth[0] >= 0.0 && c.truth[0] <= 3.0)) cfg_fail("$.truth", "beta must be in [0,3]");
  }

  if (j.contains("data")) {
    if (!j["data"].is_string()) cfg_fail("$.data", "must be 'simulate' or a file path");
    const std::string d = j["data"].get<std::string>();
    if (d != "simulate") {
      if (!fs::exists(d)) cfg_fail("$.data", "file not found: " + d);
      c.data_file = d;
    }
  }

  const int n_floor = c.model == "sde" ? 100 : (c.model == "garch" ? 50 : 2);
  get_int("n", c.n, n_floor, "model estimator minimum");
  get_double("dt", c.dt, 0.0);
  get_int("loci", c.loci, 10, "composite-likelihood estimator minimum");
  get_int("genes_per_deme", c.genes_per_deme, 2, nullptr);
  get_int("rows", c.rows, 2, nullptr);
  get_int("cols", c.cols, 2, nullptr);
  get_int("cycles", c.cycles, 1, nullptr);
  get_int("window", c.window, 1, nullptr);
  get_int("m_max", c.m_max, 1, nullptr);
  get_int("K", c.bl_first, 10, "bootstrap-likelihood first-level minimum");
  get_int("L", c.bl_second, 50, "bootstrap-likelihood second-level minimum");
  get_int("M", c.draws, 1, nullptr);
  get_int("N", c.resample_n, 1, nullptr);
  get_int("R", c.replicates, 1, nullptr);
  get_int("budget", c.budget, 1, nullptr);

  if (c.model == "ising" && c.data_file.empty() && c.window > std::min(c.rows, c.cols)) {
    cfg_fail("$.window", "must be <= min(rows, cols) = " +
                             std::to_string(std::min(c.rows, c.cols)));
  }

  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer()) {
      cfg_fail("$.seed", "must be a nonnegative integer");
    }
    const auto sv = j["seed"].get<long long>();
    if (sv < 0) cfg_fail("$.seed", "must be a nonnegative integer");
    c.seed = static_cast<std::uint64_t>(sv);
    c.seed_provided = true;
  }

  if (j.contains("epsilon") && j.contains("quantile")) {
    cfg_fail("$.epsilon", "set exactly one of epsilon/quantile");
  }
  if (j.contains("epsilon")) {
    double e = 0.0;
    get_double("epsilon", e, 0.0);
    c.epsilon = e;
    c.quantile.reset();
  }
  if (j.contains("quantile")) {
    double q = 0.0;
    get_double("quantile", q, 0.0);
    if (q > 1.0) cfg_fail("$.quantile", "must be in (0,1]");
    c.quantile = q;
    c.epsilon.reset();
  }

  if (j.contains("out_dir")) {
    if (!j["out_dir"].is_string()) cfg_fail("$.out_dir", "must be a string");
    c.out_dir = j["out_dir"].get<std::string>();
  }
  return c;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return validate_config(ss.str());
}

ResultTable run_experiment(const ExperimentConfig& cfg) {
  if (cfg.model == "normal") {
    auto plugin = normal_mean_plugin();
    return run_model<std::vector<double>>(
        cfg, plugin, plugin.default_plan,
        [&](RngStream& rng) {
          return as_series(cfg, rng,
                           [&](RngStream& r) { return simulate_normal(cfg.truth[0], cfg.n, r); });
        },
        [](const std::vector<double>& d, const std::string& stem) {
          write_series_csv(d, stem + ".csv", "y");
        },
        [&](const std::vector<double>& d) {
          return normal_flat_prior(estimate_normal(d), 1.0);
        },
        [&](const std::vector<double>& d, const Prior& prior, RngStream& rng) {
          ConstraintSet<double> cs;
          cs.q = 1;
          cs.h = [](const double& y, const std::vector<double>& th) {
            return std::vector<double>{y - th[0]};
          };
          return bcel_sample(d, prior, cs, cfg.draws, rng);
        },
        [&](const std::vector<double>& d, const Prior& prior, RngStream& rng) {
          auto plug = normal_mean_plugin();
          AbcConfig<std::vector<double>> ac;
          ac.summaries = [](const std::vector<double>& y) {
            return std::vector<double>{estimate_normal(y)};
          };
          ac.distance = AbcDistance::Euclidean;
          ac.epsilon = cfg.epsilon;
          ac.quantile = cfg.quantile;
          ac.budget = cfg.budget;
          return abc_reject(d, plug, prior, ac, rng);
        });
  }

  if (cfg.model == "garch") {
    auto plugin = garch_plugin();
    return run_model<std::vector<double>>(
        cfg, plugin, plugin.default_plan,
        [&](RngStream& rng) {
          return as_series(cfg, rng, [&](RngStream& r) {
            return simulate_garch({cfg.truth[0], cfg.truth[1], cfg.truth[2]}, cfg.n, r);
          });
        },
        [](const std::vector<double>& d, const std::string& stem) {
          write_series_csv(d, stem + ".csv", "y");
        },
        [](const std::vector<double>&) { return garch_priors(); },
        [&](const std::vector<double>& d, const Prior& prior, RngStream& rng) {
          auto el_at = [&d](const std::vector<double>& th) -> ELResult {
            const GarchParams p{th[0], th[1], th[2]};
            if (!p.valid()) {
              ELResult bad;
              bad.status = ElStatus::HullViolation;
              bad.log_el = -std::numeric_limits<double>::infinity();
              return bad;
            }
            return el_solve(garch_score_rows(d, p));
          };
          return bcel_sample(el_at, prior, cfg.draws, rng);
        },
        [&](const std::vector<double>& d, const Prior& prior, RngStream& rng) {
          auto plug = garch_plugin();
          AbcConfig<std::vector<double>> ac;
          ac.summaries = garch_abc_summaries;
          ac.distance = AbcDistance::StandardizedEuclidean;
          ac.epsilon = cfg.epsilon;
          ac.quantile = cfg.quantile;
          ac.budget = cfg.budget;
          return abc_reject(d, plug, prior, ac, rng);
        });
  }

  if (cfg.model == "sde") {
    auto plugin = sde_plugin();
    return run_model<SdePath>(
        cfg, plugin, plugin.default_plan,
        [&](RngStream& rng) -> SdePath {
          if (!cfg.data_file.empty()) {
            const auto f = read_series_csv(cfg.data_file);
            return {f.values, f.dt.value_or(cfg.dt)};
          }
          return simulate_sde({cfg.truth[0], cfg.truth[1]}, cfg.n, cfg.dt, rng);
        },
        [](const SdePath& d, const std::string& stem) {
          write_series_csv(d.values, stem + ".csv", "x", d.dt);
        },
        [](const SdePath&) { return sde_prior(); }, nullptr,
        [&](const SdePath& d, const Prior& prior, RngStream& rng) {
          auto plug = sde_plugin();
          AbcConfig<SdePath> ac;
          ac.summaries = sde_abc_summaries;
          ac.distance = AbcDistance::StandardizedEuclidean;
          ac.epsilon = cfg.epsilon;
          ac.quantile = cfg.quantile;
          ac.budget = cfg.budget;
          return abc_reject(d, plug, prior, ac, rng);
        });
  }

  if (cfg.model == "popgen") {
    auto plugin = popgen::popgen_plugin(cfg.m_max);
    return run_model<popgen::MicrosatDataset>(
        cfg, plugin, plugin.default_plan,
        [&](RngStream& rng) {
          if (!cfg.data_file.empty()) return popgen::read_microsat_csv(cfg.data_file);
          return popgen::simulate_popgen({cfg.truth[0], cfg.truth[1]}, cfg.loci,
                                         cfg.genes_per_deme, rng);
        },
        [](const popgen::MicrosatDataset& d, const std::string& stem) {
          popgen::write_microsat_csv(d, stem + ".csv");
        },
        [](const popgen::MicrosatDataset&) { return popgen::popgen_prior(); },
        [&](const popgen::MicrosatDataset& d, const Prior& prior, RngStream& rng) {
          auto el_at = [&d, &cfg](const std::vector<double>& th) -> ELResult {
            const popgen::PopGenParams p{th[0], th[1]};
            return el_solve(popgen::popgen_el_rows(d, p, cfg.m_max));
          };
          return bcel_sample(el_at, prior, cfg.draws, rng);
        },
        nullptr);
  }

  if (cfg.model == "ising") {
    auto plugin = ising::ising_plugin(cfg.window, cfg.cycles);
    const ResamplePlan plan{Scheme::MovingBlock, cfg.window};
    return run_model<Lattice>(
        cfg, plugin, plan,
        [&](RngStream& rng) {
          Lattice x;
          if (!cfg.data_file.empty()) {
            x = cfg.data_file.ends_with(".pbm") ? read_lattice_pbm(cfg.data_file)
                                                : read_lattice_csv(cfg.data_file);
          } else {
            x = ising::gibbs_simulate(cfg.truth[0], cfg.rows, cfg.cols, cfg.cycles, rng);
          }
          if (cfg.window > std::min(x.rows, x.cols)) {
            throw std::invalid_argument("ising: window exceeds lattice dimensions");
          }
          return x;
        },
        [](const Lattice& d, const std::string& stem) { write_lattice_pbm(d, stem + ".pbm"); },
        [](const Lattice&) { return ising::ising_prior(); }, nullptr,
        [&](const Lattice& d, const Prior& prior, RngStream& rng) {
          auto plug = ising::ising_plugin(cfg.window, cfg.cycles);
          AbcConfig<Lattice> ac;
          ac.summaries = [](const Lattice& x) {
            return std::vector<double>{static_cast<double>(ising::suff_stat(x))};
          };
          ac.distance = AbcDistance::Euclidean;
          ac.epsilon = cfg.epsilon;
          ac.quantile = cfg.quantile;
          ac.budget = cfg.budget;
          return abc_reject(d, plug, prior, ac, rng);
        });
  }

  throw std::invalid_argument("run_experiment: unknown model " + cfg.model);
}

void write_result_csv(const ResultTable& table, const std::string& model,
                      const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_result_csv: cannot open " + path);
  out << "model,sampler,parameter,truth,posterior_mean,mse,replicates\n";
  for (const auto& row : table.rows) {
    out << model << ',' << row.sampler << ',' << row.parameter << ','
        << format_double(row.truth) << ',' << format_double(row.post_mean) << ','
        << format_double(row.mse) << ',' << table.replicates << '\n';
  }
}

std::vector<std::pair<double, double>> density_grid(const std::vector<double>& values,
                                                    const std::vector<double>& weights,
                                                    int points) {
  if (values.empty() || values.size() != weights.size()) {
    throw std::invalid_argument("density_grid: empty or mismatched inputs");
  }
  if (points < 2) throw std::invalid_argument("density_grid: need at least 2 grid points");

  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());

  double bw;
  try {
    bw = silverman_bandwidth(values);
  } catch (const std::invalid_argument&) {
    bw = 1e-9 * (1.0 + std::fabs(mean));  // point mass: floor bandwidth, spike grid
  }

  double lo = values[0], hi = values[0];
  for (double v : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  lo -= 3.0 * bw;
  hi += 3.0 * bw;

  double wsum = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw std::invalid_argument("density_grid: negative weight");
    wsum += w;
  }
  if (!(wsum > 0.0)) throw std::invalid_argument("density_grid: no positive weight");

  const double inv_sqrt2pi = 0.3989422804014326779;
  std::vector<std::pair<double, double>> grid(static_cast<std::size_t>(points));
  for (int g = 0; g < points; ++g) {
    const double x = lo + (hi - lo) * g / (points - 1);
    double acc = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double u = (x - values[i]) / bw;
      acc += weights[i] * std::exp(-0.5 * u * u);
    }
    grid[static_cast<std::size_t>(g)] = {x, acc * inv_sqrt2pi / (wsum * bw)};
  }
  return grid;
}

std::vector<std::string> emit_plotdata(const std::string& samples_csv,
                                       const std::string& out_path) {
  std::vector<std::string> names;
  const WeightedSample ws = read_weighted_csv(samples_csv, &names);
  if (ws.draws.empty()) throw std::runtime_error("emit_plotdata: no draws in " + samples_csv);

  std::vector<std::string> written;
  for (std::size_t c = 0; c < names.size(); ++c) {
    std::string path = out_path;
    if (names.size() > 1) {
      const auto dot = path.rfind('.');
      const std::string suffix = "_" + names[c];
      if (dot == std::string::npos) {
        path += suffix;
      } else {
        path.insert(dot, suffix);
      }
    }
    const auto grid = density_grid(ws.component(c), ws.weights);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("emit_plotdata: cannot open " + path);
    out << "x,density\n";
    for (const auto& [x, d] : grid) {
      out << format_double(x) << ',' << format_double(d) << '\n';
    }
    written.push_back(path);
  }
  return written;
}

}  // namespace bootlik
