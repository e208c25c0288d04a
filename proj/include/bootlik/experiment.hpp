#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bootlik {

/// One experiment: a model family, a set of samplers to compare, and the
/// per-model tuning knobs. Defaults are filled per model by
/// validate_config.
struct ExperimentConfig {
  std::string model;                  // normal | garch | sde | popgen | ising
  std::vector<std::string> samplers;  // subset of {bcbl, bcel, abc}
  std::vector<double> truth;
  std::string data_file;  // empty = simulate at the true parameters

  int n = 0;       // series length / sample size
  double dt = 0.1; // sde step
  int loci = 50;
  int genes_per_deme = 20;
  int rows = 25, cols = 25;
  int cycles = 200;
  int window = 5;
  int m_max = 30;

  int bl_first = 0;   // K
  int bl_second = 0;  // L
  int draws = 0;      // M prior draws
  int resample_n = 0; // N posterior resample size
  int replicates = 0; // R

  std::uint64_t seed = 0;
  bool seed_provided = false;  // CLI randomizes (and prints) when absent
  std::optional<double> epsilon;
  std::optional<double> quantile;
  int budget = 0;

  std::string out_dir = "out";
};

/// Parse + validate a JSON config document; unknown keys and range
/// violations are reported with a path-qualified message.
ExperimentConfig validate_config(const std::string& json_text);
ExperimentConfig load_config_file(const std::string& path);

struct ResultRow {
  std::string parameter;
  double truth = 0.0;
  std::string sampler;
  double post_mean = 0.0;
  double mse = 0.0;
};

struct ResultTable {
  std::vector<ResultRow> rows;
  int replicates = 0;
  std::vector<std::pair<std::string, double>> wall_clock;  // sampler, seconds
};

/// Full protocol: per replicate simulate-or-load data, run every configured
/// sampler, resample posterior draws and summarize; aggregates means and
/// MSEs across replicates and writes posterior-sample CSVs, curve JSONs,
/// the result-table CSV and density-plot data files under cfg.out_dir.
ResultTable run_experiment(const ExperimentConfig& cfg);

/// results.csv (no timings: reruns must be byte-identical; timings go to
/// timings.txt).
void write_result_csv(const ResultTable& table, const std::string& model,
                      const std::string& path);

/// Gaussian KDE of a weighted sample file on a 256-point grid spanning the
/// sample range +- 3 bandwidths; one density CSV per parameter column.
/// Returns the written paths.
std::vector<std::string> emit_plotdata(const std::string& samples_csv,
                                       const std::string& out_path);

/// Density grid used by emit_plotdata (x, density pairs).
std::vector<std::pair<double, double>> density_grid(const std::vector<double>& values,
                                                    const std::vector<double>& weights,
                                                    int points = 256);

}  // namespace bootlik
