#include <cstdio>
#include <iostream>
#include <optional>
#include <random>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"

#include "bootlik/csv.hpp"
#include "bootlik/experiment.hpp"
#include "bootlik/ising.hpp"
#include "bootlik/models_ts.hpp"
#include "bootlik/popgen.hpp"

namespace {

// exit codes: 0 success, 1 validation error, 2 runtime failure
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

void print_table(const bootlik::ResultTable& table) {
  std::printf("%-10s %-10s %12s %12s %12s\n", "sampler", "parameter", "truth", "post_mean",
              "mse");
  for (const auto& row : table.rows) {
    std::printf("%-10s %-10s %12.5f %12.5f %12.6f\n", row.sampler.c_str(),
                row.parameter.c_str(), row.truth, row.post_mean, row.mse);
  }
  for (const auto& [s, sec] : table.wall_clock) {
    std::printf("time %-8s %.2fs\n", s.c_str(), sec);
  }
}

std::vector<double> parse_theta(const std::string& csv) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < csv.size()) {
    auto next = csv.find(',', pos);
    if (next == std::string::npos) next = csv.size();
    out.push_back(std::stod(csv.substr(pos, next - pos)));
    pos = next + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bootlik: Bayesian computation via bootstrap likelihood"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "run an experiment from a JSON config");
  std::string run_config;
  std::optional<std::uint64_t> run_seed;
  bool paper_scale = false;
  int threads = 0;
  std::string run_out;
  run->add_option("config", run_config, "config file (JSON)")->required();
  run->add_option("--seed", run_seed, "override the config seed");
  run->add_flag("--paper-scale", paper_scale, "replicate counts as reported (R=50, popgen 20)");
  run->add_option("--threads", threads, "OpenMP thread count (0 = default)");
  run->add_option("--out", run_out, "override the output directory");

  // validate
  auto* val = app.add_subcommand("validate", "parse and validate a config, print the result");
  std::string val_config;
  val->add_option("config", val_config, "config file (JSON)")->required();

  // plotdata
  auto* plot = app.add_subcommand("plotdata", "kernel density grid from a samples CSV");
  std::string plot_in, plot_out = "density.csv";
  plot->add_option("samples", plot_in, "weighted samples CSV")->required();
  plot->add_option("-o,--out", plot_out, "output density CSV");

  // simulate
  auto* sim = app.add_subcommand("simulate", "simulate one dataset and write it to a file");
  std::string sim_model, sim_theta, sim_out = "data.csv";
  std::uint64_t sim_seed = 0;
  int sim_n = 0, sim_rows = 25, sim_cols = 25, sim_cycles = 200, sim_loci = 50, sim_genes = 20;
  double sim_dt = 0.1;
  sim->add_option("model", sim_model, "normal|garch|sde|popgen|ising")->required();
  sim->add_option("--theta", sim_theta, "comma-separated true parameters");
  sim->add_option("--n", sim_n, "series length");
  sim->add_option("--dt", sim_dt, "sde time step");
  sim->add_option("--rows", sim_rows, "lattice rows");
  sim->add_option("--cols", sim_cols, "lattice cols");
  sim->add_option("--cycles", sim_cycles, "gibbs cycles");
  sim->add_option("--loci", sim_loci, "microsatellite loci");
  sim->add_option("--genes-per-deme", sim_genes, "gene copies per deme");
  sim->add_option("--seed", sim_seed, "rng seed");
  sim->add_option("-o,--out", sim_out, "output file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run || *val) {
      bootlik::ExperimentConfig cfg;
      try {
        cfg = bootlik::load_config_file(*run ? run_config : val_config);
      } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitValidation;
      }

      if (*val) {
        std::printf("model=%s samplers=", cfg.model.c_str());
        for (std::size_t i = 0; i < cfg.samplers.size(); ++i) {
          std::printf("%s%s", i ? "," : "", cfg.samplers[i].c_str());
        }
        std::printf(" K=%d L=%d M=%d N=%d R=%d seed=%llu out=%s\n", cfg.bl_first, cfg.bl_second,
                    cfg.draws, cfg.resample_n, cfg.replicates,
                    static_cast<unsigned long long>(cfg.seed), cfg.out_dir.c_str());
        return 0;
      }

      if (run_seed) {
        cfg.seed = *run_seed;
        cfg.seed_provided = true;
      }
      if (!cfg.seed_provided) {
        std::random_device rd;
        cfg.seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
        std::printf("seed not given; using randomized seed %llu\n",
                    static_cast<unsigned long long>(cfg.seed));
      }
      if (paper_scale) {
        if (cfg.model == "popgen") {
          cfg.replicates = 20;
        } else if (cfg.model == "garch" || cfg.model == "sde") {
          cfg.replicates = 50;
        }
      }
      if (!run_out.empty()) cfg.out_dir = run_out;
#ifdef _OPENMP
      if (threads > 0) omp_set_num_threads(threads);
#endif
      const auto table = bootlik::run_experiment(cfg);
      print_table(table);
      std::printf("outputs in %s\n", cfg.out_dir.c_str());
      return 0;
    }

    if (*plot) {
      const auto written = bootlik::emit_plotdata(plot_in, plot_out);
      for (const auto& p : written) std::printf("wrote %s\n", p.c_str());
      return 0;
    }

    if (*sim) {
      bootlik::RngStream rng(sim_seed);
      if (sim_model == "normal") {
        const auto theta = sim_theta.empty() ? std::vector<double>{0.0} : parse_theta(sim_theta);
        const int n = sim_n > 0 ? sim_n : 50;
        bootlik::write_series_csv(bootlik::simulate_normal(theta.at(0), n, rng), sim_out, "y");
      } else if (sim_model == "garch") {
        const auto theta =
            sim_theta.empty() ? std::vector<double>{0.1, 0.15, 0.5} : parse_theta(sim_theta);
        const int n = sim_n > 0 ? sim_n : 300;
        bootlik::write_series_csv(
            bootlik::simulate_garch({theta.at(0), theta.at(1), theta.at(2)}, n, rng), sim_out,
            "y");
      } else if (sim_model == "sde") {
        const auto theta =
            sim_theta.empty() ? std::vector<double>{0.2, 0.3} : parse_theta(sim_theta);
        const int n = sim_n > 0 ? sim_n : 750;
        const auto path = bootlik::simulate_sde({theta.at(0), theta.at(1)}, n, sim_dt, rng);
        bootlik::write_series_csv(path.values, sim_out, "x", path.dt);
      } else if (sim_model == "popgen") {
        const auto theta =
            sim_theta.empty() ? std::vector<double>{0.5, 10.0} : parse_theta(sim_theta);
        const auto data = bootlik::popgen::simulate_popgen({theta.at(0), theta.at(1)}, sim_loci,
                                                           sim_genes, rng);
        bootlik::popgen::write_microsat_csv(data, sim_out);
      } else if (sim_model == "ising") {
        const auto theta = sim_theta.empty() ? std::vector<double>{0.5} : parse_theta(sim_theta);
        const auto x =
            bootlik::ising::gibbs_simulate(theta.at(0), sim_rows, sim_cols, sim_cycles, rng);
        if (sim_out.ends_with(".pbm")) {
          bootlik::write_lattice_pbm(x, sim_out);
        } else {
          bootlik::write_lattice_csv(x, sim_out);
        }
      } else {
        std::cerr << "unknown model '" << sim_model << "'\n";
        return kExitValidation;
      }
      std::printf("wrote %s\n", sim_out.c_str());
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
