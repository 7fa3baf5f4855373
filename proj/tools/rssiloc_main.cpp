// Command-line front end: `simulate` runs a Monte Carlo sweep to CSV,
// `estimate` solves one observation set to JSON, `crlb` writes the bound
// curve. Exit codes: 0 success, 2 config/input error, 3 runtime or
// geometry error.

#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rssiloc/errors.hpp"
#include "rssiloc/evaluate.hpp"
#include "rssiloc/io.hpp"
#include "rssiloc/linsys.hpp"
#include "rssiloc/version.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct CommonOptions {
  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::optional<long> trials;
  bool quiet = false;
};

void write_text_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw rssiloc::ConfigError("cannot write output file: " + path.string());
  out << body;
}

rssiloc::RunManifest make_manifest(const std::string& command,
                                   const CommonOptions& options,
                                   const rssiloc::LoadedConfig& loaded,
                                   const std::string& started_at) {
  rssiloc::RunManifest manifest;
  manifest.tool_version = rssiloc::kVersion;
  manifest.command = command;
  manifest.config_path = options.config_path;
  manifest.resolved_seed = loaded.config.seed;
  manifest.trials = loaded.config.trials;
  manifest.started_at = started_at;
  manifest.finished_at = rssiloc::iso8601_utc_now();
  manifest.outputs = {options.out_path};
  manifest.config = loaded.document;
  return manifest;
}

int run_simulate(const CommonOptions& options) {
  const std::string started_at = rssiloc::iso8601_utc_now();
  rssiloc::CliOverrides overrides{options.seed, options.trials};
  rssiloc::LoadedConfig loaded = rssiloc::load_experiment_config(options.config_path, overrides);

  std::vector<rssiloc::SweepCell> cells = rssiloc::run_sweep(loaded.config);
  std::vector<rssiloc::CrlbResult> bounds;
  bounds.reserve(loaded.config.sigma_p_grid.size());
  for (double sigma_p : loaded.config.sigma_p_grid)
    bounds.push_back(rssiloc::crlb(loaded.config.topology, loaded.config.params, sigma_p));

  std::vector<rssiloc::SweepRow> rows = rssiloc::summarize(loaded.config, cells, bounds);
  write_text_file(options.out_path, rssiloc::render_sweep_csv(rows));

  rssiloc::RunManifest manifest = make_manifest("simulate", options, loaded, started_at);
  rssiloc::write_manifest(options.out_path + ".manifest.json", manifest);

  if (!options.quiet) {
    std::cout << "wrote " << rows.size() << " rows to " << options.out_path
              << " (seed " << loaded.config.seed << ", " << loaded.config.trials
              << " trials per grid point)\n";
  }
  return 0;
}

int run_crlb(const CommonOptions& options) {
  const std::string started_at = rssiloc::iso8601_utc_now();
  rssiloc::CliOverrides overrides{options.seed, options.trials};
  rssiloc::LoadedConfig loaded = rssiloc::load_experiment_config(options.config_path, overrides);

  std::vector<rssiloc::CrlbResult> bounds;
  bounds.reserve(loaded.config.sigma_p_grid.size());
  for (double sigma_p : loaded.config.sigma_p_grid)
    bounds.push_back(rssiloc::crlb(loaded.config.topology, loaded.config.params, sigma_p));

  write_text_file(options.out_path,
                  rssiloc::render_crlb_csv(loaded.config.sigma_p_grid, bounds,
                                           loaded.config.seed));

  rssiloc::RunManifest manifest = make_manifest("crlb", options, loaded, started_at);
  rssiloc::write_manifest(options.out_path + ".manifest.json", manifest);

  if (!options.quiet)
    std::cout << "wrote " << bounds.size() << " rows to " << options.out_path << "\n";
  return 0;
}

int run_estimate(const std::string& observations_path, const rssiloc::PathLossParams& params,
                 int reference_index, const std::string& out_path, bool quiet) {
  std::vector<rssiloc::AnchorObservation> observations =
      rssiloc::load_observations_csv(observations_path);

  rssiloc::LinearSystem system =
      rssiloc::build_system(observations, params, reference_index);
  rssiloc::WeightModel weights =
      rssiloc::build_weight_model(observations, params, reference_index);

  nlohmann::json doc;
  doc["tool_version"] = rssiloc::kVersion;
  doc["observations"] = observations.size();
  doc["reference_index"] = reference_index;
  nlohmann::json estimates = nlohmann::json::object();
  auto add = [&](const rssiloc::Estimate& estimate) {
    estimates[to_string(estimate.id)] = {{"x", estimate.position.x},
                                         {"y", estimate.position.y},
                                         {"condition", estimate.condition},
                                         {"flagged", estimate.flagged}};
  };
  add(rssiloc::solve_ls(system));
  add(rssiloc::solve_wls(system, weights));
  add(rssiloc::solve_bcwls(system, weights));
  add(rssiloc::solve_hyperbolic_baseline(system, observations, params));
  doc["estimates"] = estimates;

  std::string body = doc.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << body;
  } else {
    write_text_file(out_path, body);
    if (!quiet) std::cout << "wrote estimates to " << out_path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RSSI multilateration with noisy anchor positions"};
  app.set_version_flag("--version", rssiloc::kVersion);
  app.require_subcommand(1);

  CommonOptions simulate_options;
  CLI::App* simulate = app.add_subcommand("simulate", "run a Monte Carlo sweep to CSV");
  simulate->add_option("--config", simulate_options.config_path, "experiment config JSON")
      ->required();
  simulate->add_option("--out", simulate_options.out_path, "output CSV path")
      ->default_val("sweep.csv");
  simulate->add_option("--seed", simulate_options.seed, "override the config seed");
  simulate->add_option("--trials", simulate_options.trials, "override trials per grid point");
  simulate->add_flag("--quiet", simulate_options.quiet, "suppress progress output");

  CommonOptions crlb_options;
  CLI::App* crlb_cmd = app.add_subcommand("crlb", "write the CRLB curve to CSV");
  crlb_cmd->add_option("--config", crlb_options.config_path, "experiment config JSON")
      ->required();
  crlb_cmd->add_option("--out", crlb_options.out_path, "output CSV path")
      ->default_val("crlb.csv");
  crlb_cmd->add_option("--seed", crlb_options.seed, "override the config seed");
  crlb_cmd->add_flag("--quiet", crlb_options.quiet, "suppress progress output");

  std::string observations_path;
  std::string estimate_out;
  rssiloc::PathLossParams estimate_params;
  int reference_index = 0;
  bool estimate_quiet = false;
  CLI::App* estimate =
      app.add_subcommand("estimate", "estimate a position from an observations CSV");
  estimate->add_option("--observations", observations_path, "observations CSV")->required();
  estimate->add_option("--d0", estimate_params.d0, "reference distance, m")
      ->default_val(1.0);
  estimate->add_option("--p0-dbm", estimate_params.p0_dbm, "power at d0, dBm")
      ->default_val(-33.44);
  estimate->add_option("--eta", estimate_params.eta, "path-loss exponent")
      ->default_val(3.567);
  estimate->add_option("--ref", reference_index, "reference anchor index")->default_val(0);
  estimate->add_option("--out", estimate_out, "output JSON path (default: stdout)");
  estimate->add_flag("--quiet", estimate_quiet, "suppress progress output");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return run_simulate(simulate_options);
    if (crlb_cmd->parsed()) return run_crlb(crlb_options);
    return run_estimate(observations_path, estimate_params, reference_index,
                        estimate_out, estimate_quiet);
  } catch (const rssiloc::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const rssiloc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
