#pragma once

// File formats of the CLI: JSON experiment configs (with an optional
// topology generator spec), RFC-4180-style CSV results with '.' decimals
// regardless of locale, the JSON run manifest written alongside every
// output, and the per-anchor observations CSV consumed by `estimate`.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "rssiloc/evaluate.hpp"
#include "rssiloc/model.hpp"

namespace rssiloc {

struct CliOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<long> trials;
};

struct LoadedConfig {
  ExperimentConfig config;
  nlohmann::json document;  // original document, re-embedded in the manifest
};

// Parses and validates a config document. A literal topology lists anchors
// with sigma_a; a generator spec is resolved deterministically from the
// run seed. Accepts a previously written manifest (object with "config" and
// "resolved_seed") so a run can be replayed bit-exactly. Throws ConfigError.
LoadedConfig parse_experiment_config(const nlohmann::json& document,
                                     const CliOverrides& overrides = {});
LoadedConfig load_experiment_config(const std::filesystem::path& path,
                                    const CliOverrides& overrides = {});

// Observations CSV: header x,y,sigma_a,rssi_dbm,sigma_p then one record per
// anchor. Throws ConfigError with the offending line number.
std::vector<AnchorObservation> load_observations_csv(const std::filesystem::path& path);

// Shortest round-trip decimal form, locale independent.
std::string format_double(double value);

std::string render_sweep_csv(std::span<const SweepRow> rows);
std::string render_crlb_csv(std::span<const double> sigma_p_grid,
                            std::span<const CrlbResult> bounds, std::uint64_t seed);

struct RunManifest {
  std::string tool_version;
  std::string command;
  std::string config_path;
  std::uint64_t resolved_seed = 0;
  long trials = 0;
  std::string started_at;   // ISO 8601 UTC
  std::string finished_at;
  std::vector<std::string> outputs;
  nlohmann::json config;  // embedded original document
};

nlohmann::json manifest_to_json(const RunManifest& manifest);
void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);

std::string iso8601_utc_now();

}  // namespace rssiloc
