#include "rssiloc/io.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <system_error>

#include "rssiloc/errors.hpp"

namespace rssiloc {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) { throw ConfigError(message); }

double get_number(const json& node, const std::string& key, const char* where) {
  if (!node.contains(key)) fail(std::string(where) + ": missing field '" + key + "'");
  if (!node[key].is_number()) fail(std::string(where) + ": field '" + key + "' must be a number");
  double v = node[key].get<double>();
  if (!std::isfinite(v)) fail(std::string(where) + ": field '" + key + "' must be finite");
  return v;
}

double get_number_or(const json& node, const std::string& key, double fallback,
                     const char* where) {
  return node.contains(key) ? get_number(node, key, where) : fallback;
}

EstimatorId parse_estimator(const std::string& name) {
  if (name == "ls") return EstimatorId::ls;
  if (name == "wls") return EstimatorId::wls;
  if (name == "bcwls") return EstimatorId::bcwls;
  if (name == "hyperbolic") return EstimatorId::hyperbolic;
  fail("unknown estimator '" + name + "' (expected ls|wls|bcwls|hyperbolic)");
}

Topology parse_literal_topology(const json& node) {
  if (!node.contains("anchors") || !node["anchors"].is_array())
    fail("topology: 'anchors' must be an array");
  Topology topology;
  for (const json& a : node["anchors"]) {
    AnchorTruth anchor;
    anchor.position = {get_number(a, "x", "anchor"), get_number(a, "y", "anchor")};
    anchor.sigma_a = get_number_or(a, "sigma_a", 0.0, "anchor");
    anchor.sigma_p = get_number_or(a, "sigma_p", 0.0, "anchor");
    topology.anchors.push_back(anchor);
  }
  if (!node.contains("blind")) fail("topology: missing 'blind'");
  topology.blind = {get_number(node["blind"], "x", "blind"),
                    get_number(node["blind"], "y", "blind")};
  return topology;
}

Topology parse_generated_topology(const json& node, std::uint64_t seed) {
  TopologyGeneratorSpec spec;
  spec.arena = get_number_or(node, "arena", 40.0, "generator");
  if (!node.contains("num_anchors") || !node["num_anchors"].is_number_integer())
    fail("generator: 'num_anchors' must be an integer");
  spec.num_anchors = node["num_anchors"].get<int>();
  if (!node.contains("sigma_a") || !node["sigma_a"].is_array())
    fail("generator: 'sigma_a' must be an array");
  for (const json& v : node["sigma_a"]) {
    if (!v.is_number()) fail("generator: sigma_a entries must be numbers");
    spec.sigma_a.push_back(v.get<double>());
  }
  if (node.contains("blind") && !node["blind"].is_string()) {
    spec.blind = Point2{get_number(node["blind"], "x", "generator blind"),
                        get_number(node["blind"], "y", "generator blind")};
  } else if (node.contains("blind") && node["blind"].get<std::string>() != "uniform") {
    fail("generator: 'blind' must be \"uniform\" or an {x, y} object");
  }
  RngStream stream = RngStream(seed).substream(kTopologyStreamChild);
  try {
    return generate_topology(spec, stream);
  } catch (const DomainError& e) {
    fail(std::string("generator: ") + e.what());
  }
}

}  // namespace

LoadedConfig parse_experiment_config(const json& document, const CliOverrides& overrides) {
  if (!document.is_object()) fail("config root must be a JSON object");

  // A manifest embeds the original config next to the resolved seed.
  if (document.contains("config") && document.contains("resolved_seed")) {
    CliOverrides replay = overrides;
    if (!replay.seed) replay.seed = document["resolved_seed"].get<std::uint64_t>();
    if (!replay.trials && document.contains("trials"))
      replay.trials = document["trials"].get<long>();
    return parse_experiment_config(document["config"], replay);
  }

  ExperimentConfig config;
  config.seed = overrides.seed.value_or(
      document.contains("seed") ? document["seed"].get<std::uint64_t>() : 0);

  if (document.contains("path_loss")) {
    const json& pl = document["path_loss"];
    config.params.d0 = get_number_or(pl, "d0", 1.0, "path_loss");
    config.params.p0_dbm = get_number_or(pl, "p0_dbm", -33.44, "path_loss");
    config.params.eta = get_number_or(pl, "eta", 3.567, "path_loss");
  }

  if (!document.contains("topology")) fail("config: missing 'topology'");
  const json& topo = document["topology"];
  if (topo.contains("generator")) {
    config.topology = parse_generated_topology(topo["generator"], config.seed);
  } else {
    config.topology = parse_literal_topology(topo);
  }

  if (!document.contains("sigma_p_grid") || !document["sigma_p_grid"].is_array() ||
      document["sigma_p_grid"].empty())
    fail("config: 'sigma_p_grid' must be a non-empty array");
  for (const json& v : document["sigma_p_grid"]) {
    if (!v.is_number()) fail("config: sigma_p_grid entries must be numbers");
    config.sigma_p_grid.push_back(v.get<double>());
  }

  if (document.contains("trials")) {
    if (!document["trials"].is_number_integer()) fail("config: 'trials' must be an integer");
    config.trials = document["trials"].get<long>();
  }
  if (overrides.trials) config.trials = *overrides.trials;

  if (document.contains("estimators")) {
    if (!document["estimators"].is_array() || document["estimators"].empty())
      fail("config: 'estimators' must be a non-empty array");
    config.estimators.clear();
    for (const json& v : document["estimators"])
      config.estimators.push_back(parse_estimator(v.get<std::string>()));
  }

  try {
    validate(config);
  } catch (const DomainError& e) {
    fail(std::string("config: ") + e.what());
  }
  return LoadedConfig{std::move(config), document};
}

LoadedConfig load_experiment_config(const std::filesystem::path& path,
                                    const CliOverrides& overrides) {
  std::ifstream in(path);
  if (!in) fail("cannot open config file: " + path.string());
  json document;
  try {
    document = json::parse(in);
  } catch (const json::parse_error& e) {
    fail("config parse error in " + path.string() + ": " + e.what());
  }
  return parse_experiment_config(document, overrides);
}

std::vector<AnchorObservation> load_observations_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open observations file: " + path.string());

  std::vector<AnchorObservation> observations;
  std::string line;
  long line_number = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != "x,y,sigma_a,rssi_dbm,sigma_p")
        fail(path.string() + ":" + std::to_string(line_number) +
             ": expected header 'x,y,sigma_a,rssi_dbm,sigma_p'");
      header_seen = true;
      continue;
    }
    std::array<double, 5> fields{};
    std::size_t pos = 0;
    for (int f = 0; f < 5; ++f) {
      std::size_t end = line.find(',', pos);
      if (f < 4 && end == std::string::npos)
        fail(path.string() + ":" + std::to_string(line_number) + ": expected 5 fields");
      if (f == 4 && end != std::string::npos)
        fail(path.string() + ":" + std::to_string(line_number) + ": expected 5 fields");
      std::string token = line.substr(pos, end == std::string::npos ? end : end - pos);
      const char* first = token.data();
      const char* last = token.data() + token.size();
      auto [ptr, ec] = std::from_chars(first, last, fields[f]);
      if (ec != std::errc{} || ptr != last)
        fail(path.string() + ":" + std::to_string(line_number) + ": bad number '" +
             token + "'");
      pos = (end == std::string::npos) ? line.size() : end + 1;
    }
    AnchorObservation obs;
    obs.observed_position = {fields[0], fields[1]};
    obs.sigma_a = fields[2];
    obs.rssi_dbm = fields[3];
    obs.sigma_p = fields[4];
    if (obs.sigma_a < 0.0 || obs.sigma_p < 0.0)
      fail(path.string() + ":" + std::to_string(line_number) + ": sigma must be >= 0");
    observations.push_back(obs);
  }
  if (!header_seen) fail(path.string() + ": empty observations file");
  if (observations.size() < 3)
    fail(path.string() + ": need at least 3 observation records, got " +
         std::to_string(observations.size()));
  return observations;
}

std::string format_double(double value) {
  char buffer[32];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

std::string render_sweep_csv(std::span<const SweepRow> rows) {
  std::string out =
      "sigma_p_db,estimator,trials,failures,rmse_m,bias_norm_m,"
      "mean_err_x_m,mean_err_y_m,crlb_rmse_m,seed\n";
  for (const SweepRow& row : rows) {
    out += format_double(row.sigma_p);
    out += ',';
    out += to_string(row.estimator);
    out += ',';
    out += std::to_string(row.trials);
    out += ',';
    out += std::to_string(row.failures);
    out += ',';
    out += format_double(row.rmse);
    out += ',';
    out += format_double(row.bias_norm);
    out += ',';
    out += format_double(row.mean_error.x);
    out += ',';
    out += format_double(row.mean_error.y);
    out += ',';
    out += format_double(row.crlb_rmse);
    out += ',';
    out += std::to_string(row.seed);
    out += '\n';
  }
  return out;
}

std::string render_crlb_csv(std::span<const double> sigma_p_grid,
                            std::span<const CrlbResult> bounds, std::uint64_t seed) {
  std::string out = "sigma_p_db,crlb_rmse_m,fim_condition,seed\n";
  for (std::size_t i = 0; i < sigma_p_grid.size(); ++i) {
    out += format_double(sigma_p_grid[i]);
    out += ',';
    out += format_double(bounds[i].bound_rmse);
    out += ',';
    out += format_double(bounds[i].fim_condition);
    out += ',';
    out += std::to_string(seed);
    out += '\n';
  }
  return out;
}

nlohmann::json manifest_to_json(const RunManifest& manifest) {
  json doc;
  doc["tool_version"] = manifest.tool_version;
  doc["command"] = manifest.command;
  doc["config_path"] = manifest.config_path;
  doc["resolved_seed"] = manifest.resolved_seed;
  doc["trials"] = manifest.trials;
  doc["started_at"] = manifest.started_at;
  doc["finished_at"] = manifest.finished_at;
  doc["outputs"] = manifest.outputs;
  doc["config"] = manifest.config;
  return doc;
}

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest) {
  std::ofstream out(path);
  if (!out) fail("cannot write manifest: " + path.string());
  out << manifest_to_json(manifest).dump(2) << '\n';
}

std::string iso8601_utc_now() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

}  // namespace rssiloc
