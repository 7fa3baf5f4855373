#pragma once

// Monte Carlo experiment harness and the Cramer-Rao lower bound reference.
//
// A sweep runs `trials` independent draws per RSSI-noise grid point; every
// estimator in the config sees the same draw (paired comparison). Per-trial
// RNG streams are derived from (seed, grid index, trial index), so results
// are reproducible and order-independent.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "rssiloc/estimators.hpp"
#include "rssiloc/model.hpp"

namespace rssiloc {

// Children of the run's root stream RngStream(seed). Topology generation and
// the trial draws must not share a stream, or changing one would silently
// change the other.
inline constexpr std::uint64_t kTopologyStreamChild = 0;
inline constexpr std::uint64_t kTrialStreamChild = 1;

struct ExperimentConfig {
  Topology topology;
  PathLossParams params;
  std::vector<double> sigma_p_grid;  // dB; applied to every anchor per point
  long trials = 10000;
  std::uint64_t seed = 0;
  std::vector<EstimatorId> estimators = {EstimatorId::ls, EstimatorId::wls,
                                         EstimatorId::bcwls, EstimatorId::hyperbolic};
};

struct TrialMetrics {
  double rmse = 0.0;       // sqrt(mean ||w_hat - w||^2) over successful trials
  double bias_norm = 0.0;  // ||mean (w_hat - w)||_2
  Point2 mean_error;
  long failures = 0;       // flagged / thrown / non-finite trials, excluded above
};

struct SweepCell {
  double sigma_p = 0.0;
  EstimatorId estimator = EstimatorId::ls;
  TrialMetrics metrics;
};

struct CrlbResult {
  double bound_rmse = 0.0;     // sqrt of the trace of the blind-position block
  double fim_condition = 0.0;  // conditioning of the inverted information matrix
};

// One row per (sigma_p, estimator), with the CRLB column joined in.
struct SweepRow {
  double sigma_p = 0.0;
  EstimatorId estimator = EstimatorId::ls;
  long trials = 0;
  long failures = 0;
  double rmse = 0.0;
  double bias_norm = 0.0;
  Point2 mean_error;
  double crlb_rmse = 0.0;
  std::uint64_t seed = 0;
};

// Test/diagnostic hook: called once per trial with the observations the
// estimators consumed and the per-estimator outcomes (nullopt = failure).
struct TrialRecord {
  std::size_t grid_index = 0;
  std::size_t trial_index = 0;
  const std::vector<AnchorObservation>& observations;
  const std::vector<std::optional<Estimate>>& estimates;  // aligned with config.estimators
};
using TrialObserver = std::function<void(const TrialRecord&)>;

void validate(const ExperimentConfig& config);

std::vector<SweepCell> run_sweep(const ExperimentConfig& config,
                                 const TrialObserver& observer = {});

// Hybrid bound over psi = (blind x/y, then x/y of each anchor with
// sigma_a > 0): Fisher information of the RSSI likelihoods plus Gaussian
// anchor-observation information 1/sigma_a^2 on anchor coordinates.
// sigma_p applies to every anchor. sigma_p = 0 is evaluated as the exact
// limit (RSSI measurements become constraints). Throws GeometryError when
// the resulting information is singular.
CrlbResult crlb(const Topology& topology, const PathLossParams& params, double sigma_p);

// The full (2 + 2M)-parameter information matrix; requires sigma_p > 0 and
// every sigma_a > 0. Exposed for oracle tests against finite differences.
Eigen::MatrixXd fisher_information(const Topology& topology,
                                   const PathLossParams& params, double sigma_p);

// Joins sweep metrics and per-grid-point CRLB values into one table;
// crlb_per_point must align with config.sigma_p_grid.
std::vector<SweepRow> summarize(const ExperimentConfig& config,
                                std::span<const SweepCell> cells,
                                std::span<const CrlbResult> crlb_per_point);

// Random topology of the experiments: anchors uniform in a square arena,
// per-anchor sigma_a list, blind either fixed or uniform in the arena.
struct TopologyGeneratorSpec {
  double arena = 40.0;
  int num_anchors = 6;
  std::vector<double> sigma_a;  // size must equal num_anchors
  std::optional<Point2> blind;  // nullopt: uniform in the arena
};

Topology generate_topology(const TopologyGeneratorSpec& spec, RngStream& rng);

}  // namespace rssiloc
