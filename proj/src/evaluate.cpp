#include "rssiloc/evaluate.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "rssiloc/errors.hpp"
#include "rssiloc/linsys.hpp"

namespace rssiloc {

namespace {

struct Accumulator {
  long successes = 0;
  long failures = 0;
  double sum_x = 0.0, sum_y = 0.0, sum_sq = 0.0;

  void add(Point2 error) {
    ++successes;
    sum_x += error.x;
    sum_y += error.y;
    sum_sq += error.x * error.x + error.y * error.y;
  }

  TrialMetrics finish() const {
    TrialMetrics metrics;
    metrics.failures = failures;
    if (successes > 0) {
      metrics.mean_error = {sum_x / successes, sum_y / successes};
      metrics.bias_norm = metrics.mean_error.norm();
      metrics.rmse = std::sqrt(sum_sq / successes);
    }
    return metrics;
  }
};

std::optional<Estimate> run_estimator(EstimatorId id, const LinearSystem& system,
                                      const WeightModel& weights,
                                      std::span<const AnchorObservation> observations,
                                      const PathLossParams& params) {
  try {
    Estimate estimate;
    switch (id) {
      case EstimatorId::ls: estimate = solve_ls(system); break;
      case EstimatorId::wls: estimate = solve_wls(system, weights); break;
      case EstimatorId::bcwls: estimate = solve_bcwls(system, weights); break;
      case EstimatorId::hyperbolic:
        estimate = solve_hyperbolic_baseline(system, observations, params);
        break;
    }
    if (estimate.flagged || !estimate.position.is_finite()) return std::nullopt;
    return estimate;
  } catch (const GeometryError&) {
    return std::nullopt;
  } catch (const WeightError&) {
    return std::nullopt;
  }
}

}  // namespace

void validate(const ExperimentConfig& config) {
  validate(config.topology);
  validate(config.params);
  if (config.trials < 1) throw DomainError("trials must be >= 1");
  if (config.sigma_p_grid.empty()) throw DomainError("sigma_p grid must be non-empty");
  for (double sp : config.sigma_p_grid)
    if (!(sp >= 0.0) || !std::isfinite(sp))
      throw DomainError("sigma_p grid values must be >= 0");
  if (config.estimators.empty()) throw DomainError("estimator list must be non-empty");
}

std::vector<SweepCell> run_sweep(const ExperimentConfig& config,
                                 const TrialObserver& observer) {
  validate(config);
  RngStream trials_root = RngStream(config.seed).substream(kTrialStreamChild);
  std::vector<SweepCell> cells;
  cells.reserve(config.sigma_p_grid.size() * config.estimators.size());

  for (std::size_t g = 0; g < config.sigma_p_grid.size(); ++g) {
    const double sigma_p = config.sigma_p_grid[g];
    Topology topology = config.topology;
    for (AnchorTruth& anchor : topology.anchors) anchor.sigma_p = sigma_p;

    std::vector<Accumulator> acc(config.estimators.size());
    RngStream grid_stream = trials_root.substream(g);
    std::vector<std::optional<Estimate>> estimates(config.estimators.size());

    for (long t = 0; t < config.trials; ++t) {
      RngStream trial_stream = grid_stream.substream(static_cast<std::uint64_t>(t));
      std::vector<AnchorObservation> observations =
          observe(topology, config.params, trial_stream);

      bool assembled = false;
      LinearSystem system;
      WeightModel weights;
      try {
        system = build_system(observations, config.params);
        weights = build_weight_model(observations, config.params);
        assembled = true;
      } catch (const Error&) {
        assembled = false;
      }

      for (std::size_t e = 0; e < config.estimators.size(); ++e) {
        estimates[e] = assembled
                           ? run_estimator(config.estimators[e], system, weights,
                                           observations, config.params)
                           : std::nullopt;
        if (estimates[e]) {
          acc[e].add(estimates[e]->position - topology.blind);
        } else {
          ++acc[e].failures;
        }
      }
      if (observer) {
        observer(TrialRecord{g, static_cast<std::size_t>(t), observations, estimates});
      }
    }

    for (std::size_t e = 0; e < config.estimators.size(); ++e) {
      cells.push_back(SweepCell{sigma_p, config.estimators[e], acc[e].finish()});
    }
  }
  return cells;
}

namespace {

// Gradients of the mean-RSSI curves over the extended parameter vector.
struct InfoParts {
  Eigen::MatrixXd exact;   // sum g g' over anchors with sigma_p == 0
  Eigen::MatrixXd finite;  // sum g g'/sigma_p^2 + anchor-position information
  bool has_exact = false;
};

InfoParts information_parts(const Topology& topology, const PathLossParams& params,
                            double sigma_p, const std::vector<int>& param_slot) {
  const double beta = 10.0 * params.eta / std::numbers::ln10;
  int n = 2;
  for (int slot : param_slot)
    if (slot >= 0) n += 2;

  InfoParts parts;
  parts.exact = Eigen::MatrixXd::Zero(n, n);
  parts.finite = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd g(n);

  for (std::size_t i = 0; i < topology.anchors.size(); ++i) {
    const AnchorTruth& anchor = topology.anchors[i];
    const double dx = topology.blind.x - anchor.position.x;
    const double dy = topology.blind.y - anchor.position.y;
    const double d2 = dx * dx + dy * dy;
    if (d2 <= 0.0) throw DomainError("blind node coincides with anchor " + std::to_string(i));

    g.setZero();
    g(0) = -beta * dx / d2;
    g(1) = -beta * dy / d2;
    if (param_slot[i] >= 0) {
      g(param_slot[i]) = beta * dx / d2;
      g(param_slot[i] + 1) = beta * dy / d2;
      const double w = 1.0 / (anchor.sigma_a * anchor.sigma_a);
      parts.finite(param_slot[i], param_slot[i]) += w;
      parts.finite(param_slot[i] + 1, param_slot[i] + 1) += w;
    }
    if (sigma_p > 0.0) {
      parts.finite += g * g.transpose() / (sigma_p * sigma_p);
    } else {
      parts.exact += g * g.transpose();
      parts.has_exact = true;
    }
  }
  return parts;
}

std::vector<int> assign_param_slots(const Topology& topology) {
  // Anchors with sigma_a == 0 are exactly known and stay out of the
  // parameter vector.
  std::vector<int> slot(topology.anchors.size(), -1);
  int next = 2;
  for (std::size_t i = 0; i < topology.anchors.size(); ++i) {
    if (topology.anchors[i].sigma_a > 0.0) {
      slot[i] = next;
      next += 2;
    }
  }
  return slot;
}

// Collinear anchors leave the position ambiguous across the anchor line; the
// local information analysis cannot see that, so reject the geometry up
// front via the anchor scatter matrix.
void reject_collinear_anchors(const Topology& topology) {
  double cx = 0.0, cy = 0.0;
  for (const AnchorTruth& anchor : topology.anchors) {
    cx += anchor.position.x;
    cy += anchor.position.y;
  }
  cx /= static_cast<double>(topology.anchors.size());
  cy /= static_cast<double>(topology.anchors.size());
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const AnchorTruth& anchor : topology.anchors) {
    double dx = anchor.position.x - cx;
    double dy = anchor.position.y - cy;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  double mean = 0.5 * (sxx + syy);
  double disc = std::sqrt(0.25 * (sxx - syy) * (sxx - syy) + sxy * sxy);
  double lambda_min = mean - disc;
  if (!(lambda_min > 1e-12 * (mean + disc)))
    throw GeometryError("anchors are collinear (degenerate geometry)");
}

}  // namespace

CrlbResult crlb(const Topology& topology, const PathLossParams& params, double sigma_p) {
  validate(topology);
  validate(params);
  if (!(sigma_p >= 0.0) || !std::isfinite(sigma_p))
    throw DomainError("sigma_p must be >= 0");

  reject_collinear_anchors(topology);
  std::vector<int> slots = assign_param_slots(topology);
  InfoParts parts = information_parts(topology, params, sigma_p, slots);
  const auto n = parts.finite.rows();

  CrlbResult result;
  if (!parts.has_exact) {
    // The information matrix can be legitimately ill conditioned (tiny
    // sigma_a against broad RSSI noise), so only a non-positive eigenvalue
    // counts as singular here.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(parts.finite);
    const Eigen::VectorXd& lambda = eig.eigenvalues();
    if (!(lambda.minCoeff() > 0.0))
      throw GeometryError("information matrix is singular (degenerate geometry)");
    result.fim_condition = lambda.maxCoeff() / lambda.minCoeff();
    Eigen::MatrixXd cov = eig.eigenvectors() * lambda.cwiseInverse().asDiagonal() *
                          eig.eigenvectors().transpose();
    result.bound_rmse = std::sqrt(cov(0, 0) + cov(1, 1));
    return result;
  }

  // Exact RSSI measurements: the bound is the limit sigma_p -> 0, i.e. the
  // prior information restricted to the null space of the constraint
  // directions.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig_g(parts.exact);
  const Eigen::VectorXd& mu = eig_g.eigenvalues();
  const double tol = 1e-10 * std::max(mu.maxCoeff(), 1.0);
  int null_dim = 0;
  while (null_dim < n && mu(null_dim) <= tol) ++null_dim;
  if (null_dim == 0) {
    // Constraints pin every parameter: zero-variance bound.
    result.bound_rmse = 0.0;
    result.fim_condition = 1.0;
    return result;
  }
  Eigen::MatrixXd basis = eig_g.eigenvectors().leftCols(null_dim);
  Eigen::MatrixXd h = basis.transpose() * parts.finite * basis;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig_h(h);
  const Eigen::VectorXd& lambda = eig_h.eigenvalues();
  if (!(lambda.minCoeff() > 0.0))
    throw GeometryError(
        "information matrix is singular in the exact-measurement limit");
  Eigen::MatrixXd h_inv = eig_h.eigenvectors() * lambda.cwiseInverse().asDiagonal() *
                          eig_h.eigenvectors().transpose();
  Eigen::MatrixXd cov = basis * h_inv * basis.transpose();
  result.bound_rmse = std::sqrt(cov(0, 0) + cov(1, 1));
  result.fim_condition = lambda.maxCoeff() / lambda.minCoeff();
  return result;
}

Eigen::MatrixXd fisher_information(const Topology& topology,
                                   const PathLossParams& params, double sigma_p) {
  validate(topology);
  validate(params);
  if (!(sigma_p > 0.0)) throw DomainError("fisher_information requires sigma_p > 0");
  for (const AnchorTruth& anchor : topology.anchors)
    if (!(anchor.sigma_a > 0.0))
      throw DomainError("fisher_information requires every sigma_a > 0");
  std::vector<int> slots = assign_param_slots(topology);
  return information_parts(topology, params, sigma_p, slots).finite;
}

std::vector<SweepRow> summarize(const ExperimentConfig& config,
                                std::span<const SweepCell> cells,
                                std::span<const CrlbResult> crlb_per_point) {
  if (cells.empty()) throw DomainError("summarize needs a non-empty result set");
  if (crlb_per_point.size() != config.sigma_p_grid.size())
    throw DomainError("CRLB results must align with the sigma_p grid");

  std::vector<SweepRow> rows;
  rows.reserve(cells.size());
  for (const SweepCell& cell : cells) {
    std::size_t g = 0;
    while (g < config.sigma_p_grid.size() && config.sigma_p_grid[g] != cell.sigma_p) ++g;
    if (g == config.sigma_p_grid.size())
      throw DomainError("sweep cell sigma_p not found in the grid");
    SweepRow row;
    row.sigma_p = cell.sigma_p;
    row.estimator = cell.estimator;
    row.trials = config.trials;
    row.failures = cell.metrics.failures;
    row.rmse = cell.metrics.rmse;
    row.bias_norm = cell.metrics.bias_norm;
    row.mean_error = cell.metrics.mean_error;
    row.crlb_rmse = crlb_per_point[g].bound_rmse;
    row.seed = config.seed;
    rows.push_back(row);
  }
  return rows;
}

Topology generate_topology(const TopologyGeneratorSpec& spec, RngStream& rng) {
  if (!(spec.arena > 0.0)) throw DomainError("arena side must be positive");
  if (spec.num_anchors < 3) throw DomainError("need at least 3 anchors");
  if (static_cast<int>(spec.sigma_a.size()) != spec.num_anchors)
    throw DomainError("sigma_a list must have one entry per anchor");

  Topology topology;
  topology.anchors.resize(spec.num_anchors);
  for (int i = 0; i < spec.num_anchors; ++i) {
    topology.anchors[i].position = {rng.uniform01() * spec.arena,
                                    rng.uniform01() * spec.arena};
    if (!(spec.sigma_a[i] >= 0.0)) throw DomainError("sigma_a must be >= 0");
    topology.anchors[i].sigma_a = spec.sigma_a[i];
  }
  if (spec.blind) {
    topology.blind = *spec.blind;
  } else {
    for (;;) {
      topology.blind = {rng.uniform01() * spec.arena, rng.uniform01() * spec.arena};
      bool clear = true;
      for (const AnchorTruth& anchor : topology.anchors)
        if (distance(anchor.position, topology.blind) < 1e-9) clear = false;
      if (clear) break;
    }
  }
  return topology;
}

}  // namespace rssiloc
