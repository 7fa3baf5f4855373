#pragma once

// Shared helpers for the test suites. The CRLB helpers are deliberately
// independent re-derivations, not calls into the library paths they check.

#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "rssiloc/errors.hpp"
#include "rssiloc/estimators.hpp"
#include "rssiloc/linsys.hpp"
#include "rssiloc/model.hpp"
#include "rssiloc/rng.hpp"

namespace testsupport {

using namespace rssiloc;

// Noise-free observations: true positions, RSSI exactly on the mean curve.
inline std::vector<AnchorObservation> exact_observations(const Topology& topology,
                                                         const PathLossParams& params) {
  std::vector<AnchorObservation> observations;
  for (const AnchorTruth& anchor : topology.anchors) {
    AnchorObservation obs;
    obs.observed_position = anchor.position;
    obs.sigma_a = anchor.sigma_a;
    obs.sigma_p = anchor.sigma_p;
    obs.rssi_dbm = mean_rssi(params, distance(anchor.position, topology.blind));
    observations.push_back(obs);
  }
  return observations;
}

// Random topology with anchors and blind uniform in [0, arena]^2, resampled
// until the noiseless normal matrix is well conditioned (so "non-degenerate"
// means something quantitative) and the blind keeps clear of the anchors.
inline Topology random_topology(RngStream& rng, int num_anchors, double arena = 40.0,
                                double condition_limit = 1e4) {
  PathLossParams params;
  for (;;) {
    Topology topology;
    topology.anchors.resize(num_anchors);
    for (AnchorTruth& anchor : topology.anchors)
      anchor.position = {rng.uniform01() * arena, rng.uniform01() * arena};
    topology.blind = {rng.uniform01() * arena, rng.uniform01() * arena};

    bool clear = true;
    for (const AnchorTruth& anchor : topology.anchors)
      if (distance(anchor.position, topology.blind) < 1e-3) clear = false;
    if (!clear) continue;

    try {
      LinearSystem system = build_system(exact_observations(topology, params), params);
      Estimate estimate = solve_ls(system);
      if (estimate.condition < condition_limit) return topology;
    } catch (const Error&) {
      continue;
    }
  }
}

// Closed-form CRLB for RSSI ranging with exactly known anchors:
// J = (10 eta / (sigma_p ln 10))^2 sum u_i u_i' / d_i^2.
inline double known_anchor_crlb(const Topology& topology, const PathLossParams& params,
                                double sigma_p) {
  double j00 = 0.0, j01 = 0.0, j11 = 0.0;
  const double b = 10.0 * params.eta / (sigma_p * std::numbers::ln10);
  for (const AnchorTruth& anchor : topology.anchors) {
    double dx = topology.blind.x - anchor.position.x;
    double dy = topology.blind.y - anchor.position.y;
    double d2 = dx * dx + dy * dy;
    j00 += b * b * dx * dx / (d2 * d2);
    j01 += b * b * dx * dy / (d2 * d2);
    j11 += b * b * dy * dy / (d2 * d2);
  }
  double det = j00 * j11 - j01 * j01;
  return std::sqrt((j00 + j11) / det);
}

// Expected negative log-likelihood of the joint RSSI + anchor-position
// observation model, as a function of a candidate parameter vector
// psi = (xb, yb, x1, y1, ...), up to psi-independent constants.
inline double expected_nll(const Eigen::VectorXd& psi, const Topology& topology,
                           const PathLossParams& params, double sigma_p) {
  double total = 0.0;
  for (std::size_t i = 0; i < topology.anchors.size(); ++i) {
    const AnchorTruth& anchor = topology.anchors[i];
    double d_true = distance(anchor.position, topology.blind);
    double dx = psi(0) - psi(2 + 2 * i);
    double dy = psi(1) - psi(3 + 2 * i);
    double d_cand = std::hypot(dx, dy);
    double diff = mean_rssi(params, d_true) - mean_rssi(params, d_cand);
    total += diff * diff / (2.0 * sigma_p * sigma_p);
    double ax = anchor.position.x - psi(2 + 2 * i);
    double ay = anchor.position.y - psi(3 + 2 * i);
    total += (ax * ax + ay * ay) / (2.0 * anchor.sigma_a * anchor.sigma_a);
  }
  return total;
}

// Central-difference Hessian of expected_nll at the true parameters; the
// Fisher information oracle.
inline Eigen::MatrixXd finite_diff_information(const Topology& topology,
                                               const PathLossParams& params,
                                               double sigma_p, double h = 1e-4) {
  const int n = 2 + 2 * static_cast<int>(topology.anchors.size());
  Eigen::VectorXd psi(n);
  psi(0) = topology.blind.x;
  psi(1) = topology.blind.y;
  for (std::size_t i = 0; i < topology.anchors.size(); ++i) {
    psi(2 + 2 * i) = topology.anchors[i].position.x;
    psi(3 + 2 * i) = topology.anchors[i].position.y;
  }
  auto f = [&](const Eigen::VectorXd& p) {
    return expected_nll(p, topology, params, sigma_p);
  };
  Eigen::MatrixXd hess(n, n);
  const double f0 = f(psi);
  for (int a = 0; a < n; ++a) {
    for (int b = a; b < n; ++b) {
      double value;
      if (a == b) {
        Eigen::VectorXd p = psi;
        p(a) = psi(a) + h;
        double fp = f(p);
        p(a) = psi(a) - h;
        double fm = f(p);
        value = (fp - 2.0 * f0 + fm) / (h * h);
      } else {
        Eigen::VectorXd p = psi;
        p(a) = psi(a) + h; p(b) = psi(b) + h;
        double fpp = f(p);
        p(b) = psi(b) - h;
        double fpm = f(p);
        p(a) = psi(a) - h; p(b) = psi(b) + h;
        double fmp = f(p);
        p(b) = psi(b) - h;
        double fmm = f(p);
        value = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
      }
      hess(a, b) = value;
      hess(b, a) = value;
    }
  }
  return hess;
}

// Online mean/variance accumulator for Monte Carlo checks.
struct RunningStats {
  long n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    double delta = x - mean;
    mean += delta / n;
    m2 += delta * (x - mean);
  }
  double variance() const { return n > 1 ? m2 / (n - 1) : 0.0; }
  double stddev() const { return std::sqrt(variance()); }
};

}  // namespace testsupport
