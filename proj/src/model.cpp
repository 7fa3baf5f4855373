#include "rssiloc/model.hpp"

#include <cmath>
#include <string>

#include "rssiloc/errors.hpp"

namespace rssiloc {

void validate(const PathLossParams& params) {
  if (!(params.d0 > 0.0) || !std::isfinite(params.d0))
    throw DomainError("path-loss d0 must be positive, got " + std::to_string(params.d0));
  if (!(params.eta > 0.0) || !std::isfinite(params.eta))
    throw DomainError("path-loss exponent must be positive, got " + std::to_string(params.eta));
  if (!std::isfinite(params.p0_dbm))
    throw DomainError("path-loss p0_dbm must be finite");
}

void validate(const Topology& topology) {
  if (topology.anchors.size() < 3)
    throw DomainError("need at least 3 anchors, got " + std::to_string(topology.anchors.size()));
  if (!topology.blind.is_finite()) throw DomainError("blind position must be finite");
  for (std::size_t i = 0; i < topology.anchors.size(); ++i) {
    const AnchorTruth& a = topology.anchors[i];
    if (!a.position.is_finite())
      throw DomainError("anchor " + std::to_string(i) + " position must be finite");
    if (!(a.sigma_a >= 0.0) || !std::isfinite(a.sigma_a))
      throw DomainError("anchor " + std::to_string(i) + " sigma_a must be >= 0");
    if (!(a.sigma_p >= 0.0) || !std::isfinite(a.sigma_p))
      throw DomainError("anchor " + std::to_string(i) + " sigma_p must be >= 0");
  }
}

double mean_rssi(const PathLossParams& params, double distance) {
  if (!(distance > 0.0) || !std::isfinite(distance))
    throw DomainError("distance must be positive, got " + std::to_string(distance));
  return params.p0_dbm - 10.0 * params.eta * std::log10(distance / params.d0);
}

double sample_rssi(const PathLossParams& params, double true_distance,
                   double sigma_p, RngStream& rng) {
  if (!(sigma_p >= 0.0)) throw DomainError("sigma_p must be >= 0");
  double mean = mean_rssi(params, true_distance);
  return sigma_p == 0.0 ? mean : rng.normal(mean, sigma_p);
}

double distance_from_rssi(const PathLossParams& params, double rssi_dbm) {
  if (!std::isfinite(rssi_dbm)) throw DomainError("rssi must be finite");
  return params.d0 * std::pow(10.0, (rssi_dbm - params.p0_dbm) / (-10.0 * params.eta));
}

AnchorObservation perturb_anchor(const AnchorTruth& truth, RngStream& rng) {
  AnchorObservation obs;
  obs.sigma_a = truth.sigma_a;
  obs.sigma_p = truth.sigma_p;
  obs.observed_position = truth.position;
  if (truth.sigma_a > 0.0) {
    obs.observed_position.x += rng.normal(0.0, truth.sigma_a);
    obs.observed_position.y += rng.normal(0.0, truth.sigma_a);
  }
  return obs;
}

std::vector<AnchorObservation> observe(const Topology& topology,
                                       const PathLossParams& params,
                                       const RngStream& rng) {
  validate(topology);
  validate(params);
  std::vector<AnchorObservation> observations;
  observations.reserve(topology.anchors.size());
  for (std::size_t i = 0; i < topology.anchors.size(); ++i) {
    const AnchorTruth& truth = topology.anchors[i];
    double d = distance(truth.position, topology.blind);
    if (d <= 0.0)
      throw DomainError("blind node coincides with anchor " + std::to_string(i));
    RngStream sub = rng.substream(i);
    AnchorObservation obs = perturb_anchor(truth, sub);
    obs.rssi_dbm = sample_rssi(params, d, truth.sigma_p, sub);
    observations.push_back(obs);
  }
  return observations;
}

}  // namespace rssiloc
