#pragma once

// Ground-truth world model: log-distance path loss with log-normal shadowing
// for RSSI, and zero-mean Gaussian perturbation of anchor positions. All
// units are fixed: meters, dBm, dB.

#include <vector>

#include "rssiloc/geometry.hpp"
#include "rssiloc/rng.hpp"

namespace rssiloc {

struct PathLossParams {
  double d0 = 1.0;        // reference distance, m
  double p0_dbm = -33.44; // received power at d0, dBm
  double eta = 3.567;     // path-loss exponent
};

struct AnchorTruth {
  Point2 position;
  double sigma_a = 0.0;  // position-noise std, m (same for both axes)
  double sigma_p = 0.0;  // RSSI-noise std, dB
};

// What the blind node actually has per anchor.
struct AnchorObservation {
  Point2 observed_position;
  double sigma_a = 0.0;
  double rssi_dbm = 0.0;
  double sigma_p = 0.0;
};

struct Topology {
  std::vector<AnchorTruth> anchors;  // M >= 3 for any estimation to work
  Point2 blind;
};

// Throw DomainError on violated invariants (d0 <= 0, eta <= 0, negative
// sigmas, non-finite coordinates).
void validate(const PathLossParams& params);
void validate(const Topology& topology);

// Mean received power at the given distance. Strictly decreasing in
// distance; throws DomainError for distance <= 0.
double mean_rssi(const PathLossParams& params, double distance);

// mean_rssi plus N(0, sigma_p^2) shadowing noise.
double sample_rssi(const PathLossParams& params, double true_distance,
                   double sigma_p, RngStream& rng);

// Inverts the mean path-loss curve; the result is log-normally distributed
// when the RSSI carries Gaussian dB noise. Always positive.
double distance_from_rssi(const PathLossParams& params, double rssi_dbm);

// Position part only: adds independent N(0, sigma_a^2) noise per axis.
// rssi_dbm is left at 0; observe() fills it.
AnchorObservation perturb_anchor(const AnchorTruth& truth, RngStream& rng);

// One perturbed position and one RSSI sample per anchor, all draws mutually
// independent: anchor i draws from rng.substream(i). The parent stream is
// not advanced. Throws DomainError if the blind node coincides with an
// anchor.
std::vector<AnchorObservation> observe(const Topology& topology,
                                       const PathLossParams& params,
                                       const RngStream& rng);

}  // namespace rssiloc
