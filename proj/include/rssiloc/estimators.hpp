#pragma once

// The four position estimators on the linearized system:
//   LS          w = 1/2 (A'A)^-1 A'b
//   WLS         w = 1/2 (A'S^-1 A)^-1 A'S^-1 b
//   BC-WLS      w = 1/2 (A'S^-1 A)^-1 A'S^-1 (b - c)
//   HYPERBOLIC  WLS with S rebuilt as if anchor positions were exact
//               (sigma_a := 0 in the weights), no bias compensation.

#include <span>

#include "rssiloc/geometry.hpp"
#include "rssiloc/linsys.hpp"
#include "rssiloc/model.hpp"

namespace rssiloc {

enum class EstimatorId { ls, wls, bcwls, hyperbolic };

const char* to_string(EstimatorId id);

// Condition of the 2x2 normal-equations matrix above which an estimate is
// flagged unreliable rather than thrown.
inline constexpr double kConditionLimit = 1e12;

struct Estimate {
  Point2 position;
  EstimatorId id = EstimatorId::ls;
  double condition = 0.0;  // lambda_max / lambda_min of the normal matrix
  bool flagged = false;    // condition above kConditionLimit
};

// Throws GeometryError when A is rank deficient (collinear anchors).
Estimate solve_ls(const LinearSystem& system);

// Falls back to solve_ls when S is zero-flagged (noiseless input); throws
// WeightError when S is nonzero but not positive definite.
Estimate solve_wls(const LinearSystem& system, const WeightModel& weights);

Estimate solve_bcwls(const LinearSystem& system, const WeightModel& weights);

// Baseline that trusts the reported anchor positions: weights carry only the
// distance-noise variances.
Estimate solve_hyperbolic_baseline(const LinearSystem& system,
                                   std::span<const AnchorObservation> observations,
                                   const PathLossParams& params);

}  // namespace rssiloc
