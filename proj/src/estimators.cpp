#include "rssiloc/estimators.hpp"

#include <cmath>
#include <vector>

#include "rssiloc/errors.hpp"

namespace rssiloc {

const char* to_string(EstimatorId id) {
  switch (id) {
    case EstimatorId::ls: return "ls";
    case EstimatorId::wls: return "wls";
    case EstimatorId::bcwls: return "bcwls";
    case EstimatorId::hyperbolic: return "hyperbolic";
  }
  return "?";
}

namespace {

// Solve (1/2) N^-1 r for symmetric 2x2 N by Cramer's rule. Closed form keeps
// the solve exactly sign-symmetric under coordinate reflection.
Estimate solve_normal2(double n00, double n01, double n11, double r0, double r1,
                       EstimatorId id) {
  // Eigenvalues of [[n00, n01], [n01, n11]]; the small one via det/lambda_max
  // to dodge cancellation near rank deficiency.
  double mean = 0.5 * (n00 + n11);
  double disc = std::sqrt(0.25 * (n00 - n11) * (n00 - n11) + n01 * n01);
  double lambda_max = mean + disc;
  double det = n00 * n11 - n01 * n01;
  if (!(det > 0.0) || !(lambda_max > 0.0) || !std::isfinite(det))
    throw GeometryError("normal matrix is singular (collinear anchors?)");
  double lambda_min = det / lambda_max;

  Estimate estimate;
  estimate.id = id;
  estimate.condition = lambda_max / lambda_min;
  estimate.flagged = estimate.condition > kConditionLimit;
  estimate.position.x = 0.5 * (n11 * r0 - n01 * r1) / det;
  estimate.position.y = 0.5 * (n00 * r1 - n01 * r0) / det;
  return estimate;
}

Estimate weighted_solve(const LinearSystem& system, const Eigen::MatrixXd& s,
                        const Eigen::VectorXd& rhs, EstimatorId id) {
  Eigen::LLT<Eigen::MatrixXd> llt(s);
  if (llt.info() != Eigen::Success)
    throw WeightError("covariance S is not positive definite");
  Eigen::Matrix<double, Eigen::Dynamic, 2> sa = llt.solve(system.a);
  Eigen::VectorXd sb = llt.solve(rhs);
  double n00 = system.a.col(0).dot(sa.col(0));
  double n01 = system.a.col(0).dot(sa.col(1));
  double n11 = system.a.col(1).dot(sa.col(1));
  double r0 = system.a.col(0).dot(sb);
  double r1 = system.a.col(1).dot(sb);
  return solve_normal2(n00, n01, n11, r0, r1, id);
}

}  // namespace

Estimate solve_ls(const LinearSystem& system) {
  double n00 = system.a.col(0).squaredNorm();
  double n01 = system.a.col(0).dot(system.a.col(1));
  double n11 = system.a.col(1).squaredNorm();
  double r0 = system.a.col(0).dot(system.b);
  double r1 = system.a.col(1).dot(system.b);
  return solve_normal2(n00, n01, n11, r0, r1, EstimatorId::ls);
}

Estimate solve_wls(const LinearSystem& system, const WeightModel& weights) {
  if (weights.s_is_zero) {
    Estimate estimate = solve_ls(system);
    estimate.id = EstimatorId::wls;
    return estimate;
  }
  return weighted_solve(system, weights.s, system.b, EstimatorId::wls);
}

Estimate solve_bcwls(const LinearSystem& system, const WeightModel& weights) {
  if (weights.s_is_zero) {
    Estimate estimate = solve_ls(system);
    estimate.id = EstimatorId::bcwls;
    return estimate;
  }
  Eigen::VectorXd rhs = system.b - weights.c;
  return weighted_solve(system, weights.s, rhs, EstimatorId::bcwls);
}

Estimate solve_hyperbolic_baseline(const LinearSystem& system,
                                   std::span<const AnchorObservation> observations,
                                   const PathLossParams& params) {
  // Same pipeline, but the weights assume exactly-known anchor positions.
  std::vector<AnchorObservation> trusted(observations.begin(), observations.end());
  for (AnchorObservation& o : trusted) o.sigma_a = 0.0;
  Eigen::MatrixXd s = covariance_s(trusted, params, system.reference_index);
  if (s.isZero(0.0)) {
    Estimate estimate = solve_ls(system);
    estimate.id = EstimatorId::hyperbolic;
    return estimate;
  }
  return weighted_solve(system, s, system.b, EstimatorId::hyperbolic);
}

}  // namespace rssiloc
