#include "rssiloc/linsys.hpp"

#include <cmath>
#include <string>

#include "rssiloc/errors.hpp"
#include "rssiloc/moments.hpp"

namespace rssiloc {

namespace {

void check_inputs(std::span<const AnchorObservation> observations, int reference_index) {
  if (observations.size() < 3)
    throw DomainError("need at least 3 anchors, got " + std::to_string(observations.size()));
  if (reference_index < 0 || reference_index >= static_cast<int>(observations.size()))
    throw DomainError("reference index " + std::to_string(reference_index) + " out of range");
  for (std::size_t i = 0; i < observations.size(); ++i) {
    const AnchorObservation& o = observations[i];
    if (!o.observed_position.is_finite() || !std::isfinite(o.rssi_dbm))
      throw DomainError("observation " + std::to_string(i) + " is not finite");
    if (!(o.sigma_a >= 0.0) || !(o.sigma_p >= 0.0))
      throw DomainError("observation " + std::to_string(i) + " has negative sigma");
  }
}

MomentInputs plug_in(const AnchorObservation& observation, const PathLossParams& params) {
  return MomentInputs{distance_from_rssi(params, observation.rssi_dbm),
                      observation.observed_position, observation.sigma_a,
                      observation.sigma_p, params.eta};
}

}  // namespace

LinearSystem build_system(std::span<const AnchorObservation> observations,
                          const PathLossParams& params, int reference_index) {
  check_inputs(observations, reference_index);
  validate(params);
  const int m = static_cast<int>(observations.size());
  const AnchorObservation& ref = observations[reference_index];
  const double d_ref = distance_from_rssi(params, ref.rssi_dbm);
  const double k_ref = squared_norm(ref.observed_position);

  LinearSystem system;
  system.reference_index = reference_index;
  system.a.resize(m - 1, 2);
  system.b.resize(m - 1);
  system.row_anchor.reserve(m - 1);
  int row = 0;
  for (int i = 0; i < m; ++i) {
    if (i == reference_index) continue;
    const AnchorObservation& o = observations[i];
    const double d_i = distance_from_rssi(params, o.rssi_dbm);
    system.a(row, 0) = o.observed_position.x - ref.observed_position.x;
    system.a(row, 1) = o.observed_position.y - ref.observed_position.y;
    system.b(row) = d_ref * d_ref - d_i * d_i + squared_norm(o.observed_position) - k_ref;
    system.row_anchor.push_back(i);
    ++row;
  }
  return system;
}

Eigen::MatrixXd covariance_s(std::span<const AnchorObservation> observations,
                             const PathLossParams& params, int reference_index) {
  check_inputs(observations, reference_index);
  validate(params);
  const int m = static_cast<int>(observations.size());
  const MomentInputs ref = plug_in(observations[reference_index], params);
  // Shared contribution of the reference anchor to every entry.
  const double alpha = var_k(ref) + var_d2(ref);

  Eigen::MatrixXd s = Eigen::MatrixXd::Constant(m - 1, m - 1, alpha);
  int row = 0;
  for (int i = 0; i < m; ++i) {
    if (i == reference_index) continue;
    const MomentInputs inputs = plug_in(observations[i], params);
    s(row, row) += var_k(inputs) + var_d2(inputs);
    ++row;
  }
  return s;
}

Eigen::VectorXd bias_c(std::span<const AnchorObservation> observations,
                       const PathLossParams& params, int reference_index) {
  check_inputs(observations, reference_index);
  validate(params);
  const int m = static_cast<int>(observations.size());
  const MomentInputs ref = plug_in(observations[reference_index], params);
  const double ref_term = bias_factor(params.eta, ref.sigma_p) *
                          ref.distance_estimate * ref.distance_estimate;
  const double sa_ref2 = ref.sigma_a * ref.sigma_a;

  Eigen::VectorXd c(m - 1);
  int row = 0;
  for (int i = 0; i < m; ++i) {
    if (i == reference_index) continue;
    const MomentInputs inputs = plug_in(observations[i], params);
    c(row) = ref_term -
             bias_factor(params.eta, inputs.sigma_p) * inputs.distance_estimate *
                 inputs.distance_estimate +
             2.0 * (inputs.sigma_a * inputs.sigma_a - sa_ref2);
    ++row;
  }
  return c;
}

WeightModel build_weight_model(std::span<const AnchorObservation> observations,
                               const PathLossParams& params, int reference_index) {
  WeightModel weights;
  weights.s = covariance_s(observations, params, reference_index);
  weights.c = bias_c(observations, params, reference_index);
  weights.s_is_zero = weights.s.isZero(0.0);
  return weights;
}

}  // namespace rssiloc
