#pragma once

// Linearized multilateration system. Subtracting the reference anchor's
// circle equation from the others yields 2 A w = b with
//   A row j = (x_i - x_ref, y_i - y_ref)
//   b row j = d_ref^2 - d_i^2 + k_i - k_ref,   k_i = x_i^2 + y_i^2
// assembled here from perturbed observations, together with the covariance
// matrix S of b and the bias vector c with E[b_perturbed] = b + c.

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "rssiloc/model.hpp"

namespace rssiloc {

struct LinearSystem {
  Eigen::Matrix<double, Eigen::Dynamic, 2> a;  // (M-1) x 2
  Eigen::VectorXd b;                           // M-1
  int reference_index = 0;
  std::vector<int> row_anchor;  // row -> original anchor index (skips ref)
};

struct WeightModel {
  Eigen::MatrixXd s;        // covariance of b, (M-1) x (M-1)
  Eigen::VectorXd c;        // bias of b, M-1
  bool s_is_zero = false;   // every entry exactly zero (noiseless input)
};

// Throws DomainError for M < 3, an out-of-range reference index, or
// non-finite observations.
LinearSystem build_system(std::span<const AnchorObservation> observations,
                          const PathLossParams& params, int reference_index = 0);

// Covariance of b under independent position and RSSI perturbations:
//   s_jj = Var(k_ref) + Var(k_i) + Var(d_ref^2) + Var(d_i^2)
//   s_jl = Var(k_ref) + Var(d_ref^2)            (j != l)
// evaluated at the plug-in observations.
Eigen::MatrixXd covariance_s(std::span<const AnchorObservation> observations,
                             const PathLossParams& params, int reference_index = 0);

// Bias of b: entry for anchor i is
//   f(ref) d_ref^2 - f(i) d_i^2 + 2 (sigma_a_i^2 - sigma_a_ref^2)
// with f the per-anchor bias_factor. Reduces to a common factor times
// (d_ref^2 - d_i^2) when all anchors share sigma_p.
Eigen::VectorXd bias_c(std::span<const AnchorObservation> observations,
                       const PathLossParams& params, int reference_index = 0);

// covariance_s + bias_c + the all-zero flag in one pass.
WeightModel build_weight_model(std::span<const AnchorObservation> observations,
                               const PathLossParams& params, int reference_index = 0);

}  // namespace rssiloc
