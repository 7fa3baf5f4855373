#pragma once

// Closed-form moments of the perturbed quantities entering the linearized
// system: k~ = x~^2 + y~^2 for a Gaussian-perturbed position (noncentral
// chi-squared), and d~^2 for a log-normal distance estimate.
//
// All moments follow the plug-in convention: callers evaluate them at the
// perturbed observations standing in for the unavailable true values.

#include "rssiloc/geometry.hpp"

namespace rssiloc {

// Bundle of plug-in values a single anchor contributes to the weights.
struct MomentInputs {
  double distance_estimate = 0.0;  // d~, m
  Point2 observed_position;        // (x~, y~)
  double sigma_a = 0.0;            // m
  double sigma_p = 0.0;            // dB
  double eta = 0.0;
};

// u = ln(10) / (5 sqrt(2) eta); the dB-to-log-scale constant of the
// squared-distance noise, d~^2 = d^2 exp(sqrt(2) u n_p).
double u_const(double eta);

// Std of ln(d~/d) for sigma_p dB of shadowing: (ln(10) / (10 eta)) sigma_p.
// Satisfies u^2 sigma_p^2 = 2 sigma_d^2.
double sigma_d(double eta, double sigma_p);

// Var(k~) = 4 sigma_a^2 (sigma_a^2 + x^2 + y^2); k~/sigma_a^2 is noncentral
// chi-squared with 2 dof.
double var_k(Point2 observed_position, double sigma_a);

// Var(d~^2) = d^4 (exp(8 sigma_d^2) - exp(4 sigma_d^2)) for log-normal d~.
double var_d2(double distance_estimate, double eta, double sigma_p);

// E[d~^2] = d^2 exp(u^2 sigma_p^2), the exact log-normal mean.
double mean_d2_exact(double distance_estimate, double eta, double sigma_p);

// Second-order expansion of mean_d2_exact: d^2 (1 + u^2 sp^2 + u^4 sp^4 / 2).
// This is the form the bias vector uses; the exact form is kept for tests.
double mean_d2_taylor(double distance_estimate, double eta, double sigma_p);

// The multiplier f = u^2 sp^2 + u^4 sp^4 / 2 with mean_d2_taylor = d^2 (1+f);
// the per-anchor factor in the bias vector.
double bias_factor(double eta, double sigma_p);

// Plug-in overloads.
double var_k(const MomentInputs& inputs);
double var_d2(const MomentInputs& inputs);
double mean_d2_exact(const MomentInputs& inputs);
double mean_d2_taylor(const MomentInputs& inputs);

}  // namespace rssiloc
