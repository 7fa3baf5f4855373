#include "rssiloc/moments.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "rssiloc/errors.hpp"

namespace rssiloc {

namespace {

void require_positive_eta(double eta) {
  if (!(eta > 0.0) || !std::isfinite(eta))
    throw DomainError("path-loss exponent must be positive, got " + std::to_string(eta));
}

void require_positive_distance(double d) {
  if (!(d > 0.0) || !std::isfinite(d))
    throw DomainError("distance estimate must be positive, got " + std::to_string(d));
}

}  // namespace

double u_const(double eta) {
  require_positive_eta(eta);
  return std::numbers::ln10 / (5.0 * std::numbers::sqrt2 * eta);
}

double sigma_d(double eta, double sigma_p) {
  require_positive_eta(eta);
  if (!(sigma_p >= 0.0)) throw DomainError("sigma_p must be >= 0");
  return std::numbers::ln10 / (10.0 * eta) * sigma_p;
}

double var_k(Point2 observed_position, double sigma_a) {
  if (!(sigma_a >= 0.0)) throw DomainError("sigma_a must be >= 0");
  double sa2 = sigma_a * sigma_a;
  return 4.0 * sa2 * (sa2 + squared_norm(observed_position));
}

double var_d2(double distance_estimate, double eta, double sigma_p) {
  require_positive_distance(distance_estimate);
  double sd2 = sigma_d(eta, sigma_p);
  sd2 *= sd2;
  double d2 = distance_estimate * distance_estimate;
  // d^4 (e^{8 sd^2} - e^{4 sd^2}) = d^4 e^{4 sd^2} expm1(4 sd^2)
  return d2 * d2 * std::exp(4.0 * sd2) * std::expm1(4.0 * sd2);
}

double mean_d2_exact(double distance_estimate, double eta, double sigma_p) {
  require_positive_distance(distance_estimate);
  double u = u_const(eta);
  double d2 = distance_estimate * distance_estimate;
  return d2 * std::exp(u * u * sigma_p * sigma_p);
}

double mean_d2_taylor(double distance_estimate, double eta, double sigma_p) {
  require_positive_distance(distance_estimate);
  double d2 = distance_estimate * distance_estimate;
  return d2 * (1.0 + bias_factor(eta, sigma_p));
}

double bias_factor(double eta, double sigma_p) {
  double u = u_const(eta);
  if (!(sigma_p >= 0.0)) throw DomainError("sigma_p must be >= 0");
  double t = u * u * sigma_p * sigma_p;
  return t + 0.5 * t * t;
}

double var_k(const MomentInputs& inputs) {
  return var_k(inputs.observed_position, inputs.sigma_a);
}

double var_d2(const MomentInputs& inputs) {
  return var_d2(inputs.distance_estimate, inputs.eta, inputs.sigma_p);
}

double mean_d2_exact(const MomentInputs& inputs) {
  return mean_d2_exact(inputs.distance_estimate, inputs.eta, inputs.sigma_p);
}

double mean_d2_taylor(const MomentInputs& inputs) {
  return mean_d2_taylor(inputs.distance_estimate, inputs.eta, inputs.sigma_p);
}

}  // namespace rssiloc
