#pragma once

#include <Eigen/Dense>

#include "hpz/propagator.hpp"

namespace hpz {

// Independent brute-force validator for the closed-form propagator: the
// quadratic form Q of the evolved Gaussian characteristic function obeys
//   dQ/dt = -M^T Q - Q M + R_sym,
// which is integrated with a fixed-step classic 4th-order scheme. The
// oracle works in Q space; covariance conversion happens at the endpoints.

struct MomentOdeState {
  Eigen::Matrix4d q = Eigen::Matrix4d::Zero();
  double t = 0.0;
};

Eigen::Matrix4d moment_rhs(const Eigen::Matrix4d& q, const Eigen::Matrix4d& drift,
                           const Eigen::Matrix4d& r_sym);

// Upper bound the fixed step must respect for the stated O(dt^4) accuracy.
double max_moment_step(const MarkovCoefficients& coeffs);

// Integrates from sigma0 to t_end; throws StepSizeError when dt exceeds
// max_moment_step. Global error O(dt^4).
Covariance4 integrate_moments(const Covariance4& sigma0,
                              const MarkovCoefficients& coeffs, double t_end,
                              double dt);

}  // namespace hpz
