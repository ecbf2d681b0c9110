#pragma once

#include <Eigen/Dense>

#include "hpz/oracle.hpp"

namespace hpz {

// |LHS - RHS| of the characteristic-function master equation at (w, t) for a
// Gaussian state with initial quadratic form q0. Every partial derivative is
// taken analytically from the closed-form quadratic form, so a nonzero
// residual points at the propagator, not the probe.
double master_equation_residual(const Propagator& prop, const Eigen::Matrix4d& q0,
                                const Eigen::Vector4d& w, double t);

}  // namespace hpz
