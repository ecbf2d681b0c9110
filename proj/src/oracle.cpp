#include "hpz/oracle.hpp"

#include <cmath>
#include <sstream>

namespace hpz {

Eigen::Matrix4d moment_rhs(const Eigen::Matrix4d& q, const Eigen::Matrix4d& drift,
                           const Eigen::Matrix4d& r_sym) {
  const Eigen::Matrix4d rhs = -drift.transpose() * q - q * drift + r_sym;
  return 0.5 * (rhs + rhs.transpose());
}

double max_moment_step(const MarkovCoefficients& c) {
  const double rate = std::max(
      {c.omega, std::abs(c.omega_d), std::abs(c.omega_c_eff), 2.0 * c.lambda});
  return 1e-3 / rate;
}

Covariance4 integrate_moments(const Covariance4& sigma0,
                              const MarkovCoefficients& coeffs, double t_end,
                              double dt) {
  if (sigma0.frame != Frame::CMR) {
    throw FrameError("integrate_moments expects a CMR-frame covariance");
  }
  if (!(t_end >= 0.0) || !(dt > 0.0)) {
    throw DomainError("integrate_moments requires t_end >= 0 and dt > 0");
  }
  const double bound = max_moment_step(coeffs);
  if (dt > bound) {
    std::ostringstream msg;
    msg << "step " << dt << " exceeds the accuracy bound " << bound;
    throw StepSizeError(msg.str());
  }
  const Eigen::Matrix4d drift = build_drift(coeffs);
  const Eigen::Matrix4d r = diffusion_matrix(coeffs);
  const Eigen::Matrix4d r_sym = 0.5 * (r + r.transpose());

  MomentOdeState state{sigma_to_quadratic(sigma0.sigma), 0.0};
  const long n_steps = static_cast<long>(std::ceil(t_end / dt));
  const double h = t_end > 0.0 ? t_end / static_cast<double>(n_steps) : 0.0;
  for (long i = 0; i < n_steps; ++i) {
    const Eigen::Matrix4d k1 = moment_rhs(state.q, drift, r_sym);
    const Eigen::Matrix4d k2 = moment_rhs(state.q + 0.5 * h * k1, drift, r_sym);
    const Eigen::Matrix4d k3 = moment_rhs(state.q + 0.5 * h * k2, drift, r_sym);
    const Eigen::Matrix4d k4 = moment_rhs(state.q + h * k3, drift, r_sym);
    state.q += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    state.t += h;
  }
  return Covariance4{quadratic_to_sigma(state.q), Frame::CMR};
}

}  // namespace hpz
