#include "hpz/validate.hpp"

#include <cmath>

namespace hpz {

double master_equation_residual(const Propagator& prop, const Eigen::Matrix4d& q0,
                                const Eigen::Vector4d& w, double t) {
  const DriftSpectrum& s = prop.spectrum();
  Eigen::Matrix4cd e = Eigen::Matrix4cd::Zero();
  Eigen::Matrix4cd de = Eigen::Matrix4cd::Zero();
  for (int j = 0; j < 4; ++j) {
    const Complex factor = std::exp(-s.lambdas[j] * t);
    e += factor * s.projectors[j];
    de += -s.lambdas[j] * factor * s.projectors[j];
  }
  Eigen::Matrix4cd dr2 = Eigen::Matrix4cd::Zero();
  const Eigen::Matrix4cd r = prop.diffusion().cast<Complex>();
  for (int k = 0; k < 2; ++k) {
    for (int l = 0; l < 2; ++l) {
      dr2 += s.projectors[k].transpose() * r * s.projectors[l] *
             std::exp(-(s.lambdas[k] + s.lambdas[l]) * t);
    }
  }
  const Eigen::Matrix4cd q0c = q0.cast<Complex>();
  const Eigen::Matrix4cd q = e.transpose() * q0c * e + prop.r2(t).cast<Complex>();
  const Eigen::Matrix4cd dq =
      de.transpose() * q0c * e + e.transpose() * q0c * de + dr2;

  const Eigen::Vector4cd wc = w.cast<Complex>();
  const Complex quad = (wc.transpose() * (q * wc))(0);
  const Complex rho = std::exp(-quad);
  const Complex dquad = (wc.transpose() * (dq * wc))(0);
  const Eigen::Matrix4cd mt = prop.drift().transpose().cast<Complex>();
  const Complex convection = 2.0 * (wc.transpose() * (mt * (q * wc)))(0);
  const Complex lhs = (-dquad - convection) * rho;
  const double d_pp = prop.coeffs().d_pp;
  const double d_px = prop.coeffs().d_px;
  const Complex rhs = -(d_pp / kHbar * w(0) * w(0) - 2.0 * d_px * w(0) * w(1)) * rho;
  return std::abs(lhs - rhs);
}

}  // namespace hpz
