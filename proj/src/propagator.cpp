#include "hpz/propagator.hpp"

#include <cmath>
#include <sstream>

namespace hpz {

namespace {

constexpr double kImagTolerance = 1e-10;

Eigen::Matrix4d real_part_checked(const Eigen::Matrix4cd& m, const char* what) {
  const double imag_max = m.imag().cwiseAbs().maxCoeff();
  if (!(imag_max < kImagTolerance)) {
    std::ostringstream msg;
    msg << what << " has imaginary residue " << imag_max;
    throw NumericError(msg.str());
  }
  return m.real();
}

// (1 - exp(-x t)) / x, series near x t = 0 so marginal damping stays finite.
Complex one_minus_exp_over(Complex x, double t) {
  const Complex xt = x * t;
  if (std::abs(xt) < 1e-6) {
    return t * (1.0 - xt / 2.0 + xt * xt / 6.0 - xt * xt * xt / 24.0);
  }
  return (1.0 - std::exp(-xt)) / x;
}

}  // namespace

Covariance4 Covariance4::make(const Eigen::Matrix4d& sigma, Frame frame) {
  const double scale = std::max(1.0, sigma.cwiseAbs().maxCoeff());
  if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw DomainError("covariance matrix must be symmetric");
  }
  const Eigen::Matrix4d sym = 0.5 * (sigma + sigma.transpose());
  Eigen::LLT<Eigen::Matrix4d> llt(sym);
  if (llt.info() != Eigen::Success) {
    throw DomainError("covariance matrix must be positive definite");
  }
  return Covariance4{sym, frame};
}

const Eigen::Matrix4d& symplectic_form() {
  static const Eigen::Matrix4d omega = [] {
    Eigen::Matrix4d o = Eigen::Matrix4d::Zero();
    o(0, 1) = 1.0;
    o(1, 0) = -1.0;
    o(2, 3) = 1.0;
    o(3, 2) = -1.0;
    return o;
  }();
  return omega;
}

Eigen::Matrix4d sigma_to_quadratic(const Eigen::Matrix4d& sigma) {
  const Eigen::Matrix4d& o = symplectic_form();
  const Eigen::Matrix4d q = 0.25 * o.transpose() * sigma * o;
  return 0.5 * (q + q.transpose());
}

Eigen::Matrix4d quadratic_to_sigma(const Eigen::Matrix4d& q) {
  const Eigen::Matrix4d& o = symplectic_form();
  const Eigen::Matrix4d s = 4.0 * o * q * o.transpose();
  return 0.5 * (s + s.transpose());
}

Eigen::Matrix4d build_drift(const MarkovCoefficients& c) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  m(0, 0) = 2.0 * c.lambda;
  m(0, 1) = kHbar / (2.0 * c.m);
  m(1, 0) = -2.0 * c.m * c.omega_c_eff_sq / kHbar;
  m(2, 3) = 2.0 * kHbar / c.m;
  m(3, 2) = -c.m * c.omega_d_sq / (2.0 * kHbar);
  return m;
}

DriftSpectrum spectral_decompose(const MarkovCoefficients& c) {
  const double lam = c.lambda;
  const double oc2 = c.omega_c_eff_sq;
  if (!(std::abs(lam * lam - oc2) > 1e-10 * std::abs(oc2))) {
    throw ConfluentSpectrumError(
        "critical damping lambda == omega_c: projector decomposition degenerate");
  }
  if (!(c.omega_d > 1e-10 * c.omega)) {
    throw ConfluentSpectrumError(
        "omega_d too close to zero: relative-motion spectrum degenerate");
  }

  DriftSpectrum s;
  const Complex root = std::sqrt(Complex(lam * lam - oc2, 0.0));
  s.lambdas[0] = lam + root;
  s.lambdas[1] = lam - root;
  s.lambdas[2] = Complex(0.0, c.omega_d);
  s.lambdas[3] = Complex(0.0, -c.omega_d);

  for (int j = 0; j < 2; ++j) {
    const Complex lj = s.lambdas[j];
    const Complex pref = 1.0 / (1.0 - lj * lj / oc2);
    Eigen::Matrix4cd p = Eigen::Matrix4cd::Zero();
    p(0, 0) = -lj * lj / oc2;
    p(0, 1) = -kHbar * lj / (2.0 * c.m * oc2);
    p(1, 0) = 2.0 * c.m * lj / kHbar;
    p(1, 1) = 1.0;
    s.projectors[j] = pref * p;
  }
  for (int j = 2; j < 4; ++j) {
    const Complex lj = s.lambdas[j];
    Eigen::Matrix4cd p = Eigen::Matrix4cd::Zero();
    p(2, 2) = 0.5;
    p(2, 3) = kHbar / (c.m * lj);
    p(3, 2) = c.m * lj / (4.0 * kHbar);
    p(3, 3) = 0.5;
    s.projectors[j] = p;
  }
  return s;
}

Eigen::Matrix4d diffusion_matrix(const MarkovCoefficients& c) {
  Eigen::Matrix4d r = Eigen::Matrix4d::Zero();
  r(0, 0) = c.d_pp / kHbar;
  r(0, 1) = -c.d_px;
  r(1, 0) = -c.d_px;
  return r;
}

Propagator::Propagator(const MarkovCoefficients& coeffs)
    : coeffs_(coeffs),
      drift_(build_drift(coeffs)),
      spectrum_(spectral_decompose(coeffs)),
      diffusion_(diffusion_matrix(coeffs)) {}

Eigen::Matrix4d Propagator::exp_drift(double t, int sign) const {
  Eigen::Matrix4cd e = Eigen::Matrix4cd::Zero();
  for (int j = 0; j < 4; ++j) {
    e += std::exp(static_cast<double>(sign) * spectrum_.lambdas[j] * t) *
         spectrum_.projectors[j];
  }
  return real_part_checked(e, "exp_drift");
}

Eigen::Matrix4d Propagator::r2(double t) const {
  if (!(t >= 0.0)) throw DomainError("r2 requires t >= 0");
  Eigen::Matrix4cd acc = Eigen::Matrix4cd::Zero();
  const Eigen::Matrix4cd r = diffusion_.cast<Complex>();
  for (int k = 0; k < 2; ++k) {
    for (int l = 0; l < 2; ++l) {
      const Complex g = one_minus_exp_over(spectrum_.lambdas[k] + spectrum_.lambdas[l], t);
      acc += spectrum_.projectors[k].transpose() * r * spectrum_.projectors[l] * g;
    }
  }
  const Eigen::Matrix4d out = real_part_checked(acc, "r2");
  return 0.5 * (out + out.transpose());
}

Eigen::Matrix4d Propagator::r2_infinity() const {
  if (diffusion_.isZero(0.0)) return Eigen::Matrix4d::Zero();
  for (int k = 0; k < 2; ++k) {
    for (int l = 0; l < 2; ++l) {
      if (!((spectrum_.lambdas[k] + spectrum_.lambdas[l]).real() > 0.0)) {
        throw DivergenceError(
            "r2_infinity: undamped center-of-mass mode with nonzero diffusion");
      }
    }
  }
  Eigen::Matrix4cd acc = Eigen::Matrix4cd::Zero();
  const Eigen::Matrix4cd r = diffusion_.cast<Complex>();
  for (int k = 0; k < 2; ++k) {
    for (int l = 0; l < 2; ++l) {
      acc += spectrum_.projectors[k].transpose() * r * spectrum_.projectors[l] /
             (spectrum_.lambdas[k] + spectrum_.lambdas[l]);
    }
  }
  const Eigen::Matrix4d out = real_part_checked(acc, "r2_infinity");
  return 0.5 * (out + out.transpose());
}

Covariance4 Propagator::evolve_covariance(const Covariance4& sigma0, double t) const {
  if (sigma0.frame != Frame::CMR) {
    throw FrameError("evolve_covariance expects a CMR-frame covariance");
  }
  if (!(t >= 0.0)) throw DomainError("evolve_covariance requires t >= 0");
  const Eigen::Matrix4d e = exp_drift(t, -1);
  const Eigen::Matrix4d q0 = sigma_to_quadratic(sigma0.sigma);
  const Eigen::Matrix4d q = e.transpose() * q0 * e + r2(t);
  return Covariance4{quadratic_to_sigma(q), Frame::CMR};
}

Covariance4 Propagator::asymptotic_covariance(const Covariance4& sigma0, double t) const {
  if (sigma0.frame != Frame::CMR) {
    throw FrameError("asymptotic_covariance expects a CMR-frame covariance");
  }
  Eigen::Matrix4cd rot = Eigen::Matrix4cd::Zero();
  for (int j = 2; j < 4; ++j) {
    rot += std::exp(-spectrum_.lambdas[j] * t) * spectrum_.projectors[j];
  }
  const Eigen::Matrix4d e = real_part_checked(rot, "asymptotic rotation");
  const Eigen::Matrix4d q0 = sigma_to_quadratic(sigma0.sigma);
  const Eigen::Matrix4d q = e.transpose() * q0 * e + r2_infinity();
  return Covariance4{quadratic_to_sigma(q), Frame::CMR};
}

Complex Propagator::evaluate_characteristic(const Eigen::Vector4d& w, double t,
                                            const CharacteristicFn& initial_cf) const {
  if (std::abs(initial_cf(Eigen::Vector4d::Zero()) - Complex(1.0, 0.0)) > 1e-12) {
    throw DomainError("initial characteristic function must satisfy f(0) = 1");
  }
  const Eigen::Matrix4d e = exp_drift(t, -1);
  const Eigen::Vector4d w0 = e * w;
  const double quad = w.dot(r2(t) * w);
  return initial_cf(w0) * std::exp(-quad);
}

}  // namespace hpz
