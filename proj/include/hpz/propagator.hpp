#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>

#include "hpz/coefficients.hpp"

namespace hpz {

// Phase-space variable ordering of a 4x4 covariance matrix.
//   CMR: (center-of-mass, relative) canonical pairs (X, P, x, p)
//   Lab: per-oscillator pairs (x1, p1, x2, p2)
enum class Frame { CMR, Lab };

struct Covariance4 {
  Eigen::Matrix4d sigma = Eigen::Matrix4d::Zero();
  Frame frame = Frame::CMR;

  // Validates symmetry and positive definiteness.
  static Covariance4 make(const Eigen::Matrix4d& sigma, Frame frame);
};

// 4x4 symplectic form, block-diagonal [[0,1],[-1,0]] per mode.
const Eigen::Matrix4d& symplectic_form();

// Characteristic-function quadratic form Q of exp(-w^T Q w) from a
// covariance matrix and back: Q = (1/4) Omega^T sigma Omega.
Eigen::Matrix4d sigma_to_quadratic(const Eigen::Matrix4d& sigma);
Eigen::Matrix4d quadratic_to_sigma(const Eigen::Matrix4d& q);

// Generator of the characteristic-curve flow dw/dt = M w in CMR ordering.
// Block diagonal: the damped center-of-mass pair and the free relative pair.
Eigen::Matrix4d build_drift(const MarkovCoefficients& coeffs);

// Eigenvalues Lambda_1..4 and spectral projectors of the drift matrix,
// from the closed forms (no generic eigensolver involved):
//   Lambda_{1,2} = lambda +- sqrt(lambda^2 - omega_c^2), Lambda_{3,4} = +-i omega_d.
struct DriftSpectrum {
  std::array<Complex, 4> lambdas;
  std::array<Eigen::Matrix4cd, 4> projectors;
};

// Throws ConfluentSpectrumError at critical damping (lambda == omega_c) or
// omega_d == 0, where the projector decomposition degenerates.
DriftSpectrum spectral_decompose(const MarkovCoefficients& coeffs);

// Constant diffusion matrix R of the quadratic source term, upper-left block
// [[D_pp/hbar, -D_px], [-D_px, 0]]; symmetric by construction.
Eigen::Matrix4d diffusion_matrix(const MarkovCoefficients& coeffs);

using CharacteristicFn = std::function<Complex(const Eigen::Vector4d&)>;

// Immutable closed-form propagator; shareable across threads.
class Propagator {
 public:
  explicit Propagator(const MarkovCoefficients& coeffs);

  const MarkovCoefficients& coeffs() const { return coeffs_; }
  const Eigen::Matrix4d& drift() const { return drift_; }
  const DriftSpectrum& spectrum() const { return spectrum_; }
  const Eigen::Matrix4d& diffusion() const { return diffusion_; }

  // exp(sign M t) = sum_j exp(sign Lambda_j t) P_j, imaginary residue checked.
  Eigen::Matrix4d exp_drift(double t, int sign = -1) const;

  // Accumulated diffusion quadratic form:
  //   R2(t) = sum_{k,l=1,2} P_k^T R P_l (1 - exp(-(L_k+L_l)t)) / (L_k+L_l),
  // real symmetric, R2(0) = 0.
  Eigen::Matrix4d r2(double t) const;

  // t -> infinity limit; throws DivergenceError when the center-of-mass
  // damping cannot absorb a nonzero diffusion (lambda <= 0 with R != 0).
  Eigen::Matrix4d r2_infinity() const;

  // Closed-form covariance evolution with zero first moments:
  //   Q(t) = exp(-Mt)^T Q(0) exp(-Mt) + R2(t)  in the quadratic form.
  Covariance4 evolve_covariance(const Covariance4& sigma0, double t) const;

  // Asymptotic form: stationary center-of-mass block from R2(inf), relative
  // block transported by the undamped rotation at omega_d.
  Covariance4 asymptotic_covariance(const Covariance4& sigma0, double t) const;

  // Pointwise characteristic-function evolution for an arbitrary (possibly
  // non-Gaussian) initial characteristic function with initial_cf(0) = 1.
  Complex evaluate_characteristic(const Eigen::Vector4d& w, double t,
                                  const CharacteristicFn& initial_cf) const;

 private:
  MarkovCoefficients coeffs_;
  Eigen::Matrix4d drift_;
  DriftSpectrum spectrum_;
  Eigen::Matrix4d diffusion_;
};

}  // namespace hpz
