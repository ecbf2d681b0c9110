#pragma once

#include <Eigen/Dense>

#include "hpz/propagator.hpp"

namespace hpz {

// Default tolerance for positivity / separability verdicts; the closed-form
// pipeline is accurate to ~1e-10, figure reproduction needs slack at
// transition points. CLI-overridable.
inline constexpr double kDefaultVerdictTol = 1e-9;

// Fixed linear map between CMR and per-oscillator (lab) phase-space
// coordinates, r = W w; symplectic.
const Eigen::Matrix4d& frame_map_w();
const Eigen::Matrix4d& frame_map_w_inverse();

// sigma_lab = W sigma_cmr W^T. Symplectic spectrum is preserved.
Covariance4 cmr_to_lab(const Covariance4& sigma_cmr);
Covariance4 lab_to_cmr(const Covariance4& sigma_lab);

// The two positive eigenvalues of i Omega sigma, ascending. Computed as
// square roots of the eigenvalues of -(Omega sigma)^2.
struct SymplecticSpectrum {
  double nu1 = 0.0;
  double nu2 = 0.0;
};

SymplecticSpectrum symplectic_eigenvalues(const Covariance4& sigma);

// true iff nu1 > 1 - tol and nu2 > 1 - tol (physical Gaussian state).
bool positivity_check(const SymplecticSpectrum& spectrum,
                      double tol = kDefaultVerdictTol);

// Tr rho^2 = 1 / (nu1 nu2), in (0, 1] for physical states.
double purity(const SymplecticSpectrum& spectrum);

// von Neumann entropy of the two-mode Gaussian state, natural-log units.
// Throws DomainError if a symplectic eigenvalue is below 1 - tol.
double entropy_total(const SymplecticSpectrum& spectrum,
                     double tol = kDefaultVerdictTol);

enum class Subsystem { A, B };

// Single-oscillator entropy from the 2x2 diagonal block of a lab-frame
// covariance; nu_X = sqrt(det block).
double entropy_sub(const Covariance4& sigma_lab, Subsystem subsystem,
                   double tol = kDefaultVerdictTol);

// Quantum mutual information S_A + S_B - S_{A+B} >= 0 (clipped at 0 when
// within tol below; NumericError beyond).
double mutual_information(const Covariance4& sigma_lab,
                          double tol = kDefaultVerdictTol);

// Momentum reflection of the second oscillator, sigma -> tau sigma tau with
// tau = diag(1,1,1,-1); an involution. Lab frame only.
Covariance4 partial_transpose(const Covariance4& sigma_lab);

// Trace norm of a Gaussian operator with symplectic spectrum (nu1, nu2):
//   4 / ((|nu1-1| - (1+nu1)) (|nu2-1| - (1+nu2))).
double gaussian_trace_norm(double nu1, double nu2);

// E_N = log2 of the trace norm of the partial transpose; zero exactly on
// separable states (two-mode Gaussian case).
double log_negativity(const Covariance4& sigma_lab);

// p * EPR covariance in the CMR frame: cosh(2 r_s) on the diagonal,
// +sinh(2 r_s) in the position sector, -sinh(2 r_s) in the momentum sector.
// Symplectic spectrum (p, p). Requires p >= 1.
Covariance4 epr_initial(double p, double r_s);

// Per-time-point record of every information quantity the runner can emit.
// Entropy-based fields are NaN when the state is nonphysical (nu_i < 1).
struct InfoReport {
  double t = 0.0;
  double nu1 = 0.0, nu2 = 0.0;    // symplectic spectrum of the full state
  double nu_a = 0.0, nu_b = 0.0;  // subsystem spectra
  double nu1_pt = 0.0;            // smallest partial-transpose eigenvalue
  double purity = 0.0;
  double s_total = 0.0, s_a = 0.0, s_b = 0.0;
  double c_xi = 0.0;  // mutual information, nats
  double e_n = 0.0;   // logarithmic negativity, log2 units
  bool positive = false;
  bool separable = false;
};

// Full pipeline for one evolved CMR covariance.
InfoReport info_report(const Covariance4& sigma_cmr, double t,
                       double tol = kDefaultVerdictTol);

}  // namespace hpz
