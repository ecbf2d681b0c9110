#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hpz/special.hpp"

namespace hpz {

// Dimensionless model parameters. All ratios follow the nondimensional
// convention hbar = m = Omega = 1; kappa is measured in units of m Omega^2.
struct PhysicalParams {
  double omega = 1.0;        // oscillator frequency (keep at 1)
  double omega_c = 0.0;      // bath cutoff, units of omega
  double gamma = 0.0;        // bath coupling, units of omega
  double temperature = 0.0;  // k_B T / (hbar Omega)
  double kappa = 0.0;        // inter-oscillator coupling / (m Omega^2)
  double m = 1.0;            // single-oscillator mass (keep at 1)

  double big_m() const { return 2.0 * m; }   // center-of-mass mass
  double mu() const { return 0.5 * m; }      // relative mass
  double gamma_crit() const { return omega * omega / (2.0 * omega_c); }
  double kappa_crit() const { return -0.25; }  // units of m Omega^2
  double boltzmann_t() const { return temperature * omega; }  // k_B T, hbar=1
  double nu() const;  // 2 pi k_B T / hbar

  // Hard preconditions only (positivity, finiteness). Stability bounds
  // (gamma < gamma_crit, kappa >= kappa_crit) are judged by check_stability
  // so that unstable parameter sets can still be diagnosed and reported.
  void validate() const;
};

// The six closed-form coefficient sets.
enum class RegimeTag {
  ExactFiniteT,
  ExactZeroT,
  ExactClassical,
  WeakFiniteT,
  WeakZeroT,
  WeakClassical,
};

const char* to_string(RegimeTag tag);
std::optional<RegimeTag> regime_from_string(std::string_view s);

// Master-equation constants and the dynamical parameters derived from them.
// All four constants are real; complex root arithmetic is checked to leave
// an imaginary residue below 1e-10 before truncation.
struct MarkovCoefficients {
  double A = 0.0;  // frequency renormalization, mass * frequency^2
  double B = 0.0;  // damping, frequency
  double C = 0.0;  // anomalous diffusion, hbar * frequency
  double D = 0.0;  // momentum diffusion, hbar * mass * frequency^2

  double lambda = 0.0;          // B / 2
  double omega_c_eff_sq = 0.0;  // Omega^2 + A/(2m)
  double omega_d_sq = 0.0;      // Omega^2 + 4 kappa_phys / m
  double omega_c_eff = 0.0;     // sqrt of the above when nonnegative, else NaN
  double omega_d = 0.0;
  double d_px = 0.0;  // C = 2 hbar D_px (sign kept, no absolute value)
  double d_pp = 0.0;  // D = hbar D_pp

  double omega = 1.0;  // copied from the parameters that produced this set
  double m = 1.0;

  RegimeTag regime = RegimeTag::ExactFiniteT;
  std::optional<std::string> warning;  // regime-mismatch notice, if any
};

struct StabilityReport {
  bool roots_stable = false;      // Re z_i < 0 for all roots
  bool drift_stable = false;      // lambda >= 0, omega_c^2 >= 0, omega_d^2 >= 0
  bool diffusion_stable = false;  // D_pp >= 0 and D_pp + 8 D_px lambda m >= 0
  // Signed distance to each bound; positive means satisfied.
  std::vector<std::pair<std::string, double>> margins;

  bool overall() const { return roots_stable && drift_stable && diffusion_stable; }
};

// A = -M z1 (z2 + z3), B = -(z2 + z3) (Vieta-reduced stationary forms).
// Throws StabilityError if any root has strictly positive real part.
std::pair<double, double> exact_ab(const CubicRoots& roots, double big_m);

// Temperature-dependent constants from the root parameterization and the
// thermal kernel. branch == ZeroT drops the k_B T terms entirely (exact
// zero-temperature forms); Auto keeps them and lets the kernel switch.
// Throws DegenerateRootsError when min |z_i - z_j| < 1e-8 * Omega.
std::pair<double, double> exact_cd(const CubicRoots& roots,
                                   const PhysicalParams& params,
                                   KernelBranch branch = KernelBranch::Auto);

// Dispatch to the requested closed-form set and populate derived fields.
MarkovCoefficients coefficients(const PhysicalParams& params, RegimeTag regime);

StabilityReport check_stability(const MarkovCoefficients& coeffs,
                                const CubicRoots& roots);

}  // namespace hpz
