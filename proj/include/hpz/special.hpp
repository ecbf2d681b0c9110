#pragma once

#include <complex>

#include "hpz/errors.hpp"

namespace hpz {

using Complex = std::complex<double>;

// Everything internal is nondimensional: hbar = m = Omega = 1 unless a
// formula carries the symbol explicitly.
inline constexpr double kHbar = 1.0;

// Below this k_B T / (hbar Omega) the finite-temperature digamma kernel is
// replaced by its zero-temperature limit: both digamma terms grow like
// ln(1/nu) and cancel catastrophically, while the closed zero-T form is exact.
inline constexpr double kZeroTemperatureThreshold = 1e-8;

// Roots of z^3 + Omega_c z^2 + Omega^2 z + (Omega^2 Omega_c - 2 gamma Omega_c^2).
// z1 is the distinguished bath-relaxation root: the real one when a conjugate
// pair exists (z2 carries the positive imaginary part, z3 == conj(z2)
// bitwise), the most negative otherwise. For Omega_c >= 2 Omega this is
// exactly ascending-real-part order.
struct CubicRoots {
  Complex z1, z2, z3;

  double min_pairwise_distance() const {
    return std::min({std::abs(z1 - z2), std::abs(z1 - z3), std::abs(z2 - z3)});
  }
  double max_real_part() const {
    return std::max({z1.real(), z2.real(), z3.real()});
  }
};

// Companion-matrix eigenvalues plus one Newton polish per root; robust both
// near the conjugate-pair coalescence at gamma -> 0 and near gamma_crit.
// Throws DomainError on invalid parameters, NonConvergenceError if the
// polished residual exceeds 1e-10 * max(1, Omega_c^3).
CubicRoots solve_cubic(double omega, double omega_c, double gamma);

// Psi(z) = Gamma'(z)/Gamma(z). Upward recurrence into |z| >= 32 followed by
// the Bernoulli asymptotic series; reflection for Re(z) < 1/2. Relative
// accuracy ~1e-13 away from poles. Throws PoleError within 1e-12 of a
// non-positive integer.
Complex digamma(Complex z);

// Which closed form of the thermal kernel K(z, nu) to use.
enum class KernelBranch {
  FiniteT,    // Psi(1 - z/nu) - Psi(Omega_c/nu)
  ZeroT,      // (1/2) ln(z^2/Omega_c^2), principal branch of log(-z/Omega_c)
  Classical,  // nu / Omega_c
  Auto,       // ZeroT when k_B T/(hbar Omega) < kZeroTemperatureThreshold
};

// Thermal bath kernel entering the diffusion coefficients; nu = 2 pi k_B T / hbar.
// Requires Re(z) <= 0 (z != 0 on the zero-T branch). Conjugate-symmetric:
// K(conj z, nu) = conj K(z, nu).
Complex bath_kernel(Complex z, double nu, double omega_c,
                    KernelBranch branch = KernelBranch::Auto,
                    double omega = 1.0);

}  // namespace hpz
