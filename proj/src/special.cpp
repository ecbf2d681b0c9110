#include "hpz/special.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

namespace hpz {

namespace {

// B_{2n}/(2n) for the asymptotic series of Psi.
constexpr std::array<double, 8> kBernoulliOver2n = {
    1.0 / 12.0,        -1.0 / 120.0,       1.0 / 252.0,  -1.0 / 240.0,
    1.0 / 132.0,       -691.0 / 32760.0,   1.0 / 12.0,   -3617.0 / 8160.0};

// Valid once |z| >= 32 and Re(z) > 0.
Complex digamma_asymptotic(Complex z) {
  const Complex inv = 1.0 / z;
  const Complex inv2 = inv * inv;
  Complex sum = std::log(z) - 0.5 * inv;
  Complex power = inv2;
  for (double c : kBernoulliOver2n) {
    sum -= c * power;
    power *= inv2;
  }
  return sum;
}

// Principal value of pi*cot(pi z) for Im(z) >= 0, overflow-free: the
// exponential e^{2 pi i z} has magnitude <= 1 in the upper half plane.
Complex pi_cot_pi(Complex z) {
  if (z.imag() == 0.0) {
    const double pix = std::numbers::pi * z.real();
    return Complex(std::numbers::pi * std::cos(pix) / std::sin(pix), 0.0);
  }
  const Complex e = std::exp(Complex(0.0, 2.0 * std::numbers::pi) * z);
  return Complex(0.0, std::numbers::pi) * (e + 1.0) / (e - 1.0);
}

Complex digamma_upper_half(Complex z) {
  if (z.real() < 0.5) {
    // Reflection: Psi(z) = Psi(1 - z) - pi cot(pi z).
    return digamma_upper_half(1.0 - z) - pi_cot_pi(z);
  }
  Complex shift(0.0, 0.0);
  while (std::abs(z) < 32.0) {
    shift -= 1.0 / z;
    z += 1.0;
  }
  return digamma_asymptotic(z) + shift;
}

Complex horner(const std::vector<double>& c, Complex z) {
  Complex v(c[0], 0.0);
  for (std::size_t i = 1; i < c.size(); ++i) v = v * z + c[i];
  return v;
}

double horner(const std::vector<double>& c, double x) {
  double v = c[0];
  for (std::size_t i = 1; i < c.size(); ++i) v = v * x + c[i];
  return v;
}

}  // namespace

Complex digamma(Complex z) {
  const double nearest = std::round(z.real());
  if (nearest <= 0.0 && std::abs(z.real() - nearest) <= 1e-12 &&
      std::abs(z.imag()) <= 1e-12) {
    std::ostringstream msg;
    msg << "digamma pole at z = (" << z.real() << ", " << z.imag() << ")";
    throw PoleError(msg.str());
  }
  // Work in the closed upper half plane so every exponential is bounded;
  // this also makes Psi(conj z) == conj Psi(z) hold bitwise.
  if (z.imag() < 0.0) return std::conj(digamma_upper_half(std::conj(z)));
  return digamma_upper_half(z);
}

CubicRoots solve_cubic(double omega, double omega_c, double gamma) {
  if (!(omega > 0.0) || !(omega_c > 0.0) || !(gamma >= 0.0)) {
    throw DomainError("solve_cubic requires omega > 0, omega_c > 0, gamma >= 0");
  }
  const double c2 = omega_c;
  const double c1 = omega * omega;
  const double c0 = omega * omega * omega_c - 2.0 * gamma * omega_c * omega_c;
  const std::vector<double> poly = {1.0, c2, c1, c0};
  const std::vector<double> dpoly = {3.0, 2.0 * c2, c1};

  Eigen::Matrix3d comp = Eigen::Matrix3d::Zero();
  comp(0, 2) = -c0;
  comp(1, 0) = 1.0;
  comp(1, 2) = -c1;
  comp(2, 1) = 1.0;
  comp(2, 2) = -c2;
  Eigen::EigenSolver<Eigen::Matrix3d> es(comp, /*computeEigenvectors=*/false);
  const auto ev = es.eigenvalues();

  std::vector<Complex> roots;
  Complex pair_base(0.0, 0.0);
  bool have_pair = false;
  for (int i = 0; i < 3; ++i) {
    const Complex zi(ev(i).real(), ev(i).imag());
    if (zi.imag() > 0.0) {
      pair_base = zi;
      have_pair = true;
    } else if (zi.imag() == 0.0) {
      // Real root: polish along the real axis so it stays exactly real.
      double x = zi.real();
      const double d = horner(dpoly, x);
      if (std::abs(d) > 0.0) x -= horner(poly, x) / d;
      roots.emplace_back(x, 0.0);
    }
  }
  if (have_pair) {
    const Complex d = horner(dpoly, pair_base);
    if (std::abs(d) > 0.0) pair_base -= horner(poly, pair_base) / d;
    // The real root must be z1: the coefficient formulas distinguish it, and
    // only the (z2, z3) = conjugate-pair assignment keeps them real. For
    // Omega_c >= 2 Omega this coincides with ordering by real part.
    roots.push_back(pair_base);
    roots.push_back(std::conj(pair_base));  // bitwise conjugate by construction
  } else {
    std::sort(roots.begin(), roots.end(),
              [](const Complex& a, const Complex& b) { return a.real() < b.real(); });
  }

  const double tol = 1e-10 * std::max(1.0, omega_c * omega_c * omega_c);
  for (const Complex& r : roots) {
    const double res = std::abs(horner(poly, r));
    if (!(res < tol)) {
      std::ostringstream msg;
      msg << "cubic root residual " << res << " exceeds " << tol << " at z = ("
          << r.real() << ", " << r.imag() << ")";
      throw NonConvergenceError(msg.str());
    }
  }
  return CubicRoots{roots[0], roots[1], roots[2]};
}

Complex bath_kernel(Complex z, double nu, double omega_c, KernelBranch branch,
                    double omega) {
  if (z.real() > 0.0) {
    throw DomainError("bath_kernel requires Re(z) <= 0");
  }
  if (!(nu >= 0.0) || !(omega_c > 0.0)) {
    throw DomainError("bath_kernel requires nu >= 0 and omega_c > 0");
  }
  if (branch == KernelBranch::Auto) {
    const double temperature = nu / (2.0 * std::numbers::pi * omega);
    branch = (temperature < kZeroTemperatureThreshold) ? KernelBranch::ZeroT
                                                       : KernelBranch::FiniteT;
  }
  switch (branch) {
    case KernelBranch::FiniteT:
      return digamma(1.0 - z / nu) - digamma(Complex(omega_c / nu, 0.0));
    case KernelBranch::ZeroT:
      if (z == Complex(0.0, 0.0)) {
        throw DomainError("bath_kernel zero-T branch diverges at z = 0");
      }
      return std::log(-z / omega_c);
    case KernelBranch::Classical:
      return Complex(nu / omega_c, 0.0);
    case KernelBranch::Auto:
      break;
  }
  throw DomainError("bath_kernel: unreachable branch");
}

}  // namespace hpz
