#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "hpz/special.hpp"

using hpz::Complex;
using hpz::CubicRoots;

namespace {

Complex poly(double omega, double omega_c, double gamma, Complex z) {
  const double c2 = omega_c, c1 = omega * omega;
  const double c0 = omega * omega * omega_c - 2.0 * gamma * omega_c * omega_c;
  return ((z + c2) * z + c1) * z + c0;
}

constexpr double kEuler = 0.57721566490153286;

}  // namespace

TEST_CASE("cubic roots at the stock parameter set") {
  // Omega_c/Omega = 40, gamma/Omega = 1/128.
  const CubicRoots r = hpz::solve_cubic(1.0, 40.0, 1.0 / 128.0);
  CHECK(r.z1.real() == doctest::Approx(-39.984372558690027).epsilon(1e-12));
  CHECK(r.z1.imag() == 0.0);
  CHECK(r.z2.real() == doctest::Approx(-0.0078137206549863).epsilon(1e-10));
  CHECK(r.z2.imag() == doctest::Approx(0.61244225057756986).epsilon(1e-12));
  CHECK(r.z3 == std::conj(r.z2));  // bitwise by construction
}

TEST_CASE("gamma = 0 factorizes into (z + Omega_c)(z^2 + Omega^2)") {
  const CubicRoots r = hpz::solve_cubic(1.0, 40.0, 0.0);
  CHECK(std::abs(r.z1 - Complex(-40.0, 0.0)) < 1e-12);
  CHECK(std::abs(r.z2 - Complex(0.0, 1.0)) < 1e-12);
  CHECK(std::abs(r.z3 - Complex(0.0, -1.0)) < 1e-12);
  // tie-break: positive imaginary part listed as z2
  CHECK(r.z2.imag() > 0.0);
}

TEST_CASE("critical coupling puts a root at the origin") {
  const double gamma_crit = 1.0 / 80.0;  // Omega^2 / (2 Omega_c), Omega_c = 40
  const CubicRoots r = hpz::solve_cubic(1.0, 40.0, gamma_crit);
  const double closest =
      std::min({std::abs(r.z1), std::abs(r.z2), std::abs(r.z3)});
  CHECK(closest < 1e-10);
}

TEST_CASE("Vieta relations and ordering across a random parameter sweep") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double omega_c = 1.0 + 99.0 * u01(rng);
    const double gamma_crit = 1.0 / (2.0 * omega_c);
    const double gamma = gamma_crit * u01(rng) * 0.999;
    const CubicRoots r = hpz::solve_cubic(1.0, omega_c, gamma);

    const Complex sum = r.z1 + r.z2 + r.z3;
    const Complex pair_sum = r.z1 * r.z2 + r.z2 * r.z3 + r.z3 * r.z1;
    const Complex prod = r.z1 * r.z2 * r.z3;
    CHECK(std::abs(sum + omega_c) < 1e-10);
    CHECK(std::abs(pair_sum - 1.0) < 1e-10);
    CHECK(std::abs(prod + (omega_c - 2.0 * gamma * omega_c * omega_c)) < 1e-10);

    if (r.z2.imag() != 0.0) {
      // conjugate-pair case: distinguished real root first, then the pair
      CHECK(r.z1.imag() == 0.0);
      CHECK(r.z2.imag() > 0.0);
      CHECK(r.z3 == std::conj(r.z2));
    } else {
      CHECK(r.z1.real() <= r.z2.real());
      CHECK(r.z2.real() <= r.z3.real());
    }
    // Away from the strongly-coupled low-cutoff corner the bath root is also
    // the leftmost one.
    if (omega_c >= 2.0) {
      CHECK(r.z1.real() <= r.z2.real() + 1e-12);
      CHECK(r.z1.real() <= r.z3.real() + 1e-12);
    }

    for (const Complex& z : {r.z1, r.z2, r.z3}) {
      CHECK(std::abs(poly(1.0, omega_c, gamma, z)) <
            1e-10 * std::max(1.0, omega_c * omega_c * omega_c));
    }
  }
}

TEST_CASE("cubic rejects invalid parameters") {
  CHECK_THROWS_AS(hpz::solve_cubic(0.0, 40.0, 0.0), hpz::DomainError);
  CHECK_THROWS_AS(hpz::solve_cubic(1.0, -1.0, 0.0), hpz::DomainError);
  CHECK_THROWS_AS(hpz::solve_cubic(1.0, 40.0, -0.1), hpz::DomainError);
}

TEST_CASE("digamma at classic points") {
  CHECK(hpz::digamma(Complex(1.0, 0.0)).real() ==
        doctest::Approx(-kEuler).epsilon(1e-13));
  CHECK(hpz::digamma(Complex(1.0, 0.0)).imag() == 0.0);
  CHECK(hpz::digamma(Complex(2.0, 0.0)).real() ==
        doctest::Approx(1.0 - kEuler).epsilon(1e-13));
}

TEST_CASE("digamma against independently computed reference values") {
  // References computed with a 40-digit recurrence + asymptotic series oracle.
  struct Ref { Complex z, psi; };
  const Ref refs[] = {
      {{0.5, 3.0}, {1.09388653167884404, 1.57079630633555063}},
      {{-1.5, 0.5}, {0.731892637354522686, 2.64065951997751459}},
      {{0.25, -0.75}, {-0.336397624256978346, -1.95001317899832358}},
      {{12.5, 40.0}, {3.7319483552277125, 1.27932637886296967}},
  };
  for (const Ref& ref : refs) {
    const Complex got = hpz::digamma(ref.z);
    CHECK(std::abs(got - ref.psi) / std::abs(ref.psi) < 1e-12);
  }
}

TEST_CASE("digamma recurrence residual on a random complex grid") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> re(-20.0, 20.0);
  std::uniform_real_distribution<double> im(-20.0, 20.0);
  int tested = 0;
  while (tested < 500) {
    const Complex z(re(rng), im(rng));
    const double nearest = std::round(z.real());
    if (nearest <= 0.0 && std::abs(z.real() - nearest) < 1e-3 &&
        std::abs(z.imag()) < 1e-3) {
      continue;  // stay away from poles, the residual is unbounded there
    }
    const Complex lhs = hpz::digamma(z + 1.0) - hpz::digamma(z);
    CHECK(std::abs(lhs - 1.0 / z) < 1e-11);
    ++tested;
  }
}

TEST_CASE("digamma conjugate symmetry is exact") {
  const Complex z(0.3, 2.7);
  CHECK(hpz::digamma(std::conj(z)) == std::conj(hpz::digamma(z)));
}

TEST_CASE("digamma pole detection") {
  CHECK_THROWS_AS(hpz::digamma(Complex(0.0, 0.0)), hpz::PoleError);
  CHECK_THROWS_AS(hpz::digamma(Complex(-3.0, 0.0)), hpz::PoleError);
  CHECK_THROWS_AS(hpz::digamma(Complex(-5.0 + 1e-13, 1e-14)), hpz::PoleError);
  CHECK_NOTHROW(hpz::digamma(Complex(-3.0, 0.5)));
}

TEST_CASE("bath kernel zero-temperature branch") {
  const Complex k =
      hpz::bath_kernel(Complex(-1.0, 0.0), 0.0, 40.0, hpz::KernelBranch::ZeroT);
  CHECK(k.real() == doctest::Approx(-std::log(40.0)).epsilon(1e-14));
  CHECK(k.imag() == 0.0);
}

TEST_CASE("bath kernel approaches nu/Omega_c in the classical regime") {
  // Fast root of the stock cubic, k_B T / (hbar Omega) = 1e4.
  const Complex z1(-39.984372558690027, 0.0);
  const double nu = 2.0 * std::numbers::pi * 1e4;
  const Complex finite = hpz::bath_kernel(z1, nu, 40.0, hpz::KernelBranch::FiniteT);
  const Complex classical =
      hpz::bath_kernel(z1, nu, 40.0, hpz::KernelBranch::Classical);
  CHECK(std::abs(finite - classical) / std::abs(classical) < 0.01);
}

TEST_CASE("bath kernel finite-T value at the slow root") {
  const Complex z2(-0.0078137206549863, 0.61244225057756986);
  const double nu = 2.0 * std::numbers::pi;
  const Complex got = hpz::bath_kernel(z2, nu, 40.0, hpz::KernelBranch::FiniteT);
  const Complex ref(-2.3342929962461093, -0.15905730638697392);
  CHECK(std::abs(got - ref) < 1e-12);
  // Schwarz reflection along real nu.
  const Complex conj_got =
      hpz::bath_kernel(std::conj(z2), nu, 40.0, hpz::KernelBranch::FiniteT);
  CHECK(conj_got == std::conj(got));
}

TEST_CASE("bath kernel finite-T branch converges monotonically to zero-T") {
  const Complex z(-0.3, 0.8);
  const Complex zero_t = hpz::bath_kernel(z, 0.0, 40.0, hpz::KernelBranch::ZeroT);
  double prev = 1e300;
  for (int k = 0; k < 12; ++k) {
    const double nu = 1e-1 * std::pow(0.5, k);
    const Complex finite =
        hpz::bath_kernel(z, nu, 40.0, hpz::KernelBranch::FiniteT);
    const double dist = std::abs(finite - zero_t);
    CHECK(dist < prev);
    prev = dist;
  }
  CHECK(prev < 1e-5);
}

TEST_CASE("bath kernel auto branch switches at the threshold") {
  const Complex z(-1.0, 0.0);
  const double nu_below = 2.0 * std::numbers::pi * 1e-9;
  const Complex auto_val = hpz::bath_kernel(z, nu_below, 40.0);
  const Complex zero_val = hpz::bath_kernel(z, 0.0, 40.0, hpz::KernelBranch::ZeroT);
  CHECK(auto_val == zero_val);
}

TEST_CASE("bath kernel domain errors") {
  CHECK_THROWS_AS(hpz::bath_kernel(Complex(0.1, 0.0), 1.0, 40.0),
                  hpz::DomainError);
  CHECK_THROWS_AS(
      hpz::bath_kernel(Complex(0.0, 0.0), 0.0, 40.0, hpz::KernelBranch::ZeroT),
      hpz::DomainError);
}
