#include "hpz/coefficients.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <tuple>

namespace hpz {

namespace {

constexpr double kRealnessTolerance = 1e-10;

double to_real_checked(Complex v, const char* what) {
  if (!(std::abs(v.imag()) < kRealnessTolerance)) {
    std::ostringstream msg;
    msg << what << " has imaginary residue " << v.imag();
    throw NumericError(msg.str());
  }
  return v.real();
}

void require_no_growing_root(const CubicRoots& roots, const char* what) {
  if (roots.max_real_part() > 0.0) {
    std::ostringstream msg;
    msg << what << ": a cubic root has positive real part (max Re = "
        << roots.max_real_part() << "), dynamics unstable";
    throw StabilityError(msg.str());
  }
}

std::string classical_warning(const PhysicalParams& p) {
  std::ostringstream msg;
  msg << "classical regime requested with k_B T = " << p.boltzmann_t()
      << " below hbar Omega_c = " << p.omega_c
      << "; the high-temperature forms are extrapolations here";
  return msg.str();
}

// Weak-coupling finite-temperature anomalous diffusion constant:
//   C_w = (hbar gamma Oc^2 / pi (O^2 + Oc^2))
//         * [ nu/Oc + Psi(1 - i O/nu) + Psi(1 + i O/nu) - 2 Psi(1 + Oc/nu) ].
// The digamma pair is 2 Re Psi(1 + i O/nu), so the bracket is real; it
// reduces to -2 ln(Oc/O) at T -> 0 and to nu/Oc in the classical limit.
double weak_c_finite_t(const PhysicalParams& p) {
  const double nu = p.nu();
  const Complex psi_pair = digamma(Complex(1.0, p.omega / nu));
  const double bracket = nu / p.omega_c + 2.0 * psi_pair.real() -
                         2.0 * digamma(Complex(1.0 + p.omega_c / nu, 0.0)).real();
  return kHbar * p.gamma * p.omega_c * p.omega_c * bracket /
         (std::numbers::pi * (p.omega * p.omega + p.omega_c * p.omega_c));
}

double coth(double x) { return 1.0 / std::tanh(x); }

}  // namespace

double PhysicalParams::nu() const {
  return 2.0 * std::numbers::pi * boltzmann_t() / kHbar;
}

void PhysicalParams::validate() const {
  if (!(omega > 0.0)) throw DomainError("omega must be positive");
  if (!(omega_c > 0.0)) throw DomainError("omega_c must be positive");
  if (!(gamma >= 0.0)) throw DomainError("gamma must be nonnegative");
  if (!(temperature >= 0.0)) throw DomainError("temperature must be nonnegative");
  if (!(m > 0.0)) throw DomainError("m must be positive");
  if (!std::isfinite(kappa)) throw DomainError("kappa must be finite");
}

const char* to_string(RegimeTag tag) {
  switch (tag) {
    case RegimeTag::ExactFiniteT: return "exact-finite-T";
    case RegimeTag::ExactZeroT: return "exact-zero-T";
    case RegimeTag::ExactClassical: return "exact-classical";
    case RegimeTag::WeakFiniteT: return "weak-finite-T";
    case RegimeTag::WeakZeroT: return "weak-zero-T";
    case RegimeTag::WeakClassical: return "weak-classical";
  }
  return "?";
}

std::optional<RegimeTag> regime_from_string(std::string_view s) {
  for (RegimeTag tag :
       {RegimeTag::ExactFiniteT, RegimeTag::ExactZeroT, RegimeTag::ExactClassical,
        RegimeTag::WeakFiniteT, RegimeTag::WeakZeroT, RegimeTag::WeakClassical}) {
    if (s == to_string(tag)) return tag;
  }
  return std::nullopt;
}

std::pair<double, double> exact_ab(const CubicRoots& roots, double big_m) {
  require_no_growing_root(roots, "exact_ab");
  const Complex s23 = roots.z2 + roots.z3;
  const double a = to_real_checked(-big_m * roots.z1 * s23, "A");
  const double b = to_real_checked(-s23, "B");
  return {a, b};
}

std::pair<double, double> exact_cd(const CubicRoots& roots,
                                   const PhysicalParams& params,
                                   KernelBranch branch) {
  require_no_growing_root(roots, "exact_cd");
  if (roots.min_pairwise_distance() < 1e-8 * params.omega) {
    std::ostringstream msg;
    msg << "nearly degenerate cubic roots (min separation "
        << roots.min_pairwise_distance() << "); coefficient denominators vanish";
    throw DegenerateRootsError(msg.str());
  }
  const Complex z1 = roots.z1, z2 = roots.z2, z3 = roots.z3;
  const double kt = (branch == KernelBranch::ZeroT) ? 0.0 : params.boltzmann_t();
  const double nu = (branch == KernelBranch::ZeroT) ? 0.0 : params.nu();
  const double big_m = params.big_m();
  const Complex k1 = bath_kernel(z1, nu, params.omega_c, branch, params.omega);
  const Complex k2 = bath_kernel(z2, nu, params.omega_c, branch, params.omega);
  const Complex k3 = bath_kernel(z3, nu, params.omega_c, branch, params.omega);
  const double pi = std::numbers::pi;
  const Complex s23 = z2 + z3;

  const Complex c = kt * s23 / z1
      + kHbar * s23 * (z1 * z1 + z2 * z3) / (pi * (z1 - z2) * (z1 - z3)) * k1
      + kHbar * (z1 + z3) * s23 * z2 / (pi * (z1 - z2) * (z3 - z2)) * k2
      + kHbar * (z1 + z2) * s23 * z3 / (pi * (z1 - z3) * (z2 - z3)) * k3;
  const Complex d = -kt * big_m * s23
      + kHbar * big_m * z1 * z1 * s23 * s23 / (pi * (z1 - z2) * (z1 - z3)) * k1
      + kHbar * big_m * (z1 + z3) * s23 * z2 * z2 / (pi * (z1 - z2) * (z3 - z2)) * k2
      + kHbar * big_m * (z1 + z2) * s23 * z3 * z3 / (pi * (z1 - z3) * (z2 - z3)) * k3;
  return {to_real_checked(c, "C"), to_real_checked(d, "D")};
}

MarkovCoefficients coefficients(const PhysicalParams& params, RegimeTag regime) {
  params.validate();
  MarkovCoefficients out;
  out.regime = regime;
  const double o2 = params.omega * params.omega;
  const double oc2 = params.omega_c * params.omega_c;
  const double big_m = params.big_m();

  switch (regime) {
    case RegimeTag::ExactFiniteT:
    case RegimeTag::ExactZeroT:
    case RegimeTag::ExactClassical: {
      const CubicRoots roots = solve_cubic(params.omega, params.omega_c, params.gamma);
      std::tie(out.A, out.B) = exact_ab(roots, big_m);
      if (regime == RegimeTag::ExactFiniteT) {
        std::tie(out.C, out.D) = exact_cd(roots, params, KernelBranch::Auto);
      } else if (regime == RegimeTag::ExactZeroT) {
        std::tie(out.C, out.D) = exact_cd(roots, params, KernelBranch::ZeroT);
      } else {
        require_no_growing_root(roots, "coefficients");
        const double kt = params.boltzmann_t();
        const Complex s23 = roots.z2 + roots.z3;
        out.C = to_real_checked(kt * s23 / roots.z1, "C");
        out.D = to_real_checked(-kt * big_m * s23, "D");
        if (params.boltzmann_t() < params.omega_c * kHbar) {
          out.warning = classical_warning(params);
        }
      }
      break;
    }
    case RegimeTag::WeakFiniteT:
    case RegimeTag::WeakZeroT:
    case RegimeTag::WeakClassical: {
      out.A = -2.0 * big_m * params.gamma * oc2 * params.omega_c / (oc2 + o2);
      out.B = 2.0 * params.gamma * oc2 / (oc2 + o2);
      if (regime == RegimeTag::WeakClassical) {
        out.C = 2.0 * params.gamma * params.omega_c * params.boltzmann_t() / (oc2 + o2);
        out.D = 2.0 * params.gamma * big_m * params.boltzmann_t() * oc2 / (oc2 + o2);
        if (params.boltzmann_t() < params.omega_c * kHbar) {
          out.warning = classical_warning(params);
        }
      } else if (regime == RegimeTag::WeakZeroT ||
                 params.temperature < kZeroTemperatureThreshold) {
        out.C = -2.0 * kHbar * params.gamma * oc2 *
                std::log(params.omega_c / params.omega) / (std::numbers::pi * (oc2 + o2));
        out.D = kHbar * big_m * params.gamma * oc2 * params.omega / (oc2 + o2);
      } else {
        out.C = weak_c_finite_t(params);
        out.D = kHbar * big_m * params.gamma * oc2 * params.omega *
                coth(kHbar * params.omega / (2.0 * params.boltzmann_t())) / (oc2 + o2);
      }
      break;
    }
  }

  out.omega = params.omega;
  out.m = params.m;
  out.lambda = 0.5 * out.B;
  out.omega_c_eff_sq = o2 + out.A / (2.0 * params.m);
  out.omega_d_sq = o2 * (1.0 + 4.0 * params.kappa);  // kappa in m Omega^2 units
  out.omega_c_eff = out.omega_c_eff_sq >= 0.0 ? std::sqrt(out.omega_c_eff_sq)
                                              : std::numeric_limits<double>::quiet_NaN();
  out.omega_d = out.omega_d_sq >= 0.0 ? std::sqrt(out.omega_d_sq)
                                      : std::numeric_limits<double>::quiet_NaN();
  out.d_px = out.C / (2.0 * kHbar);
  out.d_pp = out.D / kHbar;
  return out;
}

StabilityReport check_stability(const MarkovCoefficients& coeffs,
                                const CubicRoots& roots) {
  StabilityReport rep;
  const double root_margin = -roots.max_real_part();
  const double diffusion_combo =
      coeffs.d_pp + 8.0 * coeffs.d_px * coeffs.lambda * coeffs.m;
  rep.roots_stable = root_margin > 0.0;
  rep.drift_stable = coeffs.lambda >= 0.0 && coeffs.omega_c_eff_sq >= 0.0 &&
                     coeffs.omega_d_sq >= 0.0;
  rep.diffusion_stable = coeffs.d_pp >= 0.0 && diffusion_combo >= 0.0;
  rep.margins = {
      {"root_decay", root_margin},
      {"lambda", coeffs.lambda},
      {"omega_c_eff_sq", coeffs.omega_c_eff_sq},
      {"omega_d_sq", coeffs.omega_d_sq},
      {"d_pp", coeffs.d_pp},
      {"d_pp_plus_8_d_px_lambda_m", diffusion_combo},
  };
  return rep;
}

}  // namespace hpz
