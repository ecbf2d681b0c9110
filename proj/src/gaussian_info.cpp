#include "hpz/gaussian_info.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace hpz {

namespace {

const double kNaN = std::numeric_limits<double>::quiet_NaN();

// (1/2)(1+nu) ln(1+nu) + (1/2)(1-nu) ln(nu-1); the second term -> 0 as
// nu -> 1+ and is evaluated with the sign guard so no NaN appears for
// eigenvalues rounded to or slightly below 1.
double entropy_mode_term(double nu) {
  const double eps = nu - 1.0;
  const double tail = (eps > 0.0) ? -0.5 * eps * std::log(eps) : 0.0;
  return 0.5 * (1.0 + nu) * std::log(1.0 + nu) + tail;
}

void require_physical(double nu, double tol, const char* what) {
  if (!(nu >= 1.0 - tol)) {
    std::ostringstream msg;
    msg << what << ": symplectic eigenvalue " << nu
        << " below 1; entropy undefined for a nonphysical spectrum";
    throw DomainError(msg.str());
  }
}

}  // namespace

const Eigen::Matrix4d& frame_map_w() {
  static const Eigen::Matrix4d w = [] {
    Eigen::Matrix4d m;
    m << 1.0, 0.0, 0.5, 0.0,
         0.0, 0.5, 0.0, 1.0,
         1.0, 0.0, -0.5, 0.0,
         0.0, 0.5, 0.0, -1.0;
    return m;
  }();
  return w;
}

const Eigen::Matrix4d& frame_map_w_inverse() {
  static const Eigen::Matrix4d winv = [] {
    Eigen::Matrix4d m;
    m << 0.5, 0.0, 0.5, 0.0,
         0.0, 1.0, 0.0, 1.0,
         1.0, 0.0, -1.0, 0.0,
         0.0, 0.5, 0.0, -0.5;
    return m;
  }();
  return winv;
}

Covariance4 cmr_to_lab(const Covariance4& sigma_cmr) {
  if (sigma_cmr.frame != Frame::CMR) {
    throw FrameError("cmr_to_lab expects a CMR-frame covariance");
  }
  const Eigen::Matrix4d& w = frame_map_w();
  return Covariance4{w * sigma_cmr.sigma * w.transpose(), Frame::Lab};
}

Covariance4 lab_to_cmr(const Covariance4& sigma_lab) {
  if (sigma_lab.frame != Frame::Lab) {
    throw FrameError("lab_to_cmr expects a lab-frame covariance");
  }
  const Eigen::Matrix4d& winv = frame_map_w_inverse();
  return Covariance4{winv * sigma_lab.sigma * winv.transpose(), Frame::CMR};
}

SymplecticSpectrum symplectic_eigenvalues(const Covariance4& sigma) {
  const Eigen::Matrix4d os = symplectic_form() * sigma.sigma;
  const Eigen::Matrix4d m = -(os * os);
  const Eigen::EigenSolver<Eigen::Matrix4d> es(m, /*computeEigenvectors=*/false);
  const auto ev = es.eigenvalues();
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  std::array<double, 4> nu_sq;
  for (int i = 0; i < 4; ++i) {
    if (std::abs(ev(i).imag()) > 1e-8 * scale || ev(i).real() < -1e-9 * scale) {
      std::ostringstream msg;
      msg << "symplectic spectrum: eigenvalue of -(Omega sigma)^2 at ("
          << ev(i).real() << ", " << ev(i).imag() << ") is not nonnegative real";
      throw NonPhysicalSpectrumError(msg.str());
    }
    nu_sq[i] = std::max(ev(i).real(), 0.0);
  }
  std::sort(nu_sq.begin(), nu_sq.end());
  // The four values pair up as {nu1^2, nu1^2, nu2^2, nu2^2}; average the pairs.
  return SymplecticSpectrum{
      0.5 * (std::sqrt(nu_sq[0]) + std::sqrt(nu_sq[1])),
      0.5 * (std::sqrt(nu_sq[2]) + std::sqrt(nu_sq[3]))};
}

bool positivity_check(const SymplecticSpectrum& s, double tol) {
  return s.nu1 > 1.0 - tol && s.nu2 > 1.0 - tol;
}

double purity(const SymplecticSpectrum& s) {
  return 1.0 / (s.nu1 * s.nu2);
}

double entropy_total(const SymplecticSpectrum& s, double tol) {
  require_physical(s.nu1, tol, "entropy_total");
  require_physical(s.nu2, tol, "entropy_total");
  return entropy_mode_term(s.nu1) + entropy_mode_term(s.nu2) - 2.0 * std::log(2.0);
}

double entropy_sub(const Covariance4& sigma_lab, Subsystem subsystem, double tol) {
  if (sigma_lab.frame != Frame::Lab) {
    throw FrameError("entropy_sub expects a lab-frame covariance");
  }
  const int off = (subsystem == Subsystem::A) ? 0 : 2;
  const Eigen::Matrix2d block = sigma_lab.sigma.block<2, 2>(off, off);
  const double det = block.determinant();
  const double nu_x = det > 0.0 ? std::sqrt(det) : 0.0;
  require_physical(nu_x, tol, "entropy_sub");
  return entropy_mode_term(nu_x) - std::log(2.0);
}

double mutual_information(const Covariance4& sigma_lab, double tol) {
  const double s_a = entropy_sub(sigma_lab, Subsystem::A, tol);
  const double s_b = entropy_sub(sigma_lab, Subsystem::B, tol);
  const double s_tot = entropy_total(symplectic_eigenvalues(sigma_lab), tol);
  const double c = s_a + s_b - s_tot;
  if (c < -tol) {
    std::ostringstream msg;
    msg << "mutual information " << c << " below -tol";
    throw NumericError(msg.str());
  }
  return c > 0.0 ? c : 0.0;
}

Covariance4 partial_transpose(const Covariance4& sigma_lab) {
  if (sigma_lab.frame != Frame::Lab) {
    throw FrameError("partial_transpose expects a lab-frame covariance");
  }
  Eigen::Matrix4d s = sigma_lab.sigma;
  // tau sigma tau with tau = diag(1,1,1,-1): flip the sign of row/col 4.
  for (int i = 0; i < 3; ++i) {
    s(i, 3) = -s(i, 3);
    s(3, i) = -s(3, i);
  }
  return Covariance4{s, Frame::Lab};
}

double gaussian_trace_norm(double nu1, double nu2) {
  const double f1 = std::abs(nu1 - 1.0) - (1.0 + nu1);
  const double f2 = std::abs(nu2 - 1.0) - (1.0 + nu2);
  return 4.0 / (f1 * f2);
}

double log_negativity(const Covariance4& sigma_lab) {
  const SymplecticSpectrum pt = symplectic_eigenvalues(partial_transpose(sigma_lab));
  const double norm = gaussian_trace_norm(pt.nu1, pt.nu2);
  const double e_n = std::log2(norm);
  return e_n > 0.0 ? e_n : 0.0;
}

Covariance4 epr_initial(double p, double r_s) {
  if (!(p >= 1.0)) throw DomainError("epr_initial requires p >= 1");
  const double ch = std::cosh(2.0 * r_s);
  const double sh = std::sinh(2.0 * r_s);
  Eigen::Matrix4d s;
  s << ch, 0.0, sh, 0.0,
       0.0, ch, 0.0, -sh,
       sh, 0.0, ch, 0.0,
       0.0, -sh, 0.0, ch;
  return Covariance4{p * s, Frame::CMR};
}

InfoReport info_report(const Covariance4& sigma_cmr, double t, double tol) {
  InfoReport rep;
  rep.t = t;
  const SymplecticSpectrum full = symplectic_eigenvalues(sigma_cmr);
  rep.nu1 = full.nu1;
  rep.nu2 = full.nu2;
  rep.purity = purity(full);
  rep.positive = positivity_check(full, tol);

  const Covariance4 lab = cmr_to_lab(sigma_cmr);
  rep.nu_a = std::sqrt(std::max(lab.sigma.block<2, 2>(0, 0).determinant(), 0.0));
  rep.nu_b = std::sqrt(std::max(lab.sigma.block<2, 2>(2, 2).determinant(), 0.0));
  const SymplecticSpectrum pt = symplectic_eigenvalues(partial_transpose(lab));
  rep.nu1_pt = pt.nu1;
  rep.e_n = std::log2(gaussian_trace_norm(pt.nu1, pt.nu2));
  if (rep.e_n < 0.0) rep.e_n = 0.0;
  rep.separable = pt.nu1 >= 1.0 - tol;

  if (rep.positive && rep.nu_a >= 1.0 - tol && rep.nu_b >= 1.0 - tol) {
    rep.s_total = entropy_total(full, tol);
    rep.s_a = entropy_sub(lab, Subsystem::A, tol);
    rep.s_b = entropy_sub(lab, Subsystem::B, tol);
    const double c = rep.s_a + rep.s_b - rep.s_total;
    rep.c_xi = c > 0.0 ? c : 0.0;
  } else {
    rep.s_total = rep.s_a = rep.s_b = rep.c_xi = kNaN;
  }
  return rep;
}

}  // namespace hpz
