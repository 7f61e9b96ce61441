#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "locus/coeffs.hpp"
#include "locus/errors.hpp"
#include "locus/grid.hpp"
#include "locus/solver.hpp"

namespace locus {

/// Ball-restricted energy curves centered at x0, sampled over rho.
struct EnergyProfile {
  Point x0;
  std::vector<double> rho;
  std::vector<double> E;        // |grad u|^2 over B(x0, rho)
  std::vector<double> bmass;    // |u|^{m+1}
  std::vector<double> amass;    // |u|^2
  std::vector<double> cmass;    // |x|^2 |u|^2 (harmonic-potential weight)
  std::vector<double> J;        // int |F u|
  std::vector<double> w_re;     // Re of the boundary flux
  std::vector<double> w_im;
  std::vector<double> Fu_re;    // Re int F conj(u)
  std::vector<double> Fu_im;
  std::vector<double> Eprime;   // centered differences of E on the sample grid

  double I(size_t i) const { return std::hypot(w_re[i], w_im[i]); }
};

/// Equally spaced radii in [2h + margin, rho_hi].
inline std::vector<double> rho_samples(double h, double rho_hi, int count = 64) {
  std::vector<double> out;
  const double lo = 2.0 * h;
  if (rho_hi <= lo || count < 1) return out;
  out.reserve(count);
  for (int i = 0; i < count; ++i)
    out.push_back(lo + (rho_hi - lo) * (i + 1) / double(count));
  return out;
}

inline EnergyProfile compute_profile(const Field& u, const Field& F, Point x0,
                                     const std::vector<double>& rho, double m) {
  EnergyProfile pr;
  pr.x0 = x0;
  pr.rho = rho;
  const Gradient g = discrete_gradient(u);

  Field grad2 = u, um1 = u, u2 = u, xu2 = u, fu_abs = u, fu = u;
  for (int j = 0; j < u.ny(); ++j) {
    for (int i = 0; i < u.nx(); ++i) {
      double g2 = std::norm(g[0].at(i, j));
      if (g.size() > 1) g2 += std::norm(g[1].at(i, j));
      const Complex uv = u.at(i, j), fv = F.at(i, j);
      grad2.at(i, j) = g2;
      um1.at(i, j) = std::pow(std::abs(uv), m + 1.0);
      u2.at(i, j) = std::norm(uv);
      xu2.at(i, j) = position_sq(u, i, j) * std::norm(uv);
      fu_abs.at(i, j) = std::abs(fv * uv);
      fu.at(i, j) = fv * std::conj(uv);
    }
  }

  for (double r : rho) {
    pr.E.push_back(ball_integral(grad2, x0, r));
    pr.bmass.push_back(ball_integral(um1, x0, r));
    pr.amass.push_back(ball_integral(u2, x0, r));
    pr.cmass.push_back(ball_integral(xu2, x0, r));
    pr.J.push_back(ball_integral(fu_abs, x0, r));
    const Complex w = sphere_flux(u, g, x0, r);
    pr.w_re.push_back(w.real());
    pr.w_im.push_back(w.imag());
    const Complex fuv = ball_integral_c(fu, x0, r);
    pr.Fu_re.push_back(fuv.real());
    pr.Fu_im.push_back(fuv.imag());
  }

  const size_t n = rho.size();
  pr.Eprime.assign(n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    if (n < 2) break;
    if (i == 0)
      pr.Eprime[i] = (pr.E[1] - pr.E[0]) / (rho[1] - rho[0]);
    else if (i == n - 1)
      pr.Eprime[i] = (pr.E[n - 1] - pr.E[n - 2]) / (rho[n - 1] - rho[n - 2]);
    else
      pr.Eprime[i] = (pr.E[i + 1] - pr.E[i - 1]) / (rho[i + 1] - rho[i - 1]);
  }
  return pr;
}

/// Test-infrastructure tolerance for the discrete energy identities,
/// calibrated on the linear analytic case.
inline double tol_id(double h, double h1_norm_sq) {
  return 50.0 * h * (1.0 + h1_norm_sq);
}

inline double h1_norm_sq(const Field& u) {
  const Gradient g = discrete_gradient(u);
  double s = 0.0;
  for (int j = 0; j < u.ny(); ++j)
    for (int i = 0; i < u.nx(); ++i) {
      double g2 = std::norm(g[0].at(i, j));
      if (g.size() > 1) g2 += std::norm(g[1].at(i, j));
      s += u.node_volume(i, j) * (std::norm(u.at(i, j)) + g2);
    }
  return s;
}

struct IdentityResiduals {
  std::vector<double> residual_re;
  std::vector<double> residual_im;
  double max_re = 0.0;
  double max_im = 0.0;

  double max_abs() const { return std::max(max_re, max_im); }
};

/// Per-sample residuals of the real and imaginary energy identities:
///   E + Re(a) b + Re(b) a + Re(c) cmass = Re int(F conj u) + w_re
///        Im(a) b + Im(b) a + Im(c) cmass = Im int(F conj u) + w_im
inline IdentityResiduals verify_identities(const EnergyProfile& pr,
                                           const CoefficientPair& cp) {
  IdentityResiduals out;
  const size_t n = pr.rho.size();
  out.residual_re.resize(n);
  out.residual_im.resize(n);
  for (size_t i = 0; i < n; ++i) {
    out.residual_re[i] = pr.E[i] + cp.a.real() * pr.bmass[i] +
                         cp.b.real() * pr.amass[i] + cp.c.real() * pr.cmass[i] -
                         pr.Fu_re[i] - pr.w_re[i];
    out.residual_im[i] = cp.a.imag() * pr.bmass[i] + cp.b.imag() * pr.amass[i] +
                         cp.c.imag() * pr.cmass[i] - pr.Fu_im[i] - pr.w_im[i];
    out.max_re = std::max(out.max_re, std::abs(out.residual_re[i]));
    out.max_im = std::max(out.max_im, std::abs(out.residual_im[i]));
  }
  return out;
}

struct InequalityMargin {
  std::vector<double> margin;
  double min_margin = 0.0;
  bool holds = false;  // min margin >= -tol
};

/// margin(rho) = M (I + [J]) - (E + L bmass + [L amass]); the bracketed terms
/// enter in the with-forcing form of the coercive inequality.
inline InequalityMargin verify_inequality(const EnergyProfile& pr,
                                          const CoercivityCertificate& cert,
                                          bool with_forcing, double tol) {
  InequalityMargin out;
  const size_t n = pr.rho.size();
  out.margin.resize(n);
  double mn = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < n; ++i) {
    double rhs = cert.M * (pr.I(i) + (with_forcing ? pr.J[i] : 0.0));
    double lhs = pr.E[i] + cert.L * pr.bmass[i] +
                 (with_forcing ? cert.L * pr.amass[i] : 0.0);
    out.margin[i] = rhs - lhs;
    mn = std::min(mn, out.margin[i]);
  }
  out.min_margin = n ? mn : 0.0;
  out.holds = out.min_margin >= -tol;
  return out;
}

}  // namespace locus
