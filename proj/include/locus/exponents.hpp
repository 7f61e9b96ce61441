#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "locus/errors.hpp"
#include "locus/golden.hpp"

namespace locus {

/// Exponents attached to a nonlinearity power m in (0,1) and dimension N.
struct ExponentSet {
  double m;
  int N;
  double k;      // 2(1+m) + N(1-m)
  double nu;     // k/(m+1), always > 2
  double theta;  // ((1+m) + N(1-m))/k, in (0,1)
  double ell;    // 1/(theta(1+m))
  double delta;  // k/(2(1+m))
  double p;      // (2(1+m) + N(1-m))/(1-m) = 1/gamma(1)
};

inline ExponentSet exponent_set(double m, int N) {
  if (!(m > 0.0 && m < 1.0)) throw InvalidExponent("m must lie in (0,1)");
  if (N < 1) throw InvalidExponent("dimension N must be >= 1");
  ExponentSet s;
  s.m = m;
  s.N = N;
  s.k = 2.0 * (1.0 + m) + N * (1.0 - m);
  s.nu = s.k / (m + 1.0);
  s.theta = ((1.0 + m) + N * (1.0 - m)) / s.k;
  s.ell = 1.0 / (s.theta * (1.0 + m));
  s.delta = s.k / (2.0 * (1.0 + m));
  s.p = (2.0 * (1.0 + m) + N * (1.0 - m)) / (1.0 - m);
  return s;
}

struct TauExponents {
  double gamma;  // (2 tau - (1+m))/k
  double mu;     // 2(1 - tau)/k
  double eta;    // (1-m)/(1+m) - gamma, always > 0
};

inline double tau_lower_bound(const ExponentSet& s) { return 0.5 * (s.m + 1.0); }

inline TauExponents tau_exponents(const ExponentSet& s, double tau) {
  if (!(tau > tau_lower_bound(s) && tau <= 1.0))
    throw TauOutOfRange("tau must lie in ((m+1)/2, 1], got " + std::to_string(tau));
  TauExponents t;
  t.gamma = (2.0 * tau - (1.0 + s.m)) / s.k;
  t.mu = 2.0 * (1.0 - tau) / s.k;
  t.eta = (1.0 - s.m) / (1.0 + s.m) - t.gamma;
  return t;
}

/// Inputs and result of the localization-radius formula.
struct LocalizationBound {
  double rho0;
  double E0;     // gradient energy on B(x0, rho0)
  double b0;     // L^{m+1} mass on B(x0, rho0)
  double L;
  double M;
  double C_eff;  // effective interpolation-trace constant
  double rho_max;
  double tau_star;
};

namespace detail {

// max{b^mu, b^eta} with the convention 0^0 = 1.
inline double mass_factor(double b, double mu, double eta) {
  const auto pw = [&](double e) {
    if (e == 0.0) return 1.0;
    return std::pow(b, e);
  };
  return std::max(pw(mu), pw(eta));
}

}  // namespace detail

/// The inner radius inside which a field obeying the coercive inequality must
/// vanish:
///   rho_max^nu = ( rho0^nu - C M^2 max{1,1/L^2} max{rho0^{nu-1},1}
///                  * min_tau E0^gamma(tau) max{b0^mu, b0^eta} / (2tau-(1+m)) )_+
/// The tau-minimum is located on a 1024-point grid over ((m+1)/2, 1] followed
/// by golden-section refinement. E0 = 0 contributes 0 regardless of b0.
inline LocalizationBound rho_max(const ExponentSet& s, double rho0, double E0,
                                 double b0, double L, double M, double C_eff = 1.0) {
  if (!(rho0 > 0.0) || E0 < 0.0 || b0 < 0.0 || !(L > 0.0) || !(M > 0.0) || !(C_eff > 0.0))
    throw InvalidExponent("rho_max: invalid inputs");

  LocalizationBound out{rho0, E0, b0, L, M, C_eff, 0.0, 1.0};
  if (E0 == 0.0) {
    out.rho_max = rho0;
    return out;
  }

  const auto term = [&](double tau) {
    const TauExponents t = tau_exponents(s, tau);
    return std::pow(E0, t.gamma) * detail::mass_factor(b0, t.mu, t.eta) /
           (2.0 * tau - (1.0 + s.m));
  };

  const double tau_lo = tau_lower_bound(s) + 1e-6;
  constexpr int kGrid = 1024;
  double best_tau = 1.0;
  double best_val = term(1.0);  // tau = 1 included exactly
  int best_i = kGrid - 1;
  std::vector<double> taus(kGrid);
  for (int i = 0; i < kGrid; ++i) {
    taus[i] = tau_lo + (1.0 - tau_lo) * i / double(kGrid - 1);
    const double v = term(taus[i]);
    if (v < best_val) {
      best_val = v;
      best_tau = taus[i];
      best_i = i;
    }
  }
  const double bl = (best_i > 0) ? taus[best_i - 1] : tau_lo;
  const double bh = (best_i < kGrid - 1) ? taus[best_i + 1] : 1.0;
  auto [tau_ref, val_ref] = golden_minimize(term, bl, bh);
  if (val_ref < best_val) {
    best_val = val_ref;
    best_tau = tau_ref;
  }

  const double factor = C_eff * M * M * std::max(1.0, 1.0 / (L * L)) *
                        std::max(std::pow(rho0, s.nu - 1.0), 1.0);
  const double inner = std::pow(rho0, s.nu) - factor * best_val;
  out.rho_max = (inner > 0.0) ? std::pow(inner, 1.0 / s.nu) : 0.0;
  out.tau_star = best_tau;
  return out;
}

/// Energy and forcing smallness thresholds for vanishing on B(x0, rho0),
/// together with the absorbed ODE constant K and gamma = gamma(1).
struct Thresholds {
  double rho0;
  double rho1;
  double K;
  double E_star;
  double eps_star;
  double gamma;
};

inline Thresholds thresholds(const ExponentSet& s, double rho0, double rho1,
                             double L, double M, double b1, double C_eff = 1.0) {
  if (!(0.0 < rho0 && rho0 < rho1))
    throw InvalidExponent("thresholds: need 0 < rho0 < rho1");
  if (!(L > 0.0) || !(M > 0.0) || !(C_eff > 0.0) || b1 < 0.0)
    throw InvalidExponent("thresholds: invalid inputs");

  const TauExponents t1 = tau_exponents(s, 1.0);
  const double gamma = t1.gamma;
  const double L1 = std::max(1.0, 1.0 / L);
  const double K1 = C_eff * L1 * L1 * M * M * std::max(std::pow(rho1, s.nu - 1.0), 1.0) *
                    detail::mass_factor(b1, t1.mu, t1.eta);
  const double K = K1 * std::pow(rho0, -(s.nu - 1.0));

  Thresholds th;
  th.rho0 = rho0;
  th.rho1 = rho1;
  th.K = K;
  th.gamma = gamma;
  th.E_star = std::pow(gamma / (2.0 * K) * (rho1 - rho0), 1.0 / gamma);
  const double pprime = s.p / (s.p - 1.0);
  th.eps_star = std::pow(gamma / (2.0 * K), s.p) /
                (std::pow(2.0, pprime) * std::pow(2.0 * L1 * M, 2.0));
  return th;
}

/// Comparison profile H(rho) = (gamma/(2K) (rho - rho0)_+)^{1/gamma}.
inline double comparison_H(const Thresholds& th, double rho) {
  const double r = std::max(0.0, rho - th.rho0);
  return std::pow(th.gamma / (2.0 * th.K) * r, 1.0 / th.gamma);
}

/// Young's inequality x y <= eps^{l'} x^{l'}/l' + eps^{-l} y^l / l with
/// l' = l/(l-1). Returns (lhs, rhs).
inline std::pair<double, double> young_bound(double x, double y, double lambda,
                                             double eps) {
  const double lp = lambda / (lambda - 1.0);
  const double lhs = x * y;
  const double rhs = std::pow(eps, lp) * std::pow(x, lp) / lp +
                     std::pow(eps, -lambda) * std::pow(y, lambda) / lambda;
  return {lhs, rhs};
}

/// Discrete transcription of the ODE comparison step: a sampled energy curve
/// on [rho0, rho1] that satisfies -K E' + E^{1-gamma} <= G with E(rho1) below
/// E_star and G below H^{1-gamma}/2 must stay below H. Preconditions are
/// checked; returns whether E <= H holds at every sample.
inline bool ode_compare(const Thresholds& th, const std::vector<double>& rho,
                        const std::vector<double>& E, const std::vector<double>& G) {
  if (rho.size() != E.size() || rho.size() != G.size() || rho.empty())
    throw PreconditionViolated("ode_compare: mismatched or empty sample arrays");
  if (!(E.back() < th.E_star))
    throw PreconditionViolated("ode_compare: E(rho1) = " + std::to_string(E.back()) +
                               " is not below E_star");
  for (size_t i = 0; i < rho.size(); ++i) {
    const double Hr = comparison_H(th, rho[i]);
    if (G[i] > 0.5 * std::pow(Hr, 1.0 - th.gamma) + 1e-15)
      throw PreconditionViolated("ode_compare: G exceeds H^{1-gamma}/2 at sample " +
                                 std::to_string(i));
  }
  for (size_t i = 0; i < rho.size(); ++i) {
    if (E[i] > comparison_H(th, rho[i])) return false;
  }
  return true;
}

}  // namespace locus
