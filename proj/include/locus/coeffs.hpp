#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "locus/errors.hpp"
#include "locus/golden.hpp"

namespace locus {

using Complex = std::complex<double>;

/// Coefficients (a, b) of -Delta u + a|u|^{m-1}u + b u (+ c|x|^2 u) = F,
/// with the nonlinearity exponent m in (0,1).
struct CoefficientPair {
  Complex a;
  Complex b;
  double m;
  Complex c{0.0, 0.0};

  CoefficientPair(Complex a_, Complex b_, double m_, Complex c_ = {0.0, 0.0})
      : a(a_), b(b_), m(m_), c(c_) {
    if (!(m > 0.0 && m < 1.0))
      throw InvalidExponent("nonlinearity exponent m must lie strictly in (0,1), got " +
                            std::to_string(m_));
  }

  bool has_harmonic_term() const { return c != Complex{0.0, 0.0}; }
};

/// Membership in the admissible set: the complex plane minus the closed ray
/// { Re(z) <= 0, Im(z) = 0 }. tol widens the excluded ray for noisy inputs.
inline bool in_admissible_set(Complex z, double tol = 0.0) {
  return !(z.real() <= tol && std::abs(z.imag()) <= tol);
}

/// Existence admissibility: both coefficients in the admissible set and the
/// segment [a, b] avoids the excluded ray.
inline bool admissible_existence(const CoefficientPair& p, double tol = 0.0) {
  if (!in_admissible_set(p.a, tol) || !in_admissible_set(p.b, tol)) return false;
  const double ia = p.a.imag(), ib = p.b.imag();
  if (ia * ib >= 0.0) return true;
  return p.b.real() > (ib / ia) * p.a.real();
}

/// Uniqueness admissibility: a != 0, Re(a) >= 0 and Re(a conj(b)) >= 0, or
/// b != 0, Re(b) >= 0 and a = k b for some k >= 0 (a = 0 counts as k = 0).
inline bool admissible_uniqueness(const CoefficientPair& p) {
  const Complex ab = p.a * std::conj(p.b);
  if (p.a != Complex{0.0, 0.0} && p.a.real() >= 0.0 && ab.real() >= 0.0) return true;
  if (p.b != Complex{0.0, 0.0} && p.b.real() >= 0.0) {
    // a parallel to b with nonnegative ratio <=> a conj(b) real and >= 0.
    if (ab.imag() == 0.0 && ab.real() >= 0.0) return true;
  }
  return false;
}

/// Open interval of feasible combination weights, possibly unbounded or empty.
struct LambdaInterval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool empty = false;

  bool contains(double x) const { return !empty && x > lo && x < hi; }
  bool bounded_below() const { return std::isfinite(lo); }
  bool bounded_above() const { return std::isfinite(hi); }
};

/// Constants L, M realizing the coercive combination of the real and
/// imaginary energy identities, together with the weight lambda used.
struct CoercivityCertificate {
  double lambda = 0.0;
  double L = 0.0;
  double M = 0.0;
  LambdaInterval interval;
  double objective = 0.0;  // M^2 * max{1, 1/L^2}
};

namespace detail {

// Feasible set of { lambda : re + lambda*im > 0 }: a half-line, all of R,
// or empty.
inline LambdaInterval half_line(double re, double im) {
  LambdaInterval iv;
  if (im == 0.0) {
    iv.empty = (re <= 0.0);
    return iv;
  }
  const double root = -re / im;
  if (im > 0.0)
    iv.lo = root;
  else
    iv.hi = root;
  return iv;
}

inline LambdaInterval intersect(const LambdaInterval& x, const LambdaInterval& y) {
  LambdaInterval iv;
  iv.lo = std::max(x.lo, y.lo);
  iv.hi = std::min(x.hi, y.hi);
  iv.empty = x.empty || y.empty || !(iv.lo < iv.hi);
  return iv;
}

}  // namespace detail

inline LambdaInterval feasible_lambda_interval(const CoefficientPair& p) {
  return detail::intersect(detail::half_line(p.a.real(), p.a.imag()),
                           detail::half_line(p.b.real(), p.b.imag()));
}

/// Constructs the coercivity constants L = min(Re(a)+lambda Im(a),
/// Re(b)+lambda Im(b)) and M = 1+|lambda|, picking lambda in the feasible
/// interval that minimizes M^2 * max{1, 1/L^2} (the factor entering the
/// localization radius). Dense grid plus golden-section refinement; unbounded
/// sides are extended until the objective exceeds twice the running minimum.
inline CoercivityCertificate coercivity_constants(const CoefficientPair& p) {
  const LambdaInterval iv = feasible_lambda_interval(p);
  if (iv.empty)
    throw EmptyInterval("no feasible lambda: coefficient pair violates the existence condition");

  const auto ca = [&](double lam) { return p.a.real() + lam * p.a.imag(); };
  const auto cb = [&](double lam) { return p.b.real() + lam * p.b.imag(); };
  const auto objective = [&](double lam) {
    const double L = std::min(ca(lam), cb(lam));
    if (L <= 0.0) return std::numeric_limits<double>::infinity();
    const double M = 1.0 + std::abs(lam);
    return M * M * std::max(1.0, 1.0 / (L * L));
  };

  // Bracket [lo, hi] guaranteed to contain the minimizer.
  double lo = iv.lo, hi = iv.hi;
  if (!iv.bounded_below() || !iv.bounded_above()) {
    double anchor;
    if (iv.bounded_below())
      anchor = iv.lo + 1.0;
    else if (iv.bounded_above())
      anchor = iv.hi - 1.0;
    else
      anchor = 0.0;
    double best = objective(anchor);
    if (!iv.bounded_above()) {
      double w = 1.0;
      while (objective(anchor + w) <= 2.0 * best) {
        best = std::min(best, objective(anchor + w));
        w *= 2.0;
        if (w > 1e18) break;
      }
      hi = anchor + w;
    }
    if (!iv.bounded_below()) {
      double w = 1.0;
      best = objective(anchor);
      while (objective(anchor - w) <= 2.0 * best) {
        best = std::min(best, objective(anchor - w));
        w *= 2.0;
        if (w > 1e18) break;
      }
      lo = anchor - w;
    }
  }

  // Dense grid over the open bracket, then golden polish around the best node.
  constexpr int kGrid = 1024;
  double best_lam = 0.0;
  double best_obj = std::numeric_limits<double>::infinity();
  int best_i = -1;
  std::vector<double> nodes(kGrid);
  for (int i = 0; i < kGrid; ++i) {
    nodes[i] = lo + (hi - lo) * (i + 1) / double(kGrid + 1);
    const double f = objective(nodes[i]);
    if (f < best_obj) {
      best_obj = f;
      best_lam = nodes[i];
      best_i = i;
    }
  }
  const double bl = (best_i > 0) ? nodes[best_i - 1] : lo + 1e-300;
  const double bh = (best_i < kGrid - 1) ? nodes[best_i + 1] : hi;
  auto [lam, obj] = golden_minimize(objective, bl, bh);
  if (obj > best_obj) {
    lam = best_lam;
    obj = best_obj;
  }

  CoercivityCertificate cert;
  cert.lambda = lam;
  cert.L = std::min(ca(lam), cb(lam));
  cert.M = 1.0 + std::abs(lam);
  cert.interval = iv;
  cert.objective = obj;
  return cert;
}

enum class AtlasLabel : int {
  kNeither = 0,
  kExistenceOnly = 1,
  kUniquenessOnly = 2,
  kBoth = 3,
};

inline AtlasLabel atlas_label(Complex a, Complex b, double m) {
  const CoefficientPair p(a, b, m);
  const bool exi = admissible_existence(p);
  const bool uni = admissible_uniqueness(p);
  if (exi && uni) return AtlasLabel::kBoth;
  if (exi) return AtlasLabel::kExistenceOnly;
  if (uni) return AtlasLabel::kUniquenessOnly;
  return AtlasLabel::kNeither;
}

struct AtlasPoint {
  double re_b;
  double im_b;
  AtlasLabel label;
};

/// Classifies a rectangular sampling of the b-plane against a fixed a.
inline std::vector<AtlasPoint> atlas_classify(Complex a, double m,
                                              double re_lo, double re_hi, int n_re,
                                              double im_lo, double im_hi, int n_im) {
  if (n_re < 1 || n_im < 1) throw ConfigInvalid("atlas grid must be nonempty");
  std::vector<AtlasPoint> out;
  out.reserve(size_t(n_re) * size_t(n_im));
  for (int j = 0; j < n_im; ++j) {
    const double im = (n_im == 1) ? im_lo : im_lo + (im_hi - im_lo) * j / double(n_im - 1);
    for (int i = 0; i < n_re; ++i) {
      const double re = (n_re == 1) ? re_lo : re_lo + (re_hi - re_lo) * i / double(n_re - 1);
      out.push_back({re, im, atlas_label(a, Complex{re, im}, m)});
    }
  }
  return out;
}

}  // namespace locus
