#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "locus/errors.hpp"
#include "locus/exponents.hpp"
#include "locus/grid.hpp"

namespace locus {

/// A radial test profile with its analytic derivative.
struct RadialProfile {
  std::string name;
  std::function<double(double)> value;
  std::function<double(double)> deriv;
};

struct TraceEstimate {
  double m = 0.0;
  int N = 0;
  double rho = 0.0;
  double C_lower = 0.0;  // max observed ratio
  int family_size = 0;
  std::string argmax;
};

namespace detail {

// Composite Simpson on [0, b] with an even number of intervals.
inline double simpson(const std::function<double(double)>& f, double b, int n = 2048) {
  if (n % 2) ++n;
  const double h = b / n;
  double s = f(0.0) + f(b);
  for (int i = 1; i < n; ++i) s += f(i * h) * ((i % 2) ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace detail

/// Default family: shifted power bumps (1 - r/(2 rho))^q, Gaussians on a log
/// grid of decay rates, and the constant profile.
inline std::vector<RadialProfile> default_trace_family(double rho) {
  std::vector<RadialProfile> fam;
  for (int q = 1; q <= 8; ++q) {
    fam.push_back({"bump q=" + std::to_string(q),
                   [=](double r) { return std::pow(1.0 - r / (2.0 * rho), q); },
                   [=](double r) {
                     return -q / (2.0 * rho) * std::pow(1.0 - r / (2.0 * rho), q - 1);
                   }});
  }
  for (int k = -4; k <= 4; ++k) {
    const double s = std::pow(10.0, 0.5 * k) / (rho * rho);
    fam.push_back({"gaussian s=" + std::to_string(s),
                   [=](double r) { return std::exp(-s * r * r); },
                   [=](double r) { return -2.0 * s * r * std::exp(-s * r * r); }});
  }
  fam.push_back({"constant", [](double) { return 1.0; }, [](double) { return 0.0; }});
  return fam;
}

/// The ratio LHS/RHS of the interpolation-trace inequality
///   |u|_{L2(S(x0,rho))} <= C (|grad u|_{L2(B)} + rho^{-delta} |u|_{m+1})^theta
///                            * |u|_{m+1}^{1-theta}
/// for one radial profile; norms by composite Simpson with 2048 nodes.
inline double trace_ratio(const ExponentSet& s, double rho, const RadialProfile& f) {
  const double wN = unit_sphere_area(s.N);
  const double lhs = std::abs(f.value(rho)) * std::sqrt(wN * std::pow(rho, s.N - 1));
  const double grad2 = detail::simpson(
      [&](double r) { return f.deriv(r) * f.deriv(r) * wN * std::pow(r, s.N - 1); },
      rho);
  const double mm = detail::simpson(
      [&](double r) {
        return std::pow(std::abs(f.value(r)), s.m + 1.0) * wN * std::pow(r, s.N - 1);
      },
      rho);
  const double um1 = std::pow(mm, 1.0 / (s.m + 1.0));
  const double rhs = std::pow(std::sqrt(grad2) + std::pow(rho, -s.delta) * um1, s.theta) *
                     std::pow(um1, 1.0 - s.theta);
  return lhs / rhs;
}

/// Lower bound on the interpolation-trace constant C(N, m): max ratio over a
/// family of radial profiles not vanishing on the sphere r = rho.
inline TraceEstimate trace_constant_estimate(double m, int N, double rho,
                                             const std::vector<RadialProfile>& family) {
  if (family.empty()) throw EmptyFamily("trace_constant_estimate: empty family");
  const ExponentSet s = exponent_set(m, N);
  TraceEstimate est;
  est.m = m;
  est.N = N;
  est.rho = rho;
  est.family_size = int(family.size());
  for (const RadialProfile& f : family) {
    if (f.value(rho) == 0.0) continue;  // sphere-trace trivially 0, skip
    const double r = trace_ratio(s, rho, f);
    if (r > est.C_lower) {
      est.C_lower = r;
      est.argmax = f.name;
    }
  }
  return est;
}

inline TraceEstimate trace_constant_estimate(double m, int N, double rho) {
  return trace_constant_estimate(m, N, rho, default_trace_family(rho));
}

/// Recommended effective constant: the sampled lower bound times a safety
/// factor (the true C is only known to exist).
inline double recommended_c_eff(const TraceEstimate& est, double safety = 4.0) {
  return safety * est.C_lower;
}

}  // namespace locus
