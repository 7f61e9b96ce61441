#pragma once

#include <cmath>
#include <utility>

namespace locus {

/// Golden-section minimization of a unimodal function on [a, b].
/// Returns (argmin, min value).
template <typename Fn>
std::pair<double, double> golden_minimize(Fn&& f, double a, double b,
                                          double tol = 1e-12,
                                          int max_iter = 200) {
  constexpr double invphi = 0.6180339887498949;  // 1/phi
  if (b < a) std::swap(a, b);
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < max_iter && (b - a) > tol * (1.0 + std::abs(a) + std::abs(b)); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  double x = 0.5 * (a + b);
  return {x, f(x)};
}

}  // namespace locus
