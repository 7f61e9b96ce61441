#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "locus/errors.hpp"

namespace locus {

using Complex = std::complex<double>;

enum class DomainKind { kInterval, kRectangle, kRadial };
enum class BoundaryKind { kDirichlet, kNeumann, kNone };

/// Surface area of the unit sphere in R^N.
inline double unit_sphere_area(int N) {
  return 2.0 * std::pow(M_PI, 0.5 * N) / std::tgamma(0.5 * N);
}

/// A point; for radial domains only the distance from the origin (x) is used.
struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct Domain {
  DomainKind kind;
  double lo0, hi0;
  double lo1 = 0.0, hi1 = 0.0;  // second axis, rectangle only
  int ambient_N = 1;            // dimension of the Laplacian for radial kind

  static Domain interval(double a, double b) {
    if (!(a < b)) throw ConfigInvalid("interval domain needs a < b");
    return {DomainKind::kInterval, a, b, 0.0, 0.0, 1};
  }
  static Domain rectangle(double ax, double bx, double ay, double by) {
    if (!(ax < bx && ay < by)) throw ConfigInvalid("rectangle domain needs nonempty sides");
    return {DomainKind::kRectangle, ax, bx, ay, by, 2};
  }
  static Domain radial(double R, int N) {
    if (!(R > 0.0) || N < 1) throw ConfigInvalid("radial domain needs R > 0 and N >= 1");
    return {DomainKind::kRadial, 0.0, R, 0.0, 0.0, N};
  }

  int axes() const { return kind == DomainKind::kRectangle ? 2 : 1; }
};

/// Complex-valued grid function on a uniform grid over a Domain.
class Field {
 public:
  Field() = default;

  Field(const Domain& dom, double h, BoundaryKind bc)
      : domain_(dom), bc_(bc) {
    if (!(h > 0.0)) throw ConfigInvalid("grid spacing must be positive");
    nx_ = int(std::lround((dom.hi0 - dom.lo0) / h)) + 1;
    if (nx_ < 2) throw GridTooCoarse("fewer than 2 nodes on axis 0");
    hx_ = (dom.hi0 - dom.lo0) / (nx_ - 1);
    if (dom.axes() == 2) {
      ny_ = int(std::lround((dom.hi1 - dom.lo1) / h)) + 1;
      if (ny_ < 2) throw GridTooCoarse("fewer than 2 nodes on axis 1");
      hy_ = (dom.hi1 - dom.lo1) / (ny_ - 1);
    } else {
      ny_ = 1;
      hy_ = hx_;
    }
    values_.assign(size_t(nx_) * size_t(ny_), Complex{0.0, 0.0});
  }

  const Domain& domain() const { return domain_; }
  BoundaryKind bc() const { return bc_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double h() const { return hx_; }
  double hy() const { return hy_; }
  size_t size() const { return values_.size(); }

  double x(int i) const { return domain_.lo0 + i * hx_; }
  double y(int j) const { return domain_.lo1 + j * hy_; }

  size_t index(int i, int j = 0) const { return size_t(j) * nx_ + i; }
  Complex& at(int i, int j = 0) { return values_[index(i, j)]; }
  Complex at(int i, int j = 0) const { return values_[index(i, j)]; }
  std::vector<Complex>& values() { return values_; }
  const std::vector<Complex>& values() const { return values_; }

  void fill(const std::function<Complex(double, double)>& f) {
    for (int j = 0; j < ny_; ++j)
      for (int i = 0; i < nx_; ++i) at(i, j) = f(x(i), y(j));
  }

  bool all_finite() const {
    for (const Complex& v : values_)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
  }

  /// Volume of the grid cell around node (i, j), clipped to the domain.
  /// Radial cells carry the spherical shell measure omega_N r^{N-1} dr.
  double node_volume(int i, int j = 0) const {
    const double cl = std::max(domain_.lo0, x(i) - 0.5 * hx_);
    const double cr = std::min(domain_.hi0, x(i) + 0.5 * hx_);
    switch (domain_.kind) {
      case DomainKind::kInterval:
        return cr - cl;
      case DomainKind::kRectangle: {
        const double dl = std::max(domain_.lo1, y(j) - 0.5 * hy_);
        const double dr = std::min(domain_.hi1, y(j) + 0.5 * hy_);
        return (cr - cl) * (dl < dr ? dr - dl : 0.0);
      }
      case DomainKind::kRadial: {
        const int N = domain_.ambient_N;
        return unit_sphere_area(N) * (std::pow(cr, N) - std::pow(cl, N)) / N;
      }
    }
    return 0.0;
  }

  /// Linear (1-D/radial) or bilinear (2-D) interpolation; zero outside grid.
  Complex interpolate(double px, double py = 0.0) const {
    if (domain_.axes() == 1) {
      if (domain_.kind == DomainKind::kRadial) px = std::abs(px);
      if (px < domain_.lo0 - 1e-12 || px > domain_.hi0 + 1e-12) return {0.0, 0.0};
      const double t = std::clamp((px - domain_.lo0) / hx_, 0.0, double(nx_ - 1));
      const int i = std::min(int(t), nx_ - 2);
      const double s = t - i;
      return (1.0 - s) * at(i) + s * at(i + 1);
    }
    if (px < domain_.lo0 - 1e-12 || px > domain_.hi0 + 1e-12 ||
        py < domain_.lo1 - 1e-12 || py > domain_.hi1 + 1e-12)
      return {0.0, 0.0};
    const double tx = std::clamp((px - domain_.lo0) / hx_, 0.0, double(nx_ - 1));
    const double ty = std::clamp((py - domain_.lo1) / hy_, 0.0, double(ny_ - 1));
    const int i = std::min(int(tx), nx_ - 2);
    const int j = std::min(int(ty), ny_ - 2);
    const double sx = tx - i, sy = ty - j;
    return (1.0 - sx) * (1.0 - sy) * at(i, j) + sx * (1.0 - sy) * at(i + 1, j) +
           (1.0 - sx) * sy * at(i, j + 1) + sx * sy * at(i + 1, j + 1);
  }

 private:
  Domain domain_{DomainKind::kInterval, 0.0, 1.0};
  BoundaryKind bc_ = BoundaryKind::kNone;
  int nx_ = 0, ny_ = 1;
  double hx_ = 0.0, hy_ = 0.0;
  std::vector<Complex> values_;
};

/// Per-axis gradient components; size 1 for interval/radial, 2 for rectangle.
using Gradient = std::vector<Field>;

/// Second-order differences: centered in the interior, one-sided at the ends.
inline Gradient discrete_gradient(const Field& u) {
  if (u.nx() < 3 || (u.domain().axes() == 2 && u.ny() < 3))
    throw GridTooCoarse("discrete_gradient needs >= 3 nodes per axis");
  Gradient g;
  const double hx = u.h();
  Field gx(u.domain(), hx, u.bc());
  for (int j = 0; j < u.ny(); ++j) {
    for (int i = 0; i < u.nx(); ++i) {
      Complex d;
      if (i == 0)
        d = (-3.0 * u.at(0, j) + 4.0 * u.at(1, j) - u.at(2, j)) / (2.0 * hx);
      else if (i == u.nx() - 1)
        d = (3.0 * u.at(i, j) - 4.0 * u.at(i - 1, j) + u.at(i - 2, j)) / (2.0 * hx);
      else
        d = (u.at(i + 1, j) - u.at(i - 1, j)) / (2.0 * hx);
      gx.at(i, j) = d;
    }
  }
  g.push_back(std::move(gx));
  if (u.domain().axes() == 2) {
    const double hy = u.hy();
    Field gy(u.domain(), u.h(), u.bc());
    for (int j = 0; j < u.ny(); ++j) {
      for (int i = 0; i < u.nx(); ++i) {
        Complex d;
        if (j == 0)
          d = (-3.0 * u.at(i, 0) + 4.0 * u.at(i, 1) - u.at(i, 2)) / (2.0 * hy);
        else if (j == u.ny() - 1)
          d = (3.0 * u.at(i, j) - 4.0 * u.at(i, j - 1) + u.at(i, j - 2)) / (2.0 * hy);
        else
          d = (u.at(i, j + 1) - u.at(i, j - 1)) / (2.0 * hy);
        gy.at(i, j) = d;
      }
    }
    g.push_back(std::move(gy));
  }
  return g;
}

namespace detail {

// Fraction of the sphere S(0, r) lying inside B(x0, rho) for |x0| = d.
inline double cap_fraction(int N, double r, double d, double rho) {
  if (r <= 0.0) return (d <= rho) ? 1.0 : 0.0;
  if (d + r <= rho) return 1.0;
  if (std::abs(r - d) >= rho) return 0.0;
  const double t = (r * r + d * d - rho * rho) / (2.0 * r * d);
  const double tc = std::clamp(t, -1.0, 1.0);
  switch (N) {
    case 1:
      return 0.5;  // exactly one of the two points is inside
    case 2:
      return std::acos(tc) / M_PI;
    case 3:
      return 0.5 * (1.0 - tc);
    default: {
      // fraction = int_t^1 (1-s^2)^{(N-3)/2} ds / int_{-1}^1 (...) ds
      const auto w = [&](double s) { return std::pow(std::max(0.0, 1.0 - s * s), 0.5 * (N - 3)); };
      const int n = 512;
      double num = 0.0, den = 0.0;
      for (int i = 0; i < n; ++i) {
        const double s1 = tc + (1.0 - tc) * (i + 0.5) / n;
        num += w(s1) * (1.0 - tc) / n;
        const double s2 = -1.0 + 2.0 * (i + 0.5) / n;
        den += w(s2) * 2.0 / n;
      }
      return den > 0.0 ? num / den : 0.0;
    }
  }
}

}  // namespace detail

/// Integral of a (complex) density over B(x0, rho) intersected with the
/// domain. 1-D cells are clipped exactly; 2-D boundary-straddling cells use
/// 4x4 midpoint subsampling; radial cells integrate the spherical-cap
/// fraction of each shell.
inline Complex ball_integral_c(const Field& density, Point x0, double rho) {
  if (rho <= 0.0) return {0.0, 0.0};
  const Domain& dom = density.domain();
  Complex sum{0.0, 0.0};
  switch (dom.kind) {
    case DomainKind::kInterval: {
      const double bl = x0.x - rho, br = x0.x + rho;
      for (int i = 0; i < density.nx(); ++i) {
        const double cl = std::max({dom.lo0, density.x(i) - 0.5 * density.h(), bl});
        const double cr = std::min({dom.hi0, density.x(i) + 0.5 * density.h(), br});
        if (cr > cl) sum += density.at(i) * (cr - cl);
      }
      break;
    }
    case DomainKind::kRectangle: {
      const double hx = density.h(), hy = density.hy();
      for (int j = 0; j < density.ny(); ++j) {
        for (int i = 0; i < density.nx(); ++i) {
          const double cl = std::max(dom.lo0, density.x(i) - 0.5 * hx);
          const double cr = std::min(dom.hi0, density.x(i) + 0.5 * hx);
          const double dl = std::max(dom.lo1, density.y(j) - 0.5 * hy);
          const double dr = std::min(dom.hi1, density.y(j) + 0.5 * hy);
          if (cl >= cr || dl >= dr) continue;
          // nearest/farthest corner distances to classify the cell
          const double qx = std::max({cl - x0.x, x0.x - cr, 0.0});
          const double qy = std::max({dl - x0.y, x0.y - dr, 0.0});
          const double dmin = std::hypot(qx, qy);
          const double fx = std::max(std::abs(cl - x0.x), std::abs(cr - x0.x));
          const double fy = std::max(std::abs(dl - x0.y), std::abs(dr - x0.y));
          const double dmax = std::hypot(fx, fy);
          double frac;
          if (dmax <= rho)
            frac = 1.0;
          else if (dmin >= rho)
            frac = 0.0;
          else {
            int inside = 0;
            for (int sj = 0; sj < 4; ++sj)
              for (int si = 0; si < 4; ++si) {
                const double px = cl + (cr - cl) * (si + 0.5) / 4.0;
                const double py = dl + (dr - dl) * (sj + 0.5) / 4.0;
                if (std::hypot(px - x0.x, py - x0.y) <= rho) ++inside;
              }
            frac = inside / 16.0;
          }
          if (frac > 0.0) sum += density.at(i, j) * ((cr - cl) * (dr - dl) * frac);
        }
      }
      break;
    }
    case DomainKind::kRadial: {
      const int N = dom.ambient_N;
      const double d = std::abs(x0.x);
      const double wN = unit_sphere_area(N);
      for (int i = 0; i < density.nx(); ++i) {
        const double cl = std::max(dom.lo0, density.x(i) - 0.5 * density.h());
        const double cr = std::min(dom.hi0, density.x(i) + 0.5 * density.h());
        if (cr <= cl) continue;
        constexpr int kSub = 16;
        double shell = 0.0;
        for (int s = 0; s < kSub; ++s) {
          const double r = cl + (cr - cl) * (s + 0.5) / kSub;
          shell += std::pow(r, N - 1) * detail::cap_fraction(N, r, d, rho);
        }
        shell *= (cr - cl) / kSub * wN;
        sum += density.at(i) * shell;
      }
      break;
    }
  }
  return sum;
}

inline double ball_integral(const Field& density, Point x0, double rho) {
  return ball_integral_c(density, x0, rho).real();
}

/// Whole-domain integral, on the same quadrature path as ball_integral.
inline Complex domain_integral(const Field& density) {
  const Domain& dom = density.domain();
  const double big = 4.0 * (std::abs(dom.lo0) + std::abs(dom.hi0) +
                            std::abs(dom.lo1) + std::abs(dom.hi1) + 1.0);
  return ball_integral_c(density, Point{0.0, 0.0}, big);
}

/// Boundary flux w(rho) = int_{Omega cap S(x0,rho)} u conj(grad u) . n dsigma,
/// with n the outward radial direction from x0. Fields are zero-extended
/// outside the domain (Dirichlet convention).
inline Complex sphere_flux(const Field& u, const Gradient& grad_u, Point x0,
                           double rho) {
  const Domain& dom = u.domain();
  if (!(rho >= 2.0 * u.h()))
    throw SphereOutsideGrid("sphere radius below 2h");
  switch (dom.kind) {
    case DomainKind::kInterval: {
      const double xr = x0.x + rho, xl = x0.x - rho;
      Complex w{0.0, 0.0};
      if (xr >= dom.lo0 && xr <= dom.hi0)
        w += u.interpolate(xr) * std::conj(grad_u[0].interpolate(xr));
      if (xl >= dom.lo0 && xl <= dom.hi0)
        w -= u.interpolate(xl) * std::conj(grad_u[0].interpolate(xl));
      if (xl > dom.hi0 || xr < dom.lo0)
        throw SphereOutsideGrid("sphere does not intersect the domain");
      return w;
    }
    case DomainKind::kRectangle: {
      const int n = std::max(64, int(std::ceil(2.0 * M_PI * rho / u.h())));
      Complex w{0.0, 0.0};
      for (int k = 0; k < n; ++k) {
        const double th = 2.0 * M_PI * k / n;
        const double cx = std::cos(th), sy = std::sin(th);
        const double px = x0.x + rho * cx, py = x0.y + rho * sy;
        if (px < dom.lo0 || px > dom.hi0 || py < dom.lo1 || py > dom.hi1) continue;
        const Complex gval = cx * grad_u[0].interpolate(px, py) +
                             sy * grad_u[1].interpolate(px, py);
        w += u.interpolate(px, py) * std::conj(gval);
      }
      return w * (2.0 * M_PI * rho / n);
    }
    case DomainKind::kRadial: {
      const int N = dom.ambient_N;
      const double d = std::abs(x0.x);
      if (d - rho > dom.hi0) throw SphereOutsideGrid("sphere outside radial grid");
      if (d == 0.0) {
        if (rho > dom.hi0) return {0.0, 0.0};  // zero extension
        return u.interpolate(rho) * std::conj(grad_u[0].interpolate(rho)) *
               unit_sphere_area(N) * std::pow(rho, N - 1);
      }
      if (N == 1) {
        Complex w{0.0, 0.0};
        for (double sgn : {+1.0, -1.0}) {
          const double pos = d + sgn * rho;  // signed coordinate on the axis
          const double r = std::abs(pos);
          if (r > dom.hi0) continue;
          // du/dx = sign(pos) * du/dr; outward normal from x0 is sgn.
          const double ssgn = (pos >= 0.0) ? 1.0 : -1.0;
          w += sgn * u.interpolate(r) * std::conj(ssgn * grad_u[0].interpolate(r));
        }
        return w;
      }
      // Parametrize S(x0, rho) by s = cos(angle to the x0 axis); the point has
      // radius r(s) and radial unit vector component (d s + rho)/r along n.
      const int n = 1024;
      const double wprefix = unit_sphere_area(N - 1) * std::pow(rho, N - 1);
      Complex acc{0.0, 0.0};
      double wsum_check = 0.0;
      for (int k = 0; k < n; ++k) {
        const double s = -1.0 + 2.0 * (k + 0.5) / n;
        const double weight = (N == 2)
                                  ? 1.0 / std::sqrt(std::max(1e-300, 1.0 - s * s))
                                  : std::pow(std::max(0.0, 1.0 - s * s), 0.5 * (N - 3));
        const double r = std::sqrt(d * d + rho * rho + 2.0 * d * rho * s);
        wsum_check += weight;
        if (r > dom.hi0 || r <= 0.0) continue;  // zero extension outside
        const double ncomp = (d * s + rho) / r;
        acc += weight * u.interpolate(r) * std::conj(grad_u[0].interpolate(r)) * ncomp;
      }
      (void)wsum_check;
      return acc * (wprefix * 2.0 / n);
    }
  }
  return {0.0, 0.0};
}

/// Pointwise map of one or two fields.
inline Field map_field(const Field& a, const std::function<Complex(Complex)>& f) {
  Field out = a;
  for (Complex& v : out.values()) v = f(v);
  return out;
}

inline Field map_fields(const Field& a, const Field& b,
                        const std::function<Complex(Complex, Complex)>& f) {
  Field out = a;
  for (size_t i = 0; i < out.values().size(); ++i)
    out.values()[i] = f(a.values()[i], b.values()[i]);
  return out;
}

}  // namespace locus
