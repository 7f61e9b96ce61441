#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "locus/coeffs.hpp"
#include "locus/energy.hpp"
#include "locus/errors.hpp"
#include "locus/exponents.hpp"
#include "locus/grid.hpp"
#include "locus/solver.hpp"

namespace locus {

struct Cell {
  int i = 0;
  int j = 0;
};

inline Point cell_position(const Field& u, Cell c) { return {u.x(c.i), u.y(c.j)}; }

inline double cell_distance(const Field& u, Cell a, Cell b) {
  const Point pa = cell_position(u, a), pb = cell_position(u, b);
  if (u.domain().axes() == 1) return std::abs(pa.x - pb.x);
  return std::hypot(pa.x - pb.x, pa.y - pb.y);
}

struct SupportReport {
  double threshold = 0.0;
  std::vector<Cell> support_cells;  // cells with |u| > threshold

  bool empty() const { return support_cells.empty(); }
};

inline double default_support_threshold(const SolverConfig& cfg, double m) {
  return std::max(10.0 * std::pow(cfg.eps_min, m), 100.0 * cfg.newton_tol);
}

inline SupportReport measure_support(const Field& u, double threshold) {
  if (!(threshold > 0.0)) throw ConfigInvalid("support threshold must be positive");
  SupportReport rep;
  rep.threshold = threshold;
  for (int j = 0; j < u.ny(); ++j)
    for (int i = 0; i < u.nx(); ++i)
      if (std::abs(u.at(i, j)) > threshold) rep.support_cells.push_back({i, j});
  return rep;
}

inline double point_distance(const Field& u, Point p, Cell c) {
  const Point q = cell_position(u, c);
  if (u.domain().axes() == 1) return std::abs(p.x - q.x);
  return std::hypot(p.x - q.x, p.y - q.y);
}

/// sup of |x - x0| over support cells; 0 for empty support.
inline double outer_radius(const Field& u, const SupportReport& rep, Point x0) {
  double r = 0.0;
  for (Cell c : rep.support_cells) r = std::max(r, point_distance(u, x0, c));
  return r;
}

/// Largest rho such that |u| <= threshold on every cell of B(x0, rho):
/// the distance from x0 to the nearest support cell (or the whole grid
/// diameter budget if the support is empty).
inline double inner_vanishing_radius(const Field& u, const SupportReport& rep,
                                     Point x0) {
  if (rep.support_cells.empty()) {
    const Domain& d = u.domain();
    double far = std::abs(d.hi0 - d.lo0) + std::abs(d.hi1 - d.lo1);
    return far + std::hypot(x0.x, x0.y);
  }
  double r = std::numeric_limits<double>::infinity();
  for (Cell c : rep.support_cells) r = std::min(r, point_distance(u, x0, c));
  return r;
}

/// All grid cells within distance eps of the given cell set.
inline std::vector<Cell> dilate(const Field& grid_like, const std::vector<Cell>& K,
                                double eps) {
  if (eps < 0.0) throw ConfigInvalid("dilate: eps must be >= 0");
  std::vector<Cell> out;
  for (int j = 0; j < grid_like.ny(); ++j) {
    for (int i = 0; i < grid_like.nx(); ++i) {
      const Cell c{i, j};
      for (const Cell& k : K) {
        if (cell_distance(grid_like, c, k) <= eps) {
          out.push_back(c);
          break;
        }
      }
    }
  }
  return out;
}

struct DecayCheck {
  bool ok = false;
  double worst_ratio = 0.0;  // max over samples of LHS/RHS, 0/0 := 0
};

/// Forcing-decay hypothesis: |F|^2_{L2(B(x0,rho))} <= eps_star ((rho-rho0)_+)^p
/// at every sampled rho in (0, rho1).
inline DecayCheck forcing_decay_check(const Field& F, Point x0, double rho0,
                                      double rho1, double eps_star, double p,
                                      int samples = 64) {
  if (!(rho0 < rho1)) throw ConfigInvalid("forcing_decay_check: need rho0 < rho1");
  if (!(eps_star > 0.0)) throw ConfigInvalid("forcing_decay_check: eps_star must be > 0");
  Field f2 = map_field(F, [](Complex z) { return Complex{std::norm(z), 0.0}; });
  DecayCheck out;
  out.ok = true;
  for (int s = 1; s <= samples; ++s) {
    const double rho = rho1 * s / double(samples + 1);
    const double lhs = ball_integral(f2, x0, rho);
    const double rhs = eps_star * std::pow(std::max(0.0, rho - rho0), p);
    if (lhs <= 0.0) continue;
    if (rhs <= 0.0) {
      out.ok = false;
      out.worst_ratio = std::numeric_limits<double>::infinity();
      continue;
    }
    out.worst_ratio = std::max(out.worst_ratio, lhs / rhs);
    if (lhs > rhs) out.ok = false;
  }
  return out;
}

struct Verdict {
  bool hypothesis_ok = false;  // coercive inequality + decay + energy smallness
  bool observed_ok = false;    // |u| below threshold on B(x0, rho0 - 2h)
  Point x0;
  double rho0 = 0.0;
  double rho1 = 0.0;
  // diagnostics
  bool inequality_ok = false;
  bool energy_small = false;
  bool decay_ok = false;
  double E_rho1 = 0.0;
  double E_star = 0.0;
  double eps_star = 0.0;
  double min_margin = 0.0;
  double decay_worst_ratio = 0.0;
  double inner_vanishing = 0.0;
  double threshold = 0.0;
  bool conditional_on_uniqueness = false;  // Neumann case without Assumption 5.1
};

/// End-to-end verdict at one center: checks the theorem hypotheses on the
/// computed energy profile and, independently, whether the solution is
/// observed to vanish on B(x0, rho0) up to 2h slack.
inline Verdict localization_verdict(const SolveResult& solve, const ProblemSpec& spec,
                                    const CoercivityCertificate& cert,
                                    const ExponentSet& exps, Point x0, double rho0,
                                    double rho1, double C_eff = 1.0,
                                    const SolverConfig& cfg = {}) {
  if (spec.pair.has_harmonic_term())
    throw ConfigInvalid("localization theorems require c = 0");
  const Field& u = solve.u;
  const double h = u.h();

  Verdict v;
  v.x0 = x0;
  v.rho0 = rho0;
  v.rho1 = rho1;
  v.threshold = default_support_threshold(cfg, spec.pair.m);
  v.conditional_on_uniqueness =
      spec.bc == BoundaryKind::kNeumann && !admissible_uniqueness(spec.pair);

  const std::vector<double> rs = rho_samples(h, rho1);
  const EnergyProfile pr = compute_profile(u, spec.forcing, x0, rs, spec.pair.m);
  const double tol = tol_id(h, h1_norm_sq(u));

  const InequalityMargin im = verify_inequality(pr, cert, /*with_forcing=*/true, tol);
  v.inequality_ok = im.holds;
  v.min_margin = im.min_margin;

  v.E_rho1 = pr.E.empty() ? 0.0 : pr.E.back();
  const double b1 = pr.bmass.empty() ? 0.0 : pr.bmass.back();
  const Thresholds th = thresholds(exps, rho0, rho1, cert.L, cert.M, b1, C_eff);
  v.E_star = th.E_star;
  v.eps_star = th.eps_star;
  v.energy_small = v.E_rho1 < th.E_star;

  const DecayCheck dc =
      forcing_decay_check(spec.forcing, x0, rho0, rho1, th.eps_star, exps.p);
  v.decay_ok = dc.ok;
  v.decay_worst_ratio = dc.worst_ratio;

  v.hypothesis_ok = v.inequality_ok && v.energy_small && v.decay_ok;

  const SupportReport rep = measure_support(u, v.threshold);
  v.inner_vanishing = inner_vanishing_radius(u, rep, x0);
  v.observed_ok = v.inner_vanishing >= rho0 - 2.0 * h;
  return v;
}

struct ContainmentReport {
  bool contained = false;       // supp u inside K(eps)
  double worst_excess = 0.0;    // max |u| outside K(eps)
  size_t cells_outside = 0;
};

/// Whole-domain support containment: every cell farther than eps from the
/// forcing support must carry |u| below the threshold.
inline ContainmentReport check_support_containment(const Field& u, const Field& F,
                                                   double eps, double threshold,
                                                   double forcing_floor = 0.0) {
  const double ffloor =
      forcing_floor > 0.0 ? forcing_floor : 1e-14 * (1.0 + std::abs(domain_integral(
                                                               map_field(F, [](Complex z) {
                                                                 return Complex{std::abs(z), 0.0};
                                                               }))));
  std::vector<Cell> suppF;
  for (int j = 0; j < F.ny(); ++j)
    for (int i = 0; i < F.nx(); ++i)
      if (std::abs(F.at(i, j)) > ffloor) suppF.push_back({i, j});

  ContainmentReport rep;
  rep.contained = true;
  for (int j = 0; j < u.ny(); ++j) {
    for (int i = 0; i < u.nx(); ++i) {
      const Cell c{i, j};
      double dmin = std::numeric_limits<double>::infinity();
      for (const Cell& k : suppF) dmin = std::min(dmin, cell_distance(u, c, k));
      if (dmin <= eps) continue;
      const double mag = std::abs(u.at(i, j));
      if (mag > threshold) {
        rep.contained = false;
        ++rep.cells_outside;
        rep.worst_excess = std::max(rep.worst_excess, mag);
      }
    }
  }
  return rep;
}

/// Grid-aligned covering of the region outside K(2 eps), spaced eps apart,
/// mirroring the finite-subcover argument: returns centers where a per-center
/// verdict can be evaluated.
inline std::vector<Point> covering_centers(const Field& u, const Field& F,
                                           double eps) {
  std::vector<Cell> suppF;
  for (int j = 0; j < F.ny(); ++j)
    for (int i = 0; i < F.nx(); ++i)
      if (std::abs(F.at(i, j)) > 0.0) suppF.push_back({i, j});
  std::vector<Point> centers;
  const Domain& d = u.domain();
  const int nsteps0 = std::max(1, int(std::floor((d.hi0 - d.lo0) / eps)));
  const int nsteps1 = d.axes() == 2 ? std::max(1, int(std::floor((d.hi1 - d.lo1) / eps))) : 0;
  for (int j = 0; j <= nsteps1; ++j) {
    for (int i = 0; i <= nsteps0; ++i) {
      Point p{d.lo0 + i * eps, d.axes() == 2 ? d.lo1 + j * eps : 0.0};
      if (p.x > d.hi0 || (d.axes() == 2 && p.y > d.hi1)) continue;
      double dmin = std::numeric_limits<double>::infinity();
      for (const Cell& k : suppF) {
        const Point q = cell_position(u, k);
        const double dd = d.axes() == 1 ? std::abs(p.x - q.x)
                                        : std::hypot(p.x - q.x, p.y - q.y);
        dmin = std::min(dmin, dd);
      }
      if (dmin > 2.0 * eps) centers.push_back(p);
    }
  }
  return centers;
}

}  // namespace locus
