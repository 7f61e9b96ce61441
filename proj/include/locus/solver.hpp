#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <cmath>
#include <functional>
#include <vector>

#include "locus/coeffs.hpp"
#include "locus/errors.hpp"
#include "locus/grid.hpp"

namespace locus {

struct ProblemSpec {
  CoefficientPair pair;
  Domain domain;
  BoundaryKind bc;
  Field forcing;

  ProblemSpec(CoefficientPair p, Domain d, BoundaryKind bc_, Field F)
      : pair(p), domain(d), bc(bc_), forcing(std::move(F)) {
    if (bc == BoundaryKind::kNone)
      throw ConfigInvalid("problem needs dirichlet or neumann boundary conditions");
  }
};

struct SolverConfig {
  double eps_start = 1e-2;
  double eps_min = 1e-10;
  double eps_factor = 0.5;
  double newton_tol = 1e-10;  // relative residual
  int max_newton = 50;        // per continuation step
  int max_halvings = 20;
};

struct SolveResult {
  Field u;
  double residual_norm = 0.0;
  double eps_final = 0.0;
  int newton_iterations_total = 0;
  bool converged = false;
  double apriori_ratio = 0.0;  // (|u|_H1^2 + |u|_{m+1}^{m+1}) / |F|_2^2
};

namespace detail {

// Regularized nonlinearity phi_eps(u) = (|u|^2 + eps^2)^{(m-1)/2} u.
inline Complex phi_eps(Complex u, double m, double eps) {
  const double s = std::norm(u) + eps * eps;
  return std::pow(s, 0.5 * (m - 1.0)) * u;
}

// 2x2 real Jacobian block of phi_eps at u: g I + 2 g' v v^T.
struct Block2 {
  double a11, a12, a21, a22;
};

inline Block2 phi_eps_jacobian(Complex u, double m, double eps) {
  const double s = std::norm(u) + eps * eps;
  const double g = std::pow(s, 0.5 * (m - 1.0));
  const double gp = 0.5 * (m - 1.0) * std::pow(s, 0.5 * (m - 3.0));
  const double ur = u.real(), ui = u.imag();
  return {g + 2.0 * gp * ur * ur, 2.0 * gp * ur * ui,
          2.0 * gp * ur * ui, g + 2.0 * gp * ui * ui};
}

// Multiplication by a complex scalar as a 2x2 rotation-scale block.
inline Block2 rot(Complex z) {
  return {z.real(), -z.imag(), z.imag(), z.real()};
}

inline Block2 mul(const Block2& x, const Block2& y) {
  return {x.a11 * y.a11 + x.a12 * y.a21, x.a11 * y.a12 + x.a12 * y.a22,
          x.a21 * y.a11 + x.a22 * y.a21, x.a21 * y.a12 + x.a22 * y.a22};
}

inline Block2 add(const Block2& x, const Block2& y) {
  return {x.a11 + y.a11, x.a12 + y.a12, x.a21 + y.a21, x.a22 + y.a22};
}

// Laplacian stencil entries for one node: list of (node index, weight) such
// that (-Delta u)_i = sum w_k u_k. Dirichlet rows are flagged pinned.
struct StencilRow {
  std::vector<std::pair<size_t, double>> entries;
  bool pinned = false;
};

inline std::vector<StencilRow> build_stencil(const Field& u, BoundaryKind bc) {
  const Domain& dom = u.domain();
  const int nx = u.nx(), ny = u.ny();
  const double hx = u.h(), hy = u.hy();
  const double ix2 = 1.0 / (hx * hx), iy2 = 1.0 / (hy * hy);
  std::vector<StencilRow> rows(u.size());

  if (dom.kind == DomainKind::kInterval) {
    for (int i = 0; i < nx; ++i) {
      StencilRow& row = rows[i];
      if (i == 0 || i == nx - 1) {
        if (bc == BoundaryKind::kDirichlet) {
          row.pinned = true;
          continue;
        }
        const int nb = (i == 0) ? 1 : nx - 2;
        row.entries = {{size_t(i), 2.0 * ix2}, {size_t(nb), -2.0 * ix2}};
        continue;
      }
      row.entries = {{size_t(i - 1), -ix2}, {size_t(i), 2.0 * ix2}, {size_t(i + 1), -ix2}};
    }
  } else if (dom.kind == DomainKind::kRadial) {
    const int N = dom.ambient_N;
    for (int i = 0; i < nx; ++i) {
      StencilRow& row = rows[i];
      if (i == 0) {
        // r = 0: -Delta u = -N u'' with u'(0) = 0 by reflection.
        row.entries = {{0, 2.0 * N * ix2}, {1, -2.0 * N * ix2}};
        continue;
      }
      if (i == nx - 1) {
        if (bc == BoundaryKind::kDirichlet) {
          row.pinned = true;
          continue;
        }
        // ghost reflection: u' = 0 at the outer boundary
        row.entries = {{size_t(i), 2.0 * ix2}, {size_t(i - 1), -2.0 * ix2}};
        continue;
      }
      const double r = u.x(i);
      const double adv = (N - 1) / (2.0 * hx * r);
      row.entries = {{size_t(i - 1), -ix2 + adv},
                     {size_t(i), 2.0 * ix2},
                     {size_t(i + 1), -ix2 - adv}};
    }
  } else {
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        StencilRow& row = rows[u.index(i, j)];
        const bool boundary = (i == 0 || i == nx - 1 || j == 0 || j == ny - 1);
        if (boundary && bc == BoundaryKind::kDirichlet) {
          row.pinned = true;
          continue;
        }
        auto add_pair = [&](int ii, int jj, double w) {
          row.entries.emplace_back(u.index(ii, jj), w);
        };
        add_pair(i, j, 2.0 * ix2 + 2.0 * iy2);
        // Neumann ghost reflection folds the outside neighbor onto the inside one.
        if (i == 0) add_pair(1, j, -2.0 * ix2);
        else if (i == nx - 1) add_pair(nx - 2, j, -2.0 * ix2);
        else { add_pair(i - 1, j, -ix2); add_pair(i + 1, j, -ix2); }
        if (j == 0) add_pair(i, 1, -2.0 * iy2);
        else if (j == ny - 1) add_pair(i, ny - 2, -2.0 * iy2);
        else { add_pair(i, j - 1, -iy2); add_pair(i, j + 1, -iy2); }
      }
    }
  }
  return rows;
}

inline double sq_abs2(Complex z) { return std::norm(z); }

}  // namespace detail

/// Squared position |x|^2 at a node (potential weight for the c-term).
inline double position_sq(const Field& u, int i, int j = 0) {
  switch (u.domain().kind) {
    case DomainKind::kInterval: return u.x(i) * u.x(i);
    case DomainKind::kRadial: return u.x(i) * u.x(i);
    case DomainKind::kRectangle: return u.x(i) * u.x(i) + u.y(j) * u.y(j);
  }
  return 0.0;
}

/// Solves -Delta u + a phi_eps(u) + b u + c|x|^2 u = F for a decreasing
/// schedule of regularization parameters eps, warm-starting damped Newton
/// from the previous solution.
class ContinuationSolver {
 public:
  ContinuationSolver(const ProblemSpec& spec, SolverConfig cfg = {})
      : spec_(spec), cfg_(cfg) {}

  SolveResult solve() const {
    const Field& F = spec_.forcing;
    if (!F.all_finite()) throw NonFiniteEncountered("forcing contains NaN/Inf");
    Field u(F.domain(), F.h(), spec_.bc);

    const auto stencil = detail::build_stencil(u, spec_.bc);
    const double fnorm = vec_norm(F);
    const double abs_tol = cfg_.newton_tol * (1.0 + fnorm);

    SolveResult res;
    res.u = u;
    double eps = cfg_.eps_start;
    while (true) {
      res.newton_iterations_total += newton_solve(res.u, stencil, eps, abs_tol);
      res.eps_final = eps;
      if (eps <= cfg_.eps_min) break;
      eps = std::max(eps * cfg_.eps_factor, cfg_.eps_min);
    }
    res.residual_norm = residual_norm(res.u, stencil, res.eps_final);
    res.converged = res.residual_norm <= abs_tol;

    // a-priori estimate report (not enforced)
    if (fnorm > 0.0) {
      const Gradient g = discrete_gradient(res.u);
      double h1 = 0.0, mmass = 0.0, f2 = 0.0;
      const double m = spec_.pair.m;
      for (int j = 0; j < res.u.ny(); ++j)
        for (int i = 0; i < res.u.nx(); ++i) {
          const double w = res.u.node_volume(i, j);
          double g2 = std::norm(g[0].at(i, j));
          if (g.size() > 1) g2 += std::norm(g[1].at(i, j));
          h1 += w * (std::norm(res.u.at(i, j)) + g2);
          mmass += w * std::pow(std::abs(res.u.at(i, j)), m + 1.0);
          f2 += w * std::norm(F.at(i, j));
        }
      res.apriori_ratio = (h1 + mmass) / f2;
    }
    return res;
  }

 private:
  using Triplet = Eigen::Triplet<double>;
  using SpMat = Eigen::SparseMatrix<double>;

  double vec_norm(const Field& f) const {
    double s = 0.0;
    for (const Complex& v : f.values()) s += std::norm(v);
    return std::sqrt(s);
  }

  // Euclidean norm of the nonlinear residual, Dirichlet rows pinned to u.
  double residual_norm(const Field& u, const std::vector<detail::StencilRow>& st,
                       double eps) const {
    double s = 0.0;
    fill_residual(u, st, eps, [&](size_t, Complex r) { s += std::norm(r); });
    return std::sqrt(s);
  }

  template <typename Sink>
  void fill_residual(const Field& u, const std::vector<detail::StencilRow>& st,
                     double eps, Sink&& sink) const {
    const CoefficientPair& cp = spec_.pair;
    for (int j = 0; j < u.ny(); ++j) {
      for (int i = 0; i < u.nx(); ++i) {
        const size_t n = u.index(i, j);
        if (st[n].pinned) {
          sink(n, u.values()[n]);
          continue;
        }
        Complex lap{0.0, 0.0};
        for (const auto& [k, w] : st[n].entries) lap += w * u.values()[k];
        const Complex r = lap + cp.a * detail::phi_eps(u.values()[n], cp.m, eps) +
                          cp.b * u.values()[n] +
                          cp.c * position_sq(u, i, j) * u.values()[n] -
                          spec_.forcing.at(i, j);
        sink(n, r);
      }
    }
  }

  // One continuation step: damped Newton at fixed eps. Returns iterations.
  int newton_solve(Field& u, const std::vector<detail::StencilRow>& st,
                   double eps, double abs_tol) const {
    const size_t n = u.size();
    const CoefficientPair& cp = spec_.pair;
    double rnorm = residual_norm(u, st, eps);
    int iters = 0;
    while (rnorm > abs_tol && iters < cfg_.max_newton) {
      // assemble J and -R
      std::vector<Triplet> trips;
      trips.reserve(n * 10);
      Eigen::VectorXd rhs(2 * n);
      fill_residual(u, st, eps, [&](size_t k, Complex r) {
        rhs[2 * k] = -r.real();
        rhs[2 * k + 1] = -r.imag();
      });
      for (int j = 0; j < u.ny(); ++j) {
        for (int i = 0; i < u.nx(); ++i) {
          const size_t k = u.index(i, j);
          if (st[k].pinned) {
            trips.emplace_back(2 * k, 2 * k, 1.0);
            trips.emplace_back(2 * k + 1, 2 * k + 1, 1.0);
            continue;
          }
          detail::Block2 diag =
              detail::add(detail::rot(cp.b + cp.c * position_sq(u, i, j)),
                          detail::mul(detail::rot(cp.a),
                                      detail::phi_eps_jacobian(u.values()[k], cp.m, eps)));
          for (const auto& [kk, w] : st[k].entries) {
            if (kk == k) {
              diag.a11 += w;
              diag.a22 += w;
            } else {
              trips.emplace_back(2 * k, 2 * kk, w);
              trips.emplace_back(2 * k + 1, 2 * kk + 1, w);
            }
          }
          trips.emplace_back(2 * k, 2 * k, diag.a11);
          trips.emplace_back(2 * k, 2 * k + 1, diag.a12);
          trips.emplace_back(2 * k + 1, 2 * k, diag.a21);
          trips.emplace_back(2 * k + 1, 2 * k + 1, diag.a22);
        }
      }
      SpMat J(2 * n, 2 * n);
      J.setFromTriplets(trips.begin(), trips.end());
      Eigen::SparseLU<SpMat> lu;
      lu.compute(J);
      if (lu.info() != Eigen::Success)
        throw LinearSolveFailed("sparse LU factorization failed");
      const Eigen::VectorXd delta = lu.solve(rhs);
      if (lu.info() != Eigen::Success) throw LinearSolveFailed("sparse LU solve failed");

      // backtracking on the residual norm
      double alpha = 1.0;
      Field trial = u;
      bool accepted = false;
      for (int halving = 0; halving <= cfg_.max_halvings; ++halving) {
        for (size_t k = 0; k < n; ++k)
          trial.values()[k] = u.values()[k] +
                              alpha * Complex{delta[2 * k], delta[2 * k + 1]};
        if (!trial.all_finite()) {
          alpha *= 0.5;
          continue;
        }
        const double tnorm = residual_norm(trial, st, eps);
        if (tnorm < rnorm || tnorm <= abs_tol) {
          u = trial;
          rnorm = tnorm;
          accepted = true;
          break;
        }
        alpha *= 0.5;
      }
      ++iters;
      if (!accepted)
        throw NewtonDiverged("residual not reduced after damping budget (eps = " +
                             std::to_string(eps) + ")");
    }
    if (rnorm > abs_tol)
      throw NewtonDiverged("newton iteration budget exhausted (eps = " +
                           std::to_string(eps) + ")");
    return iters;
  }

  ProblemSpec spec_;
  SolverConfig cfg_;
};

inline SolveResult continuation_solve(const ProblemSpec& spec, SolverConfig cfg = {}) {
  return ContinuationSolver(spec, cfg).solve();
}

/// Closed-form exact solution descriptor for manufactured-solution runs.
struct ExactSolution {
  std::function<Complex(double, double)> value;
  std::function<Complex(double, double)> laplacian;
};

/// F = -Lap(u) + a|u|^{m-1}u + b u + c|x|^2 u evaluated nodewise, with the
/// singular term defined as 0 where u vanishes.
inline Field manufactured_forcing(const ExactSolution& ex, const CoefficientPair& cp,
                                  const Field& grid_like) {
  Field F = grid_like;
  for (int j = 0; j < F.ny(); ++j) {
    for (int i = 0; i < F.nx(); ++i) {
      const double px = F.x(i), py = F.y(j);
      const Complex u = ex.value(px, py);
      Complex sing{0.0, 0.0};
      if (u != Complex{0.0, 0.0})
        sing = std::pow(std::abs(u), cp.m - 1.0) * u;
      F.at(i, j) = -ex.laplacian(px, py) + cp.a * sing + cp.b * u +
                   cp.c * position_sq(F, i, j) * u;
    }
  }
  return F;
}

namespace detail {

// Squared distance to the bump/gaussian center for the given domain kind.
// Radial profiles are functions of the radial coordinate; off-center radial
// profiles (center.x != 0) keep that 1-D shape in r.
inline double profile_dist2(const Domain& dom, Point center, double px, double py) {
  if (dom.kind == DomainKind::kRectangle)
    return (px - center.x) * (px - center.x) + (py - center.y) * (py - center.y);
  return (px - center.x) * (px - center.x);
}

}  // namespace detail

/// Compactly supported polynomial bump amp * ((w^2 - d^2)_+)^3 (d = distance
/// to the center) with its Laplacian in the domain's ambient dimension.
inline ExactSolution bump_solution(const Domain& dom, Complex amp, Point center,
                                   double width) {
  ExactSolution ex;
  ex.value = [=](double px, double py) -> Complex {
    const double w = std::max(0.0, width * width -
                                       detail::profile_dist2(dom, center, px, py));
    return amp * w * w * w;
  };
  ex.laplacian = [=](double px, double py) -> Complex {
    const double r2 = detail::profile_dist2(dom, center, px, py);
    const double w = std::max(0.0, width * width - r2);
    if (w == 0.0) return {0.0, 0.0};
    if (dom.kind == DomainKind::kRadial) {
      // g(r) shape in the radial coordinate: Lap = g'' + (N-1)/r g'.
      const int N = dom.ambient_N;
      const double s = px - center.x;
      const Complex gpp = amp * (-6.0 * w * w + 24.0 * s * s * w);
      const Complex gp = amp * (-6.0 * s * w * w);
      if (px == 0.0) return Complex(N) * gpp;  // needs center = 0 for smoothness
      return gpp + double(N - 1) / px * gp;
    }
    const int N = dom.axes();
    return amp * (-6.0 * N * w * w + 24.0 * r2 * w);
  };
  return ex;
}

/// Gaussian amp * exp(-s d^2) with d the distance to the center.
inline ExactSolution gaussian_solution(const Domain& dom, Complex amp, Point center,
                                       double s) {
  ExactSolution ex;
  ex.value = [=](double px, double py) -> Complex {
    return amp * std::exp(-s * detail::profile_dist2(dom, center, px, py));
  };
  ex.laplacian = [=](double px, double py) -> Complex {
    const double r2 = detail::profile_dist2(dom, center, px, py);
    const Complex g = amp * std::exp(-s * r2);
    if (dom.kind == DomainKind::kRadial) {
      const int N = dom.ambient_N;
      const double t = px - center.x;
      const Complex gpp = g * (4.0 * s * s * t * t - 2.0 * s);
      const Complex gp = g * (-2.0 * s * t);
      if (px == 0.0) return Complex(N) * gpp;
      return gpp + double(N - 1) / px * gp;
    }
    const int N = dom.axes();
    return g * (4.0 * s * s * r2 - 2.0 * s * N);
  };
  return ex;
}

}  // namespace locus
