#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "locus/solver.hpp"

using namespace locus;

namespace {

double max_error(const Field& u, const ExactSolution& ex) {
  double e = 0.0;
  for (int j = 0; j < u.ny(); ++j)
    for (int i = 0; i < u.nx(); ++i)
      e = std::max(e, std::abs(u.at(i, j) - ex.value(u.x(i), u.y(j))));
  return e;
}

}  // namespace

TEST_CASE("regularized nonlinearity and its jacobian") {
  const double m = 0.5, eps = 1e-3;
  // phi_eps approaches |u|^{m-1} u away from zero and vanishes at zero
  CHECK(detail::phi_eps({0.0, 0.0}, m, eps) == Complex{0.0, 0.0});
  const Complex u{0.3, -0.4};
  const Complex phi = detail::phi_eps(u, m, eps);
  const Complex exact = std::pow(std::abs(u), m - 1.0) * u;
  CHECK(std::abs(phi - exact) < 1e-5);

  // jacobian block vs. central differences
  const auto J = detail::phi_eps_jacobian(u, m, eps);
  const double d = 1e-7;
  const Complex dre = (detail::phi_eps(u + Complex{d, 0}, m, eps) -
                       detail::phi_eps(u - Complex{d, 0}, m, eps)) /
                      (2.0 * d);
  const Complex dim = (detail::phi_eps(u + Complex{0, d}, m, eps) -
                       detail::phi_eps(u - Complex{0, d}, m, eps)) /
                      (2.0 * d);
  CHECK(J.a11 == Catch::Approx(dre.real()).margin(1e-5));
  CHECK(J.a21 == Catch::Approx(dre.imag()).margin(1e-5));
  CHECK(J.a12 == Catch::Approx(dim.real()).margin(1e-5));
  CHECK(J.a22 == Catch::Approx(dim.imag()).margin(1e-5));
}

TEST_CASE("linear limit: -u'' + u = 1 on (-1,1), zero boundary") {
  const Domain dom = Domain::interval(-1.0, 1.0);
  Field F(dom, 0.005, BoundaryKind::kDirichlet);
  F.fill([](double, double) { return Complex{1.0, 0.0}; });
  const ProblemSpec spec({{0.0, 0.0}, {1.0, 0.0}, 0.5}, dom, BoundaryKind::kDirichlet, F);
  const SolveResult res = continuation_solve(spec);
  REQUIRE(res.converged);
  // u = 1 - cosh(x)/cosh(1); at the midpoint u(0) = 1 - 1/cosh(1)
  const int mid = res.u.nx() / 2;
  CHECK(res.u.x(mid) == Catch::Approx(0.0).margin(1e-12));
  CHECK(res.u.at(mid).real() ==
        Catch::Approx(1.0 - 1.0 / std::cosh(1.0)).margin(1e-5));
  CHECK(std::abs(res.u.at(mid).imag()) < 1e-10);
  CHECK(std::abs(res.u.at(0)) < 1e-12);  // pinned boundary row
}

TEST_CASE("constant solution under Neumann conditions") {
  // a u^m + b u = 2 with a = b = 1, m = 1/2 has the constant solution u = 1.
  const Domain dom = Domain::interval(0.0, 1.0);
  Field F(dom, 0.02, BoundaryKind::kNeumann);
  F.fill([](double, double) { return Complex{2.0, 0.0}; });
  const ProblemSpec spec({{1.0, 0.0}, {1.0, 0.0}, 0.5}, dom, BoundaryKind::kNeumann, F);
  const SolveResult res = continuation_solve(spec);
  REQUIRE(res.converged);
  for (int i = 0; i < res.u.nx(); ++i)
    CHECK(std::abs(res.u.at(i) - Complex{1.0, 0.0}) < 1e-7);
}

TEST_CASE("manufactured bump on an interval") {
  const Domain dom = Domain::interval(-1.0, 1.0);
  const CoefficientPair cp({1.0, 0.0}, {1.0, 0.0}, 0.5);
  const ExactSolution ex = bump_solution(dom, {1.0, 0.5}, {0.0, 0.0}, 0.5);
  Field grid(dom, 0.01, BoundaryKind::kDirichlet);
  const Field F = manufactured_forcing(ex, cp, grid);
  const ProblemSpec spec(cp, dom, BoundaryKind::kDirichlet, F);
  const SolveResult res = continuation_solve(spec);
  REQUIRE(res.converged);
  CHECK(max_error(res.u, ex) < 1e-3);
  CHECK(res.apriori_ratio > 0.0);
  CHECK(res.eps_final == Catch::Approx(1e-10));
}

TEST_CASE("manufactured gaussian on a radial grid, N = 3") {
  const Domain dom = Domain::radial(2.0, 3);
  const CoefficientPair cp({1.0, 1.0}, {2.0, -0.5}, 0.5);
  const ExactSolution ex = gaussian_solution(dom, {1.0, 0.0}, {0.0, 0.0}, 4.0);
  Field grid(dom, 0.01, BoundaryKind::kDirichlet);
  const Field F = manufactured_forcing(ex, cp, grid);
  const ProblemSpec spec(cp, dom, BoundaryKind::kDirichlet, F);
  const SolveResult res = continuation_solve(spec);
  REQUIRE(res.converged);
  CHECK(max_error(res.u, ex) < 1e-3);
}

TEST_CASE("manufactured bump on a rectangle with complex coefficients") {
  const Domain dom = Domain::rectangle(-1.0, 1.0, -1.0, 1.0);
  const CoefficientPair cp({0.0, 1.0}, {1.0, 1.0}, 0.5);
  const ExactSolution ex = bump_solution(dom, {0.8, -0.3}, {0.1, -0.2}, 0.5);
  Field grid(dom, 0.05, BoundaryKind::kDirichlet);
  const Field F = manufactured_forcing(ex, cp, grid);
  const ProblemSpec spec(cp, dom, BoundaryKind::kDirichlet, F);
  const SolveResult res = continuation_solve(spec);
  REQUIRE(res.converged);
  CHECK(max_error(res.u, ex) < 5e-3);
}

TEST_CASE("harmonic confinement term enters the residual") {
  // constant forcing, c > 0 shrinks the solution relative to c = 0
  const Domain dom = Domain::interval(-1.0, 1.0);
  Field F(dom, 0.01, BoundaryKind::kDirichlet);
  F.fill([](double, double) { return Complex{1.0, 0.0}; });
  const ProblemSpec base({{1.0, 0.0}, {1.0, 0.0}, 0.5}, dom, BoundaryKind::kDirichlet, F);
  const ProblemSpec conf({{1.0, 0.0}, {1.0, 0.0}, 0.5, {5.0, 0.0}}, dom,
                         BoundaryKind::kDirichlet, F);
  const double u0 = continuation_solve(base).u.at(100).real();
  const double uc = continuation_solve(conf).u.at(100).real();
  CHECK(uc < u0);
  CHECK(uc > 0.0);
}

TEST_CASE("solver rejects bad inputs") {
  const Domain dom = Domain::interval(0.0, 1.0);
  Field F(dom, 0.1, BoundaryKind::kDirichlet);
  F.at(3) = Complex{std::nan(""), 0.0};
  const ProblemSpec spec({{1.0, 0.0}, {1.0, 0.0}, 0.5}, dom, BoundaryKind::kDirichlet, F);
  CHECK_THROWS_AS(continuation_solve(spec), NonFiniteEncountered);
  Field ok(dom, 0.1, BoundaryKind::kDirichlet);
  CHECK_THROWS_AS(ProblemSpec({{1.0, 0.0}, {1.0, 0.0}, 0.5}, dom, BoundaryKind::kNone, ok),
                  ConfigInvalid);
}
