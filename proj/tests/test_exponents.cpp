#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "locus/exponents.hpp"

using namespace locus;

TEST_CASE("exponent table for m = 1/2, N = 1") {
  const auto s = exponent_set(0.5, 1);
  CHECK(s.k == Catch::Approx(3.5).epsilon(1e-15));
  CHECK(s.nu == Catch::Approx(7.0 / 3.0).epsilon(1e-15));
  CHECK(s.theta == Catch::Approx(4.0 / 7.0).epsilon(1e-15));
  CHECK(s.ell == Catch::Approx(7.0 / 6.0).epsilon(1e-15));
  CHECK(s.delta == Catch::Approx(7.0 / 6.0).epsilon(1e-15));
  CHECK(s.p == Catch::Approx(7.0).epsilon(1e-15));

  const auto t1 = tau_exponents(s, 1.0);
  CHECK(t1.gamma == Catch::Approx(1.0 / 7.0).epsilon(1e-15));
  CHECK(t1.mu == Catch::Approx(0.0).margin(1e-15));
  CHECK(t1.eta == Catch::Approx(4.0 / 21.0).epsilon(1e-14));
}

TEST_CASE("exponent table rejects bad inputs") {
  CHECK_THROWS_AS(exponent_set(0.0, 1), InvalidExponent);
  CHECK_THROWS_AS(exponent_set(1.0, 1), InvalidExponent);
  CHECK_THROWS_AS(exponent_set(0.5, 0), InvalidExponent);
  const auto s = exponent_set(0.5, 2);
  CHECK_THROWS_AS(tau_exponents(s, 0.75), TauOutOfRange);  // = (m+1)/2
  CHECK_THROWS_AS(tau_exponents(s, 1.0 + 1e-9), TauOutOfRange);
  CHECK_NOTHROW(tau_exponents(s, 1.0));
}

TEST_CASE("exponent identities over random (m, N, tau)") {
  std::mt19937_64 rng(31415);
  std::uniform_real_distribution<double> um(1e-3, 1.0 - 1e-3);
  std::uniform_int_distribution<int> uN(1, 10);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int trial = 0; trial < 5000; ++trial) {
    const double m = um(rng);
    const int N = uN(rng);
    const auto s = exponent_set(m, N);
    CHECK(s.nu > 2.0);
    CHECK((s.theta > 0.0 && s.theta < 1.0));
    // 2 delta theta = nu - 1
    CHECK(2.0 * s.delta * s.theta == Catch::Approx(s.nu - 1.0).epsilon(1e-12));
    // p is the reciprocal of gamma at tau = 1
    CHECK(s.p * tau_exponents(s, 1.0).gamma == Catch::Approx(1.0).epsilon(1e-12));

    const double lo = tau_lower_bound(s);
    const double tau = lo + (1.0 - lo) * std::max(1e-9, u01(rng));
    const auto t = tau_exponents(s, tau);
    CHECK(t.gamma > 0.0);
    CHECK(t.eta > 0.0);
    CHECK(t.mu >= 0.0);
    // theta (1/2 + tau (1-theta) ell) = (gamma + 1)/2
    CHECK(s.theta * (0.5 + tau * (1.0 - s.theta) * s.ell) ==
          Catch::Approx(0.5 * (t.gamma + 1.0)).epsilon(1e-12));
  }
}

TEST_CASE("localization radius formula") {
  const auto s = exponent_set(0.5, 1);
  SECTION("zero energy keeps the full radius") {
    const auto lb = rho_max(s, 0.7, 0.0, 3.0, 1.0, 1.0);
    CHECK(lb.rho_max == 0.7);
  }
  SECTION("all-ones input collapses the radius") {
    // min_tau 1/(2 tau - 3/2) = 2 at tau = 1, so the bracket is 1 - 2 < 0.
    const auto lb = rho_max(s, 1.0, 1.0, 1.0, 1.0, 1.0);
    CHECK(lb.rho_max == 0.0);
    CHECK(lb.tau_star == Catch::Approx(1.0).margin(1e-6));
  }
  SECTION("hand-checked positive radius") {
    // E0 = b0 = 1 again, small constant 2^-10 absorbed through C_eff:
    // rho_max^nu = 1 - 2^-10 * 2.
    const auto lb = rho_max(s, 1.0, 1.0, 1.0, 1.0, 1.0, std::pow(2.0, -10));
    CHECK(lb.rho_max == Catch::Approx(std::pow(1.0 - std::pow(2.0, -9), 3.0 / 7.0))
                            .epsilon(1e-10));
  }
  SECTION("monotone in the energy and in C_eff") {
    double prev = rho_max(s, 1.0, 1e-8, 0.5, 1.0, 1.0).rho_max;
    for (double E0 : {1e-6, 1e-4, 1e-2, 1.0}) {
      const double cur = rho_max(s, 1.0, E0, 0.5, 1.0, 1.0).rho_max;
      CHECK(cur <= prev + 1e-14);
      prev = cur;
    }
    const double loose = rho_max(s, 1.0, 1e-4, 0.5, 1.0, 1.0, 0.5).rho_max;
    const double tight = rho_max(s, 1.0, 1e-4, 0.5, 1.0, 1.0, 2.0).rho_max;
    CHECK(tight <= loose);
  }
  SECTION("invalid inputs") {
    CHECK_THROWS_AS(rho_max(s, 0.0, 1.0, 1.0, 1.0, 1.0), InvalidExponent);
    CHECK_THROWS_AS(rho_max(s, 1.0, -1.0, 1.0, 1.0, 1.0), InvalidExponent);
    CHECK_THROWS_AS(rho_max(s, 1.0, 1.0, 1.0, 0.0, 1.0), InvalidExponent);
  }
}

TEST_CASE("thresholds for m = 1/2, N = 1, rho0 = 1/2, rho1 = 1") {
  const auto s = exponent_set(0.5, 1);
  const auto th = thresholds(s, 0.5, 1.0, 1.0, 1.0, 1.0);
  const double c43 = std::pow(2.0, 4.0 / 3.0);
  CHECK(th.K == Catch::Approx(c43).epsilon(1e-13));
  CHECK(th.gamma == Catch::Approx(1.0 / 7.0).epsilon(1e-15));
  CHECK(th.E_star == Catch::Approx(std::pow(1.0 / (28.0 * c43), 7.0)).epsilon(1e-12));
  CHECK(th.eps_star ==
        Catch::Approx(std::pow(1.0 / (14.0 * c43), 7.0) /
                      (std::pow(2.0, 7.0 / 6.0) * 4.0))
            .epsilon(1e-12));
  CHECK(comparison_H(th, 0.4) == 0.0);
  CHECK(comparison_H(th, 0.5) == 0.0);
  CHECK(comparison_H(th, 1.0) == Catch::Approx(th.E_star).epsilon(1e-12));
  CHECK_THROWS_AS(thresholds(s, 1.0, 0.5, 1.0, 1.0, 1.0), InvalidExponent);
}

TEST_CASE("Young bound fuzz") {
  std::mt19937_64 rng(2718);
  std::uniform_real_distribution<double> pos(1e-3, 1e3);
  std::uniform_real_distribution<double> lam(1.0 + 1e-2, 10.0);
  for (int trial = 0; trial < 5000; ++trial) {
    const auto [lhs, rhs] = young_bound(pos(rng), pos(rng), lam(rng), pos(rng));
    CHECK(lhs <= rhs * (1.0 + 1e-12));
  }
}

TEST_CASE("ODE comparison on the closed-form envelope") {
  const auto s = exponent_set(0.5, 1);
  const auto th = thresholds(s, 0.5, 1.0, 1.0, 1.0, 1.0);

  // E(rho) = (gamma/K (rho - rho_z)_+)^{1/gamma} solves K E' = E^{1-gamma}
  // exactly; shifting rho_z far enough past rho0 keeps it under H (which
  // carries the halved slope gamma/(2K)) on the whole window.
  const double rho_z = 0.8;
  std::vector<double> rho, E, G;
  for (int i = 0; i <= 200; ++i) {
    const double r = 0.5 + 0.5 * i / 200.0;
    rho.push_back(r);
    E.push_back(std::pow(th.gamma / th.K * std::max(0.0, r - rho_z), 1.0 / th.gamma));
    G.push_back(0.0);
  }
  REQUIRE(E.back() < th.E_star);
  CHECK(ode_compare(th, rho, E, G));
  CHECK(E[0] == 0.0);

  SECTION("violating curve is reported") {
    auto E2 = E;
    for (size_t i = 0; i < E2.size(); ++i) E2[i] = comparison_H(th, rho[i]) * 1.5;
    E2.back() = th.E_star / 2.0;  // keep the endpoint precondition satisfied
    CHECK_FALSE(ode_compare(th, rho, E2, G));
  }
  SECTION("endpoint precondition enforced") {
    auto E3 = E;
    E3.back() = th.E_star * 2.0;
    CHECK_THROWS_AS(ode_compare(th, rho, E3, G), PreconditionViolated);
  }
  SECTION("forcing precondition enforced") {
    auto G2 = G;
    G2[100] = 1.0;
    CHECK_THROWS_AS(ode_compare(th, rho, E, G2), PreconditionViolated);
  }
}
