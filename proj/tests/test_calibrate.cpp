#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "locus/calibrate.hpp"

using namespace locus;

TEST_CASE("simpson quadrature") {
  CHECK(detail::simpson([](double r) { return r * r * r; }, 1.0) ==
        Catch::Approx(0.25).epsilon(1e-12));
  CHECK(detail::simpson([](double r) { return std::exp(-r); }, 2.0) ==
        Catch::Approx(1.0 - std::exp(-2.0)).epsilon(1e-10));
}

TEST_CASE("trace ratio of the constant profile, m = 1/2, N = 1, rho = 1") {
  const auto s = exponent_set(0.5, 1);
  const RadialProfile one{"constant", [](double) { return 1.0; },
                          [](double) { return 0.0; }};
  // lhs = sqrt(2); |u|_{m+1} = 2^{2/3}; rhs = 2^{2/3}; ratio = 2^{-1/6}
  CHECK(trace_ratio(s, 1.0, one) ==
        Catch::Approx(std::pow(2.0, -1.0 / 6.0)).epsilon(1e-10));
}

TEST_CASE("trace ratio is scale invariant for the constant profile") {
  // N = 1: lhs = sqrt(2), |u|_{m+1} = (2 rho)^{2/3}, and the rho^{-delta}
  // weight exactly cancels the growth of the mass term, so the ratio is
  // independent of rho.
  const auto s = exponent_set(0.5, 1);
  const RadialProfile one{"constant", [](double) { return 1.0; },
                          [](double) { return 0.0; }};
  for (const double rho : {2.0, 0.5, 10.0}) {
    const double um1 = std::pow(2.0 * rho, 2.0 / 3.0);
    const double expected = std::sqrt(2.0) /
                            (std::pow(std::pow(rho, -s.delta) * um1, s.theta) *
                             std::pow(um1, 1.0 - s.theta));
    CHECK(trace_ratio(s, rho, one) == Catch::Approx(expected).epsilon(1e-10));
    CHECK(trace_ratio(s, rho, one) ==
          Catch::Approx(std::pow(2.0, -1.0 / 6.0)).epsilon(1e-10));
  }
}

TEST_CASE("default family composition") {
  const auto fam = default_trace_family(1.0);
  CHECK(fam.size() == 18);  // 8 bumps, 9 gaussians, 1 constant
  for (const auto& f : fam) {
    CHECK(!f.name.empty());
    CHECK(f.value(1.0) > 0.0);  // none vanishes on the sphere
    // derivative consistency against central differences at r = 0.4
    const double d = 1e-6;
    const double fd = (f.value(0.4 + d) - f.value(0.4 - d)) / (2.0 * d);
    CHECK(f.deriv(0.4) == Catch::Approx(fd).margin(1e-5));
  }
}

TEST_CASE("trace constant estimate") {
  const auto est = trace_constant_estimate(0.5, 1, 1.0);
  CHECK(est.family_size == 18);
  CHECK(est.C_lower >= std::pow(2.0, -1.0 / 6.0));  // at least the constant's ratio
  CHECK(!est.argmax.empty());
  CHECK(recommended_c_eff(est) == Catch::Approx(4.0 * est.C_lower));
  CHECK(recommended_c_eff(est, 2.0) == Catch::Approx(2.0 * est.C_lower));

  // higher dimensions stay finite and positive
  for (int N : {2, 3, 5}) {
    const auto e = trace_constant_estimate(0.3, N, 0.7);
    CHECK(e.C_lower > 0.0);
    CHECK(std::isfinite(e.C_lower));
  }

  CHECK_THROWS_AS(trace_constant_estimate(0.5, 1, 1.0, {}), EmptyFamily);

  // profiles vanishing on the sphere are skipped
  const RadialProfile dead{"dead", [](double r) { return 1.0 - r; },
                           [](double) { return -1.0; }};
  const auto skipped = trace_constant_estimate(0.5, 1, 1.0, {dead});
  CHECK(skipped.C_lower == 0.0);
  CHECK(skipped.argmax.empty());
}
