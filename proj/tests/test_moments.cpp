#include <catch2/catch_amalgamated.hpp>

#include "ellop/moments.hpp"

using namespace ellop;

TEST_CASE("moment_sym: trivial and symmetric values") {
  PrecisionContext ctx(60);
  Params flat = Params::of("0", "0", "0.37", ctx);
  REQUIRE(abs(moment_sym(0, flat) - 2) < ctx.eps());
  REQUIRE(moment_sym(1, flat).is_zero());
  REQUIRE(moment_sym(7, Params::of("0.3", "0.7", "0.5", ctx)).is_zero());
}

TEST_CASE("moment_sym: quadrature oracle at generic parameters") {
  PrecisionContext ctx(60);
  Params p = Params::of("0.3", "0.7", "0.5", ctx);
  Real closed = moment_sym(2, p);
  Real quad = moment_quad(2, p);
  REQUIRE(abs(closed / quad - 1) < ctx.pow10(-(ctx.digits() - 5)));
}

TEST_CASE("moment_shifted: Beta-integral cases") {
  PrecisionContext ctx(60);
  ShiftedParams unit(ctx.real(0), ctx.real(0), ctx.real(0), ctx.frac(1, 2), ctx);
  REQUIRE(abs(moment_shifted(0, unit) - 1) < ctx.eps());
  // c = 0 collapses to the Beta integral for every j
  ShiftedParams bcase(ctx.real("0.4"), ctx.real("1.2"), ctx.real(0), ctx.frac(1, 3), ctx);
  for (long j : {0L, 1L, 3L}) {
    Real expect = beta_fn(bcase.a + j + 1, bcase.b + 1, ctx);
    REQUIRE(abs(moment_shifted(j, bcase) - expect) < ctx.pow10(-(ctx.digits() - 3)));
  }
}

TEST_CASE("moment_shifted: quadrature oracle") {
  PrecisionContext ctx(60);
  ShiftedParams p(ctx.frac(-1, 2), ctx.real("0.3"), ctx.real("0.7"), ctx.frac(1, 2), ctx);
  Real closed = moment_shifted(1, p);
  Real quad = moment_quad(1, p);
  REQUIRE(abs(closed / quad - 1) < ctx.pow10(-(ctx.digits() - 5)));
}

TEST_CASE("build_table: monomial integrals and exact zeros") {
  PrecisionContext ctx(60);
  auto tab = build_table(1, Params::of("0", "0", "0.9", ctx));
  REQUIRE(tab.mu.size() == 3);
  REQUIRE(abs(tab.mu[0] - 2) < ctx.eps());
  REQUIRE(tab.mu[1].is_zero());
  REQUIRE(abs(tab.mu[2] - ctx.frac(2, 3)) < ctx.eps());

  auto tab5 = build_table(5, Params::of("0.3", "0.7", "0.5", ctx));
  for (std::size_t j = 1; j < tab5.mu.size(); j += 2) REQUIRE(tab5.mu[j].is_zero());
}

TEST_CASE("build_table: the elliptic weight's mass is a complete elliptic integral") {
  PrecisionContext ctx(60);
  auto tab = build_table(5, Params::of("-0.5", "-0.5", "0.5", ctx));
  // mu_0 = 2 K(1/sqrt(2)) = pi / agm(1, 1/sqrt(2)); AGM is an independent route
  Real agm_oracle = ctx.pi() / agm(ctx.real(1), sqrt(ctx.frac(1, 2)));
  REQUIRE(abs(tab.mu[0] / agm_oracle - 1) < ctx.pow10(-(ctx.digits() - 3)));
  // and the quadrature oracle reproduces a deeper entry
  Params p = Params::of("-0.5", "-0.5", "0.5", ctx);
  REQUIRE(abs(tab.mu[6] / moment_quad(6, p) - 1) < ctx.pow10(-(ctx.digits() - 5)));
}

TEST_CASE("moments decrease in j for beta >= 0") {
  PrecisionContext ctx(50);
  for (const char* al : {"-0.5", "0.3", "1.1"})
    for (const char* bt : {"0", "0.7"})
      for (const char* q : {"0.1", "0.9"}) {
        auto tab = build_table(6, Params::of(al, bt, q, ctx));
        for (std::size_t j = 0; j + 2 < tab.mu.size(); j += 2)
          REQUIRE(tab.mu[j + 2] < tab.mu[j]);
      }
}

TEST_CASE("ksq -> 0 continuity") {
  // the moment moves by O(k^2) = 1e-20, so digits-25 agreement is the
  // well-posed instantiation at digits = 40
  PrecisionContext ctx(40);
  Real a = moment_sym(4, Params::of("0.3", "0.7", "1e-20", ctx));
  Real b = moment_sym(4, Params::of("0.3", "0.7", "0", ctx));
  REQUIRE(abs(a - b) < ctx.pow10(-(ctx.digits() - 25)));
}

TEST_CASE("ksq = 1 reduces to the (1-x^2)^(alpha+beta) weight") {
  PrecisionContext ctx(60);
  Real direct = moment_sym(4, Params::of("0.2", "0.3", "1", ctx));
  Real reduced = moment_sym(4, Params::of("0.5", "0", "0", ctx));
  REQUIRE(abs(direct - reduced) < ctx.pow10(-(ctx.digits() - 3)));
  REQUIRE_THROWS_AS(moment_sym(0, Params::of("-0.7", "-0.5", "1", ctx)), DomainError);
}

TEST_CASE("parameter validation") {
  PrecisionContext ctx(50);
  REQUIRE_THROWS_AS(Params::of("-1.5", "0", "0.5", ctx), DomainError);
  REQUIRE_THROWS_AS(Params::of("0", "0", "1.5", ctx), DomainError);
  REQUIRE_THROWS_AS(
      ShiftedParams(ctx.real(-2), ctx.real(0), ctx.real(0), ctx.frac(1, 2), ctx),
      DomainError);
}
