#include <catch2/catch_amalgamated.hpp>

#include "ellop/real.hpp"

using namespace ellop;

TEST_CASE("Real arithmetic and precision propagation") {
  PrecisionContext ctx(50);
  Real a = ctx.frac(1, 3);
  Real b = ctx.frac(1, 6);
  REQUIRE((a + b - ctx.frac(1, 2)).is_zero());
  REQUIRE((2 * a - ctx.frac(2, 3)).is_zero());
  REQUIRE((a / b).to_double() == Catch::Approx(2.0));
  REQUIRE((a * b).prec() == ctx.bits());

  // mixed int ops
  Real c = ctx.real(7);
  REQUIRE((c - 7L).is_zero());
  REQUIRE((1 - c) == ctx.real(-6));
  REQUIRE((c / 7L) == ctx.real(1));
}

TEST_CASE("decimal strings parse at full precision") {
  PrecisionContext ctx(60);
  Real x = ctx.real("0.1");
  // 10 * 0.1 - 1 vanishes to working precision but not exactly
  Real r = abs(10 * x - 1);
  REQUIRE(r < ctx.pow10(-59));
  REQUIRE_THROWS_AS(ctx.real("not-a-number"), DomainError);
}

TEST_CASE("string round-trip keeps the displayed digits") {
  PrecisionContext ctx(40);
  Real x = ctx.real("-3.14159265358979323846");
  std::string s = x.str(20);
  Real y = ctx.real(s);
  REQUIRE(abs(x - y) < ctx.pow10(-18));
}

TEST_CASE("comparisons and utilities") {
  PrecisionContext ctx(40);
  REQUIRE(ctx.real(2) < ctx.real(3));
  REQUIRE(ctx.real(-1) <= -1L);
  REQUIRE(max(ctx.real(2), ctx.real(5)) == ctx.real(5));
  REQUIRE(abs(ctx.real(-4)) == ctx.real(4));
  REQUIRE(sqrt(ctx.real(16)) == ctx.real(4));
  REQUIRE(pown(ctx.real(2), 10) == ctx.real(1024));
  REQUIRE(ctx.real(5).is_integer());
  REQUIRE_FALSE(ctx.frac(1, 2).is_integer());
  Real moved = ctx.real(9);
  Real target = std::move(moved);
  REQUIRE(target == ctx.real(9));
}

TEST_CASE("context validation") {
  REQUIRE_THROWS_AS(PrecisionContext(10), DomainError);
  PrecisionContext ctx(30);
  REQUIRE(ctx.total_digits() == 45);
}
