#include <catch2/catch_amalgamated.hpp>

#include "ellop/residuals.hpp"

using namespace ellop;

namespace {

struct Point {
  const char *al, *bt, *q;
};
const Point kPoints[] = {{"-0.5", "-0.5", "0.5"}, {"0.3", "0.7", "0.5"},
                         {"-0.2", "1.5", "0.9"}};

OPSequence build(const Point& pt, const PrecisionContext& ctx, long N) {
  return from_moments(build_table(N, Params::of(pt.al, pt.bt, pt.q, ctx)), N);
}

}  // namespace

TEST_CASE("nine-equation ladder string system vanishes on exact data") {
  PrecisionContext ctx(80);
  for (const auto& pt : kPoints) {
    auto seq = build(pt, ctx, 12);
    auto aux = aux_from_sequence(seq);
    Real tol = ctx.pow10(-(ctx.digits() - 20));
    for (long n = 1; n <= 10; ++n) {
      auto rs = residual_string(seq, aux, n, tol);
      REQUIRE(rs.size() == 9);
      for (const auto& rr : rs) {
        INFO(rr.name << " at n=" << n);
        REQUIRE(rr.pass);
      }
    }
  }
}

TEST_CASE("construction identities and closed sums") {
  PrecisionContext ctx(80);
  auto seq = build(kPoints[1], ctx, 12);
  auto aux = aux_from_sequence(seq);
  Real tol = ctx.pow10(-(ctx.digits() - 15));
  for (long n = 1; n <= 11; ++n) {
    REQUIRE(residual_rstar_sum(seq, aux, n, tol).pass);
    REQUIRE(residual_sum_rule(seq, aux, n, tol).pass);
    REQUIRE(residual_lemma_beta_rR(seq, aux, n, tol).pass);
    REQUIRE(residual_sumR_closed(seq, aux, n, tol).pass);
    REQUIRE(residual_identity_p1sq(seq, n, tol).pass);
  }
  for (long n = 0; n <= 11; ++n) REQUIRE(residual_Rstar_sum(seq, aux, n, tol).pass);
}

TEST_CASE("difference equations: all theorems vanish at the standard points") {
  PrecisionContext ctx(100);
  Real tol = ctx.pow10(-(ctx.digits() - 30));
  for (const auto& pt : kPoints) {
    auto seq = build(pt, ctx, 14);
    for (long n = 2; n <= 12; ++n) {
      INFO("point " << pt.al << "," << pt.bt << "," << pt.q << " n=" << n);
      REQUIRE(residual_thm_1_1(seq, n, tol).pass);
      auto pr = residual_thm_1_2(seq, n, tol);
      REQUIRE(pr.first.pass);
      REQUIRE(pr.second.pass);
      REQUIRE(residual_gen_rees(seq, n, tol).pass);
      REQUIRE(residual_gen_rees_equiv(seq, n, tol).pass);
      REQUIRE(residual_thm_1_4(seq, n, tol).pass);
      REQUIRE(residual_thm_1_5(seq, n, tol).pass);
      REQUIRE(residual_fourth_order(seq, n, tol).pass);
    }
    // edge indices run without special-casing
    REQUIRE(residual_thm_1_1(seq, 2, tol).pass);
    REQUIRE(residual_thm_1_5(seq, 2, tol).pass);
    REQUIRE(residual_thm_1_2(seq, 1, tol).first.pass);
  }
}

TEST_CASE("g_n: branch and initial value") {
  PrecisionContext ctx(80);
  for (const auto& pt : kPoints) {
    auto seq = build(pt, ctx, 8);
    // g_0 = alpha k^2 + beta, exactly as forced by the telescoped sum
    Real expect = seq.alpha() * seq.ksq() + seq.beta_w();
    REQUIRE(abs(g_n(seq, 0) - expect) < ctx.pow10(-(ctx.digits() - 5)) * (1 + abs(expect)));
    // and g_n^2 at n = 0 equals its square
    REQUIRE(abs(g_n_squared(seq, 0) - expect * expect) <
            ctx.pow10(-(ctx.digits() - 5)) * (1 + expect * expect));
  }
}

TEST_CASE("Rees coefficient coincidence at alpha = beta = -1/2") {
  PrecisionContext ctx(80);
  auto seq = build(kPoints[0], ctx, 10);
  Real tol = ctx.pow10(-(ctx.digits() - 10));
  for (long n = 0; n <= 8; ++n)
    REQUIRE(abs(C_n(seq, n) - C_n(seq, n, /*rees_form=*/true)) < tol);
}

TEST_CASE("elimination recovers p1 and r from three consecutive beta") {
  PrecisionContext ctx(80);
  for (const auto& pt : kPoints) {
    auto seq = build(pt, ctx, 8);
    auto aux = aux_from_sequence(seq);
    Real tol = ctx.pow10(-(ctx.digits() - 25));
    for (long n : {1L, 4L, 6L}) {
      auto i = static_cast<std::size_t>(n);
      REQUIRE(abs(elimination_p1(seq, n) - seq.p1[i]) < tol * (1 + abs(seq.p1[i])));
      REQUIRE(abs(elimination_r(seq, n) - aux.r[i]) < tol * (1 + abs(aux.r[i])));
    }
  }
}

TEST_CASE("K_n spot-check at collapsed neighbours") {
  PrecisionContext ctx(60);
  Real b = ctx.real("0.21"), al = ctx.real("0.3"), bw = ctx.real("0.7"), Q = ctx.frac(1, 2);
  long n = 5;
  Real k = elimination_K_raw(b, b, b, n, al, bw, Q);
  Real expect = (1 + 12 * Q * b * b + 2 * ((2 * b - 2) * Q - 2) * b) * (al + bw + n);
  REQUIRE(abs(k - expect) < ctx.pow10(-55));
}

TEST_CASE("appendix table transcription checks") {
  PrecisionContext ctx(60);
  Real al = ctx.real("0.3"), bw = ctx.real("0.7"), Q = ctx.frac(1, 2);
  long n = 7;
  // symmetry pairs visible in the table
  REQUIRE(appendix_coeff(1, 3, 2, n, al, bw, Q, ctx) ==
          appendix_coeff(2, 3, 1, n, al, bw, Q, ctx));
  REQUIRE(appendix_coeff(2, 2, 2, n, al, bw, Q, ctx) ==
          appendix_coeff(0, 6, 0, n, al, bw, Q, ctx));
  // c_{0,6,0} = k^8 (2s-3)^2 (2s+3)^2
  Real s = al + bw + n;
  Real expect = pown(Q, 4) * pown(2 * s - 3, 2) * pown(2 * s + 3, 2);
  REQUIRE(abs(appendix_coeff(0, 6, 0, n, al, bw, Q, ctx) - expect) < ctx.pow10(-50));
  REQUIRE(appendix_triples().size() == 34);

  // k^2 = 0: the degree-6 relation collapses to the product of two quadratic
  // brackets, pinning the k-free parts of c000, c010, c020
  Real zero = ctx.real(0);
  Real half = ctx.frac(1, 2);
  Real A1 = (al + 2 * bw + n - half) * (al + 2 * bw + n + half);
  Real A0 = (al + bw + ctx.frac(n, 2)) * (bw + ctx.frac(n, 2));
  Real B1 = (al + n - half) * (al + n + half);
  Real B0 = ctx.frac(n, 2) * (al + ctx.frac(n, 2));
  REQUIRE(abs(appendix_coeff(0, 0, 0, n, al, bw, zero, ctx) - 16 * A0 * B0) < ctx.pow10(-50));
  REQUIRE(abs(appendix_coeff(0, 1, 0, n, al, bw, zero, ctx) + 16 * (A1 * B0 + A0 * B1)) <
          ctx.pow10(-48));
  REQUIRE(abs(appendix_coeff(0, 2, 0, n, al, bw, zero, ctx) - 16 * A1 * B1) < ctx.pow10(-48));
}

TEST_CASE("k^2 = 0 reduction: one factor of the quadratic product vanishes") {
  PrecisionContext ctx(80);
  Params p = Params::of("0.3", "0.7", "0", ctx);
  auto seq = from_moments(build_table(10, p), 10);
  Real half = ctx.frac(1, 2);
  for (long n = 1; n <= 10; ++n) {
    Real bn = seq.beta[static_cast<std::size_t>(n)];
    Real f1 = (p.alpha + 2 * p.beta + n - half) * (p.alpha + 2 * p.beta + n + half) * bn -
              (p.alpha + p.beta + ctx.frac(n, 2)) * (p.beta + ctx.frac(n, 2));
    Real f2 = (p.alpha + n - half) * (p.alpha + n + half) * bn -
              ctx.frac(n, 2) * (p.alpha + ctx.frac(n, 2));
    REQUIRE(abs(f1 * f2) < ctx.pow10(-(ctx.digits() - 10)));
    REQUIRE(abs(f2) < ctx.pow10(-(ctx.digits() - 10)));  // the Jacobi factor
  }
}

TEST_CASE("Jacobi reductions of the computed sequence") {
  PrecisionContext ctx(80);
  Real tol = ctx.pow10(-(ctx.digits() - 10));
  // k^2 = 0, any beta
  auto s0 = from_moments(build_table(10, Params::of("0.3", "0.7", "0", ctx)), 10);
  // beta = 0, any k^2
  auto sb = from_moments(build_table(10, Params::of("0.3", "0", "0.5", ctx)), 10);
  for (long n = 1; n <= 10; ++n) {
    Real closed = jacobi_beta_closed(n, ctx.real("0.3"), ctx);
    REQUIRE(abs(s0.beta[static_cast<std::size_t>(n)] - closed) < tol);
    REQUIRE(abs(sb.beta[static_cast<std::size_t>(n)] - closed) < tol);
  }
  // k^2 = 1: alpha -> alpha + beta
  auto s1 = from_moments(build_table(10, Params::of("0.2", "0.3", "1", ctx)), 10);
  for (long n = 1; n <= 10; ++n)
    REQUIRE(abs(s1.beta[static_cast<std::size_t>(n)] -
                jacobi_beta_closed(n, ctx.frac(1, 2), ctx)) < tol);
}

TEST_CASE("jacobi closed form and fixed points") {
  PrecisionContext ctx(50);
  REQUIRE(abs(jacobi_beta_closed(1, ctx.real(0), ctx) - ctx.frac(1, 3)) < ctx.eps());
  REQUIRE_THROWS_AS(jacobi_beta_closed(1, ctx.frac(-1, 2), ctx), RemovableSingularity);
  auto [f1, f2] = fixed_points(ctx.frac(1, 2), ctx);
  REQUIRE(f1 == ctx.frac(1, 4));
  REQUIRE(abs(f2 - ctx.frac(1, 2)) < ctx.eps());
  REQUIRE_THROWS_AS(fixed_points(ctx.real(0), ctx), DomainError);
}

TEST_CASE("solved-for-p1 form agrees with stored p1") {
  PrecisionContext ctx(80);
  for (const auto& pt : kPoints) {
    auto seq = build(pt, ctx, 10);
    Real tol = ctx.pow10(-(ctx.digits() - 25));
    for (long n = 0; n <= 8; ++n) REQUIRE(residual_p1_solved(seq, n, tol).pass);
  }
}

TEST_CASE("second-order ODE: pointwise residual and Rees reduction") {
  PrecisionContext ctx(90);
  Real tol = ctx.pow10(-(ctx.digits() - 20));
  auto seq = build(kPoints[1], ctx, 12);
  for (long n : {1L, 6L, 11L})
    for (const char* xs : {"-0.63", "0.11", "0.57"}) {
      auto rr = residual_ode(seq, n, ctx.real(xs), tol);
      INFO("n=" << n << " x=" << xs << " rel=" << rr.relative.str(5));
      REQUIRE(rr.pass);
    }
  REQUIRE_THROWS_AS(residual_ode(seq, 3, ctx.real(2), tol), DomainError);

  // alpha = beta = -1/2: M, L, U reduce to the elliptic special case termwise
  auto rees = build(kPoints[0], ctx, 10);
  Real rtol = ctx.pow10(-(ctx.digits() - 10));
  for (long n : {2L, 5L, 8L}) {
    auto oc = ode_coefficients(rees, n);
    detail::SeqCtx v(rees, n);
    Real crees = C_n(rees, n, true);
    REQUIRE(abs(oc.m2 + (2 * n - 1) * v.Q) < rtol);
    REQUIRE(abs(oc.m0 + crees) < rtol);
    Real sum_b(0, ctx.bits());  // sum_{j<n} beta_j = -p1(n)
    for (long j = 1; j < n; ++j) sum_b += rees.beta[static_cast<std::size_t>(j)];
    REQUIRE(abs(oc.l3 - n * v.Q) < rtol);
    REQUIRE(abs(oc.l1 - (-n * (1 + v.Q) + (2 * n - 1) * v.Q * v.B(n) + 2 * v.Q * sum_b)) < rtol);
    REQUIRE(abs(oc.u2 + n * (n + 1) * v.Q) < rtol);
    REQUIRE(abs(oc.u0 - (-2 * (2 * n - 1) * v.Q * (sum_b + v.B(n)) + n * n * (1 + v.Q))) < rtol);
  }
}
