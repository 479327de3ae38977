#include <catch2/catch_amalgamated.hpp>

#include "ellop/evolution.hpp"

using namespace ellop;

TEST_CASE("stencil derivatives are exact on polynomials") {
  PrecisionContext ctx(60);
  Params p = Params::of("0.3", "0.7", "0.5", ctx);
  auto g = build_kgrid(p, 4, ctx.pow10(-10));
  std::vector<Real> f;
  for (const auto& node : g.nodes) f.push_back(node * node);
  auto d1 = d_dksq(g, f, 1);
  auto d2 = d_dksq(g, f, 2);
  REQUIRE(abs(d1.value - 2 * p.ksq) < ctx.pow10(-40));
  REQUIRE(abs(d2.value - 2) < ctx.pow10(-30));
  // constant in k^2: h_0 of the flat weight
  Params flat = Params::of("0", "0", "0.5", ctx);
  auto gf = build_kgrid(flat, 2, ctx.pow10(-10));
  std::vector<Real> lh;
  for (const auto& s : gf.seqs) lh.push_back(log(s.h[0]));
  REQUIRE(abs(d_dksq(gf, lh, 1).value) < ctx.pow10(-35));
}

TEST_CASE("non-smooth node values trip StepTooLarge") {
  PrecisionContext ctx(60);
  Params p = Params::of("0.3", "0.7", "0.5", ctx);
  auto g = build_kgrid(p, 2, ctx.pow10(-10));
  // alternating values: full- and inner-stencil second derivatives disagree
  // at the 1/h^2 scale
  std::vector<Real> f;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) f.push_back(ctx.real(i % 2 == 0 ? 1 : 0));
  REQUIRE_THROWS_AS(d_dksq(g, f, 2), StepTooLarge);
}

TEST_CASE("grid validation") {
  PrecisionContext ctx(60);
  Params p = Params::of("0.3", "0.7", "0.5", ctx);
  REQUIRE_THROWS_AS(build_kgrid(p, 4, ctx.frac(1, 4), 5), DomainError);  // leaves (0,1)
  REQUIRE_THROWS_AS(build_kgrid(p, 4, ctx.pow10(-10), 4), DomainError);  // even stencil
}

TEST_CASE("Toda evolution: two-route residuals") {
  PrecisionContext ctx(100);
  Params p = Params::of("0.3", "0.7", "0.5", ctx);
  auto g = build_kgrid(p, 8, ctx.pow10(-20));
  Real tol = ctx.pow10(-25);
  for (long n : {1L, 3L, 6L}) {
    auto [r1, r2] = toda_check(g, n, tol);
    INFO("n=" << n);
    REQUIRE(r1.pass);
    REQUIRE(r2.pass);
  }
}

TEST_CASE("Toda at alpha = 0 closes with the continued R_n") {
  // R_n does not vanish at alpha = 0 (the defining integral diverges as
  // 1/alpha, cancelling the prefactor); the evolution equation holds with
  // the analytically continued value
  PrecisionContext ctx(100);
  Params p = Params::of("0", "0.7", "0.5", ctx);
  auto g = build_kgrid(p, 6, ctx.pow10(-20));
  auto aux = aux_from_sequence(g.center_seq());
  REQUIRE(abs(aux.R[3]) > 1);  // far from zero
  auto [r1, r2] = toda_check(g, 3, ctx.pow10(-25));
  REQUIRE(r1.pass);
  REQUIRE(r2.pass);
}

TEST_CASE("H_n: algebraic form, index specialization, k^2 -> 0 limit") {
  PrecisionContext ctx(100);
  Params p = Params::of("0.3", "0.7", "0.5", ctx);
  auto g = build_kgrid(p, 10, ctx.pow10(-20));
  Real tol = ctx.pow10(-25);
  for (long n : {1L, 5L, 9L}) REQUIRE(H_n_check(g, n, tol).pass);

  const auto& seq = g.center_seq();
  // H_1 = -k^2(al+bt+3/2) p1(2) - k^2/2, since p1(1) = 0
  Real expect = -p.ksq * (p.alpha + p.beta + ctx.frac(3, 2)) * seq.p1[2] - p.ksq / 2;
  REQUIRE(abs(H_n_from_p1(seq, 1) - expect) < ctx.pow10(-(ctx.digits() - 5)));

  // every term of H_n carries k^2
  PrecisionContext c2(60);
  Params tiny = Params::of("0.3", "0.7", "1e-30", c2);
  auto st = from_moments(build_table(6, tiny), 6);
  REQUIRE(abs(H_n_from_p1(st, 4)) < c2.pow10(-28));
}

TEST_CASE("even/odd splitting identities") {
  PrecisionContext ctx(80);
  Params p = Params::of("0.3", "0.7", "0.5", ctx);
  Real tol = ctx.pow10(-(ctx.digits() - 15));
  auto rs = split_check(p, 12, tol);
  REQUIRE(rs.size() > 50);
  for (const auto& rr : rs) {
    INFO(rr.name << " n=" << rr.n << " rel=" << rr.relative.str(5));
    REQUIRE(rr.pass);
  }
  // h_0 = hat h_0: both are the zeroth moment of their weights
  ShiftedParams even_p(ctx.frac(-1, 2), p.alpha, p.beta, p.ksq, ctx);
  Real lhs = moment_sym(0, p);
  Real rhs = moment_shifted(0, even_p);
  REQUIRE(abs(lhs - rhs) < ctx.pow10(-(ctx.digits() - 3)));
}

TEST_CASE("sigma: d-coefficients and the sigma-form residual") {
  PrecisionContext ctx(120);
  Params p = Params::of("0.3", "0.7", "0.5", ctx);
  Real h = ctx.pow10(-24);
  auto ge = build_kgrid_w2(ctx.frac(-1, 2), p.alpha, p.beta, p.ksq, ctx, 6, h);
  auto go = build_kgrid_w2(ctx.frac(1, 2), p.alpha, p.beta, p.ksq, ctx, 6, h);
  Real tol = ctx.pow10(-20);
  for (long n : {1L, 3L, 5L}) {
    auto se = sigma_eval(ge, n);
    // d1 = -nc - (a+c)^2/4 with a = -1/2, c = beta
    Real d1 = -n * p.beta - pown(p.beta - ctx.frac(1, 2), 2) / 4;
    REQUIRE(abs(se.d1 - d1) < ctx.pow10(-100));
    REQUIRE(sigma_form_residual(se, p.ksq, ctx, tol).pass);
    REQUIRE(sigma_form_residual(sigma_eval(go, n), p.ksq, ctx, tol).pass);
  }
}

TEST_CASE("c = 0 degeneration: sigma is affine and the form still closes") {
  PrecisionContext ctx(80);
  // beta = 0 makes the shifted determinants k^2-independent
  auto g = build_kgrid_w2(ctx.frac(-1, 2), ctx.real("0.3"), ctx.real(0), ctx.frac(1, 2),
                          ctx, 5, ctx.pow10(-16));
  auto s = sigma_eval(g, 3);
  REQUIRE(abs(s.sigma - (s.d1 * ctx.frac(1, 2) + s.d0)) < ctx.pow10(-40));
  REQUIRE(abs(s.sigma1 - s.d1) < ctx.pow10(-40));
  REQUIRE(abs(s.sigma2) < ctx.pow10(-30));
  REQUIRE(sigma_form_residual(s, ctx.frac(1, 2), ctx, ctx.pow10(-(ctx.digits() - 30))).pass);
}

TEST_CASE("H_{2n} and H_{2n+1} close through the two sigma functions") {
  PrecisionContext ctx(120);
  Params p = Params::of("0.3", "0.7", "0.5", ctx);
  Real h = ctx.pow10(-24);
  long nmax = 3;
  auto ge = build_kgrid_w2(ctx.frac(-1, 2), p.alpha, p.beta, p.ksq, ctx, nmax + 1, h);
  auto go = build_kgrid_w2(ctx.frac(1, 2), p.alpha, p.beta, p.ksq, ctx, nmax + 1, h);
  auto main_seq = from_moments(build_table(2 * nmax + 2, p), 2 * nmax + 2);
  Real tol = ctx.pow10(-20);
  for (long n = 1; n <= nmax; ++n) {
    auto [er, od] = painleve_rep_check(main_seq, ge, go, n, tol);
    INFO("n=" << n);
    REQUIRE(er.pass);
    REQUIRE(od.pass);
  }
}
