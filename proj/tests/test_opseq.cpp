#include <catch2/catch_amalgamated.hpp>

#include "ellop/opseq.hpp"
#include "ellop/specialfn.hpp"

using namespace ellop;

namespace {

OPSequence legendre(const PrecisionContext& ctx, long N) {
  return from_moments(build_table(N, Params::of("0", "0", "0", ctx)), N);
}

}  // namespace

TEST_CASE("Legendre sequence: frozen small values") {
  PrecisionContext ctx(60);
  auto seq = legendre(ctx, 8);
  REQUIRE(abs(seq.beta[1] - ctx.frac(1, 3)) < ctx.eps());
  REQUIRE(abs(seq.D[2] - ctx.frac(4, 3)) < ctx.eps());
  // p1(n) = -n(n-1)/(2(2n-1)), found by hand Gram-Schmidt at small n
  for (long n = 2; n <= 8; ++n) {
    Real expect = -ctx.real(n) * (n - 1) / (2 * (2 * n - 1));
    REQUIRE(abs(seq.p1[static_cast<std::size_t>(n)] - expect) < ctx.pow10(-55));
  }
}

TEST_CASE("Chebyshev 2nd kind: beta_n = 1/4 for all n >= 1") {
  PrecisionContext ctx(60);
  auto seq = from_moments(build_table(10, Params::of("0.5", "0", "0", ctx)), 10);
  for (long n = 1; n <= 10; ++n)
    REQUIRE(abs(seq.beta[static_cast<std::size_t>(n)] - ctx.frac(1, 4)) < ctx.pow10(-50));
}

TEST_CASE("coefficient rows: exact structure") {
  PrecisionContext ctx(60);
  Params p = Params::of("0.3", "0.7", "0.5", ctx);
  auto seq = from_moments(build_table(9, p), 9);
  for (long n = 0; n <= 9; ++n) {
    const auto& row = seq.coeffs[static_cast<std::size_t>(n)];
    REQUIRE(row.back() == ctx.real(1));  // monic, exactly
    for (long k = (n % 2 == 0) ? 1 : 0; k <= n; k += 2)
      REQUIRE(row[static_cast<std::size_t>(k)].is_zero());  // parity zeros, exactly
  }
  for (auto& a : seq.alpha_rec) REQUIRE(a.is_zero());
}

TEST_CASE("positivity, determinant product and two-route beta") {
  PrecisionContext ctx(70);
  Params p = Params::of("-0.2", "1.5", "0.9", ctx);
  long N = 14;
  auto seq = from_moments(build_table(N, p), N);
  Real tol = ctx.pow10(-(ctx.digits() - 10));
  for (long n = 0; n <= N; ++n) REQUIRE(seq.h[static_cast<std::size_t>(n)] > 0);
  for (long n = 1; n <= N; ++n) {
    auto i = static_cast<std::size_t>(n);
    // beta_n = h_n/h_{n-1} vs D_{n+1} D_{n-1} / D_n^2
    Real via_d = seq.D[i + 1] * seq.D[i - 1] / (seq.D[i] * seq.D[i]);
    REQUIRE(abs(seq.beta[i] / via_d - 1) < tol);
  }
  // p1(n) = -sum_{j<n} beta_j
  Real acc(0, ctx.bits());
  for (long n = 1; n <= N; ++n) {
    acc -= seq.beta[static_cast<std::size_t>(n - 1)];
    REQUIRE(abs(seq.p1[static_cast<std::size_t>(n)] - acc) < tol * max(ctx.real(1), abs(acc)));
  }
}

TEST_CASE("orthogonality under the weighted quadrature inner product") {
  PrecisionContext ctx(50);
  struct {
    const char *al, *bt, *q;
  } grid[] = {{"0.3", "0.7", "0.5"}, {"-0.5", "-0.5", "0.5"}, {"1.1", "0", "0.9"}};
  for (const auto& g : grid) {
    auto seq = from_moments(build_table(8, Params::of(g.al, g.bt, g.q, ctx)), 8);
    for (long n = 0; n <= 6; n += 3)
      for (long m = n + 1; m <= 7; m += 2) {
        Real ip = inner_quad(seq, n, m) /
                  sqrt(seq.h[static_cast<std::size_t>(n)] * seq.h[static_cast<std::size_t>(m)]);
        REQUIRE(abs(ip) < ctx.pow10(-(ctx.digits() / 2)));
      }
  }
}

TEST_CASE("three-term recurrence replay") {
  PrecisionContext ctx(60);
  auto seq = legendre(ctx, 8);
  Real x = ctx.real("0.37");
  Real lhs = eval_poly(seq, 6, x);
  Real rhs = x * eval_poly(seq, 5, x) - seq.beta[5] * eval_poly(seq, 4, x);
  REQUIRE(abs(lhs - rhs) < ctx.pow10(-(ctx.digits() - 5)));
  // eval_poly basics
  REQUIRE(eval_poly(seq, 0, x) == ctx.real(1));
  REQUIRE(eval_poly(seq, 5, ctx.real(0)).is_zero());  // odd symmetry
  // derivative of P_2 = x^2 + p1(2): P' = 2x, P'' = 2
  auto pe = eval_poly_all(seq, 2, x);
  REQUIRE(abs(pe.d1 - 2 * x) < ctx.pow10(-55));
  REQUIRE(abs(pe.d2 - 2) < ctx.pow10(-55));
}

TEST_CASE("aux variables: construction identities are exact") {
  PrecisionContext ctx(60);
  Params p = Params::of("0.3", "0.7", "0.5", ctx);
  long N = 12;
  auto seq = from_moments(build_table(N, p), N);
  auto aux = aux_from_sequence(seq);
  Real k = sqrt(p.ksq);
  Real tol = ctx.pow10(-(ctx.digits() + 5));
  REQUIRE(aux.r[0].is_zero());
  REQUIRE(aux.rstar[0].is_zero());
  for (long n = 0; n <= N; ++n)
    REQUIRE(abs(aux.rstar[static_cast<std::size_t>(n)] + aux.r[static_cast<std::size_t>(n)] +
                ctx.frac(n, 2)) < tol * (1 + n));
  Real sum(0, ctx.bits());
  for (long n = 0; n <= N - 1; ++n) {
    auto i = static_cast<std::size_t>(n);
    REQUIRE(abs(aux.Rstar[i] / k + aux.R[i] - (p.alpha + p.beta + n + ctx.frac(1, 2))) <
            tol * (1 + n));
    sum += aux.Rstar[i] / k + aux.R[i];
  }
  REQUIRE(abs(sum - N * (p.alpha + p.beta + ctx.frac(N, 2))) < ctx.pow10(-(ctx.digits() - 5)));
}

TEST_CASE("aux variables: R_0 matches the hypergeometric ratio") {
  PrecisionContext ctx(60);
  Params p = Params::of("0.3", "0.7", "0.5", ctx);
  auto seq = from_moments(build_table(4, p), 4);
  auto aux = aux_from_sequence(seq);
  Real half = ctx.frac(1, 2);
  Real formula = (p.alpha + half) *
                 hyp2f1(-p.beta, half, p.alpha + half, p.ksq, ctx) /
                 hyp2f1(-p.beta, half, p.alpha + 1 + half, p.ksq, ctx);
  REQUIRE(abs(aux.R[0] - formula) < ctx.pow10(-(ctx.digits() - 5)));
  // R*_0/k likewise
  Real k = sqrt(p.ksq);
  Real f2 = p.beta * hyp2f1(1 - p.beta, half, p.alpha + 1 + half, p.ksq, ctx) /
            hyp2f1(-p.beta, half, p.alpha + 1 + half, p.ksq, ctx);
  REQUIRE(abs(aux.Rstar[0] / k - f2) < ctx.pow10(-(ctx.digits() - 5)));
}

TEST_CASE("aux variables: R_0 at alpha = -1/2 is the c -> 0 limit of the ratio") {
  // (alpha+1/2) multiplies a hypergeometric whose c-parameter is alpha+1/2;
  // the pole of the series cancels the zero of the prefactor, so R_0 is the
  // finite nonzero limit rather than 0
  PrecisionContext ctx(80);
  Params p = Params::of("-0.5", "0.7", "0.5", ctx);
  auto seq = from_moments(build_table(4, p), 4);
  auto aux = aux_from_sequence(seq);
  Real eps = ctx.pow10(-30);
  Real half = ctx.frac(1, 2);
  Real lim = eps * hyp2f1(-p.beta, half, eps, p.ksq, ctx) /
             hyp2f1(-p.beta, half, 1 + eps, p.ksq, ctx);
  REQUIRE(abs(aux.R[0]) > ctx.frac(1, 10));  // genuinely nonzero
  REQUIRE(abs(aux.R[0] - lim) < ctx.pow10(-25));
}

TEST_CASE("aux variables: integral oracle agrees with the algebraic route") {
  PrecisionContext ctx(60);
  Params p = Params::of("0.3", "0.7", "0.5", ctx);
  auto seq = from_moments(build_table(12, p), 12);
  auto aux = aux_from_sequence(seq);
  Real tol = ctx.pow10(-(ctx.digits() - 8));
  for (long n : {1L, 4L, 10L}) {
    auto pt = aux_from_integrals(seq, n);
    auto i = static_cast<std::size_t>(n);
    REQUIRE(abs(pt.R - aux.R[i]) < tol * (1 + abs(aux.R[i])));
    REQUIRE(abs(pt.r - aux.r[i]) < tol * (1 + abs(aux.r[i])));
    REQUIRE(abs(pt.Rstar - aux.Rstar[i]) < tol * (1 + abs(aux.Rstar[i])));
    REQUIRE(abs(pt.rstar - aux.rstar[i]) < tol * (1 + abs(aux.rstar[i])));
    // r_n + r*_n = -n/2 holds on the quadrature route too
    REQUIRE(abs(pt.r + pt.rstar + ctx.frac(n, 2)) < tol * (1 + n));
  }
}

TEST_CASE("aux variables: alpha = 0 keeps the continued values, not zeros") {
  // The alpha-prefactor of the defining integrals multiplies a divergent
  // integral at alpha = 0; the 1/alpha pole cancels the prefactor and the
  // variables continue to nonzero values.  The telescoped closed form pins
  // them: (k^2-1) r_n = n/2 - k^2(al+bt+n+1/2) beta_n + k^2 p1(n).
  PrecisionContext ctx(60);
  Params p = Params::of("0", "0.7", "0.5", ctx);
  auto seq = from_moments(build_table(8, p), 8);
  auto aux = aux_from_sequence(seq);
  Real tol = ctx.pow10(-(ctx.digits() - 8));
  for (long n : {3L, 6L}) {
    auto i = static_cast<std::size_t>(n);
    Real rhs = (ctx.frac(n, 2) - p.ksq * (p.beta + n + ctx.frac(1, 2)) * seq.beta[i] +
                p.ksq * seq.p1[i]) /
               (p.ksq - 1);
    REQUIRE(abs(aux.r[i]) > ctx.frac(1, 100));
    REQUIRE(abs(aux.r[i] - rhs) < tol);
    REQUIRE(abs(aux.rstar[i] + ctx.frac(n, 2) + aux.r[i]) < tol);
  }
  // the quadrature route is outside its convergence contract here
  REQUIRE_THROWS_AS(aux_from_integrals(seq, 3), DomainError);
}

TEST_CASE("degenerate ksq: sequence builds, aux refuses") {
  PrecisionContext ctx(60);
  auto seq0 = from_moments(build_table(4, Params::of("0.3", "0.7", "0", ctx)), 4);
  REQUIRE(seq0.h[0] > 0);
  REQUIRE_THROWS_AS(aux_from_sequence(seq0), DomainError);
  auto seq1 = from_moments(build_table(4, Params::of("0.2", "0.3", "1", ctx)), 4);
  REQUIRE_THROWS_AS(aux_from_sequence(seq1), DomainError);
}

TEST_CASE("precision-doubling stability of beta_n") {
  PrecisionContext lo(60), hi(120);
  long N = 10;
  auto s1 = from_moments(build_table(N, Params::of("0.3", "0.7", "0.5", lo)), N);
  auto s2 = from_moments(build_table(N, Params::of("0.3", "0.7", "0.5", hi)), N);
  Real tol = lo.pow10(-(lo.digits() - 5));
  for (long n = 1; n <= N; ++n) {
    auto i = static_cast<std::size_t>(n);
    REQUIRE(abs(s1.beta[i] / s2.beta[i] - 1) < tol);
  }
}

TEST_CASE("precision policy and failure modes") {
  PrecisionContext ctx(40);
  auto tab = build_table(10, Params::of("0", "0", "0", ctx));
  // required_digits(10) = 52 > 40
  REQUIRE_THROWS_AS(from_moments(tab, 10), DomainError);

  // a singular hand-made table must trip the pivot check, not return garbage
  PrecisionContext c2(40);
  MomentTable bogus{MomentTable::Kind::Shifted, c2, {}, c2.real(0), c2.real(0),
                    c2.real(0), c2.real(0), c2.real(0), c2.real(0)};
  for (int i = 0; i < 5; ++i) bogus.mu.push_back(c2.real(i % 2 == 0 ? 1 : 0));
  REQUIRE_THROWS_AS(from_moments(bogus, 2), PrecisionExhausted);
}
