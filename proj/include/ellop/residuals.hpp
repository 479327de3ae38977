// Residual evaluators for the ladder-operator compatibility system, the
// non-linear difference equations satisfied by the recurrence coefficients
// and sub-leading coefficients, the degree-6 algebraic relation with its 34
// tabulated coefficients, the elimination formulas, the linear second-order
// ODE for the polynomials, and the Jacobi reductions.  A residual is
// LHS - RHS of the identity evaluated on exact sequence data; vanishing to
// working precision constitutes verification.

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ellop/opseq.hpp"
#include "ellop/report.hpp"

namespace ellop {

namespace detail {

struct SeqCtx {
  const OPSequence& seq;
  const PrecisionContext& ctx;
  const Real &al, &bw, &Q;  // weight alpha, weight beta, k^2
  Real half, s;
  long n;

  SeqCtx(const OPSequence& sq, long nn)
      : seq(sq), ctx(sq.ctx()), al(sq.alpha()), bw(sq.beta_w()), Q(sq.ksq()),
        half(sq.ctx().frac(1, 2)), s(sq.alpha() + sq.beta_w() + nn), n(nn) {}

  const Real& B(long i) const { return seq.beta[static_cast<std::size_t>(i)]; }
  const Real& P(long i) const { return seq.p1[static_cast<std::size_t>(i)]; }
  // al + bw + n + j/2
  Real A(long j) const { return s + ctx.frac(j, 2); }
  Real num(long v) const { return ctx.real(v); }
};

inline void need(bool ok, const char* what) {
  if (!ok) throw IndexError(std::string("index out of contract range: ") + what);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// The nine distinct compatibility equations obtained from (S1), (S2), (S2')
// by matching residues at x = +-1, x = +-1/k and the limit at infinity,
// plus the construction identities that accompany them.
// ---------------------------------------------------------------------------

inline std::vector<ResidualReport> residual_string(const OPSequence& seq,
                                                   const AuxVars& aux, long n,
                                                   const Real& tol) {
  detail::need(n >= 1 && n <= seq.N - 2, "residual_string needs 1 <= n <= N-2");
  detail::SeqCtx v(seq, n);
  const auto& ctx = v.ctx;
  auto R = [&](long i) -> const Real& { return aux.R[static_cast<std::size_t>(i)]; };
  auto r = [&](long i) -> const Real& { return aux.r[static_cast<std::size_t>(i)]; };
  auto Rs = [&](long i) -> const Real& { return aux.Rstar[static_cast<std::size_t>(i)]; };
  auto rs = [&](long i) -> const Real& { return aux.rstar[static_cast<std::size_t>(i)]; };
  Real k = sqrt(v.Q);
  Real km1 = v.Q - 1;

  std::vector<ResidualReport> out;
  out.reserve(9);

  {  // (S1) residues at +-1:  r_n + r_{n+1} = alpha - R_n
    Terms t(ctx);
    t.add(r(n)).add(r(n + 1)).sub(v.al).add(R(n));
    out.push_back(t.report("S1:x=1", n, tol));
  }
  {  // (S1) residues at +-1/k:  r*_n + r*_{n+1} = beta - R*_n/k
    Terms t(ctx);
    t.add(rs(n)).add(rs(n + 1)).sub(v.bw).add(Rs(n) / k);
    out.push_back(t.report("S1:x=1/k", n, tol));
  }
  {  // (S2) limit at infinity:  1 + 2r*_{n+1} - 2r*_n + 2r_{n+1} - 2r_n = 0
    Terms t(ctx);
    t.add(v.num(1)).add(2 * rs(n + 1)).sub(2 * rs(n)).add(2 * r(n + 1)).sub(2 * r(n));
    out.push_back(t.report("S2:inf", n, tol));
  }
  {  // (S2) residues at +-1:  r_n - r_{n+1} = beta_{n+1} R_{n+1} - beta_n R_{n-1}
    Terms t(ctx);
    t.add(r(n)).sub(r(n + 1)).sub(v.B(n + 1) * R(n + 1)).add(v.B(n) * R(n - 1));
    out.push_back(t.report("S2:x=1", n, tol));
  }
  {  // (S2) residues at +-1/k
    Terms t(ctx);
    t.add((rs(n) - rs(n + 1)) / k).sub(v.B(n + 1) * Rs(n + 1)).add(v.B(n) * Rs(n - 1));
    out.push_back(t.report("S2:x=1/k", n, tol));
  }
  {  // (S2') double pole at +-1:  r_n(r_n - alpha) = beta_n R_n R_{n-1}
    Terms t(ctx);
    t.add(r(n) * (r(n) - v.al)).sub(v.B(n) * R(n) * R(n - 1));
    out.push_back(t.report("S2p:double:x=1", n, tol));
  }
  {  // (S2') double pole at +-1/k
    Terms t(ctx);
    t.add(rs(n) * (rs(n) - v.bw)).sub(v.B(n) * Rs(n) * Rs(n - 1));
    out.push_back(t.report("S2p:double:x=1/k", n, tol));
  }
  Real sumR(0, ctx.bits()), sumRs(0, ctx.bits());
  for (long j = 0; j < n; ++j) {
    sumR += R(j);
    sumRs += Rs(j);
  }
  Real cross = 2 * rs(n) * r(n) - v.al * rs(n) - v.bw * r(n);
  {  // (S2') simple pole at +-1
    Terms t(ctx);
    t.add(sumR / 2).sub(v.Q / km1 * cross).sub(v.B(n) * R(n) * R(n - 1))
        .add(k * v.B(n) / km1 * (R(n) * Rs(n - 1) + Rs(n) * R(n - 1)));
    out.push_back(t.report("S2p:simple:x=1", n, tol));
  }
  {  // (S2') simple pole at +-1/k
    Terms t(ctx);
    t.add(sumRs / 2).add(k / km1 * cross).sub(k * v.B(n) * Rs(n) * Rs(n - 1))
        .sub(v.Q / km1 * v.B(n) * (R(n) * Rs(n - 1) + Rs(n) * R(n - 1)));
    out.push_back(t.report("S2p:simple:x=1/k", n, tol));
  }
  return out;
}

// r*_n + r_n = -n/2
inline ResidualReport residual_rstar_sum(const OPSequence& seq, const AuxVars& aux,
                                         long n, const Real& tol) {
  detail::need(n >= 0 && n <= seq.N, "residual_rstar_sum");
  detail::SeqCtx v(seq, n);
  Terms t(v.ctx);
  t.add(aux.rstar[static_cast<std::size_t>(n)]).add(aux.r[static_cast<std::size_t>(n)])
      .add(v.ctx.frac(n, 2));
  return t.report("rstar+r=-n/2", n, tol);
}

// R*_n/k + R_n = alpha + beta + n + 1/2
inline ResidualReport residual_Rstar_sum(const OPSequence& seq, const AuxVars& aux,
                                         long n, const Real& tol) {
  detail::need(n >= 0 && n <= seq.N - 1, "residual_Rstar_sum");
  detail::SeqCtx v(seq, n);
  Terms t(v.ctx);
  t.add(aux.Rstar[static_cast<std::size_t>(n)] / sqrt(v.Q))
      .add(aux.R[static_cast<std::size_t>(n)]).sub(v.A(1));
  return t.report("Rstar/k+R", n, tol);
}

// sum_{j<n} (R*_j/k + R_j) = n (alpha + beta + n/2)
inline ResidualReport residual_sum_rule(const OPSequence& seq, const AuxVars& aux,
                                        long n, const Real& tol) {
  detail::need(n >= 1 && n <= seq.N, "residual_sum_rule");
  detail::SeqCtx v(seq, n);
  Real k = sqrt(v.Q);
  Terms t(v.ctx);
  for (long j = 0; j < n; ++j)
    t.add(aux.Rstar[static_cast<std::size_t>(j)] / k + aux.R[static_cast<std::size_t>(j)]);
  t.sub(v.num(n) * (v.al + v.bw + v.ctx.frac(n, 2)));
  return t.report("sum(Rstar/k+R)", n, tol);
}

// beta_n in terms of r_n and R_n (multiplied through by R_n)
inline ResidualReport residual_lemma_beta_rR(const OPSequence& seq, const AuxVars& aux,
                                             long n, const Real& tol) {
  detail::need(n >= 1 && n <= seq.N - 1, "residual_lemma_beta_rR");
  detail::SeqCtx v(seq, n);
  const Real& Rn = aux.R[static_cast<std::size_t>(n)];
  const Real& rn = aux.r[static_cast<std::size_t>(n)];
  Real gap = v.A(1) - Rn;  // alpha+beta+n+1/2 - R_n
  Terms t(v.ctx);
  t.add(v.Q * v.B(n) * v.A(-1) * gap * Rn);
  t.sub((Rn + v.Q * gap) * rn * rn);
  t.sub(((v.num(n) + v.bw) * Rn - v.al * v.Q * gap) * rn);
  t.sub(v.ctx.frac(n, 2) * (v.ctx.frac(n, 2) + v.bw) * Rn);
  return t.report("beta(r,R)", n, tol);
}

// (1/2) sum_{j<n} R_j expressed through beta_n and r_n
inline ResidualReport residual_sumR_closed(const OPSequence& seq, const AuxVars& aux,
                                           long n, const Real& tol) {
  detail::need(n >= 1 && n <= seq.N - 1, "residual_sumR_closed");
  detail::SeqCtx v(seq, n);
  Real km1 = v.Q - 1;
  Terms t(v.ctx);
  Real sumR(0, v.ctx.bits());
  for (long j = 0; j < n; ++j) sumR += aux.R[static_cast<std::size_t>(j)];
  t.add(sumR / 2);
  t.add(aux.r[static_cast<std::size_t>(n)] * (v.al + v.bw + n));
  t.sub(v.ctx.frac(n, 2) * (v.ctx.frac(n, 2) + v.bw + v.al * v.Q) / km1);
  t.add(v.Q / km1 * v.A(1) * v.A(-1) * v.B(n));
  return t.report("sumR(beta,r)", n, tol);
}

// [p1(n-1)]^2 - [p1(n)]^2 = beta_{n-1}^2 + 2 beta_{n-1} p1(n)
inline ResidualReport residual_identity_p1sq(const OPSequence& seq, long n,
                                             const Real& tol) {
  detail::need(n >= 1 && n <= seq.N + (seq.symmetric() ? 1 : 0), "residual_identity_p1sq");
  detail::SeqCtx v(seq, n);
  Terms t(v.ctx);
  t.add(v.P(n - 1) * v.P(n - 1)).sub(v.P(n) * v.P(n))
      .sub(v.B(n - 1) * v.B(n - 1)).sub(2 * v.B(n - 1) * v.P(n));
  return t.report("p1^2 identity", n, tol);
}

// ---------------------------------------------------------------------------
// Quadratic equation in p1(n) with coefficients in beta_{n+1}, beta_n,
// beta_{n-1}.
// ---------------------------------------------------------------------------

inline ResidualReport residual_thm_1_1(const OPSequence& seq, long n, const Real& tol) {
  detail::need(n >= 2 && n <= seq.N - 1, "residual_thm_1_1 needs 2 <= n <= N-1");
  detail::SeqCtx v(seq, n);
  const auto& ctx = v.ctx;
  Terms t(ctx);
  t.add(v.Q * v.P(n) * v.P(n));
  t.add((2 * v.Q * v.A(-1) * v.B(n) - v.al * v.Q - v.bw) * v.P(n));
  t.sub(v.Q * v.A(3) * v.A(-1) * v.B(n) * v.B(n));
  t.sub(v.Q * v.A(3) * v.A(-1) * v.B(n + 1) * v.B(n));
  t.add(((v.bw + n + v.half) * v.Q + (v.al + n + v.half)) * v.A(-1) * v.B(n));
  t.sub(v.Q * v.A(1) * v.A(-3) * v.B(n - 1) * v.B(n));
  t.sub(ctx.frac(n, 2) * (ctx.frac(n, 2) + v.al + v.bw));
  return t.report("thm1.1", n, tol);
}

// ---------------------------------------------------------------------------
// g_n and the third-order difference equation (signed and squared forms).
// g_0 is fixed exactly by the telescoped arrangement; for n >= 1 the branch
// is the positive square root.
// ---------------------------------------------------------------------------

inline Real g_n_squared(const OPSequence& seq, long n) {
  detail::need(n >= 0 && n <= seq.N - 1, "g_n_squared needs n <= N-1");
  detail::SeqCtx v(seq, n);
  Real Q2 = v.Q * v.Q;
  Real bm1 = n >= 1 ? v.B(n - 1) : v.ctx.real(0);
  Real g2 = 4 * Q2 * v.A(1) * v.A(-3) * v.B(n) * bm1 +
            4 * Q2 * v.A(3) * v.A(-1) * v.B(n + 1) * v.B(n) +
            8 * Q2 * v.A(1) * v.A(-1) * v.B(n) * v.B(n) -
            4 * v.Q * (v.Q + 1) * v.A(1) * v.A(-1) * v.B(n) +
            (v.al * v.Q + v.bw) * (v.al * v.Q + v.bw) +
            v.Q * n * (v.num(n) + 2 * v.al + 2 * v.bw);
  return g2;
}

// the signed value forced by the telescoped arrangement
// 2k^2 p1(n) = -2k^2(al+bt+n-1/2) beta_n + bt + al k^2 - g_n;
// exact in the stored data, no radical involved
inline Real g_arrangement(const OPSequence& seq, long n) {
  detail::SeqCtx v(seq, n);
  return v.bw + v.al * v.Q - 2 * v.Q * v.P(n) - 2 * v.Q * v.A(-1) * v.B(n);
}

// magnitude from the beta-only formula, branch from the arrangement.  A
// literal always-positive root would contradict g_0 = al k^2 + bt whenever
// that quantity is negative (e.g. the alpha = beta = -1/2 weight).
inline Real g_n(const OPSequence& seq, long n) {
  Real g2 = g_n_squared(seq, n);
  if (g2 < 0)
    throw NegativeRadicand("g_n: g_n^2 < 0 at working precision, n = " + std::to_string(n));
  Real mag = sqrt(g2);
  return g_arrangement(seq, n) < 0 ? Real(-mag) : mag;
}

// signed third-order form and the squared (radical-free) form
inline std::pair<ResidualReport, ResidualReport> residual_thm_1_2(const OPSequence& seq,
                                                                  long n, const Real& tol) {
  detail::need(n >= 1 && n <= seq.N - 2, "residual_thm_1_2 needs 1 <= n <= N-2");
  detail::SeqCtx v(seq, n);
  const auto& ctx = v.ctx;

  ResidualReport signed_rr;
  {
    Terms t(ctx);
    t.add(2 * v.Q * v.A(1) * (v.B(n + 1) - v.B(n)));
    t.add(g_n(seq, n + 1));
    t.sub(g_n(seq, n));
    signed_rr = t.report("thm1.2:signed", n, tol);
  }

  ResidualReport squared_rr;
  {
    Real curly = 4 * v.Q * v.Q * v.B(n) *
                     (v.A(3) * v.A(-1) * v.B(n + 1) + v.A(1) * v.A(-3) * v.B(n - 1)) +
                 4 * v.Q * v.A(1) * v.A(-1) * v.B(n) * (2 * v.Q * v.B(n) - v.Q - 1) +
                 (v.al * v.Q + v.bw) * (v.al * v.Q + v.bw) +
                 v.Q * n * (v.num(n) + 2 * v.al + 2 * v.bw);
    Real dbeta = v.B(n + 1) - v.B(n);
    Real lhs = dbeta * dbeta * curly;
    Real i1 = v.B(n + 1) * (v.Q * v.A(5) * (v.B(n + 2) + v.B(n + 1)) - (v.Q + 1) * v.A(3));
    Real i2 = -v.B(n) * (v.Q * v.A(1) * (v.B(n) + v.B(n - 1)) - (v.Q + 1) * v.A(-1));
    Real i3 = 2 * v.Q * v.B(n) * (v.A(1) * dbeta + v.B(n) + v.B(n - 1));
    Real inner = i1 + i2 + v.half + i3;

    // Both sides shrink like dbeta^2, which can be exponentially small
    // (every expansion coefficient past a_1 vanishes at alpha = -1/2), so
    // the scale carries a bilinear floor built from the equation's O(1)
    // ingredients; without it the relative residual would measure nothing
    // but the data error amplified by 1/dbeta^2.
    Real ing = max(max(abs(i1), abs(i2)), max(abs(i3), v.half));
    Real scale = max(max(abs(lhs), inner * inner), abs(dbeta) * ing);
    squared_rr.name = "thm1.2:squared";
    squared_rr.n = n;
    squared_rr.absolute = abs(lhs - inner * inner);
    squared_rr.relative = scale > 0 ? Real(squared_rr.absolute / scale) : squared_rr.absolute;
    squared_rr.pass = squared_rr.relative < tol;
  }
  return {std::move(signed_rr), std::move(squared_rr)};
}

// ---------------------------------------------------------------------------
// Generalized Rees equation  beta_{n-1} C_{n-2} = beta_n C_n + 1.
// ---------------------------------------------------------------------------

inline Real C_n(const OPSequence& seq, long n, bool rees_form = false) {
  detail::need(n >= 0 && n <= seq.N - 1, "C_n needs n <= N-1");
  detail::SeqCtx v(seq, n);
  if (rees_form)  // Rees' original coefficient, alpha = beta = -1/2 case
    return (2 * v.num(n) + 1) * v.Q * (v.B(n) + v.B(n + 1)) -
           2 * n * (v.Q + 1) - 4 * v.Q * v.P(n);
  return 2 * v.A(3) * v.Q * (v.B(n) + v.B(n + 1)) -
         2 * ((v.bw + n + v.half) * v.Q + (v.al + n + v.half)) - 4 * v.Q * v.P(n);
}

inline ResidualReport residual_gen_rees(const OPSequence& seq, long n, const Real& tol) {
  detail::need(n >= 2 && n <= seq.N - 1, "residual_gen_rees needs 2 <= n <= N-1");
  detail::SeqCtx v(seq, n);
  Terms t(v.ctx);
  t.add(v.B(n - 1) * C_n(seq, n - 2)).sub(v.B(n) * C_n(seq, n)).sub(v.num(1));
  return t.report("gen-rees", n, tol);
}

// equivalent form carrying p1(n) explicitly
inline ResidualReport residual_gen_rees_equiv(const OPSequence& seq, long n,
                                              const Real& tol) {
  detail::need(n >= 2 && n <= seq.N - 1, "residual_gen_rees_equiv needs 2 <= n <= N-1");
  detail::SeqCtx v(seq, n);
  Real bm2 = v.B(n - 2);
  Terms t(v.ctx);
  t.add(4 * v.Q * (v.B(n) - v.B(n - 1)) * v.P(n));
  t.sub(2 * v.Q * v.A(3) * v.B(n) * (v.B(n) + v.B(n + 1)));
  t.add(2 * ((v.al + n + v.half) + (v.bw + n + v.half) * v.Q) * v.B(n));
  t.add(2 * v.Q * v.A(-5) * v.B(n - 1) * (v.B(n - 1) + bm2));
  t.sub(2 * ((v.al + n - 1 - v.half) + (v.bw + n - 1 - v.half) * v.Q) * v.B(n - 1));
  t.sub(v.num(1));
  return t.report("gen-rees:equiv", n, tol);
}

// ---------------------------------------------------------------------------
// Degree-6 algebraic equation: sum over the 34 tabulated coefficients
// c_{p,q,r} of c_{p,q,r} beta_{n+1}^p beta_n^q beta_{n-1}^r = 0.
// ---------------------------------------------------------------------------

struct AppendixTriple {
  int p, q, r;
};

inline const std::vector<AppendixTriple>& appendix_triples() {
  static const std::vector<AppendixTriple> t = {
      {0, 0, 0}, {0, 1, 0}, {0, 1, 1}, {1, 1, 0}, {0, 2, 0}, {1, 1, 1}, {0, 3, 0},
      {1, 2, 0}, {0, 2, 1}, {1, 2, 1}, {0, 2, 2}, {2, 2, 0}, {0, 4, 0}, {1, 3, 0},
      {0, 3, 1}, {1, 3, 1}, {1, 2, 2}, {2, 2, 1}, {0, 4, 1}, {1, 4, 0}, {0, 3, 2},
      {2, 3, 0}, {0, 5, 0}, {2, 4, 0}, {0, 4, 2}, {3, 3, 0}, {0, 3, 3}, {1, 4, 1},
      {1, 3, 2}, {2, 3, 1}, {2, 2, 2}, {1, 5, 0}, {0, 5, 1}, {0, 6, 0}};
  return t;
}

inline Real appendix_coeff(int p, int q, int r, long n, const Real& al, const Real& bw,
                           const Real& Q, const PrecisionContext& ctx) {
  Real s = al + bw + n;
  Real s2 = s * s, s3 = s2 * s, s4 = s2 * s2;
  Real Q2 = Q * Q, Q3 = Q2 * Q, Q4 = Q2 * Q2;
  Real qm1 = Q - 1, qp1 = Q + 1;
  Real qm1_2 = qm1 * qm1;
  Real q2p1 = Q2 + 1;
  Real a2 = al * al, b2 = bw * bw;
  Real apb = a2 + b2, amb = a2 - b2;
  Real half = ctx.frac(1, 2);
  auto F = [&](long pp, long qq) { return ctx.frac(pp, qq); };
  Real nn = ctx.real(n);

  const int code = p * 100 + q * 10 + r;
  switch (code) {
    case 0:  // c_{0,0,0}
      return qm1_2 * nn * (nn + 2 * al) * (nn + 2 * bw) * (nn + 2 * al + 2 * bw);
    case 10:  // c_{0,1,0}
      return a2 * (4 * a2 - 4 * b2 - 3) * qp1 * qm1_2 * (2 * s - 3) * (2 * s + 3) * s2 -
             F(2, 9) * (4 * a2 - 1) * amb * qp1 * qm1_2 * (2 * s - 3) * (2 * s + 3) *
                 (2 * s - 1) * (2 * s + 1) -
             F(1, 9) * (4 * a2 * a2 - 4 * a2 * b2 - 19 * a2 - 8 * b2 + 18) * qp1 * qm1_2 *
                 (2 * s - 1) * (2 * s + 1) * s2 +
             2 * qp1 * s2 -
             amb * (8 * nn * nn + 16 * nn * al + 16 * nn * bw + 16 * al * bw + 1) * qm1_2 +
             (5 * a2 - b2 + 4 * al * bw + 2 * nn * nn + 4 * nn * al + 4 * nn * bw) * qm1 * qp1;
    case 11:  // c_{0,1,1}
      return 8 * Q * (s - F(3, 2)) *
             (qm1_2 * s3 + half * q2p1 * s2 - apb * qm1_2 * s + half * (Q2 - 1) * amb);
    case 110:  // c_{1,1,0}
      return 8 * Q * (s + F(3, 2)) *
             (qm1_2 * s3 - half * q2p1 * s2 - qm1_2 * apb * s - half * (Q2 - 1) * amb);
    case 20:  // c_{0,2,0}
      return -8 * q2p1 * qm1_2 * s4 + 24 * qp1 * qp1 * qm1_2 * s4 -
             7 * q2p1 * qp1 * qp1 * s2 + q2p1 * qm1_2 * s2 * (8 * apb + 3) +
             16 * qp1 * s2 * qm1_2 * q2p1 * amb -
             4 * qp1 * qp1 * qm1_2 * (4 * Q * amb + 6 * apb + 1) * s2 +
             F(9, 8) * q2p1 * qp1 * qp1 - 6 * qm1 * qp1 * qp1 * q2p1 * amb +
             F(1, 8) * q2p1 * qm1_2 * (8 * apb - 1) * (8 * apb - 1) -
             2 * qp1 * qm1_2 * q2p1 * amb * (4 * apb + 1) +
             F(1, 4) * (Q2 - 1) * (Q2 - 1) *
                 (32 * Q * amb - 8 * apb - 64 * a2 * b2 + 32 * Q * (a2 * a2 - b2 * b2) - 1);
    case 111:  // c_{1,1,1}
      return -8 * Q2 * (s + F(3, 2)) * (s - F(3, 2)) * (qp1 * s2 + qm1 * amb);
    case 30:  // c_{0,3,0}
      return -64 * Q *
             (F(1, 8) * qp1 * (8 * Q2 - 15 * Q + 8) * s4 + F(9, 32) * qp1 * q2p1 +
              F(3, 64) * qp1 * qm1_2 * (11 * Q * amb - 8 * apb - 2) -
              F(3, 64) * q2p1 * qm1 * (11 * Q + 8) * amb -
              F(65, 64) * q2p1 * qp1 * s2 -
              F(1, 64) * qp1 * qm1_2 * s2 * (36 * Q * amb + 32 * apb - 1) +
              F(17, 32) * s2 * qm1_2 * q2p1 * amb + F(1, 32) * (Q4 - 1) * s2 * amb);
    case 120:  // c_{1,2,0}
      return -32 * Q * (s + F(3, 2)) *
             (-qp1 * qm1_2 * (a2 + F(1, 4)) * s - F(1, 8) * (Q2 - 1) * s * (amb + 2) +
              F(7, 8) * qm1_2 * s * amb - F(1, 4) * qp1 * (s - F(3, 2)) -
              F(1, 8) * qp1 * qm1_2 * (4 * a2 - 1) -
              F(1, 16) * (Q2 - 1) * (13 * amb - 6) - F(5, 16) * qm1_2 * amb -
              F(1, 8) * qp1 * (4 * Q2 + 5 * Q + 4) * s2 +
              F(1, 4) * qp1 * (4 * Q2 - 9 * Q + 4) * s3);
    case 21:  // c_{0,2,1}
      return -32 * Q * (s - F(3, 2)) *
             (F(1, 4) * qp1 * (4 * Q2 - 9 * Q + 4) * s3 +
              F(1, 8) * qp1 * (4 * Q2 + 5 * Q + 4) * s2 +
              F(1, 8) * (Q2 - 1) * (Q * (4 * a2 - 1) + 5 * a2 - 9 * b2 - 2) -
              F(7, 4) * qm1 * amb * (s + F(5, 14)) -
              F(1, 4) * (Q2 - 1) * (Q * (4 * a2 + 1) - 7 * a2 + 3 * b2) * s -
              F(1, 4) * qp1 * (s + F(3, 2)));
    case 121:  // c_{1,2,1}
      return 32 * Q2 * (s + F(3, 2)) * (s - F(3, 2)) *
             ((s + half) * (s - half) * (2 * Q2 + Q + 2) - Q / 2);
    case 22:  // c_{0,2,2}
      return 16 * Q2 * (s - F(3, 2)) * (s - F(3, 2)) *
             ((bw + nn + half) * (2 * al + bw + nn + half) * Q2 +
              (a2 + b2 + half - 3 * s2) * Q +
              (al + nn + half) * (al + 2 * bw + nn + half));
    case 220:  // c_{2,2,0}
      return 16 * Q2 * (s + F(3, 2)) * (s + F(3, 2)) *
             ((bw + nn - half) * (2 * al + bw + nn - half) * Q2 +
              (a2 + b2 + half - 3 * s2) * Q +
              (al + nn - half) * (al + 2 * bw + nn - half));
    case 40:  // c_{0,4,0}
      return Q2 *
             (32 * (3 * Q2 - 2 * Q + 3) * s4 -
              8 * ((4 * a2 + 22) * Q2 + (21 - 4 * a2 - 4 * b2) * Q + 4 * b2 + 22) * s2 +
              F(9, 2) * q2p1 * qm1 * (8 * apb - 1) + F(99, 2) * qp1 * q2p1 -
              9 * (Q2 - 1) * (4 * Q * (apb + F(5, 4)) + 4 * amb));
    case 130:  // c_{1,3,0}
      return 32 * Q2 * (s + F(3, 2)) *
             ((Q2 - 6 * Q + 1) * s3 - F(9, 8) * q2p1 * (s - F(13, 6)) +
              F(1, 8) * qm1 * s * (8 * Q * a2 - 8 * b2 - Q + 1) -
              F(1, 16) * qm1 * (40 * Q * a2 - 40 * b2 + 17 * qm1) -
              half * (7 * Q2 + 12 * Q + 7) * s2);
    case 31:  // c_{0,3,1}
      return 32 * Q2 * (s - F(3, 2)) *
             (-F(9, 8) * qp1 * (s + F(13, 6)) - half * (Q2 - 1) * s * (b2 - a2 + F(9, 8)) +
              F(1, 16) * qm1_2 * s * (8 * apb - 11) + (Q2 - 6 * Q + 1) * s3 +
              F(1, 16) * qm1 * (40 * Q * a2 - 22 * Q - 40 * b2 - 17) +
              half * (7 * Q2 + 12 * Q + 7) * s2);
    case 131:  // c_{1,3,1}
      return -128 * Q3 * qp1 * (s + F(3, 2)) * (s - F(3, 2)) * (s2 - F(3, 4));
    case 122:  // c_{1,2,2}
      return -2 * Q3 * qp1 * (2 * s - 3) * (2 * s - 3) * (2 * s + 1) * (2 * s + 3);
    case 221:  // c_{2,2,1}
      return -2 * Q3 * qp1 * (2 * s - 3) * (2 * s + 3) * (2 * s + 3) * (2 * s - 1);
    case 41:  // c_{0,4,1}
      return 32 * Q3 * qp1 * (s - F(3, 2)) *
             (s2 * (s - F(19, 2)) + F(11, 4) * s + F(39, 8));
    case 140:  // c_{1,4,0}
      return 32 * Q3 * qp1 * (s + F(3, 2)) *
             (s2 * (s + F(19, 2)) + F(11, 4) * s - F(39, 8));
    case 32:  // c_{0,3,2}
      return 2 * Q3 * qp1 * (2 * s - 3) * (2 * s - 3) * (2 * s + 1) * (6 * s - 7);
    case 230:  // c_{2,3,0}
      return 2 * Q3 * qp1 * (2 * s + 3) * (2 * s + 3) * (6 * s + 7) * (2 * s - 1);
    case 50:  // c_{0,5,0}
      return -64 * Q3 * qp1 * (s + F(3, 2)) * (s - F(3, 2)) *
             ((s + half) * (s - half) - half);
    case 240:  // c_{2,4,0}
      return -112 * Q4 * (s + F(3, 2)) * (s + F(3, 2)) *
             (s2 + F(11, 7) * s - F(33, 28));
    case 42:  // c_{0,4,2}
      return -112 * Q4 * (s - F(3, 2)) * (s - F(3, 2)) *
             (s * (s - F(11, 7)) - F(33, 28));
    case 330:  // c_{3,3,0}
      return -4 * Q4 * (2 * s - 1) * (2 * s + 3) * (2 * s + 3) * (2 * s + 3);
    case 33:  // c_{0,3,3}
      return -4 * Q4 * (2 * s - 3) * (2 * s - 3) * (2 * s - 3) * (2 * s + 1);
    case 141:  // c_{1,4,1}
      return 320 * Q4 * (s + F(3, 2)) * (s - F(3, 2)) * (s2 - F(13, 20));
    case 132:  // c_{1,3,2}
      return 2 * Q4 * (2 * s - 3) * (2 * s - 3) * (2 * s + 3) * (2 * s + 3);
    case 231:  // c_{2,3,1}
      return 2 * Q4 * (2 * s - 3) * (2 * s - 3) * (2 * s + 3) * (2 * s + 3);
    case 222:  // c_{2,2,2}
      return Q4 * (2 * s - 3) * (2 * s - 3) * (2 * s + 3) * (2 * s + 3);
    case 150:  // c_{1,5,0}
      return -32 * Q4 * (s + F(3, 2)) * (s + F(3, 2)) * (s * (s + 5) - F(15, 4));
    case 51:  // c_{0,5,1}
      return -32 * Q4 * (s - F(3, 2)) * (s - F(3, 2)) * (s * (s - 5) - F(15, 4));
    case 60:  // c_{0,6,0}
      return Q4 * (2 * s - 3) * (2 * s - 3) * (2 * s + 3) * (2 * s + 3);
    default:
      throw DomainError("appendix_coeff: not one of the 34 tabulated triples");
  }
}

inline ResidualReport residual_thm_1_4(const OPSequence& seq, long n, const Real& tol) {
  detail::need(n >= 1 && n <= seq.N - 1, "residual_thm_1_4 needs 1 <= n <= N-1");
  detail::SeqCtx v(seq, n);
  Terms t(v.ctx);
  for (const auto& tr : appendix_triples()) {
    Real mono = appendix_coeff(tr.p, tr.q, tr.r, n, v.al, v.bw, v.Q, v.ctx);
    if (tr.p) mono *= pown(v.B(n + 1), tr.p);
    if (tr.q) mono *= pown(v.B(n), tr.q);
    if (tr.r) mono *= pown(v.B(n - 1), tr.r);
    t.add(std::move(mono));
  }
  return t.report("thm1.4", n, tol);
}

// ---------------------------------------------------------------------------
// Second-order difference equation satisfied by p1(n).
// ---------------------------------------------------------------------------

inline ResidualReport residual_thm_1_5(const OPSequence& seq, long n, const Real& tol) {
  long pmax = seq.symmetric() ? seq.N + 1 : seq.N;
  detail::need(n >= 2 && n + 1 <= pmax, "residual_thm_1_5 needs 2 <= n <= N");
  detail::SeqCtx v(seq, n);
  const auto& ctx = v.ctx;
  Real Q2 = v.Q * v.Q;
  const Real &pp = v.P(n + 1), &p0 = v.P(n), &pm = v.P(n - 1);
  Terms t(ctx);
  // obtained by eliminating r_n and p1(n+2) from the three-equation
  // algebraic system; the cubic terms group as below
  t.add(Q2 * v.A(-3) * v.A(1) *
        (v.A(1) * (pp * pp * (p0 - pm) - pm * pm * (p0 - pp)) +
         2 * pm * pm * (p0 - pp)));
  t.add(v.A(-1) * v.A(-1) *
        (v.Q * v.A(-3) * pm - v.Q * v.A(1) * pp -
         (v.bw + n - v.half) * v.Q - v.al - n + v.half) *
        v.Q * p0 * p0);
  t.add(2 * v.A(1) * v.A(-3) * Q2 * pp * p0 * pm);
  t.add(v.Q * v.A(1) * v.A(-3) * ((v.bw + n - v.half) * v.Q + v.al + n - v.half) *
        (pp * p0 + p0 * pm - pp * pm));
  t.add((v.al * v.Q + v.bw) * (v.A(1) * pp - v.A(-3) * pm) * v.Q * p0);
  t.add(ctx.frac(n - 1, 2) * v.A(1) * (v.al + v.bw + ctx.frac(n - 1, 2)) * v.Q * pp);
  t.sub(ctx.frac(n, 2) * v.A(-3) * (v.al + v.bw + ctx.frac(n, 2)) * v.Q * pm);
  t.add((v.al * (v.bw + n - v.half) * Q2 +
         v.half * (v.al - v.bw + n - v.half) * (v.al - v.bw - n + v.half) * v.Q +
         v.bw * (v.al + n - v.half)) *
        p0);
  t.add(ctx.frac(1, 4) * n * (v.num(n) - 1) * (v.al * v.Q + v.bw));
  return t.report("thm1.5", n, tol);
}

// ---------------------------------------------------------------------------
// Fourth-order difference equation in beta_{n+2} ... beta_{n-2}.
// ---------------------------------------------------------------------------

inline ResidualReport residual_fourth_order(const OPSequence& seq, long n,
                                            const Real& tol) {
  detail::need(n >= 2 && n <= seq.N - 2, "residual_fourth_order needs 2 <= n <= N-2");
  detail::SeqCtx v(seq, n);
  Terms t(v.ctx);
  t.add(2 * v.Q * (v.B(n + 1) - v.B(n)) * v.B(n) * (v.B(n) - v.B(n - 1)));
  t.sub(v.Q * v.A(3) * (v.B(n + 1) * v.B(n + 1) - v.B(n) * v.B(n)) * v.B(n));
  t.sub(v.Q * v.A(-3) * v.B(n) * (v.B(n) * v.B(n) - v.B(n - 1) * v.B(n - 1)));
  t.sub((v.Q + 1) * v.B(n) * (v.B(n + 1) + v.B(n) + v.B(n - 1)));
  t.add(3 * (v.Q + 1) * v.B(n + 1) * v.B(n - 1));
  t.sub(v.B(n + 1) / 2);
  t.add(v.B(n));
  t.sub(v.B(n - 1) / 2);
  t.add(v.Q * v.A(-5) * (v.B(n + 1) - v.B(n)) * v.B(n - 1) * (v.B(n - 1) + v.B(n - 2)));
  t.add(v.Q * v.A(5) * (v.B(n + 2) + v.B(n + 1)) * v.B(n + 1) * (v.B(n) - v.B(n - 1)));
  return t.report("fourth-order", n, tol);
}

// ---------------------------------------------------------------------------
// Elimination formulas: p1(n) and r_n recovered from beta_{n+1}, beta_n,
// beta_{n-1} alone.
// ---------------------------------------------------------------------------

inline Real elimination_K_raw(const Real& bp, const Real& b0, const Real& bm, long n,
                              const Real& al, const Real& bw, const Real& Q) {
  Real sab = al + bw + n;
  return (1 + 12 * Q * b0 * b0 + 2 * ((bp + bm - 2) * Q - 2) * b0) * sab +
         3 * Q * b0 * (bp - bm);
}

inline Real elimination_K(const OPSequence& seq, long n) {
  detail::need(n >= 1 && n <= seq.N - 1, "elimination_K needs 1 <= n <= N-1");
  detail::SeqCtx v(seq, n);
  return elimination_K_raw(v.B(n + 1), v.B(n), v.B(n - 1), n, v.al, v.bw, v.Q);
}

namespace detail {

inline void check_K(const Real& K, const OPSequence& seq, long n) {
  const auto& ctx = seq.ctx();
  Real scale = abs((seq.alpha() + seq.beta_w() + n) * 1);
  if (abs(K) < ctx.pow10(-(ctx.digits() / 2)) * max(scale, ctx.real(1)))
    throw SingularElimination("elimination: K_n below threshold at n = " + std::to_string(n));
}

}  // namespace detail

inline Real elimination_p1(const OPSequence& seq, long n) {
  detail::need(n >= 1 && n <= seq.N - 1, "elimination_p1 needs 1 <= n <= N-1");
  detail::SeqCtx v(seq, n);
  const auto& ctx = v.ctx;
  auto F = [&](long pp, long qq) { return ctx.frac(pp, qq); };
  Real K = elimination_K(seq, n);
  detail::check_K(K, seq, n);
  Real Q2 = v.Q * v.Q;
  Real rhs =
      2 *
          (2 * v.Q * v.A(3) * v.B(n + 1) + 10 * v.Q * (v.s + F(7, 10)) * v.B(n) -
           (2 * v.bw + 2 * n + 1) * v.Q - (2 * v.al + 2 * n + 1)) *
          v.A(-3) * v.Q * v.B(n) * v.B(n - 1) +
      2 *
          (10 * (v.s - F(3, 10)) * v.Q * v.B(n) - (2 * v.bw + 2 * n - 1) * v.Q -
           (2 * v.al + 2 * n - 1)) *
          v.A(3) * v.Q * v.B(n) * v.B(n + 1) +
      20 * v.A(3) * (v.s - F(3, 10)) * Q2 * pown(v.B(n), 3) -
      24 *
          (v.Q * v.s * (v.bw + n + F(1, 3)) + v.s * (v.al + n + F(1, 3)) -
           F(1, 4) * (v.Q + 1)) *
          v.Q * v.B(n) * v.B(n) +
      ((2 * v.bw + 2 * n + 1) * (2 * v.bw + 2 * n - 1) * Q2 +
       (12 * v.num(n) * n + 2 * n - 1 + (16 * n + 2) * (v.al + v.bw) + 8 * v.al * v.bw) *
           v.Q +
       (2 * v.al + 2 * n + 1) * (2 * v.al + 2 * n - 1)) *
          v.B(n) -
      2 * n * ((v.bw + F(n, 2)) * v.Q + v.al + F(n, 2));
  return rhs / (4 * v.Q * K);
}

inline Real elimination_r(const OPSequence& seq, long n) {
  detail::need(n >= 1 && n <= seq.N - 1, "elimination_r needs 1 <= n <= N-1");
  detail::SeqCtx v(seq, n);
  const auto& ctx = v.ctx;
  auto F = [&](long pp, long qq) { return ctx.frac(pp, qq); };
  Real K = elimination_K(seq, n);
  detail::check_K(K, seq, n);
  Real Q2 = v.Q * v.Q;
  Real rhs =
      2 *
          (2 * v.Q * v.A(3) * v.B(n + 1) + 6 * v.Q * (v.s + F(5, 6)) * v.B(n) -
           (2 * v.bw + 2 * n + 1) * v.Q - (2 * v.al + 1)) *
          v.A(-3) * v.Q * v.B(n) * v.B(n - 1) +
      2 *
          (6 * v.Q * (v.s - F(5, 6)) * v.B(n) - (2 * v.bw + 2 * n - 1) * v.Q -
           (2 * v.al - 1)) *
          v.A(3) * v.Q * v.B(n) * v.B(n + 1) -
      (28 * v.s * v.s + 9) * Q2 * pown(v.B(n), 3) +
      8 *
          ((v.Q + 1) * v.s * (2 * v.al - v.bw - n) + F(3, 4) * (v.Q + 1) -
           3 * v.s * (v.al - n - v.bw)) *
          v.Q * v.B(n) * v.B(n) +
      ((2 * v.bw + 2 * n + 1) * (2 * v.bw + 2 * n - 1) * Q2 -
       (4 * v.al * v.al + 4 * v.bw * v.bw + 1) * v.Q +
       4 * (v.al * v.al - v.num(n) * n) - 8 * n * v.bw - 1) *
          v.B(n) -
      2 * n * (v.Q - 1) * (v.bw + F(n, 2));
  return rhs / (4 * (v.Q - 1) * K);
}

// ---------------------------------------------------------------------------
// Second-order linear ODE for P_n: coefficient data and pointwise residual.
// ---------------------------------------------------------------------------

struct ODECoefficients {
  Real al, bw, ksq;
  Real Cn;
  Real m0, m2;  // M_n(x) = m2 x^2 + m0
  Real l1, l3;  // L_n(x) = l3 x^3 + l1 x
  Real u0, u2;  // U_n(x) = u2 x^2 + u0

  Real M(const Real& x) const { return m2 * x * x + m0; }
  Real Mprime(const Real& x) const { return 2 * m2 * x; }
  Real L(const Real& x) const { return (l3 * x * x + l1) * x; }
  Real U(const Real& x) const { return u2 * x * x + u0; }
  Real Y(const Real& x) const { return (1 - x * x) * (1 - ksq * x * x); }
  Real X(const Real& x) const {
    return pow(1 - x * x, 2 * al + 2) * pow(1 - ksq * x * x, 2 * bw + 2);
  }
  // (1/2) X'/X = -(2a+2) x/(1-x^2) - (2b+2) k^2 x/(1-k^2 x^2)
  Real half_Xlog(const Real& x) const {
    return -(2 * al + 2) * x / (1 - x * x) - (2 * bw + 2) * ksq * x / (1 - ksq * x * x);
  }
};

inline ODECoefficients ode_coefficients(const OPSequence& seq, long n) {
  detail::need(n >= 1 && n <= seq.N - 1, "ode_coefficients needs 1 <= n <= N-1");
  detail::SeqCtx v(seq, n);
  ODECoefficients oc{v.al, v.bw, v.Q,
                     C_n(seq, n),
                     Real(), Real(), Real(), Real(), Real(), Real()};
  oc.m2 = -2 * v.A(1) * v.Q;
  oc.m0 = -oc.Cn;
  oc.l3 = v.num(n) * v.Q;
  oc.l1 = -v.num(n) * (1 + v.Q) + 2 * v.Q * v.A(1) * v.B(n) - 2 * v.Q * v.P(n);
  oc.u2 = -v.Q * n * (v.num(n) + 2 * v.al + 2 * v.bw + 3);
  oc.u0 = 2 * v.Q * (2 * v.num(n) + 2 * v.al + 2 * v.bw + 1) * (v.P(n) - v.B(n)) +
          v.num(n) * v.Q * (v.num(n) + 2 * v.bw + 1) + v.num(n) * (v.num(n) + 2 * v.al + 1);
  return oc;
}

inline ResidualReport residual_ode(const OPSequence& seq, long n, const Real& x,
                                   const Real& tol) {
  detail::need(n >= 1 && n <= seq.N - 1, "residual_ode needs 1 <= n <= N-1");
  const auto& ctx = seq.ctx();
  if (!(abs(x) < 1)) throw DomainError("residual_ode: x must lie in (-1,1)");
  auto oc = ode_coefficients(seq, n);
  Real Y = oc.Y(x);
  Real M = oc.M(x);
  Real thresh = ctx.pow10(-(ctx.digits() / 2));
  if (abs(M) < thresh * max(abs(oc.m0), abs(oc.m2)))
    throw SingularPoint("residual_ode: M_n(x) vanishes near this x");
  if (abs(Y) < thresh) throw SingularPoint("residual_ode: Y(x) vanishes near this x");

  auto pe = eval_poly_all(seq, n, x);
  Terms t(ctx);
  t.add(pe.d2);
  t.add((oc.half_Xlog(x) - oc.Mprime(x) / M) * pe.d1);
  t.add((oc.L(x) * oc.Mprime(x) / (Y * M) + oc.U(x) / Y) * pe.p);
  auto rr = t.report("ode", n, tol);
  rr.x = x.to_double();
  return rr;
}

// ---------------------------------------------------------------------------
// Jacobi reductions and fixed points.
// ---------------------------------------------------------------------------

// beta_n for the weight (1-x^2)^a: n(n+2a)/((2n+2a+1)(2n+2a-1))
inline Real jacobi_beta_closed(long n, const Real& a, const PrecisionContext& ctx) {
  Real den1 = 2 * a + 2 * n + 1;
  Real den2 = 2 * a + 2 * n - 1;
  Real tiny = ctx.pow10(-(ctx.digits() / 2));
  if (abs(den1) < tiny || abs(den2) < tiny)
    throw RemovableSingularity(
        "jacobi_beta_closed: removable 0/0 at 2n+2a=+-1; refusing to patch");
  return n * (n + 2 * a) / (den1 * den2);
}

// fixed points of the degree-6 equation at large n: (1/4, 1/(4k^2)); the
// first is selected by the transfinite diameter of [-1,1]
inline std::pair<Real, Real> fixed_points(const Real& ksq, const PrecisionContext& ctx) {
  if (!(ksq > 0) || !(ksq < 1)) throw DomainError("fixed_points: ksq must lie in (0,1)");
  return {ctx.frac(1, 4), 1 / (4 * ksq)};
}

// consistency of the solved-for form: 2k^2 p1(n) = -2k^2(al+bt+n-1/2)beta_n
// + bt + al k^2 - g_n (lower sign)
inline ResidualReport residual_p1_solved(const OPSequence& seq, long n, const Real& tol) {
  detail::need(n >= 0 && n <= seq.N - 1, "residual_p1_solved");
  detail::SeqCtx v(seq, n);
  Terms t(v.ctx);
  t.add(2 * v.Q * v.P(n));
  t.add(2 * v.Q * v.A(-1) * v.B(n));
  t.sub(v.bw + v.al * v.Q);
  t.add(g_n(seq, n));
  return t.report("p1:solved-form", n, tol);
}

}  // namespace ellop
