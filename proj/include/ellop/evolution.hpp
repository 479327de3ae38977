// k^2-evolution identities: Toda-type equations for h_n and beta_n, the
// Hankel log-derivative H_n, the even/odd splitting into shifted-weight
// systems, and the Painleve VI sigma-form satisfied by the shifted-weight
// determinants.
//
// Derivatives in k^2 come from a centred stencil of independently built
// sequences (common N and digits, so node-to-node bias cancels in the
// differences), with the defect between the full-stencil and inner-stencil
// formulas attached as an error estimate.

#pragma once

#include <utility>
#include <vector>

#include "ellop/opseq.hpp"
#include "ellop/report.hpp"
#include "ellop/residuals.hpp"

namespace ellop {

namespace detail {

// Fornberg weights for derivatives 0..m at x = 0 on arbitrary nodes
inline std::vector<std::vector<Real>> fd_weights(const std::vector<Real>& x, int m,
                                                 const PrecisionContext& ctx) {
  const std::size_t N = x.size();
  std::vector<std::vector<Real>> C(N, std::vector<Real>(static_cast<std::size_t>(m) + 1,
                                                        ctx.real(0)));
  Real c1 = ctx.real(1);
  Real c4 = x[0];
  C[0][0] = ctx.real(1);
  for (std::size_t i = 1; i < N; ++i) {
    int mn = static_cast<int>(std::min<std::size_t>(i, static_cast<std::size_t>(m)));
    Real c2 = ctx.real(1);
    Real c5 = c4;
    c4 = x[i];
    for (std::size_t j = 0; j < i; ++j) {
      Real c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          C[i][static_cast<std::size_t>(k)] =
              c1 * (k * C[i - 1][static_cast<std::size_t>(k - 1)] -
                    c5 * C[i - 1][static_cast<std::size_t>(k)]) / c2;
        C[i][0] = -c1 * c5 * C[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k)
        C[j][static_cast<std::size_t>(k)] =
            (c4 * C[j][static_cast<std::size_t>(k)] -
             k * C[j][static_cast<std::size_t>(k - 1)]) / c3;
      C[j][0] = c4 * C[j][0] / c3;
    }
    c1 = c2;
  }
  return C;
}

}  // namespace detail

struct KGrid {
  PrecisionContext ctx;
  Real center;  // k^2 at the middle node
  Real h;
  int stencil = 7;             // odd node count >= 5
  std::vector<Real> nodes;     // k^2 values, strictly inside (0,1)
  std::vector<OPSequence> seqs;
  long N = 0;

  const OPSequence& center_seq() const {
    return seqs[static_cast<std::size_t>(stencil / 2)];
  }
};

namespace detail {

inline std::vector<Real> kgrid_nodes(const Real& center, const Real& h, int stencil,
                                     const PrecisionContext& ctx) {
  if (stencil < 5 || stencil % 2 == 0)
    throw DomainError("KGrid: stencil must be an odd count >= 5");
  std::vector<Real> nodes;
  nodes.reserve(static_cast<std::size_t>(stencil));
  int half = stencil / 2;
  for (int i = -half; i <= half; ++i) {
    Real node = center + i * h;
    if (!(node > 0) || !(node < 1))
      throw DomainError("KGrid: node leaves (0,1); shrink h");
    nodes.push_back(std::move(node));
  }
  (void)ctx;
  return nodes;
}

}  // namespace detail

inline KGrid build_kgrid(const Params& p, long N, const Real& h, int stencil = 7) {
  KGrid g{p.ctx, p.ksq, h, stencil, detail::kgrid_nodes(p.ksq, h, stencil, p.ctx), {}, N};
  g.seqs.reserve(g.nodes.size());
  for (const auto& node : g.nodes) {
    Params pn(p.alpha, p.beta, node, p.ctx);
    g.seqs.push_back(from_moments(build_table(N, pn), N));
  }
  return g;
}

inline KGrid build_kgrid_w2(const Real& a, const Real& b, const Real& c, const Real& ksq,
                            const PrecisionContext& ctx, long N, const Real& h,
                            int stencil = 7) {
  KGrid g{ctx, ksq, h, stencil, detail::kgrid_nodes(ksq, h, stencil, ctx), {}, N};
  g.seqs.reserve(g.nodes.size());
  for (const auto& node : g.nodes) {
    ShiftedParams pn(a, b, c, node, ctx);
    g.seqs.push_back(from_moments(build_table(N, pn), N));
  }
  return g;
}

struct Deriv {
  Real value;
  Real err;  // defect between full-stencil and inner-stencil estimates
};

// order-th derivative in k^2 of node values f (one per grid node) at the
// grid center
inline Deriv d_dksq(const KGrid& g, const std::vector<Real>& f, int order) {
  const auto& ctx = g.ctx;
  if (f.size() != g.nodes.size()) throw DomainError("d_dksq: one value per node");
  if (order < 1 || order > 3) throw DomainError("d_dksq: order must be 1..3");
  if (order == 3 && g.stencil < 7)
    throw DomainError("d_dksq: third derivative needs a 7-point stencil");

  std::vector<Real> offs;
  offs.reserve(g.nodes.size());
  for (const auto& node : g.nodes) offs.push_back(node - g.center);

  auto apply = [&](std::size_t lo, std::size_t hi) {  // nodes [lo, hi)
    std::vector<Real> sub(offs.begin() + static_cast<long>(lo),
                          offs.begin() + static_cast<long>(hi));
    auto W = detail::fd_weights(sub, order, ctx);
    Real v(0, ctx.bits());
    for (std::size_t i = lo; i < hi; ++i)
      v += W[i - lo][static_cast<std::size_t>(order)] * f[i];
    return v;
  };

  std::size_t n = g.nodes.size();
  Real full = apply(0, n);
  Real inner = apply(1, n - 1);
  Deriv d{full, abs(full - inner)};
  if (d.err > ctx.pow10(-(ctx.digits() / 4)) * max(ctx.real(1), abs(full)))
    throw StepTooLarge("d_dksq: extrapolation defect too large; shrink h");
  return d;
}

// ---------------------------------------------------------------------------
// Toda-type evolution:  k^2 d/dk^2 log h_n = R_n - n - alpha - 1/2  and
// k^2 d/dk^2 log beta_n = R_n - R_{n-1} - 1.
// ---------------------------------------------------------------------------

inline std::pair<ResidualReport, ResidualReport> toda_check(const KGrid& g, long n,
                                                            const Real& tol) {
  if (n < 1 || n > g.N - 2) throw IndexError("toda_check: need 1 <= n <= N-2");
  const auto& ctx = g.ctx;
  const auto& cs = g.center_seq();
  auto aux = aux_from_sequence(cs);

  std::vector<Real> logh, logbeta;
  logh.reserve(g.seqs.size());
  logbeta.reserve(g.seqs.size());
  for (const auto& s : g.seqs) {
    logh.push_back(log(s.h[static_cast<std::size_t>(n)]));
    logbeta.push_back(log(s.beta[static_cast<std::size_t>(n)]));
  }
  auto dh = d_dksq(g, logh, 1);
  auto db = d_dksq(g, logbeta, 1);

  Real half = ctx.frac(1, 2);
  ResidualReport r1, r2;
  {
    Terms t(ctx);
    t.add(g.center * dh.value).sub(aux.R[static_cast<std::size_t>(n)]).add(ctx.real(n))
        .add(cs.alpha()).add(half);
    r1 = t.report("toda:logh", n, tol);
  }
  {
    Terms t(ctx);
    t.add(g.center * db.value).sub(aux.R[static_cast<std::size_t>(n)])
        .add(aux.R[static_cast<std::size_t>(n - 1)]).add(ctx.real(1));
    r2 = t.report("toda:logbeta", n, tol);
  }
  return {std::move(r1), std::move(r2)};
}

// H_n = -k^2(al+bt+n-1/2) p1(n) - k^2(al+bt+n+1/2) p1(n+1) - n^2 k^2/2
inline Real H_n_from_p1(const OPSequence& seq, long n) {
  if (n < 0 || n + 1 >= static_cast<long>(seq.p1.size()))
    throw IndexError("H_n_from_p1: p1(n+1) not available");
  detail::SeqCtx v(seq, n);
  return -v.Q * v.A(-1) * v.P(n) - v.Q * v.A(1) * v.P(n + 1) -
         v.Q * n * n * v.ctx.frac(1, 2);
}

// derivative route k^2(k^2-1) d/dk^2 log D_n against the algebraic form
inline ResidualReport H_n_check(const KGrid& g, long n, const Real& tol) {
  if (n < 1 || n > g.N) throw IndexError("H_n_check: need 1 <= n <= N");
  const auto& ctx = g.ctx;
  std::vector<Real> logD;
  logD.reserve(g.seqs.size());
  for (const auto& s : g.seqs) logD.push_back(s.logD[static_cast<std::size_t>(n)]);
  auto d = d_dksq(g, logD, 1);
  Terms t(ctx);
  t.add(g.center * (g.center - 1) * d.value).sub(H_n_from_p1(g.center_seq(), n));
  return t.report("H_n:two-routes", n, tol);
}

// ---------------------------------------------------------------------------
// Even/odd splitting: the symmetric system at k^2 splits into two shifted
// systems with a = -1/2 (even part) and a = +1/2 (odd part), b = alpha,
// c = beta.
// ---------------------------------------------------------------------------

inline std::vector<ResidualReport> split_check(const Params& p, long N, const Real& tol) {
  const auto& ctx = p.ctx;
  long M = N / 2 + 1;
  auto seq = from_moments(build_table(N, p), N);
  ShiftedParams even_p(ctx.frac(-1, 2), p.alpha, p.beta, p.ksq, ctx);
  ShiftedParams odd_p(ctx.frac(1, 2), p.alpha, p.beta, p.ksq, ctx);
  auto hat = from_moments(build_table(M, even_p), M);
  auto bar = from_moments(build_table(M, odd_p), M);

  std::vector<ResidualReport> out;
  auto add = [&](const char* name, long n, Terms& t) {
    out.push_back(t.report(name, n, tol));
  };

  for (long n = 0; 2 * n <= N && n <= M; ++n) {
    Terms t(ctx);
    t.add(seq.h[static_cast<std::size_t>(2 * n)]).sub(hat.h[static_cast<std::size_t>(n)]);
    add("split:h-even", n, t);
  }
  for (long n = 0; 2 * n + 1 <= N && n <= M; ++n) {
    Terms t(ctx);
    t.add(seq.h[static_cast<std::size_t>(2 * n + 1)]).sub(bar.h[static_cast<std::size_t>(n)]);
    add("split:h-odd", n, t);
  }
  for (long n = 0; 2 * n + 1 <= N && n <= M - 1; ++n) {
    Terms t(ctx);
    t.add(seq.beta[static_cast<std::size_t>(2 * n + 1)])
        .add(seq.beta[static_cast<std::size_t>(2 * n)])
        .sub(hat.alpha_rec[static_cast<std::size_t>(n)]);
    add("split:alpha-even", n, t);
  }
  for (long n = 0; 2 * n + 2 <= N && n <= M - 1; ++n) {
    Terms t(ctx);
    t.add(seq.beta[static_cast<std::size_t>(2 * n + 2)])
        .add(seq.beta[static_cast<std::size_t>(2 * n + 1)])
        .sub(bar.alpha_rec[static_cast<std::size_t>(n)]);
    add("split:alpha-odd", n, t);
  }
  // the n = 0 instance is the 0 = 0 convention (hat/bar beta start at 1)
  for (long n = 1; 2 * n <= N && n <= M; ++n) {
    Terms t(ctx);
    t.add(seq.beta[static_cast<std::size_t>(2 * n)] *
          seq.beta[static_cast<std::size_t>(2 * n - 1)])
        .sub(hat.beta[static_cast<std::size_t>(n)]);
    add("split:beta-even", n, t);
  }
  for (long n = 1; 2 * n + 1 <= N && n <= M; ++n) {
    Terms t(ctx);
    t.add(seq.beta[static_cast<std::size_t>(2 * n + 1)] *
          seq.beta[static_cast<std::size_t>(2 * n)])
        .sub(bar.beta[static_cast<std::size_t>(n)]);
    add("split:beta-odd", n, t);
  }
  for (long n = 0; 2 * n <= N && n <= M; ++n) {
    Terms t(ctx);
    t.add(seq.p1[static_cast<std::size_t>(2 * n)]).sub(hat.sub_leading(n));
    add("split:p1-even", n, t);
  }
  for (long n = 0; 2 * n + 1 <= N && n <= M; ++n) {
    Terms t(ctx);
    t.add(seq.p1[static_cast<std::size_t>(2 * n + 1)]).sub(bar.sub_leading(n));
    add("split:p1-odd", n, t);
  }
  // determinant factorizations, compared on the log scale
  for (long n = 1; 2 * n <= N + 1 && n <= M; ++n) {
    Real dl = seq.logD[static_cast<std::size_t>(2 * n)] -
              hat.logD[static_cast<std::size_t>(n)] -
              bar.logD[static_cast<std::size_t>(n)];
    ResidualReport rr;
    rr.name = "split:D-even";
    rr.n = n;
    rr.absolute = abs(dl);
    rr.relative = abs(expm1(dl));
    rr.pass = rr.relative < tol;
    out.push_back(std::move(rr));
  }
  for (long n = 0; 2 * n + 1 <= N + 1 && n + 1 <= M; ++n) {
    Real dl = seq.logD[static_cast<std::size_t>(2 * n + 1)] -
              hat.logD[static_cast<std::size_t>(n + 1)] -
              bar.logD[static_cast<std::size_t>(n)];
    ResidualReport rr;
    rr.name = "split:D-odd";
    rr.n = n;
    rr.absolute = abs(dl);
    rr.relative = abs(expm1(dl));
    rr.pass = rr.relative < tol;
    out.push_back(std::move(rr));
  }
  return out;
}

// ---------------------------------------------------------------------------
// sigma function of the shifted-weight determinant and its Painleve VI
// sigma-form.
// ---------------------------------------------------------------------------

struct SigmaData {
  long n = 0;
  Real a, b, c;
  Real d1, d0;
  Real sigma, sigma1, sigma2;
  Real err1, err2;  // differentiation error estimates for sigma', sigma''
};

// grid must be a w2 grid built with the matching (a, b, c)
inline SigmaData sigma_eval(const KGrid& g, long n) {
  if (n < 1 || n > g.N) throw IndexError("sigma_eval: need 1 <= n <= N");
  const auto& ctx = g.ctx;
  const auto& tab = g.center_seq().table;
  if (tab.symmetric()) throw DomainError("sigma_eval: needs a shifted-weight grid");
  const Real &a = tab.a, &b = tab.b, &c = tab.c;

  std::vector<Real> logD;
  logD.reserve(g.seqs.size());
  for (const auto& s : g.seqs) logD.push_back(s.logD[static_cast<std::size_t>(n)]);
  auto L1 = d_dksq(g, logD, 1);
  auto L2 = d_dksq(g, logD, 2);
  auto L3 = d_dksq(g, logD, 3);

  SigmaData s{n, a, b, c, Real(), Real(), Real(), Real(), Real(), Real(), Real()};
  s.d1 = -n * c - (a + c) * (a + c) / 4;
  s.d0 = -ctx.frac(n, 2) * (n + a + b) + c * (2 * n + a + b + c) / 4 - a * b / 4;
  const Real& t = g.center;
  Real tt1 = t * (t - 1);
  s.sigma = tt1 * L1.value + s.d1 * t + s.d0;
  s.sigma1 = (2 * t - 1) * L1.value + tt1 * L2.value + s.d1;
  s.sigma2 = 2 * L1.value + 2 * (2 * t - 1) * L2.value + tt1 * L3.value;
  s.err1 = abs(2 * t - 1) * L1.err + abs(tt1) * L2.err;
  s.err2 = 2 * L1.err + 2 * abs(2 * t - 1) * L2.err + abs(tt1) * L3.err;
  return s;
}

// Jimbo-Miwa-Okamoto sigma-form residual at the grid center
inline ResidualReport sigma_form_residual(const SigmaData& s, const Real& ksq,
                                          const PrecisionContext& ctx, const Real& tol) {
  (void)ctx;
  Real nu1 = (s.c - s.a) / 2;
  Real nu2 = (s.c + s.a) / 2;
  Real nu3 = (2 * s.n + s.a + s.c) / 2;
  Real nu4 = (2 * s.n + s.a + 2 * s.b + s.c) / 2;

  Real t1 = s.sigma1 * pown(ksq * (ksq - 1) * s.sigma2, 2);
  Real inner = 2 * s.sigma1 * (ksq * s.sigma1 - s.sigma) - s.sigma1 * s.sigma1 -
               nu1 * nu2 * nu3 * nu4;
  Real t2 = inner * inner;
  Real t3 = (nu1 * nu1 + s.sigma1) * (nu2 * nu2 + s.sigma1) *
            (nu3 * nu3 + s.sigma1) * (nu4 * nu4 + s.sigma1);

  // At degenerate parameters (c = 0) all three top-level terms vanish
  // identically, so the relative normalization needs a floor built from the
  // equation's ingredients rather than its (cancelling) terms.
  Real inner_scale = max(max(abs(2 * s.sigma1 * (ksq * s.sigma1 - s.sigma)),
                             abs(s.sigma1 * s.sigma1)),
                         abs(nu1 * nu2 * nu3 * nu4));
  Real prod_scale = max(nu1 * nu1, abs(s.sigma1)) * max(nu2 * nu2, abs(s.sigma1)) *
                    max(nu3 * nu3, abs(s.sigma1)) * max(nu4 * nu4, abs(s.sigma1));
  Real scale = max(max(abs(t1), max(abs(t2), abs(t3))),
                   max(inner_scale * inner_scale, prod_scale));

  ResidualReport rr;
  rr.name = "sigma-form";
  rr.n = s.n;
  rr.absolute = abs(t1 + t2 - t3);
  rr.relative = scale > 0 ? Real(rr.absolute / scale) : rr.absolute;
  rr.pass = rr.relative < tol;
  return rr;
}

// ---------------------------------------------------------------------------
// H_{2n} and H_{2n+1} expressed through the two sigma functions.
// ---------------------------------------------------------------------------

inline std::pair<ResidualReport, ResidualReport> painleve_rep_check(
    const OPSequence& main_seq, const KGrid& grid_even, const KGrid& grid_odd, long n,
    const Real& tol) {
  const auto& ctx = main_seq.ctx();
  const Real &al = main_seq.alpha(), &bt = main_seq.beta_w(), &Q = main_seq.ksq();
  Real eighth = ctx.frac(1, 8);

  auto se_n = sigma_eval(grid_even, n);
  auto so_n = sigma_eval(grid_odd, n);
  auto se_n1 = sigma_eval(grid_even, n + 1);

  ResidualReport even_rr, odd_rr;
  {
    Terms t(ctx);
    t.add(H_n_from_p1(main_seq, 2 * n));
    t.sub(se_n.sigma).sub(so_n.sigma);
    t.sub((bt * bt / 2 + 2 * n * bt + eighth) * Q);
    t.add(bt / 2 * (2 * n + al + bt));
    t.sub(ctx.real(n) * (n + al));
    even_rr = t.report("painleve:H-even", n, tol);
  }
  {
    Terms t(ctx);
    t.add(H_n_from_p1(main_seq, 2 * n + 1));
    t.sub(se_n1.sigma).sub(so_n.sigma);
    t.sub((bt * bt / 2 + (2 * n + 1) * bt + eighth) * Q);
    t.add(bt / 2 * (2 * n + 1 + al + bt));
    t.sub(ctx.frac(1, 4) * (2 * n + 1) * (2 * n + 1 + 2 * al));
    odd_rr = t.report("painleve:H-odd", n, tol);
  }
  return {std::move(even_rr), std::move(odd_rr)};
}

}  // namespace ellop
