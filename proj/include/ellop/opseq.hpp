// Orthogonal-polynomial system built from a moment table.
//
// The Hankel moment matrix (mu_{i+j})_{i,j=0..N} is positive definite for a
// positive weight, so an unpivoted LDL^T factorization exists and its pivots
// are exactly the normalization constants h_n.  Rows of L^{-1} are the
// monomial coefficient rows of the monic orthogonal polynomials; recurrence
// coefficients and sub-leading coefficients are read off from them.

#pragma once

#include <atomic>
#include <cmath>
#include <thread>
#include <utility>
#include <vector>

#include "ellop/moments.hpp"
#include "ellop/quadrature.hpp"
#include "ellop/real.hpp"

namespace ellop {

// Hankel moment matrices on [-1,1] lose roughly 2.2 digits per row; 30
// digits of headroom on top is the working-precision floor.
inline int required_digits(long N) {
  return 30 + static_cast<int>(std::ceil(2.2 * static_cast<double>(N)));
}
inline int auto_digits(long N, int user = 0) {
  return std::max({user, 50, required_digits(N)});
}

struct OPSequence {
  MomentTable table;  // generating moments (carries weight parameters + ctx)
  long N = 0;

  std::vector<Real> h;          // 0..N, h[n] > 0
  std::vector<Real> D;          // 0..N+1, D[0] = 1
  std::vector<Real> logD;       // 0..N+1
  std::vector<Real> beta;       // 0..N, beta[0] = 0
  std::vector<Real> alpha_rec;  // 0..N-1; identically 0 for symmetric weights
  std::vector<Real> p1;         // x^{n-2} coefficients; 0..N+1 symmetric, 0..N shifted
  std::vector<std::vector<Real>> coeffs;  // row n: monic coefficients, degree 0..n

  bool symmetric() const { return table.symmetric(); }
  const PrecisionContext& ctx() const { return table.ctx; }
  const Real& alpha() const { return table.alpha; }
  const Real& beta_w() const { return table.beta; }
  const Real& ksq() const { return table.ksq; }

  // x^{n-1} coefficient of the monic row (the sub-leading term of a
  // non-symmetric system; identically zero for symmetric weights)
  Real sub_leading(long n) const {
    if (n <= 0) return ctx().real(0);
    return coeffs[static_cast<std::size_t>(n)][static_cast<std::size_t>(n - 1)];
  }
};

inline OPSequence from_moments(const MomentTable& table, long N) {
  if (N < 1) throw DomainError("from_moments: N must be >= 1");
  if (table.max_index() < 2 * N)
    throw DomainError("from_moments: moment table does not cover 2N");
  if (table.ctx.digits() < required_digits(N))
    throw DomainError("from_moments: working precision below 30 + ceil(2.2 N) digits");

  const auto& ctx = table.ctx;
  const std::size_t M = static_cast<std::size_t>(N) + 1;
  const bool sym = table.symmetric();

  OPSequence seq{.table = table, .N = N};

  // unpivoted LDL^T of H(i,j) = mu_{i+j}; L is unit lower triangular.
  // For symmetric weights H(i,j) = 0 when i+j is odd and the parity pattern
  // propagates exactly, so those entries stay exact zeros.
  std::vector<std::vector<Real>> L(M);
  std::vector<Real> d(M);
  for (std::size_t i = 0; i < M; ++i) {
    L[i].resize(i + 1);
    for (std::size_t j = 0; j <= i; ++j) {
      if (sym && ((i + j) & 1)) {
        L[i][j] = ctx.real(0);
        continue;
      }
      Real s = table.mu[i + j];
      // for symmetric tables only m with m == i (mod 2) contribute
      for (std::size_t m = (sym ? (i & 1) : 0); m < j; m += (sym ? 2 : 1))
        s -= L[i][m] * L[j][m] * d[m];
      if (j < i) {
        L[i][j] = s / d[j];
      } else {
        if (!(s > 0))
          throw PrecisionExhausted(
              "from_moments: pivot h_" + std::to_string(i) +
              " lost all significant digits; raise working precision");
        d[i] = s;
      }
    }
  }

  // coefficient rows: row n of L^{-1} by back-substitution; rows are
  // independent of each other, so large builds use both cores
  seq.coeffs.resize(M);
  auto fill_row = [&](std::size_t n) {
    auto& row = seq.coeffs[n];
    row.assign(n + 1, ctx.real(0));
    row[n] = ctx.real(1);
    for (std::size_t k = n; k-- > 0;) {
      if (sym && ((n + k) & 1)) continue;  // exact zero by parity
      Real s(0, ctx.bits());
      // contributing m share the parity of n (and of k)
      for (std::size_t m = k + (sym ? 2 : 1); m <= n; m += (sym ? 2 : 1))
        s += row[m] * L[m][k];
      row[k] = -s;
    }
  };
  unsigned hw = std::thread::hardware_concurrency();
  if (M >= 64 && hw >= 2) {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t n; (n = next.fetch_add(1)) < M;) fill_row(n);
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < std::min(hw, 4u); ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
  } else {
    for (std::size_t n = 0; n < M; ++n) fill_row(n);
  }

  seq.h = std::move(d);
  seq.D.reserve(M + 1);
  seq.logD.reserve(M + 1);
  seq.D.push_back(ctx.real(1));
  seq.logD.push_back(ctx.real(0));
  for (std::size_t n = 1; n <= M; ++n) {
    seq.D.push_back(seq.D[n - 1] * seq.h[n - 1]);
    seq.logD.push_back(seq.logD[n - 1] + log(seq.h[n - 1]));
  }

  seq.beta.reserve(M);
  seq.beta.push_back(ctx.real(0));
  for (std::size_t n = 1; n < M; ++n) seq.beta.push_back(seq.h[n] / seq.h[n - 1]);

  auto q1 = [&](std::size_t n) {  // x^{n-1} coefficient of P_n
    return n == 0 ? ctx.real(0) : seq.coeffs[n][n - 1];
  };
  seq.alpha_rec.reserve(M - 1);
  for (std::size_t n = 0; n + 1 < M; ++n) seq.alpha_rec.push_back(q1(n) - q1(n + 1));

  seq.p1.reserve(M + 1);
  seq.p1.push_back(ctx.real(0));
  seq.p1.push_back(ctx.real(0));
  for (std::size_t n = 2; n < M; ++n) seq.p1.push_back(seq.coeffs[n][n - 2]);
  if (sym) seq.p1.push_back(seq.p1[static_cast<std::size_t>(N)] - seq.beta[static_cast<std::size_t>(N)]);

  return seq;
}

// P_n(x) and derivatives by Horner on the coefficient row
struct PolyEval {
  Real p, d1, d2;
};

inline PolyEval eval_poly_all(const OPSequence& seq, long n, const Real& x) {
  if (n < 0 || n > seq.N) throw IndexError("eval_poly: n out of range");
  const auto& row = seq.coeffs[static_cast<std::size_t>(n)];
  const auto& ctx = seq.ctx();
  Real p(0, ctx.bits()), d1(0, ctx.bits()), d2(0, ctx.bits());
  for (std::size_t k = row.size(); k-- > 0;) {
    d2 = d2 * x + 2 * d1;
    d1 = d1 * x + p;
    p = p * x + row[k];
  }
  return {std::move(p), std::move(d1), std::move(d2)};
}

inline Real eval_poly(const OPSequence& seq, long n, const Real& x, int deriv = 0) {
  auto v = eval_poly_all(seq, n, x);
  switch (deriv) {
    case 0: return v.p;
    case 1: return v.d1;
    case 2: return v.d2;
    default: throw DomainError("eval_poly: deriv must be 0, 1 or 2");
  }
}

// ---------------------------------------------------------------------------
// Ladder auxiliary variables R_n, r_n, R*_n, r*_n.
// ---------------------------------------------------------------------------

struct AuxVars {
  std::vector<Real> R;      // 0..N-1 (R_n needs beta_{n+1})
  std::vector<Real> r;      // 0..N
  std::vector<Real> Rstar;  // 0..N-1
  std::vector<Real> rstar;  // 0..N
};

inline AuxVars aux_from_sequence(const OPSequence& seq) {
  if (!seq.symmetric())
    throw DomainError("aux_from_sequence: defined for the symmetric weight");
  const Real& ksq = seq.ksq();
  if (!(ksq > 0) || !(ksq < 1))
    throw DomainError("aux_from_sequence: requires ksq strictly inside (0,1)");
  const auto& ctx = seq.ctx();
  const Real& al = seq.alpha();
  const Real& bt = seq.beta_w();
  Real k = sqrt(ksq);
  Real km1 = ksq - 1;
  Real half = ctx.frac(1, 2);
  Real abn = al + bt;

  AuxVars a;
  const std::size_t M = static_cast<std::size_t>(seq.N) + 1;
  a.r.reserve(M);
  a.rstar.reserve(M);
  a.R.reserve(M - 1);
  a.Rstar.reserve(M - 1);
  for (std::size_t n = 0; n < M; ++n) {
    Real nn(static_cast<long>(n), ctx.bits());
    Real rn = (nn / 2 - ksq * (abn + nn + half) * seq.beta[n] + ksq * seq.p1[n]) / km1;
    a.rstar.push_back(-nn / 2 - rn);
    a.r.push_back(std::move(rn));
    if (n + 1 < M) {
      Real Rn = al - (nn + half - ksq * (abn + nn + 1 + half) * (seq.beta[n] + seq.beta[n + 1]) +
                      2 * ksq * seq.p1[n]) /
                         km1;
      a.Rstar.push_back(k * (abn + nn + half - Rn));
      a.R.push_back(std::move(Rn));
    }
  }
  return a;
}

// Direct quadrature of the defining integrals.  The x = -1 pair carries the
// w/(1+y) factor whose exponent is alpha-1, so the integrals converge only
// for alpha > 0; at alpha <= 0 the alpha-prefactor multiplies a divergent
// integral (the four variables are then the analytic continuations computed
// by aux_from_sequence) and this route refuses.
struct AuxPoint {
  Real R, r, Rstar, rstar;
};

inline AuxPoint aux_from_integrals(const OPSequence& seq, long n) {
  if (n < 0 || n > seq.N - 1) throw IndexError("aux_from_integrals: need n <= N-1");
  if (!seq.symmetric())
    throw DomainError("aux_from_integrals: defined for the symmetric weight");
  const auto& ctx = seq.ctx();
  const Real& al = seq.alpha();
  const Real& bt = seq.beta_w();
  const Real& ksq = seq.ksq();
  if (!(ksq > 0) || !(ksq < 1))
    throw DomainError("aux_from_integrals: requires ksq strictly inside (0,1)");
  if (!(al > 0))
    throw DomainError(
        "aux_from_integrals: the defining integrals converge only for alpha > 0");
  Real inv_k = 1 / sqrt(ksq);
  Params p(al, bt, ksq, ctx);

  auto Pn = [&](const Real& x) { return eval_poly_all(seq, n, x).p; };
  auto Pm = [&](const Real& x) { return eval_poly_all(seq, n - 1, x).p; };

  AuxPoint out{ctx.real(0), ctx.real(0), ctx.real(0), ctx.real(0)};

  // x = -1/k residues: 1/(1/k + y) is smooth on [-1,1]
  out.Rstar = bt.is_zero()
                  ? ctx.real(0)
                  : bt / seq.h[static_cast<std::size_t>(n)] *
                        quad_de(
                            [&](const Real& x, const Real& dlo, const Real& dhi) {
                              Real v = Pn(x);
                              return p.weight(x, dlo, dhi) * v * v / (inv_k + x);
                            },
                            ctx.real(-1), ctx.real(1), ctx);
  if (n >= 1 && !bt.is_zero())
    out.rstar = bt / seq.h[static_cast<std::size_t>(n - 1)] *
                quad_de(
                    [&](const Real& x, const Real& dlo, const Real& dhi) {
                      return p.weight(x, dlo, dhi) * Pn(x) * Pm(x) / (inv_k + x);
                    },
                    ctx.real(-1), ctx.real(1), ctx);

  // x = -1 residues: w/(1+y) has endpoint exponent alpha-1 at y=-1
  {
    auto wdiv = [&](const Real& x, const Real& dlo, const Real& dhi) {
      // (1-y)^alpha (1+y)^(alpha-1) (1-k^2 y^2)^beta
      Real v = pow(dhi, al) * pow(dlo, al - 1);
      if (!bt.is_zero()) v *= pow(1 - ksq * x * x, bt);
      return v;
    };
    out.R = al / seq.h[static_cast<std::size_t>(n)] *
            quad_de(
                [&](const Real& x, const Real& dlo, const Real& dhi) {
                  Real v = Pn(x);
                  return wdiv(x, dlo, dhi) * v * v;
                },
                ctx.real(-1), ctx.real(1), ctx);
    if (n >= 1)
      out.r = al / seq.h[static_cast<std::size_t>(n - 1)] *
              quad_de(
                  [&](const Real& x, const Real& dlo, const Real& dhi) {
                    return wdiv(x, dlo, dhi) * Pn(x) * Pm(x);
                  },
                  ctx.real(-1), ctx.real(1), ctx);
  }
  return out;
}

// weighted inner product <P_n, P_m> by quadrature (orthogonality oracle)
inline Real inner_quad(const OPSequence& seq, long n, long m) {
  const auto& ctx = seq.ctx();
  if (seq.symmetric()) {
    Params p(seq.alpha(), seq.beta_w(), seq.ksq(), ctx);
    return quad_de(
        [&](const Real& x, const Real& dlo, const Real& dhi) {
          return p.weight(x, dlo, dhi) * eval_poly_all(seq, n, x).p *
                 eval_poly_all(seq, m, x).p;
        },
        ctx.real(-1), ctx.real(1), ctx);
  }
  ShiftedParams p(seq.table.a, seq.table.b, seq.table.c, seq.table.ksq, ctx);
  return quad_de(
      [&](const Real& x, const Real& dlo, const Real& dhi) {
        return p.weight(x, dlo, dhi) * eval_poly_all(seq, n, x).p *
               eval_poly_all(seq, m, x).p;
      },
      ctx.real(0), ctx.real(1), ctx);
}

}  // namespace ellop
