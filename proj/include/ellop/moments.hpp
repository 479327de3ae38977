// Moment sequences of the two weights
//
//   w(x,k^2)          = (1-x^2)^alpha (1-k^2 x^2)^beta        on [-1,1]
//   w2(x,k^2,a,b,c)   = x^a (1-x)^b (1-k^2 x)^c               on [0,1]
//
// Even moments of w have the closed form
//   mu_{2j} = Gamma(j+1/2) Gamma(alpha+1) / Gamma(j+alpha+3/2)
//             * 2F1(-beta, j+1/2; j+alpha+3/2; k^2),
// odd moments vanish by symmetry and are returned as exact zeros.  Moments
// of w2 are Beta(a+j+1, b+1) * 2F1(-c, a+j+1; a+j+b+2; k^2).

#pragma once

#include <vector>

#include "ellop/quadrature.hpp"
#include "ellop/real.hpp"
#include "ellop/specialfn.hpp"

namespace ellop {

struct Params {
  Real alpha;
  Real beta;
  Real ksq;
  PrecisionContext ctx;

  Params(Real alpha_, Real beta_, Real ksq_, PrecisionContext ctx_)
      : alpha(std::move(alpha_)), beta(std::move(beta_)), ksq(std::move(ksq_)),
        ctx(ctx_) {
    if (alpha <= -1) throw DomainError("Params: alpha must be > -1");
    if (ksq < 0 || ksq > 1) throw DomainError("Params: ksq must lie in [0,1]");
  }

  static Params of(const char* alpha, const char* beta, const char* ksq,
                   const PrecisionContext& ctx) {
    return Params(ctx.real(alpha), ctx.real(beta), ctx.real(ksq), ctx);
  }

  // weight value from exact endpoint distances: 1-x^2 = (1-x)(1+x)
  Real weight(const Real& x, const Real& dlo, const Real& dhi) const {
    Real one_m_x2 = dlo * dhi;
    Real w = pow(one_m_x2, alpha);
    if (!beta.is_zero()) w *= pow(1 - ksq * x * x, beta);
    return w;
  }
};

struct ShiftedParams {
  Real a;
  Real b;
  Real c;
  Real ksq;
  PrecisionContext ctx;

  ShiftedParams(Real a_, Real b_, Real c_, Real ksq_, PrecisionContext ctx_)
      : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), ksq(std::move(ksq_)),
        ctx(ctx_) {
    if (a <= -1) throw DomainError("ShiftedParams: a must be > -1");
    if (b <= -1) throw DomainError("ShiftedParams: b must be > -1");
    if (ksq <= 0 || ksq >= 1) throw DomainError("ShiftedParams: ksq must lie in (0,1)");
  }

  Real weight(const Real& x, const Real& dlo, const Real& dhi) const {
    Real w = pow(dlo, a) * pow(dhi, b);
    if (!c.is_zero()) w *= pow(1 - ksq * x, c);
    return w;
  }
};

inline Real moment_sym(long j, const Params& p) {
  if (j < 0) throw DomainError("moment_sym: j must be >= 0");
  const auto& ctx = p.ctx;
  if (j % 2 == 1) return ctx.real(0);
  long m = j / 2;
  Real half = ctx.frac(1, 2);
  if (p.ksq == 1) {
    // reduced weight (1-x^2)^(alpha+beta); needs alpha+beta > -1
    Real ab = p.alpha + p.beta;
    if (ab <= -1)
      throw DomainError("moment_sym: ksq=1 requires alpha+beta > -1");
    return gamma(m + half, ctx) * gamma(ab + 1, ctx) / gamma(m + ab + 1 + half, ctx);
  }
  Real pre = gamma(m + half, ctx) * gamma(p.alpha + 1, ctx) /
             gamma(m + p.alpha + 1 + half, ctx);
  if (p.ksq.is_zero() || p.beta.is_zero()) return pre;
  return pre * hyp2f1(-p.beta, m + half, m + p.alpha + 1 + half, p.ksq, ctx);
}

inline Real moment_shifted(long j, const ShiftedParams& p) {
  if (j < 0) throw DomainError("moment_shifted: j must be >= 0");
  const auto& ctx = p.ctx;
  Real pre = beta_fn(p.a + j + 1, p.b + 1, ctx);
  if (p.c.is_zero()) return pre;
  return pre * hyp2f1(-p.c, p.a + j + 1, p.a + j + p.b + 2, p.ksq, ctx);
}

struct MomentTable {
  enum class Kind { Symmetric, Shifted };
  Kind kind;
  PrecisionContext ctx;
  std::vector<Real> mu;  // indices 0 .. 2N

  // parameters of whichever weight generated the table
  Real alpha, beta, ksq;  // symmetric kind
  Real a, b, c;           // shifted kind

  long max_index() const { return static_cast<long>(mu.size()) - 1; }
  bool symmetric() const { return kind == Kind::Symmetric; }
};

inline MomentTable build_table(long N, const Params& p) {
  if (N < 1) throw DomainError("build_table: N must be >= 1");
  MomentTable t{MomentTable::Kind::Symmetric, p.ctx, {},
                p.alpha, p.beta, p.ksq,
                p.ctx.real(0), p.ctx.real(0), p.ctx.real(0)};
  t.mu.reserve(static_cast<std::size_t>(2 * N + 1));
  // Gamma-ratio prefactor advanced by recurrence across j; one 2F1 per even
  // moment remains the dominant cost.
  const auto& ctx = p.ctx;
  Real half = ctx.frac(1, 2);
  bool reduced = (p.ksq == 1);
  Real aeff = reduced ? Real(p.alpha + p.beta) : p.alpha;
  if (reduced && aeff <= -1)
    throw DomainError("build_table: ksq=1 requires alpha+beta > -1");
  Real pre = gamma(half, ctx) * gamma(aeff + 1, ctx) / gamma(aeff + 1 + half, ctx);
  bool series = !reduced && !p.ksq.is_zero() && !p.beta.is_zero();
  for (long m = 0; m <= N; ++m) {
    if (m > 0) {
      // mu_{2m}/mu_{2m-2} prefactor step: (m-1/2)/(m+aeff+1/2)
      pre *= (m - half) / (m + aeff + half);
    }
    if (series)
      t.mu.push_back(pre * hyp2f1(-p.beta, m + half, m + p.alpha + 1 + half, p.ksq, ctx));
    else
      t.mu.push_back(pre);
    if (m < N) t.mu.push_back(ctx.real(0));  // odd moment, exact zero
  }
  return t;
}

inline MomentTable build_table(long N, const ShiftedParams& p) {
  if (N < 1) throw DomainError("build_table: N must be >= 1");
  MomentTable t{MomentTable::Kind::Shifted, p.ctx, {},
                p.ctx.real(0), p.ctx.real(0), p.ctx.real(0),
                p.a, p.b, p.c};
  t.mu.reserve(static_cast<std::size_t>(2 * N + 1));
  for (long j = 0; j <= 2 * N; ++j) t.mu.push_back(moment_shifted(j, p));
  return t;
}

// quadrature oracle for table entries (independent of the closed form)
inline Real moment_quad(long j, const Params& p) {
  const auto& ctx = p.ctx;
  return quad_de(
      [&](const Real& x, const Real& dlo, const Real& dhi) {
        return pown(x, j) * p.weight(x, dlo, dhi);
      },
      ctx.real(-1), ctx.real(1), ctx);
}

inline Real moment_quad(long j, const ShiftedParams& p) {
  const auto& ctx = p.ctx;
  Real aj = p.a + j;  // x^j absorbed into the singular factor at 0
  return quad_de(
      [&](const Real& x, const Real& dlo, const Real& dhi) {
        Real v = pow(dlo, aj) * pow(dhi, p.b);
        if (!p.c.is_zero()) v *= pow(1 - p.ksq * x, p.c);
        return v;
      },
      ctx.real(0), ctx.real(1), ctx);
}

}  // namespace ellop
