// ellop: arbitrary-precision value type and precision context.
//
// Real is a thin RAII wrapper over an mpfr_t.  Every Real carries its own
// precision; binary operations round into the wider of the two operand
// precisions, so precision established at the inputs of a computation
// propagates through it unchanged.

#pragma once

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <utility>

namespace ellop {

// ---------------------------------------------------------------------------
// Error taxonomy.  All conditions are contract violations or numerical
// failures that callers are expected to catch and report.
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : Error {
  using Error::Error;
};
struct PoleError : DomainError {
  using DomainError::DomainError;
};
struct NoConvergence : Error {
  using Error::Error;
};
struct PrecisionExhausted : Error {
  using Error::Error;
};
struct NegativeRadicand : Error {
  using Error::Error;
};
struct SingularElimination : Error {
  using Error::Error;
};
struct SingularPoint : Error {
  using Error::Error;
};
struct RemovableSingularity : DomainError {
  using DomainError::DomainError;
};
struct StepTooLarge : Error {
  using Error::Error;
};
struct BranchAmbiguity : Error {
  using Error::Error;
};
struct IndexError : Error {
  using Error::Error;
};

// bits needed to represent `digits` significant decimal digits, with a
// small safety margin
inline mpfr_prec_t bits_for_digits(long digits) {
  return static_cast<mpfr_prec_t>(std::ceil(digits * 3.3219280948873626)) + 8;
}

class Real {
 public:
  Real() {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_set_nan(v_);
  }
  explicit Real(mpfr_prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_nan(v_);
  }
  Real(long n, mpfr_prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_si(v_, n, MPFR_RNDN);
  }
  Real(int n, mpfr_prec_t prec) : Real(static_cast<long>(n), prec) {}
  // decimal-string constructor; the string is parsed directly at `prec`
  // (no double round-trip)
  Real(const char* s, mpfr_prec_t prec) {
    mpfr_init2(v_, prec);
    if (mpfr_set_str(v_, s, 10, MPFR_RNDN) != 0) {
      mpfr_clear(v_);
      throw DomainError(std::string("Real: cannot parse '") + s + "'");
    }
  }
  Real(const Real& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  Real(Real&& o) noexcept {
    v_[0] = o.v_[0];
    mpfr_init2(o.v_, MPFR_PREC_MIN);
  }
  Real& operator=(const Real& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& o) noexcept {
    if (this != &o) mpfr_swap(v_, o.v_);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

  bool is_nan() const { return mpfr_nan_p(v_) != 0; }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }

  // scientific-notation decimal string with `digits` significant digits
  std::string str(int digits) const {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%%.%dRe", digits - 1);
    char* out = nullptr;
    mpfr_asprintf(&out, buf, v_);
    std::string s(out);
    mpfr_free_str(out);
    return s;
  }

  bool is_integer() const { return mpfr_integer_p(v_) != 0; }

  Real& operator+=(const Real& o) {
    bump_(o.prec());
    mpfr_add(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }
  Real& operator-=(const Real& o) {
    bump_(o.prec());
    mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }
  Real& operator*=(const Real& o) {
    bump_(o.prec());
    mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }
  Real& operator/=(const Real& o) {
    bump_(o.prec());
    mpfr_div(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }
  Real& operator+=(long n) {
    mpfr_add_si(v_, v_, n, MPFR_RNDN);
    return *this;
  }
  Real& operator-=(long n) {
    mpfr_sub_si(v_, v_, n, MPFR_RNDN);
    return *this;
  }
  Real& operator*=(long n) {
    mpfr_mul_si(v_, v_, n, MPFR_RNDN);
    return *this;
  }
  Real& operator/=(long n) {
    mpfr_div_si(v_, v_, n, MPFR_RNDN);
    return *this;
  }

  friend Real operator-(const Real& a) {
    Real r(a.prec());
    mpfr_neg(r.v_, a.v_, MPFR_RNDN);
    return r;
  }

#define ELLOP_BINOP(op, fn, fn_si, fn_si_r)                  \
  friend Real operator op(const Real& a, const Real& b) {    \
    Real r(std::max(a.prec(), b.prec()));                    \
    fn(r.v_, a.v_, b.v_, MPFR_RNDN);                         \
    return r;                                                \
  }                                                          \
  friend Real operator op(const Real& a, long b) {           \
    Real r(a.prec());                                        \
    fn_si(r.v_, a.v_, b, MPFR_RNDN);                         \
    return r;                                                \
  }                                                          \
  friend Real operator op(long a, const Real& b) {           \
    Real r(b.prec());                                        \
    fn_si_r(r.v_, a, b.v_, MPFR_RNDN);                       \
    return r;                                                \
  }

  ELLOP_BINOP(+, mpfr_add, mpfr_add_si, (mpfr_si_add_swap))
  ELLOP_BINOP(-, mpfr_sub, mpfr_sub_si, mpfr_si_sub)
  ELLOP_BINOP(*, mpfr_mul, mpfr_mul_si, (mpfr_si_mul_swap))
  ELLOP_BINOP(/, mpfr_div, mpfr_div_si, mpfr_si_div)
#undef ELLOP_BINOP

  friend int cmp(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_); }
  friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_); }
  friend bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.v_, b.v_); }
  friend bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.v_, b.v_); }
  friend bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.v_, b.v_); }
  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_); }
  friend bool operator!=(const Real& a, const Real& b) { return !mpfr_equal_p(a.v_, b.v_); }
  friend bool operator<(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) < 0; }
  friend bool operator>(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) > 0; }
  friend bool operator<=(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) <= 0; }
  friend bool operator>=(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) >= 0; }
  friend bool operator==(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) == 0; }
  friend bool operator!=(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) != 0; }

 private:
  static int mpfr_si_add_swap(mpfr_ptr r, long a, mpfr_srcptr b, mpfr_rnd_t rnd) {
    return mpfr_add_si(r, b, a, rnd);
  }
  static int mpfr_si_mul_swap(mpfr_ptr r, long a, mpfr_srcptr b, mpfr_rnd_t rnd) {
    return mpfr_mul_si(r, b, a, rnd);
  }
  void bump_(mpfr_prec_t p) {
    if (p > prec()) mpfr_prec_round(v_, p, MPFR_RNDN);
  }
  mpfr_t v_;
};

#define ELLOP_UNARY(name, fn)       \
  inline Real name(const Real& a) { \
    Real r(a.prec());               \
    fn(r.raw(), a.raw(), MPFR_RNDN);\
    return r;                       \
  }

ELLOP_UNARY(abs, mpfr_abs)
ELLOP_UNARY(sqrt, mpfr_sqrt)
ELLOP_UNARY(log, mpfr_log)
ELLOP_UNARY(log1p, mpfr_log1p)
ELLOP_UNARY(exp, mpfr_exp)
ELLOP_UNARY(expm1, mpfr_expm1)
ELLOP_UNARY(sin, mpfr_sin)
ELLOP_UNARY(cos, mpfr_cos)
ELLOP_UNARY(tanh, mpfr_tanh)
ELLOP_UNARY(sinh, mpfr_sinh)
ELLOP_UNARY(cosh, mpfr_cosh)
#undef ELLOP_UNARY

inline Real pow(const Real& a, const Real& b) {
  Real r(std::max(a.prec(), b.prec()));
  mpfr_pow(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
  return r;
}
inline Real pown(const Real& a, long n) {
  Real r(a.prec());
  mpfr_pow_si(r.raw(), a.raw(), n, MPFR_RNDN);
  return r;
}
inline Real agm(const Real& a, const Real& b) {
  Real r(std::max(a.prec(), b.prec()));
  mpfr_agm(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
  return r;
}
inline Real fma(const Real& a, const Real& b, const Real& c) {
  Real r(std::max({a.prec(), b.prec(), c.prec()}));
  mpfr_fma(r.raw(), a.raw(), b.raw(), c.raw(), MPFR_RNDN);
  return r;
}
inline Real max(const Real& a, const Real& b) { return a >= b ? a : b; }
inline Real min(const Real& a, const Real& b) { return a <= b ? a : b; }

// ---------------------------------------------------------------------------
// PrecisionContext: `digits` significant decimal digits requested by the
// caller, `guard` extra working digits carried internally.  Results of the
// special-function layer are accurate to at least `digits` digits.
// ---------------------------------------------------------------------------

class PrecisionContext {
 public:
  explicit PrecisionContext(int digits, int guard = 15)
      : digits_(digits), guard_(guard) {
    if (digits < 30) throw DomainError("PrecisionContext: digits must be >= 30");
    if (guard < 0) throw DomainError("PrecisionContext: guard must be >= 0");
  }

  int digits() const { return digits_; }
  int guard() const { return guard_; }
  int total_digits() const { return digits_ + guard_; }
  mpfr_prec_t bits() const { return bits_for_digits(total_digits()); }

  Real real(long n) const { return Real(n, bits()); }
  Real real(int n) const { return Real(static_cast<long>(n), bits()); }
  Real real(const char* s) const { return Real(s, bits()); }
  Real real(const std::string& s) const { return Real(s.c_str(), bits()); }
  // exact rational p/q at working precision
  Real frac(long p, long q) const { return Real(p, bits()) / q; }
  Real pi() const {
    Real r(bits());
    mpfr_const_pi(r.raw(), MPFR_RNDN);
    return r;
  }
  // 10^e at working precision
  Real pow10(long e) const {
    Real r(bits());
    mpfr_ui_pow_ui(r.raw(), 10u, static_cast<unsigned long>(e < 0 ? -e : e), MPFR_RNDN);
    if (e < 0) mpfr_si_div(r.raw(), 1, r.raw(), MPFR_RNDN);
    return r;
  }
  // 10^-digits, the target accuracy of this context
  Real eps() const { return pow10(-digits_); }

  PrecisionContext with_digits(int d) const { return PrecisionContext(d, guard_); }

 private:
  int digits_;
  int guard_;
};

}  // namespace ellop
