// Residual records: every identity check reports |LHS - RHS| both absolutely
// and relative to the largest top-level additive term of the equation, since
// the equations mix magnitudes across many orders.

#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "ellop/real.hpp"

namespace ellop {

struct ResidualReport {
  std::string name;
  long n = 0;
  double x = std::numeric_limits<double>::quiet_NaN();  // set for pointwise checks
  Real absolute;
  Real relative;
  bool pass = false;

  bool has_x() const { return !std::isnan(x); }
};

// default pass tolerance: ~25 digits of headroom absorbs accumulation
// through degree-6 polynomial evaluation
inline Real default_tolerance(const PrecisionContext& ctx) {
  return ctx.pow10(-(ctx.digits() - 25));
}

// collects the top-level additive terms of an equation (LHS - RHS form)
class Terms {
 public:
  explicit Terms(const PrecisionContext& ctx) : sum_(0, ctx.bits()), scale_(0, ctx.bits()) {}

  Terms& add(Real t) {
    Real a = abs(t);
    if (a > scale_) scale_ = a;
    sum_ += t;
    return *this;
  }
  Terms& sub(Real t) { return add(-std::move(t)); }

  ResidualReport report(std::string name, long n, const Real& tol) const {
    ResidualReport rr;
    rr.name = std::move(name);
    rr.n = n;
    rr.absolute = abs(sum_);
    rr.relative = scale_ > 0 ? Real(rr.absolute / scale_) : rr.absolute;
    rr.pass = rr.relative < tol;
    return rr;
  }

  const Real& scale() const { return scale_; }
  const Real& sum() const { return sum_; }

 private:
  Real sum_;
  Real scale_;
};

inline ResidualReport worst_of(const std::vector<ResidualReport>& rs) {
  ResidualReport w;
  bool first = true;
  for (const auto& r : rs) {
    if (first || r.relative > w.relative) {
      w = r;
      first = false;
    }
  }
  return w;
}

inline bool all_pass(const std::vector<ResidualReport>& rs) {
  for (const auto& r : rs)
    if (!r.pass) return false;
  return true;
}

}  // namespace ellop
