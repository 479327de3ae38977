// Minimal library walkthrough: build the orthogonal-polynomial system for
// the elliptic weight 1/sqrt((1-x^2)(1-k^2 x^2)), print the first recurrence
// coefficients against their limit 1/4, and confirm one non-linear
// difference equation on the computed data.

#include <cstdio>

#include "ellop/residuals.hpp"

int main() {
  using namespace ellop;
  PrecisionContext ctx(60);
  Params p = Params::of("-0.5", "-0.5", "0.5", ctx);

  long N = 12;
  auto seq = from_moments(build_table(N, p), N);

  std::printf("n   beta_n                      beta_n - 1/4\n");
  for (long n = 1; n <= 8; ++n) {
    auto i = static_cast<std::size_t>(n);
    std::printf("%-3ld %s  %s\n", n, seq.beta[i].str(20).c_str(),
                (seq.beta[i] - ctx.frac(1, 4)).str(5).c_str());
  }

  Real tol = default_tolerance(ctx);
  auto rr = residual_gen_rees(seq, 5, tol);
  std::printf("\ngeneralized Rees equation at n=5: relative residual %s (%s)\n",
              rr.relative.str(3).c_str(), rr.pass ? "pass" : "FAIL");
  return rr.pass ? 0 : 1;
}
