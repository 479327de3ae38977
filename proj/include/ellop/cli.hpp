// Command-line front end: parameter parsing, precision policy, suite
// orchestration and machine-readable reports.
//
// Reports are deterministic: numbers serialize as decimal strings at a fixed
// digit count (digits - 10) and JSON keys are emitted in sorted order, so an
// identical RunConfig produces byte-identical output.

#pragma once

#include <cstdlib>
#include <functional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ellop/asymptotics.hpp"
#include "ellop/evolution.hpp"
#include "ellop/moments.hpp"
#include "ellop/opseq.hpp"
#include "ellop/residuals.hpp"

namespace ellop {

struct RunConfig {
  std::string command;  // moments | recurrence | verify | asym | toda | painleve | report
  std::string alpha = "0.3";
  std::string beta = "0.7";
  std::string ksq = "0.5";
  long n_max = 20;
  std::string digits = "auto";  // "auto" or integer
  std::vector<std::string> eq_filter = {"all"};
  std::string format = "json";  // csv | json
};

namespace cli_detail {

inline int resolve_digits(const RunConfig& cfg) {
  std::string d = cfg.digits;
  if (d.empty()) d = "auto";
  if (d == "auto") {
    if (const char* env = std::getenv("ELLOP_DIGITS")) {
      std::string e(env);
      if (!e.empty() && e != "auto") return std::max(std::stoi(e), required_digits(cfg.n_max));
    }
    return auto_digits(cfg.n_max);
  }
  return std::stoi(d);
}

inline std::string num(const Real& v, const PrecisionContext& ctx) {
  return v.str(std::max(10, ctx.digits() - 10));
}

inline nlohmann::json to_json(const ResidualReport& r, const PrecisionContext& ctx) {
  nlohmann::json j;
  j["name"] = r.name;
  j["n"] = r.n;
  if (r.has_x()) j["x"] = r.x;
  j["absolute"] = num(r.absolute, ctx);
  j["relative"] = num(r.relative, ctx);
  j["pass"] = r.pass;
  return j;
}

inline nlohmann::json params_json(const RunConfig& cfg, int digits) {
  nlohmann::json j;
  j["alpha"] = cfg.alpha;
  j["beta"] = cfg.beta;
  j["ksq"] = cfg.ksq;
  j["n_max"] = cfg.n_max;
  (void)digits;
  return j;
}

inline void emit_report(std::ostream& out, const RunConfig& cfg,
                        const PrecisionContext& ctx,
                        const std::vector<ResidualReport>& results) {
  nlohmann::json j;
  j["params"] = params_json(cfg, ctx.digits());
  j["digits"] = ctx.digits();
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : results) arr.push_back(to_json(r, ctx));
  j["results"] = std::move(arr);
  nlohmann::json summary;
  summary["pass"] = all_pass(results);
  if (!results.empty()) summary["worst"] = to_json(worst_of(results), ctx);
  j["summary"] = std::move(summary);
  out << j.dump(2) << "\n";
}

inline const std::vector<std::string>& known_eq_ids() {
  static const std::vector<std::string> ids = {
      "all",    "string", "sums",   "lemma2.3", "thm2.5", "id3.12",
      "thm1.1", "thm1.2", "thm1.3", "thm1.4",   "thm1.5", "fourth",
      "p1solved", "elim", "ode",    "jacobi"};
  return ids;
}

inline void check_eq_filter(const RunConfig& cfg) {
  for (const auto& e : cfg.eq_filter) {
    bool ok = false;
    for (const auto& id : known_eq_ids()) ok = ok || (e == id);
    if (!ok) throw DomainError("unknown equation id in --eq: " + e);
  }
}

inline bool wanted(const RunConfig& cfg, const std::string& id) {
  for (const auto& e : cfg.eq_filter)
    if (e == "all" || e == id) return true;
  return false;
}

}  // namespace cli_detail

// verification suites shared by `verify` and `report`
inline std::vector<ResidualReport> run_verify_suites(const RunConfig& cfg,
                                                     const Params& p, long N) {
  using namespace cli_detail;
  const auto& ctx = p.ctx;
  Real tol = default_tolerance(ctx);
  auto seq = from_moments(build_table(N, p), N);
  bool have_aux = p.ksq > 0 && p.ksq < 1;
  std::vector<ResidualReport> out;

  if (have_aux) {
    auto aux = aux_from_sequence(seq);
    if (wanted(cfg, "string"))
      for (long n = 1; n <= N - 2; ++n)
        for (auto& rr : residual_string(seq, aux, n, tol)) out.push_back(rr);
    if (wanted(cfg, "sums")) {
      for (long n = 0; n <= N - 1; ++n) {
        out.push_back(residual_rstar_sum(seq, aux, n, tol));
        out.push_back(residual_Rstar_sum(seq, aux, n, tol));
      }
      for (long n = 1; n <= N; ++n) out.push_back(residual_sum_rule(seq, aux, n, tol));
    }
    if (wanted(cfg, "lemma2.3"))
      for (long n = 1; n <= N - 1; ++n)
        out.push_back(residual_lemma_beta_rR(seq, aux, n, tol));
    if (wanted(cfg, "thm2.5"))
      for (long n = 1; n <= N - 1; ++n)
        out.push_back(residual_sumR_closed(seq, aux, n, tol));
    if (wanted(cfg, "id3.12"))
      for (long n = 1; n <= N; ++n) out.push_back(residual_identity_p1sq(seq, n, tol));
    if (wanted(cfg, "thm1.1"))
      for (long n = 2; n <= N - 1; ++n) out.push_back(residual_thm_1_1(seq, n, tol));
    if (wanted(cfg, "thm1.2"))
      for (long n = 1; n <= N - 2; ++n) {
        auto pr = residual_thm_1_2(seq, n, tol);
        out.push_back(pr.first);
        out.push_back(pr.second);
      }
    if (wanted(cfg, "thm1.3"))
      for (long n = 2; n <= N - 1; ++n) {
        out.push_back(residual_gen_rees(seq, n, tol));
        out.push_back(residual_gen_rees_equiv(seq, n, tol));
      }
    if (wanted(cfg, "thm1.4"))
      for (long n = 1; n <= N - 1; ++n) out.push_back(residual_thm_1_4(seq, n, tol));
    if (wanted(cfg, "thm1.5"))
      for (long n = 2; n <= N; ++n) out.push_back(residual_thm_1_5(seq, n, tol));
    if (wanted(cfg, "fourth"))
      for (long n = 2; n <= N - 2; ++n) out.push_back(residual_fourth_order(seq, n, tol));
    if (wanted(cfg, "p1solved"))
      for (long n = 0; n <= N - 1; ++n) out.push_back(residual_p1_solved(seq, n, tol));
    if (wanted(cfg, "elim")) {
      Real etol = ctx.pow10(-(ctx.digits() - 25));
      auto agree = [&](const char* name, long n, const Real& got, const Real& stored,
                       const Real& tol_n) {
        ResidualReport rr;
        rr.name = name;
        rr.n = n;
        rr.absolute = abs(got - stored);
        rr.relative = rr.absolute / max(ctx.real(1), abs(stored));
        rr.pass = rr.relative < tol_n;
        out.push_back(std::move(rr));
      };
      for (long n = 1; n <= N - 1; ++n) {
        // dividing by K_n loses digits whenever K_n is small against its
        // own ingredients (it degenerates as beta_n -> 1/4 when the
        // subleading expansion coefficients vanish), so the agreement
        // budget carries that conditioning
        Real khat = abs(elimination_K(seq, n)) / max(ctx.real(1), abs(seq.alpha() + seq.beta_w() + n));
        Real tol_n = etol / min(ctx.real(1), khat);
        agree("elim:p1", n, elimination_p1(seq, n), seq.p1[static_cast<std::size_t>(n)], tol_n);
        agree("elim:r", n, elimination_r(seq, n), aux.r[static_cast<std::size_t>(n)], tol_n);
      }
    }
    if (wanted(cfg, "ode")) {
      const char* xs[] = {"-0.63", "0.11", "0.57", "-0.21", "0.83"};
      for (long n : {2L, 6L, 11L}) {
        if (n > N - 1) continue;
        for (const char* xS : xs)
          out.push_back(residual_ode(seq, n, ctx.real(xS), tol));
      }
    }
  }
  if (wanted(cfg, "jacobi")) {
    // degenerate directions collapse to the symmetric Jacobi solution
    Real jtol = ctx.pow10(-(ctx.digits() - 10));
    if (p.ksq.is_zero() || p.beta.is_zero()) {
      for (long n = 1; n <= N; ++n) {
        Terms t(ctx);
        t.add(seq.beta[static_cast<std::size_t>(n)])
            .sub(jacobi_beta_closed(n, p.alpha, ctx));
        out.push_back(t.report("jacobi:beta", n, jtol));
      }
    }
    if (p.ksq == 1) {
      for (long n = 1; n <= N; ++n) {
        Terms t(ctx);
        t.add(seq.beta[static_cast<std::size_t>(n)])
            .sub(jacobi_beta_closed(n, p.alpha + p.beta, ctx));
        out.push_back(t.report("jacobi:beta-k1", n, jtol));
      }
    }
  }
  return out;
}

inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  using namespace cli_detail;
  try {
    int digits = resolve_digits(cfg);
    PrecisionContext ctx(digits);

    if (cfg.command == "moments") {
      Params p = Params::of(cfg.alpha.c_str(), cfg.beta.c_str(), cfg.ksq.c_str(), ctx);
      auto tab = build_table(std::max<long>(1, cfg.n_max), p);
      if (cfg.format == "csv") {
        out << "# weight (1-x^2)^" << cfg.alpha << " (1-" << cfg.ksq << " x^2)^"
            << cfg.beta << ", digits=" << digits << "\n";
        out << "j,mu_j\n";
        for (long j = 0; j <= tab.max_index(); ++j)
          out << j << "," << num(tab.mu[static_cast<std::size_t>(j)], ctx) << "\n";
      } else {
        nlohmann::json j;
        j["params"] = params_json(cfg, digits);
        j["digits"] = digits;
        nlohmann::json mu = nlohmann::json::array();
        for (long i = 0; i <= tab.max_index(); ++i)
          mu.push_back(num(tab.mu[static_cast<std::size_t>(i)], ctx));
        j["mu"] = std::move(mu);
        out << j.dump(2) << "\n";
      }
      return 0;
    }

    if (cfg.command == "recurrence") {
      Params p = Params::of(cfg.alpha.c_str(), cfg.beta.c_str(), cfg.ksq.c_str(), ctx);
      long N = std::max<long>(2, cfg.n_max);
      auto seq = from_moments(build_table(N, p), N);
      bool have_aux = p.ksq > 0 && p.ksq < 1;
      AuxVars aux;
      if (have_aux) aux = aux_from_sequence(seq);
      out << "n,h_n,beta_n,p1_n,R_n,r_n,Rstar_n,rstar_n\n";
      for (long n = 0; n <= N; ++n) {
        auto idx = static_cast<std::size_t>(n);
        out << n << "," << num(seq.h[idx], ctx) << "," << num(seq.beta[idx], ctx) << ","
            << num(seq.p1[idx], ctx);
        if (have_aux && n <= N - 1)
          out << "," << num(aux.R[idx], ctx) << "," << num(aux.r[idx], ctx) << ","
              << num(aux.Rstar[idx], ctx) << "," << num(aux.rstar[idx], ctx);
        else if (have_aux)
          out << ",," << num(aux.r[idx], ctx) << ",," << num(aux.rstar[idx], ctx);
        else
          out << ",,,,";
        out << "\n";
      }
      return 0;
    }

    if (cfg.command == "verify") {
      check_eq_filter(cfg);
      Params p = Params::of(cfg.alpha.c_str(), cfg.beta.c_str(), cfg.ksq.c_str(), ctx);
      long N = std::max<long>(4, cfg.n_max);
      auto results = run_verify_suites(cfg, p, N);
      emit_report(out, cfg, ctx, results);
      return all_pass(results) ? 0 : 1;
    }

    if (cfg.command == "asym") {
      Params p = Params::of(cfg.alpha.c_str(), cfg.beta.c_str(), cfg.ksq.c_str(), ctx);
      long N = std::max<long>(8, cfg.n_max);
      auto seq = from_moments(build_table(N, p), N);
      auto m = build_model(p);
      nlohmann::json model;
      for (int j = 0; j <= 6; ++j)
        model["a" + std::to_string(j)] = num(m.a[static_cast<std::size_t>(j)], ctx);
      for (int j = -1; j <= 5; ++j)
        model["b" + std::to_string(j)] = num(m.b_at(j), ctx);
      model["C"] = num(m.Cfe, ctx);
      model["c-2"] = num(m.c_m2, ctx);
      model["c-1"] = num(m.c_m1, ctx);
      model["c0"] = num(m.c0, ctx);
      model["c1"] = num(m.c1, ctx);
      model["c2"] = num(m.c2, ctx);
      model["c3"] = num(m.c3, ctx);
      model["E"] = num(m.Econst, ctx);
      model["logE"] = num(m.logE, ctx);

      if (cfg.format == "csv") {
        out << "n,beta_exact,beta_asym_6,scaled_error\n";
        for (long n = 2; n <= N; ++n) {
          Real ba = beta_asym(m, n, 6);
          Real se = abs(seq.beta[static_cast<std::size_t>(n)] - ba) * pown(ctx.real(n), 7);
          out << n << "," << num(seq.beta[static_cast<std::size_t>(n)], ctx) << ","
              << num(ba, ctx) << "," << num(se, ctx) << "\n";
        }
      } else {
        nlohmann::json j;
        j["params"] = params_json(cfg, digits);
        j["digits"] = digits;
        j["model"] = std::move(model);
        nlohmann::json rows = nlohmann::json::array();
        for (long n = 2; n <= N; ++n) {
          Real ba = beta_asym(m, n, 6);
          Real se = abs(seq.beta[static_cast<std::size_t>(n)] - ba) * pown(ctx.real(n), 7);
          nlohmann::json row;
          row["n"] = n;
          row["beta_exact"] = num(seq.beta[static_cast<std::size_t>(n)], ctx);
          row["beta_asym_6"] = num(ba, ctx);
          row["scaled_error"] = num(se, ctx);
          rows.push_back(std::move(row));
        }
        j["rows"] = std::move(rows);
        out << j.dump(2) << "\n";
      }
      return 0;
    }

    if (cfg.command == "toda") {
      Params p = Params::of(cfg.alpha.c_str(), cfg.beta.c_str(), cfg.ksq.c_str(), ctx);
      long N = std::max<long>(4, cfg.n_max);
      Real h = ctx.pow10(-(digits / 5));
      auto g = build_kgrid(p, N, h);
      Real tol = ctx.pow10(-(std::min(25, digits / 4)));
      std::vector<ResidualReport> results;
      nlohmann::json derr = nlohmann::json::array();
      for (long n = 1; n <= N - 2; ++n) {
        auto [r1, r2] = toda_check(g, n, tol);
        results.push_back(std::move(r1));
        results.push_back(std::move(r2));
        std::vector<Real> logh, logbeta;
        for (const auto& s : g.seqs) {
          logh.push_back(log(s.h[static_cast<std::size_t>(n)]));
          logbeta.push_back(log(s.beta[static_cast<std::size_t>(n)]));
        }
        nlohmann::json e;
        e["n"] = n;
        e["dlogh_err"] = num(d_dksq(g, logh, 1).err, ctx);
        e["dlogbeta_err"] = num(d_dksq(g, logbeta, 1).err, ctx);
        derr.push_back(std::move(e));
      }
      for (long n = 1; n <= N; ++n) results.push_back(H_n_check(g, n, tol));

      nlohmann::json j;
      j["params"] = params_json(cfg, digits);
      j["digits"] = digits;
      j["step"] = h.str(8);
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& r : results) arr.push_back(to_json(r, ctx));
      j["results"] = std::move(arr);
      j["derivative_errors"] = std::move(derr);
      nlohmann::json summary;
      summary["pass"] = all_pass(results);
      if (!results.empty()) summary["worst"] = to_json(worst_of(results), ctx);
      j["summary"] = std::move(summary);
      out << j.dump(2) << "\n";
      return all_pass(results) ? 0 : 1;
    }

    if (cfg.command == "painleve") {
      Params p = Params::of(cfg.alpha.c_str(), cfg.beta.c_str(), cfg.ksq.c_str(), ctx);
      long N = std::max<long>(6, cfg.n_max);
      Real stol = ctx.pow10(-(ctx.digits() - 15));
      auto results = split_check(p, N, stol);
      long nmax_sigma = std::min<long>(8, N / 2 - 1);
      Real h = ctx.pow10(-(digits / 5));
      Real sftol = ctx.pow10(-(std::min(20, digits / 5)));
      auto ge = build_kgrid_w2(ctx.frac(-1, 2), p.alpha, p.beta, p.ksq, ctx,
                               nmax_sigma + 1, h);
      auto go = build_kgrid_w2(ctx.frac(1, 2), p.alpha, p.beta, p.ksq, ctx,
                               nmax_sigma + 1, h);
      nlohmann::json derr = nlohmann::json::array();
      for (long n = 1; n <= nmax_sigma; ++n) {
        auto se = sigma_eval(ge, n);
        auto so = sigma_eval(go, n);
        results.push_back(sigma_form_residual(se, p.ksq, ctx, sftol));
        results.back().name = "sigma-form:a=-1/2";
        results.push_back(sigma_form_residual(so, p.ksq, ctx, sftol));
        results.back().name = "sigma-form:a=+1/2";
        nlohmann::json e;
        e["n"] = n;
        e["sigma1_err_even"] = num(se.err1, ctx);
        e["sigma2_err_even"] = num(se.err2, ctx);
        e["sigma1_err_odd"] = num(so.err1, ctx);
        e["sigma2_err_odd"] = num(so.err2, ctx);
        derr.push_back(std::move(e));
      }
      long nmax_rep = std::min<long>(nmax_sigma - 1, (N - 2) / 2);
      if (nmax_rep >= 1) {
        auto main_seq = from_moments(build_table(2 * nmax_rep + 2, p), 2 * nmax_rep + 2);
        for (long n = 1; n <= nmax_rep; ++n) {
          auto [er, orr] = painleve_rep_check(main_seq, ge, go, n, sftol);
          results.push_back(std::move(er));
          results.push_back(std::move(orr));
        }
      }
      nlohmann::json j;
      j["params"] = params_json(cfg, digits);
      j["digits"] = digits;
      j["step"] = h.str(8);
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& r : results) arr.push_back(to_json(r, ctx));
      j["results"] = std::move(arr);
      j["derivative_errors"] = std::move(derr);
      nlohmann::json summary;
      summary["pass"] = all_pass(results);
      if (!results.empty()) summary["worst"] = to_json(worst_of(results), ctx);
      j["summary"] = std::move(summary);
      out << j.dump(2) << "\n";
      return all_pass(results) ? 0 : 1;
    }

    if (cfg.command == "report") {
      // aggregate every suite; degraded entries carry an explicit skip record
      std::vector<ResidualReport> results;
      nlohmann::json skipped = nlohmann::json::array();
      Params p = Params::of(cfg.alpha.c_str(), cfg.beta.c_str(), cfg.ksq.c_str(), ctx);
      long N = std::max<long>(6, cfg.n_max);
      RunConfig all = cfg;
      all.eq_filter = {"all"};
      auto add_suite = [&](const char* name, std::function<void()> fn) {
        try {
          fn();
        } catch (const DomainError& e) {
          nlohmann::json s;
          s["suite"] = name;
          s["skipped"] = e.what();
          skipped.push_back(std::move(s));
        }
      };
      add_suite("verify", [&] {
        for (auto& r : run_verify_suites(all, p, N)) results.push_back(std::move(r));
      });
      add_suite("toda", [&] {
        Real h = ctx.pow10(-(digits / 5));
        auto g = build_kgrid(p, std::min<long>(N, 10), h);
        Real tol = ctx.pow10(-(std::min(25, digits / 4)));
        for (long n = 1; n <= std::min<long>(N, 10) - 2; ++n) {
          auto [r1, r2] = toda_check(g, n, tol);
          results.push_back(std::move(r1));
          results.push_back(std::move(r2));
        }
      });
      add_suite("painleve", [&] {
        Real stol = ctx.pow10(-(ctx.digits() - 15));
        for (auto& r : split_check(p, std::min<long>(N, 12), stol))
          results.push_back(std::move(r));
      });
      add_suite("toeplitz-hankel", [&] {
        long n = std::min<long>(N, 8);
        auto seq = from_moments(build_table(n, p), n);
        results.push_back(toeplitz_hankel_check(seq, n, ctx.pow10(-(digits / 2))));
      });
      add_suite("asym", [&] {
        auto m = build_model(p);
        Real tol = ctx.pow10(-(digits - 10));
        for (auto& r : third_order_expansion_check(m, tol)) results.push_back(std::move(r));
        Terms t(ctx);
        t.add(m.logE).sub(m.logE_alt);
        results.push_back(t.report("E:two-routes", 0, ctx.pow10(-(digits - 5))));
      });

      nlohmann::json j;
      j["params"] = params_json(cfg, digits);
      j["digits"] = digits;
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& r : results) arr.push_back(to_json(r, ctx));
      j["results"] = std::move(arr);
      j["skipped"] = std::move(skipped);
      nlohmann::json summary;
      summary["pass"] = all_pass(results);
      if (!results.empty()) summary["worst"] = to_json(worst_of(results), ctx);
      j["summary"] = std::move(summary);
      out << j.dump(2) << "\n";
      return all_pass(results) ? 0 : 1;
    }

    err << "unknown command: " << cfg.command << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace ellop
