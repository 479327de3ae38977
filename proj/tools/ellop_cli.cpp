// ellop command-line driver.  Exit codes: 0 = all selected checks pass,
// 1 = a check failed its tolerance, 2 = usage or domain error.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "ellop/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"orthogonal-polynomial system and Hankel-determinant toolkit for "
               "the weight (1-x^2)^alpha (1-k^2 x^2)^beta on [-1,1]"};
  app.require_subcommand(1);

  ellop::RunConfig cfg;
  std::string output;

  auto add_common = [&](CLI::App* sub, bool with_eq = false) {
    sub->add_option("--alpha", cfg.alpha, "weight exponent alpha (> -1), decimal string");
    sub->add_option("--beta", cfg.beta, "weight exponent beta, decimal string");
    sub->add_option("--ksq", cfg.ksq, "deformation parameter k^2 in [0,1], decimal string");
    sub->add_option("--n-max", cfg.n_max, "largest index n");
    sub->add_option("--digits", cfg.digits,
                    "working precision in decimal digits, or 'auto' "
                    "(= max(50, 30 + ceil(2.2 n_max))); ELLOP_DIGITS overrides the default");
    sub->add_option("--output,-o", output, "write the report to this path instead of stdout");
    sub->add_option("--format", cfg.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    if (with_eq)
      sub->add_option("--eq", cfg.eq_filter,
                      "equations to check (comma-separated): all, string, sums, "
                      "lemma2.3, thm2.5, id3.12, thm1.1, thm1.2, thm1.3, thm1.4, "
                      "thm1.5, fourth, p1solved, elim, ode, jacobi")
          ->delimiter(',');
  };

  auto* moments = app.add_subcommand("moments", "moment table mu_0..mu_{2 n_max} as CSV/JSON");
  add_common(moments);
  moments->parse_complete_callback([&] { cfg.command = "moments"; });

  auto* rec = app.add_subcommand("recurrence",
                                 "h_n, beta_n, p1(n) and the ladder variables as CSV");
  add_common(rec);
  rec->parse_complete_callback([&] { cfg.command = "recurrence"; });

  auto* verify = app.add_subcommand("verify", "residuals of the difference-equation identities");
  add_common(verify, true);
  verify->parse_complete_callback([&] { cfg.command = "verify"; });

  auto* asym = app.add_subcommand("asym",
                                  "large-n expansion model and scaled beta_n errors");
  add_common(asym);
  asym->parse_complete_callback([&] { cfg.command = "asym"; });

  auto* toda = app.add_subcommand("toda", "k^2-evolution (Toda) two-route residuals");
  add_common(toda);
  toda->parse_complete_callback([&] { cfg.command = "toda"; });

  auto* pain = app.add_subcommand("painleve",
                                  "splitting identities and Painleve VI sigma-form residuals");
  add_common(pain);
  pain->parse_complete_callback([&] { cfg.command = "painleve"; });

  auto* report = app.add_subcommand("report", "aggregate all suites into one JSON report");
  add_common(report);
  report->parse_complete_callback([&] { cfg.command = "report"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  // moments/recurrence default to CSV when not explicitly requested
  if ((cfg.command == "moments" || cfg.command == "recurrence") && cfg.format == "json" &&
      moments->count("--format") == 0 && rec->count("--format") == 0)
    cfg.format = "csv";

  if (!output.empty()) {
    std::ofstream f(output);
    if (!f) {
      std::cerr << "error: cannot open output path " << output << "\n";
      return 2;
    }
    return ellop::run(cfg, f, std::cerr);
  }
  return ellop::run(cfg, std::cout, std::cerr);
}
