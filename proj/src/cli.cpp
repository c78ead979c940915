#include "linecount/cli.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>

#include "CLI11.hpp"

#include "linecount/det_kernel.hpp"
#include "linecount/exact_core.hpp"
#include "linecount/mc_engine.hpp"
#include "linecount/sym_poly.hpp"

namespace linecount {
namespace {

struct Options {
  int n = 3;
  int n_min = 3;
  int n_max = 10;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string format = "text";
  std::string method = "zagier";
  std::string field = "real";
  std::string mc_target;
  std::string out_path;
  int k = 2;
  int m = 4;
  std::uint64_t trials = 1000;
  std::uint64_t realify_seed = 0;
  int symbolic_cap = kDefaultSymbolicCap;
  int mc_cap = kDefaultMonteCarloCap;
};

MonteCarloConfig mc_config(const Options& o) {
  MonteCarloConfig c;
  c.samples = o.samples;
  c.seed = o.seed;
  c.streams = o.threads;
  c.max_n = o.mc_cap;
  return c;
}

int exact_cn(const Options& o, std::ostream& out, std::ostream& err) {
  const ProblemSpec spec(o.n);
  std::optional<BigInt> zagier;
  std::optional<BigInt> symbolic;
  if (o.method == "zagier" || o.method == "both") {
    zagier = zagier_cn(o.n);
    out << "zagier " << zagier->get_str() << '\n';
  }
  if (o.method == "symbolic" || o.method == "both") {
    symbolic = cn_exact_symbolic(spec, o.symbolic_cap);
    out << "symbolic " << symbolic->get_str() << '\n';
  }
  if (zagier && symbolic && *zagier != *symbolic) {
    err << "error: C_" << o.n << " routes disagree (zagier " << zagier->get_str() << ", symbolic "
        << symbolic->get_str() << ")\n";
    return kExitConsistency;
  }
  return kExitOk;
}

int exact_en3(std::ostream& out) {
  const ProblemSpec spec(3);
  const auto e3 = e3_closed_form();
  const auto absdet = e3_abs_det_closed_form();
  out << std::setprecision(17);
  out << "E_3 = " << e3.rational_part << " + " << e3.sqrt2_part << "*sqrt(2) = " << e3.to_double()
      << '\n';
  out << "E|det J_3| = " << absdet.rational_part << " + " << absdet.sqrt2_part
      << "*sqrt(2) = " << absdet.to_double() << '\n';
  out << "rho_3 = " << prefactor_real(spec).str() << '\n';
  out << "E det J_3 = " << expected_det_closed_form(spec).get_str() << '\n';
  out << "R_3 = " << rn_signed_count(3).get_str() << '\n';
  return kExitOk;
}

int exact_volume(const Options& o, std::ostream& out) {
  const Field field = o.field == "complex" ? Field::complex : Field::real;
  const PiMultiple v = grassmannian_volume_exact(o.k, o.m, field);
  out << std::setprecision(17);
  out << "Gr(" << o.k << ", " << o.m << ") " << o.field << " = " << v.coefficient.str() << " * pi^("
      << v.half_pi_exponent << "/2) = " << v.to_double() << '\n';
  return kExitOk;
}

int run_mc(const Options& o, std::ostream& out) {
  const ProblemSpec spec(o.n);
  const MonteCarloConfig config = mc_config(o);
  const std::string op = "mc " + o.mc_target;
  if (o.mc_target == "en" || o.mc_target == "cn") {
    const LineCountEstimate e =
        o.mc_target == "en" ? estimate_en(spec, config) : estimate_cn_mc(spec, config);
    if (o.format == "json") {
      out << to_json(op, e).dump() << '\n';
    } else {
      out << std::setprecision(10) << o.mc_target << "(" << o.n << ") ~ " << e.value << " +- "
          << e.std_error << "  (raw mean " << e.raw.mean << ", " << e.raw.count
          << " samples, seed " << e.raw.seed << ", streams " << e.raw.streams << ")\n";
    }
    return kExitOk;
  }
  Functional f = Functional::abs_det_real;
  if (o.mc_target == "signeddet") {
    f = Functional::signed_det_real;
  } else if (o.mc_target == "absdetsq") {
    f = Functional::abs_det_sq_complex;
  }
  const MCEstimate e = estimate_functional(spec, f, config);
  if (o.format == "json") {
    out << to_json(op, o.n, e).dump() << '\n';
  } else {
    out << std::setprecision(10) << o.mc_target << "(" << o.n << ") ~ " << e.mean << " +- "
        << e.std_error;
    if (e.log_shift != 0.0) {
      out << " (times exp(" << e.log_shift << "))";
    }
    out << "  (" << e.count << " samples, seed " << e.seed << ", streams " << e.streams << ")\n";
  }
  return kExitOk;
}

int verify_lemmas(const Options& o, std::ostream& out) {
  const ProblemSpec spec(o.n);
  const LemmaI1Report r1 = verify_lemma_i1(spec, o.symbolic_cap);
  const LemmaI2Report r2 = verify_lemma_i2(spec, o.symbolic_cap);
  out << "n = " << o.n << '\n';
  out << "I1: support " << r1.support_size << ", min |Q| " << r1.min_abs_coefficient.get_str()
      << ", max |Q| " << r1.max_abs_coefficient.get_str() << ", generating permutations "
      << r1.generating_permutations.get_str() << ", count mismatches " << r1.count_mismatches
      << ", permanent counts match " << (r1.permanent_count_match ? "yes" : "no") << '\n';
  out << "I2: pairs checked " << r2.pairs_checked << ", violations " << r2.violations << '\n';
  const bool ok = r1.permanent_count_match && r1.count_mismatches == 0 && r2.violations == 0;
  return ok ? kExitOk : kExitConsistency;
}

int verify_signed(const Options& o, std::ostream& out) {
  const ProblemSpec spec(o.n);
  const BigInt target = rn_signed_count(o.n);
  const ExactRational closed = prefactor_real(spec) * ExactRational(expected_det_closed_form(spec));
  bool ok = closed == ExactRational(target);
  out << "(2n-3)!! = " << target.get_str() << '\n';
  out << "closed form: rho_n * E det J_n = " << closed.str() << '\n';
  if (o.n <= o.symbolic_cap) {
    const ExactRational symbolic = prefactor_real(spec) * expected_det_exact(spec, o.symbolic_cap);
    out << "symbolic: rho_n * E det J_n = " << symbolic.str() << '\n';
    ok = ok && symbolic == ExactRational(target);
  } else {
    out << "symbolic: skipped (n above symbolic cap " << o.symbolic_cap << ")\n";
  }
  return ok ? kExitOk : kExitConsistency;
}

int verify_density(const Options& o, std::ostream& out) {
  const DensityReport r = density_test_n3(o.samples, o.seed);
  nlohmann::ordered_json j;
  j["op"] = "verify density";
  j["samples"] = r.samples;
  j["seed"] = r.seed;
  j["streams"] = 1;
  j["ks_statistic"] = r.ks_statistic;
  j["p_value"] = r.p_value;
  j["char_fn_max_abs_dev"] = r.char_fn_max_abs_dev;
  j["char_fn_dev_at_zero"] = r.char_fn_dev_at_zero;
  out << j.dump() << '\n';
  return kExitOk;
}

int verify_realify(const Options& o, std::ostream& out) {
  const RealifyReport r = check_realify(o.trials, o.realify_seed);
  out << std::setprecision(6) << "trials " << r.trials << ", max relative error "
      << r.max_relative_error << ", negative determinants " << r.negative_determinants << '\n';
  return (r.max_relative_error <= 1e-9 && r.negative_determinants == 0) ? kExitOk
                                                                        : kExitConsistency;
}

int run_sqrtlaw(const Options& o, std::ostream& out) {
  out << sqrt_law_csv(sqrt_law_study(o.n_min, o.n_max, mc_config(o)));
  return kExitOk;
}

int dump_poly(const Options& o, std::ostream& err) {
  const ProblemSpec spec(o.n);
  const SparsePoly& p = cached_expansion(spec, ExpansionMode::determinant, o.symbolic_cap);
  std::ofstream file(o.out_path);
  if (!file) {
    err << "error: cannot open " << o.out_path << " for writing\n";
    return kExitValidation;
  }
  write_poly_text(file, p);
  return file ? kExitOk : kExitValidation;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Exact and Monte Carlo line counts on hypersurfaces of degree 2n-3"};
  app.name("linecount");
  app.require_subcommand(1);
  app.fallthrough();
  app.option_defaults()->always_capture_default();
  app.add_option("--symbolic-cap", o.symbolic_cap, "largest n for symbolic expansion")
      ->check(CLI::Range(3, kHardSymbolicCap));
  app.add_option("--mc-cap", o.mc_cap, "largest n for Monte Carlo")->check(CLI::Range(3, 1000));

  const auto n_opt = [&](CLI::App* sub) {
    return sub->add_option("--n", o.n, "n >= 3")->required()->check(CLI::Range(3, 100000));
  };
  const auto seed_opt = [&](CLI::App* sub) {
    sub->add_option("--seed", o.seed, "64-bit seed")->required();
  };

  std::function<int()> action;

  auto* exact = app.add_subcommand("exact", "exact closed forms")->require_subcommand(1);
  auto* cn = exact->add_subcommand("cn", "number of complex lines C_n");
  n_opt(cn);
  cn->add_option("--method", o.method)->check(CLI::IsMember({"zagier", "symbolic", "both"}));
  cn->callback([&] { action = [&] { return exact_cn(o, out, err); }; });
  auto* rn = exact->add_subcommand("rn", "signed count (2n-3)!!");
  n_opt(rn);
  rn->callback([&] {
    action = [&] {
      out << rn_signed_count(o.n).get_str() << '\n';
      return kExitOk;
    };
  });
  auto* en3 = exact->add_subcommand("en3", "closed forms for cubic surfaces");
  en3->callback([&] { action = [&] { return exact_en3(out); }; });
  auto* vol = exact->add_subcommand("volume", "Grassmannian volume");
  vol->add_option("--k", o.k)->required()->check(CLI::Range(0, 200));
  vol->add_option("--m", o.m)->required()->check(CLI::Range(0, 200));
  vol->add_option("--field", o.field)->required()->check(CLI::IsMember({"real", "complex"}));
  vol->callback([&] { action = [&] { return exact_volume(o, out); }; });

  auto* mc = app.add_subcommand("mc", "Monte Carlo estimates");
  mc->add_option("target", o.mc_target, "en | cn | absdet | signeddet | absdetsq")
      ->required()
      ->check(CLI::IsMember({"en", "cn", "absdet", "signeddet", "absdetsq"}));
  n_opt(mc);
  mc->add_option("--samples", o.samples)->required();
  seed_opt(mc);
  mc->add_option("--threads", o.threads, "number of logical streams")->check(CLI::PositiveNumber);
  mc->add_option("--format", o.format)->check(CLI::IsMember({"json", "text"}));
  mc->callback([&] { action = [&] { return run_mc(o, out); }; });

  auto* verify = app.add_subcommand("verify", "structural checks")->require_subcommand(1);
  auto* lemmas = verify->add_subcommand("lemmas", "no-cancellation and midpoint lemmas");
  n_opt(lemmas);
  lemmas->callback([&] { action = [&] { return verify_lemmas(o, out); }; });
  auto* sgn = verify->add_subcommand("signed", "signed count identity");
  n_opt(sgn);
  sgn->callback([&] { action = [&] { return verify_signed(o, out); }; });
  auto* dens = verify->add_subcommand("density", "distribution checks at n = 3");
  dens->add_option("--samples", o.samples)->required();
  seed_opt(dens);
  dens->callback([&] { action = [&] { return verify_density(o, out); }; });
  auto* real = verify->add_subcommand("realify", "det(realify(A)) = |det A|^2");
  real->add_option("--trials", o.trials)->required()->check(CLI::PositiveNumber);
  real->add_option("--seed", o.realify_seed, "64-bit seed");
  real->callback([&] { action = [&] { return verify_realify(o, out); }; });

  auto* sqrtlaw = app.add_subcommand("sqrtlaw", "log E_n / log C_n table");
  sqrtlaw->add_option("--n-min", o.n_min)->required()->check(CLI::Range(3, 100000));
  sqrtlaw->add_option("--n-max", o.n_max)->required()->check(CLI::Range(3, 100000));
  sqrtlaw->add_option("--samples", o.samples)->required();
  seed_opt(sqrtlaw);
  sqrtlaw->add_option("--threads", o.threads)->check(CLI::PositiveNumber);
  sqrtlaw->add_option("--format", o.format)->check(CLI::IsMember({"csv"}));
  sqrtlaw->callback([&] { action = [&] { return run_sqrtlaw(o, out); }; });

  auto* dump = app.add_subcommand("dump", "fixtures")->require_subcommand(1);
  auto* poly = dump->add_subcommand("poly", "write Q_n as text");
  n_opt(poly);
  poly->add_option("--out", o.out_path)->required();
  poly->callback([&] { action = [&] { return dump_poly(o, err); }; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  if (!action) {
    err << "error: no operation selected\n";
    return kExitValidation;
  }
  try {
    return action();
  } catch (const ConsistencyError& e) {
    err << "consistency failure: " << e.what() << '\n';
    return kExitConsistency;
  } catch (const CapacityError& e) {
    err << "capacity: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::domain_error& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitValidation;
  }
}

}  // namespace linecount
