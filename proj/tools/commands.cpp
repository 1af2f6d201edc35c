#include "commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "kls/bounds.hpp"
#include "kls/errors.hpp"
#include "kls/klsum.hpp"
#include "kls/verify.hpp"
#include "kls/vmvt.hpp"

namespace kls::cli {

namespace {

using json = nlohmann::ordered_json;

struct RunConfig {
  unsigned threads = 0;
  int precision_bits = kDefaultPrecisionBits;
  std::uint64_t seed = 1;
  std::uint64_t budget = kDefaultBudget;
  std::string format;  // empty: the command's default
  std::string out_path;
};

// Integers above 2^53 go out as strings so JSON readers do not round them.
json json_int(const BigInt& x) {
  static const BigInt limit = BigInt(1) << 53;
  if (abs(x) <= limit) return json(x.get_si());
  return json(x.get_str());
}

json json_double(double x) {
  if (std::isfinite(x)) return json(x);
  return json(x > 0 ? "inf" : (x < 0 ? "-inf" : "nan"));
}

std::string csv_line(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += cells[i];
  }
  return out + '\n';
}

std::string conditions_text(const std::vector<std::string>& conds) {
  std::string out;
  for (const auto& c : conds) out += (out.empty() ? "" : ";") + c;
  return out;
}

class Emitter {
 public:
  Emitter(const RunConfig& config, std::ostream& fallback) : out_(&fallback) {
    if (!config.out_path.empty()) {
      file_.open(config.out_path);
      if (!file_) throw std::invalid_argument("cannot open output file " + config.out_path);
      out_ = &file_;
    }
  }
  std::ostream& stream() { return *out_; }

 private:
  std::ofstream file_;
  std::ostream* out_;
};

std::string format_or(const RunConfig& c, const char* fallback) { return c.format.empty() ? fallback : c.format; }

struct EvalArgs {
  std::string q, a = "1", b = "0", c = "0";
  std::uint64_t N = 1;
};

int cmd_eval(const RunConfig& config, const EvalArgs& args, std::ostream& out) {
  const auto q = FactoredInteger::parse(args.q);
  const SumSpec spec(q, args.N, parse_bigint(args.a), parse_bigint(args.b), parse_bigint(args.c));
  const auto r = eval_sum(spec, {config.threads, config.precision_bits});
  if (format_or(config, "json") == "csv") {
    out << "q,N,a,b,c,re,im,abs,err,terms_counted,skipped\n"
        << csv_line({q.to_string(), std::to_string(args.N), spec.a().get_str(), spec.b().get_str(),
                     spec.c().get_str(), format_double(r.value.re), format_double(r.value.im),
                     format_double(r.value.abs()), format_double(r.value.err), std::to_string(r.terms_counted),
                     std::to_string(r.skipped)});
  } else {
    json j;
    j["q"] = q.to_string();
    j["N"] = args.N;
    j["a"] = json_int(spec.a());
    j["b"] = json_int(spec.b());
    j["c"] = json_int(spec.c());
    j["re"] = r.value.re;
    j["im"] = r.value.im;
    j["abs"] = r.value.abs();
    j["err"] = r.value.err;
    j["terms_counted"] = r.terms_counted;
    j["skipped"] = r.skipped;
    out << j.dump() << '\n';
  }
  return kExitOk;
}

int cmd_scan(const RunConfig& config, const EvalArgs& args, const std::vector<std::uint64_t>& Ns, std::ostream& out) {
  const auto q = FactoredInteger::parse(args.q);
  const auto rows =
      scan(q, parse_bigint(args.a), parse_bigint(args.b), parse_bigint(args.c), Ns, {config.threads, config.precision_bits});
  if (format_or(config, "csv") == "csv") {
    out << scan_csv(rows);
    return kExitOk;
  }
  json arr = json::array();
  for (const auto& r : rows) {
    arr.push_back({{"N", r.N},
                   {"re", r.value.re},
                   {"im", r.value.im},
                   {"abs", r.abs},
                   {"terms", r.terms},
                   {"trivial", r.trivial},
                   {"thm1_bound", json_double(r.thm1_bound)},
                   {"thm1_applicable", r.thm1_applicable},
                   {"ratio", r.ratio}});
  }
  out << arr.dump() << '\n';
  return kExitOk;
}

json suite_json(const SuiteReport& rep) {
  json j;
  j["suite"] = rep.suite;
  j["seed"] = rep.seed;
  j["cases"] = rep.cases;
  j["failures"] = rep.failures;
  j["passed"] = rep.passed();
  j["margin"] = rep.margin_name;
  j["worst_margin"] = json_double(rep.worst_margin);
  for (const auto& [k, v] : rep.extras) j[k] = json_double(v);
  if (!rep.w_rows.empty()) {
    json rows = json::array();
    for (const auto& r : rep.w_rows) {
      rows.push_back({{"q", r.q},
                      {"eps", r.eps},
                      {"n", r.n},
                      {"h", r.h},
                      {"lhs", {r.lhs.re, r.lhs.im}},
                      {"rhs", {r.rhs.re, r.rhs.im}},
                      {"abs_diff", r.abs_diff}});
    }
    j["rows"] = rows;
  }
  return j;
}

int cmd_verify(const RunConfig& config, const std::string& suite, std::uint64_t cases, std::ostream& out) {
  SuiteConfig sc;
  sc.seed = config.seed;
  sc.cases = cases;
  sc.threads = config.threads;
  sc.precision_bits = config.precision_bits;
  sc.budget = config.budget;
  const auto rep = run_suite(suite, sc);
  if (format_or(config, "json") == "csv") {
    out << "suite,seed,cases,failures,passed,margin,worst_margin\n"
        << csv_line({rep.suite, std::to_string(rep.seed), std::to_string(rep.cases), std::to_string(rep.failures),
                     rep.passed() ? "true" : "false", rep.margin_name, format_double(rep.worst_margin)});
  } else {
    out << suite_json(rep).dump() << '\n';
  }
  return verify_exit_code(rep);
}

struct BoundArgs {
  std::string q;
  std::optional<double> ln_q, ln_d;
  std::string N;
  std::string delta;
};

ModulusLogs symbolic_logs(const std::optional<double>& ln_q, const std::optional<double>& ln_d) {
  // default kernel: d = 2
  return {*ln_q, ln_d.value_or(std::log(2.0))};
}

int cmd_bound(const RunConfig& config, const BoundArgs& args, std::ostream& out) {
  const BigInt N = parse_bigint(args.N);
  const std::optional<Rational> delta =
      args.delta.empty() ? std::nullopt : std::optional<Rational>(Rational::parse(args.delta));
  BoundReport rep;
  std::string q_text;
  if (args.ln_q) {
    const auto logs = symbolic_logs(args.ln_q, args.ln_d);
    rep = delta ? theorem2_bound(logs, N, *delta) : theorem1_bound(logs, N);
    q_text = "exp(" + format_double(logs.ln_q) + ")";
  } else {
    if (args.q.empty()) throw std::invalid_argument("bound needs --q or --ln-q");
    const auto q = FactoredInteger::parse(args.q);
    rep = delta ? theorem2_bound(q, N, *delta) : theorem1_bound(q, N);
    q_text = q.to_string();
  }
  if (format_or(config, "json") == "csv") {
    out << "q,N,gamma,gamma1,bound,log_bound,applicable,failed_conditions\n"
        << csv_line({q_text, N.get_str(), format_double(rep.gamma), format_double(rep.gamma1),
                     format_double(rep.bound_value), format_double(rep.log_bound), rep.applicable ? "true" : "false",
                     conditions_text(rep.failed_conditions)});
    return kExitOk;
  }
  json j;
  j["q"] = q_text;
  j["N"] = json_int(N);
  if (delta) j["delta"] = delta->to_string();
  j["gamma"] = rep.gamma;
  j["gamma1"] = rep.gamma1;
  j["bound"] = json_double(rep.bound_value);
  j["log_bound"] = rep.log_bound;
  j["applicable"] = rep.applicable;
  j["failed_conditions"] = rep.failed_conditions;
  out << j.dump() << '\n';
  return kExitOk;
}

int cmd_regime(const RunConfig& config, const BoundArgs& args, std::ostream& out) {
  const std::optional<Rational> delta =
      args.delta.empty() ? std::nullopt : std::optional<Rational>(Rational::parse(args.delta));
  RegimeReport rep;
  std::string q_text;
  if (args.ln_q) {
    const auto logs = symbolic_logs(args.ln_q, args.ln_d);
    rep = regime_report(logs, delta);
    q_text = "exp(" + format_double(logs.ln_q) + ")";
  } else {
    if (args.q.empty()) throw std::invalid_argument("regime needs --q or --ln-q");
    const auto q = FactoredInteger::parse(args.q);
    rep = regime_report(q, delta);
    q_text = q.to_string();
  }
  if (format_or(config, "json") == "csv") {
    out << "q,ln_q,ln_d,ln_upper,ln_kernel_threshold,ln_exp_threshold,window_nonempty,binding_constraint\n"
        << csv_line({q_text, format_double(rep.ln_q), format_double(rep.ln_d), format_double(rep.ln_upper),
                     format_double(rep.ln_kernel_threshold), format_double(rep.ln_exp_threshold),
                     rep.window_nonempty ? "true" : "false", rep.binding_constraint});
    return kExitOk;
  }
  json j;
  j["q"] = q_text;
  if (delta) j["delta"] = delta->to_string();
  j["ln_q"] = rep.ln_q;
  j["ln_d"] = rep.ln_d;
  j["ln_upper"] = rep.ln_upper;
  j["ln_kernel_threshold"] = rep.ln_kernel_threshold;
  j["ln_exp_threshold"] = rep.ln_exp_threshold;
  j["window_nonempty"] = rep.window_nonempty;
  j["binding_constraint"] = rep.binding_constraint;
  if (!delta) j["crossover_ln_q"] = theorem1_crossover_ln_q();
  out << j.dump() << '\n';
  return kExitOk;
}

int cmd_jcount(const RunConfig& config, unsigned k, unsigned m, std::uint64_t P, std::vector<std::int64_t> lambda,
               std::ostream& out) {
  if (lambda.empty()) lambda.assign(m, 0);
  const VinogradovInstance inst{k, m, P, lambda};
  const BigInt count = j_count(inst, {config.budget, config.threads == 0 ? 1u : config.threads});
  if (format_or(config, "json") == "csv") {
    std::string lam;
    for (auto v : lambda) lam += (lam.empty() ? "" : ";") + std::to_string(v);
    out << "k,m,P,lambda,count\n" << csv_line({std::to_string(k), std::to_string(m), std::to_string(P), lam, count.get_str()});
    return kExitOk;
  }
  json j;
  j["k"] = k;
  j["m"] = m;
  j["P"] = P;
  j["lambda"] = lambda;
  j["count"] = json_int(count);
  out << j.dump() << '\n';
  return kExitOk;
}

}  // namespace

int verify_exit_code(const SuiteReport& report) { return report.passed() ? kExitOk : kExitVerifyFailed; }

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Incomplete Kloosterman sums to powerful moduli: evaluation, verification and bounds", "kls"};
  app.require_subcommand(1);

  RunConfig config;
  app.add_option("--threads", config.threads, "worker threads (0: all cores)")->envname("KLS_THREADS");
  app.add_option("--precision", config.precision_bits, "working precision in bits (<= 53: double, <= 64: extended)")
      ->envname("KLS_PRECISION")
      ->check(CLI::Range(1, 64));
  app.add_option("--seed", config.seed, "seed for randomized suites")->envname("KLS_SEED");
  app.add_option("--budget", config.budget, "enumeration/evaluation budget")->envname("KLS_BUDGET");
  app.add_option("--format", config.format, "csv or json")->envname("KLS_FORMAT")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", config.out_path, "write output to FILE")->envname("KLS_OUT");

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "evaluate S_q(N; a, b, c)");
  eval->add_option("--q", eval_args.q, "modulus, e.g. 2^6*3^4")->required();
  eval->add_option("--N", eval_args.N, "number of terms")->required()->check(CLI::PositiveNumber);
  eval->add_option("--a", eval_args.a, "coefficient of n*, coprime to q");
  eval->add_option("--b", eval_args.b, "coefficient of n");
  eval->add_option("--c", eval_args.c, "window start (sum over c < n <= c + N)");

  EvalArgs scan_args;
  std::vector<std::uint64_t> scan_Ns;
  auto* scan_cmd = app.add_subcommand("scan", "evaluate the sum for a list of lengths N");
  scan_cmd->add_option("--q", scan_args.q, "modulus")->required();
  scan_cmd->add_option("--a", scan_args.a, "coefficient of n*");
  scan_cmd->add_option("--b", scan_args.b, "coefficient of n");
  scan_cmd->add_option("--c", scan_args.c, "window start");
  scan_cmd->add_option("--N", scan_Ns, "lengths (comma separated or repeated)")
      ->required()
      ->delimiter(',')
      ->check(CLI::PositiveNumber);

  std::string suite;
  std::uint64_t cases = 0;
  auto* verify = app.add_subcommand("verify", "run a randomized verification suite");
  verify->add_option("suite", suite, "suite name")->required()->check(CLI::IsMember(suite_names()));
  verify->add_option("--cases", cases, "number of cases (default per suite)");
  verify->add_option("--seed", config.seed, "seed for the suite");

  BoundArgs bound_args;
  auto* bound = app.add_subcommand("bound", "statement-level bound and applicability for (q, N)");
  bound->add_option("--q", bound_args.q, "modulus");
  bound->add_option("--ln-q", bound_args.ln_q, "symbolic modulus given by ln q");
  bound->add_option("--ln-d", bound_args.ln_d, "ln of the kernel for symbolic moduli (default ln 2)");
  bound->add_option("--N", bound_args.N, "sum length")->required();
  bound->add_option("--delta", bound_args.delta, "use the delta-parameterized variant, 0 < delta < 0.1");

  BoundArgs regime_args;
  auto* regime = app.add_subcommand("regime", "admissible N-window for a modulus");
  regime->add_option("--q", regime_args.q, "modulus");
  regime->add_option("--ln-q", regime_args.ln_q, "symbolic modulus given by ln q");
  regime->add_option("--ln-d", regime_args.ln_d, "ln of the kernel for symbolic moduli (default ln 2)");
  regime->add_option("--delta", regime_args.delta, "use the delta-parameterized variant");

  unsigned jk = 1, jm = 1;
  std::uint64_t jP = 1;
  std::vector<std::int64_t> jlambda;
  auto* jcount = app.add_subcommand("jcount", "count solutions of the Vinogradov system");
  jcount->add_option("--k", jk, "half the number of variables")->required()->check(CLI::PositiveNumber);
  jcount->add_option("--m", jm, "number of equations")->required()->check(CLI::PositiveNumber);
  jcount->add_option("--P", jP, "variable range [1, P]")->required()->check(CLI::PositiveNumber);
  jcount->add_option("--lambda", jlambda, "right-hand shifts (m values, comma separated)")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    Emitter emitter(config, out);
    std::ostream& os = emitter.stream();
    if (*eval) return cmd_eval(config, eval_args, os);
    if (*scan_cmd) return cmd_scan(config, scan_args, scan_Ns, os);
    if (*verify) return cmd_verify(config, suite, cases, os);
    if (*bound) return cmd_bound(config, bound_args, os);
    if (*regime) return cmd_regime(config, regime_args, os);
    if (*jcount) {
      if (!jlambda.empty() && jlambda.size() != jm) throw std::invalid_argument("--lambda needs exactly m values");
      return cmd_jcount(config, jk, jm, jP, jlambda, os);
    }
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << '\n';
    return kExitBudget;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace kls::cli
