#include "singtrace/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "CLI11.hpp"
#include "json_text.hpp"
#include "singtrace/checks.hpp"
#include "singtrace/corpus.hpp"
#include "singtrace/error.hpp"
#include "singtrace/heat.hpp"
#include "singtrace/spaces.hpp"
#include "singtrace/zeta.hpp"

namespace singtrace {

namespace {

constexpr double kDefaultTol = 1e-3;

const std::vector<std::string> kQuantities{"norm",     "quasinorm", "z1",        "zp",          "dixmier",
                                           "zeta-limit", "residue", "heat-limit", "small-ideal", "triple"};

Json array_of(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

Json band(double lo, double hi) { return Json::array({number(lo), number(hi)}); }

Json to_json(const LimitEstimate& e, const char* abscissa = "log_t") {
  Json j;
  j["value"] = e.value ? number(*e.value) : Json(nullptr);
  j["band"] = band(e.liminf, e.limsup);
  j["converged"] = e.converged;
  j["cesaro_iterations"] = e.cesaro_iterations;
  j["model"] = e.model;
  j["coefficients"] = array_of(e.coefficients);
  j["fit_residual"] = number(e.fit_residual);
  j["tolerance"] = number(e.tolerance);
  j["samples"] = {{abscissa, array_of(e.samples.grid)}, {"values", array_of(e.samples.values)}};
  return j;
}

Json to_json(const SupResult& s) {
  Json j;
  j["value"] = number(s.value);
  j["error"] = number(0.0);
  j["witness_log_t"] = number(s.witness_log_t);
  j["divergent"] = s.divergent;
  j["exact"] = s.exact;
  if (!s.witness_log_points.empty()) {
    j["witnesses"] = {{"log_t", array_of(s.witness_log_points)}, {"values", array_of(s.witness_values)}};
  }
  return j;
}

Json to_json(const SeminormReport& r) {
  Json j;
  j["value"] = number(r.value);
  j["band"] = band(r.lo, r.hi);
  j["converged"] = r.converged;
  j["coefficients"] = array_of(r.coefficients);
  j["samples"] = {{"s", array_of(r.s_grid)}, {"values", array_of(r.values)}, {"errors", array_of(r.errors)}};
  if (!r.notes.empty()) j["notes"] = r.notes;
  return j;
}

Json to_json(const ZetaLimit& z) {
  Json j = to_json(z.estimate, "log_r");
  j["curve"] = {{"r", array_of(z.curve.r_grid)},
                {"s", array_of(z.curve.s_grid)},
                {"values", array_of(z.curve.values)},
                {"errors", array_of(z.curve.errors)}};
  if (z.psi1_norm) j["psi1_norm"] = to_json(*z.psi1_norm);
  return j;
}

Json error_json(const Error& e) {
  Json j;
  j["code"] = to_string(e.code());
  j["message"] = e.what();
  if (e.index()) j["index"] = *e.index();
  return j;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// scalar summary of one quantity for CSV output: value, lo, hi, converged, divergent
struct Row {
  double value = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  bool converged = true;
  bool divergent = false;
};

Row row_of(const LimitEstimate& e) { return {e.central(), e.liminf, e.limsup, e.converged, false}; }
Row row_of(const SupResult& s) { return {s.value, s.value, s.value, true, s.divergent}; }
Row row_of(const SeminormReport& r) { return {r.value, r.lo, r.hi, r.converged, false}; }

struct AnalyzeFlags {
  std::string input;
  std::string psi = "psi1";
  bool psi_given = false;
  double p = 1.0;
  double q = 2.0;
  std::string quantities = "norm";
  double tol = kDefaultTol;
  double horizon = 0.0;
  std::string format = "json";
  bool require_converged = false;
  bool timing = false;
  std::size_t head = 0;
};

struct Outcome {
  Json json;
  Row row;
  bool has_row = true;
  bool limit_like = false;  // participates in --require-converged
};

int cmd_analyze(const AnalyzeFlags& f, std::istream& in, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<std::string> wanted = split_list(f.quantities);
  if (wanted.empty()) throw Error(ErrorCode::kInvalidArgument, "no quantities requested");
  for (const std::string& q : wanted) {
    if (std::find(kQuantities.begin(), kQuantities.end(), q) == kQuantities.end()) {
      throw Error(ErrorCode::kInvalidArgument, "unknown quantity '" + q + "'");
    }
  }
  const auto requested = [&](const char* name) {
    return std::find(wanted.begin(), wanted.end(), name) != wanted.end();
  };
  if (!(f.p > 0.0) || !(f.q > 0.0) || !(f.tol > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "--p, --q and --tol must be positive");
  }
  const PsiFunction psi = make_psi(f.psi);
  if (requested("triple")) {
    const PsiDiagnostics d = psi_diagnostics(psi);
    if (!d.doubling_to_one || !d.condition_a) {
      throw Error(ErrorCode::kHypothesis, "triple needs psi(2t)/psi(t) -> 1 and condition (A); '" + psi.name() +
                                              "' fails them");
    }
  }
  GenOptions gen;
  gen.head = f.head;
  const CorpusMember member = load_input(f.input, in, gen);
  const Profile& x = member.profile;

  DixmierOptions dix;
  dix.log_horizon = f.horizon;
  dix.limit.tolerance = f.tol;
  ZetaOptions zopt;
  zopt.limit.tolerance = f.tol;
  HeatOptions hopt;
  hopt.limit.tolerance = f.tol;
  hopt.zeta = zopt;
  hopt.dixmier = dix;
  Z1Options z1opt;
  z1opt.tolerance = f.tol;
  const PsiFunction quasi_psi = (!f.psi_given && f.p > 1.0) ? PsiFunction::psi_p(f.p) : psi;

  std::map<std::string, Outcome> results;
  std::optional<ZetaLimit> zeta_result;
  std::optional<LimitEstimate> dixmier_result;
  std::optional<ZpReport> zp_result;
  std::optional<SupResult> quasi_result;
  std::optional<Theorem51Report> heat_result;
  std::optional<TripleReport> triple_result;

  for (const std::string& name : wanted) {
    Outcome o;
    try {
      if (name == "norm") {
        const SupResult s = marcinkiewicz_norm(x, psi);
        o = {to_json(s), row_of(s)};
      } else if (name == "quasinorm") {
        quasi_result = quasinorm_F(x, quasi_psi);
        o = {to_json(*quasi_result), row_of(*quasi_result)};
        o.json["psi"] = quasi_psi.name();
      } else if (name == "z1") {
        const SeminormReport r = z1_seminorm(x, z1opt);
        o = {to_json(r), row_of(r), true, true};
      } else if (name == "zp") {
        zp_result = zp_seminorm(x, f.p, z1opt);
        o.json = {{"q", number(f.p)},
                  {"norm", to_json(zp_result->norm)},
                  {"plus", to_json(zp_result->plus)},
                  {"z1_of_power", to_json(zp_result->z1_of_power)}};
        o.row = row_of(zp_result->plus);
        o.limit_like = true;
      } else if (name == "dixmier") {
        dixmier_result = dixmier_estimate(x, psi, dix);
        o = {to_json(*dixmier_result), row_of(*dixmier_result), true, true};
      } else if (name == "zeta-limit" || name == "residue") {
        const ZetaLimit z = name == "zeta-limit" ? zeta_limit(x, f.p, zopt) : residue_estimate(x, f.p, zopt);
        if (name == "zeta-limit") zeta_result = z;
        o = {to_json(z), row_of(z.estimate), true, true};
      } else if (name == "heat-limit") {
        heat_result = heat_profile_limit(x, f.p, f.q, hopt);
        const Theorem51Report& r = *heat_result;
        o.json = to_json(r.heat, "log_lambda");
        o.json["gamma_factor"] = number(r.gamma_factor);
        o.json["zeta_side"] = to_json(r.zeta_side, "log_r");
        o.json["dixmier_side"] = to_json(r.dixmier_side);
        o.json["profile"] = {{"lambda", array_of(r.profile.lambda_grid)},
                             {"values", array_of(r.profile.values)},
                             {"errors", array_of(r.profile.errors)}};
        o.row = row_of(r.heat);
        o.limit_like = true;
      } else if (name == "small-ideal") {
        const SupResult s = small_ideal_constant(x);
        o = {to_json(s), row_of(s)};
      } else if (name == "triple") {
        triple_result = prop_equivalence_triple(x, psi, dix);
        const TripleReport& t = *triple_result;
        o.json = {{"weighted_mean", to_json(t.weighted_mean)},
                  {"truncated", to_json(t.truncated)},
                  {"truncated_window", to_json(t.truncated_window)},
                  {"max_distance", number(t.max_distance)},
                  {"flags_agree", t.flags_agree}};
        o.row = row_of(t.weighted_mean);
        o.limit_like = true;
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDivergent && e.code() != ErrorCode::kHypothesis &&
          e.code() != ErrorCode::kGridTooShort) {
        throw;
      }
      o = Outcome{};
      o.json = {{"value", nullptr}, {"divergent", e.code() == ErrorCode::kDivergent}, {"error", error_json(e)}};
      o.row = {kInf, kInf, kInf, false, e.code() == ErrorCode::kDivergent};
      o.limit_like = true;
    }
    results[name] = std::move(o);
  }

  Json verdicts = Json::object();
  if (zeta_result && requested("dixmier")) {
    const LimitEstimate dx = (f.p == 1.0 && psi.kind() == PsiKind::kPsi1 && dixmier_result)
                                 ? *dixmier_result
                                 : dixmier_estimate(f.p == 1.0 ? x : x.power(f.p), PsiFunction::psi1(), dix);
    const LimitEstimate scaled = scale_estimate(dx, f.p);
    const double dist = band_distance(zeta_result->estimate, scaled);
    const bool band_only = !(zeta_result->estimate.converged && dx.converged);
    const double allowed = zeta_result->estimate.tolerance + scaled.tolerance;
    verdicts["thm47"] = {{"pass", !band_only && dist <= allowed},
                         {"zeta_limit", number(zeta_result->estimate.central())},
                         {"p_times_dixmier", number(scaled.central())},
                         {"distance", number(dist)},
                         {"tolerance", number(allowed)},
                         {"band_only", band_only}};
  }
  if (requested("zp") && requested("quasinorm") && f.p > 1.0) {
    const bool zp_finite = zp_result && std::isfinite(zp_result->plus.value);
    const bool quasi_inf = quasi_result && quasi_result->divergent;
    verdicts["separation"] = {{"pass", zp_finite && quasi_inf},
                              {"zp_finite", zp_finite},
                              {"quasinorm_infinite", quasi_inf}};
  }
  if (heat_result) {
    verdicts["thm51"] = {{"pass", heat_result->pass},
                         {"max_distance", number(heat_result->max_distance)},
                         {"band_only", heat_result->band_only}};
  }
  if (triple_result) {
    verdicts["prop43"] = {{"pass", triple_result->flags_agree && triple_result->max_distance <= 3.0 * f.tol},
                          {"max_distance", number(triple_result->max_distance)},
                          {"flags_agree", triple_result->flags_agree}};
  }

  bool all_converged = true;
  for (const auto& [name, o] : results) {
    if (o.limit_like && !o.row.converged) all_converged = false;
  }

  if (f.format == "csv") {
    out << "quantity,value,lo,hi,converged,divergent\n";
    char buf[160];
    for (const std::string& name : wanted) {
      const Row& r = results[name].row;
      std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%d,%d\n", name.c_str(), r.value, r.lo, r.hi,
                    r.converged ? 1 : 0, r.divergent ? 1 : 0);
      out << buf;
    }
    for (const auto& [name, v] : verdicts.items()) {
      out << "verdict:" << name << ',' << (v.at("pass").get<bool>() ? 1 : 0) << ",,,,\n";
    }
  } else {
    Json report;
    report["schema"] = "1";
    report["command"] = "analyze";
    report["input"] = {{"descriptor", f.input},
                       {"name", member.name},
                       {"kind", x.kind()},
                       {"metadata", Json::parse(member.metadata_json)}};
    Json q = Json::array();
    for (const std::string& n : wanted) q.push_back(n);
    report["settings"] = {{"psi", psi.name()},
                          {"p", number(f.p)},
                          {"q", number(f.q)},
                          {"tolerance", number(f.tol)},
                          {"log_horizon", f.horizon > 0.0 ? number(f.horizon) : number(x.limit_log_horizon())},
                          {"dixmier_points", dix.points},
                          {"r_grid", array_of(zopt.r_grid)},
                          {"lambda_grid", array_of(hopt.lambda_grid)},
                          {"quantities", q}};
    Json quantities = Json::object();
    for (const std::string& n : wanted) quantities[n] = results[n].json;
    report["quantities"] = std::move(quantities);
    report["verdicts"] = std::move(verdicts);
    out << dump_json(report) << '\n';
  }
  if (f.timing) {
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    err << "wall time: " << secs << " s\n";
  }
  if (f.require_converged && !all_converged) {
    err << "not converged\n";
    return kExitNotConverged;
  }
  return kExitOk;
}

Json suite_json(const CheckSuite& s) {
  Json cases = Json::array();
  for (const CheckCase& c : s.cases) {
    Json values = Json::object();
    for (const auto& [k, v] : c.values) values[k] = number(v);
    Json jc = {{"name", c.name}, {"pass", c.pass}, {"values", values}};
    if (!c.note.empty()) jc["note"] = c.note;
    cases.push_back(std::move(jc));
  }
  return {{"name", s.name}, {"pass", s.pass()}, {"cases", cases}};
}

int cmd_check(const std::string& suite, bool strict, const CheckOptions& options, const std::string& format,
              std::ostream& out) {
  std::vector<std::string> names;
  if (suite == "all") {
    names = check_suite_names();
  } else {
    if (std::find(check_suite_names().begin(), check_suite_names().end(), suite) == check_suite_names().end()) {
      throw Error(ErrorCode::kInvalidArgument, "unknown check suite '" + suite + "'");
    }
    names = {suite};
  }
  std::vector<CheckSuite> suites;
  for (const std::string& n : names) suites.push_back(run_check(n, options));
  const bool pass = std::all_of(suites.begin(), suites.end(), [](const CheckSuite& s) { return s.pass(); });
  if (format == "csv") {
    out << "suite,case,pass\n";
    for (const CheckSuite& s : suites) {
      for (const CheckCase& c : s.cases) out << s.name << ",\"" << c.name << "\"," << (c.pass ? 1 : 0) << '\n';
    }
  } else {
    Json report;
    report["schema"] = "1";
    report["command"] = "check";
    report["settings"] = {{"seed", options.seed}, {"tolerance", number(options.tolerance)}};
    Json arr = Json::array();
    for (const CheckSuite& s : suites) arr.push_back(suite_json(s));
    report["suites"] = std::move(arr);
    report["pass"] = pass;
    out << dump_json(report) << '\n';
  }
  return strict && !pass ? kExitCheckFailed : kExitOk;
}

int cmd_gen(const std::string& kind, std::vector<std::string> args, const std::string& output,
            const GenOptions& options, std::ostream& out) {
  std::string path = output;
  const std::size_t want = gen_param_count(kind);
  if (path.empty() && args.size() == want + 1) {
    path = args.back();
    args.pop_back();
  }
  const CorpusMember m = gen_spectrum(kind, args, options);
  const bool csv = path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
  if (path.empty() || path == "-") {
    write_member(out, m, false);
    out << '\n';
    return kExitOk;
  }
  std::ostringstream buffer;
  write_member(buffer, m, csv);
  std::ofstream file(path);
  if (!file) throw Error(ErrorCode::kIo, "cannot write '" + path + "'");
  file << buffer.str();
  if (!csv) file << '\n';
  if (!file) throw Error(ErrorCode::kIo, "write failed for '" + path + "'");
  return kExitOk;
}

}  // namespace

std::optional<double> tolerance_from_env() {
  const char* raw = std::getenv("SINGTRACE_TOL");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(raw, &end);
  if (end == raw || *end != '\0' || !(v > 0.0) || !std::isfinite(v)) {
    throw Error(ErrorCode::kInvalidArgument, std::string("SINGTRACE_TOL must be a positive number, got '") + raw + "'");
  }
  return v;
}

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err,
            std::optional<double> env_tol) {
  CLI::App app{"Singular traces, Dixmier traces and spectral zeta limits from singular value data", "singtrace"};
  app.require_subcommand(1);

  AnalyzeFlags af;
  af.tol = env_tol.value_or(kDefaultTol);
  auto* analyze = app.add_subcommand("analyze", "compute quantities for a spectrum, step function or gen: member");
  analyze->add_option("input", af.input, "file path, '-' for stdin, or gen:kind[:param...]")->required();
  auto* psi_opt = analyze->add_option("--psi", af.psi, "psi1 | psi_p:<p> | log2 | log1p | linear | custom:<file>");
  analyze->add_option("--p", af.p, "exponent p");
  analyze->add_option("--q", af.q, "heat exponent q");
  analyze->add_option("--quantities", af.quantities,
                      "comma list: norm, quasinorm, z1, zp, dixmier, zeta-limit, residue, heat-limit, small-ideal, triple");
  analyze->add_option("--tol", af.tol, "limit tolerance (default SINGTRACE_TOL or 1e-3)");
  analyze->add_option("--horizon", af.horizon, "ln t horizon for Dixmier limits (0: automatic)");
  analyze->add_option("--format", af.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  analyze->add_option("--head", af.head, "head length for gen: inputs");
  analyze->add_flag("--require-converged", af.require_converged, "exit 3 when a limit only has a band");
  analyze->add_flag("--timing", af.timing, "print wall time to stderr");

  std::string suite = "all";
  bool strict = false;
  CheckOptions copt;
  std::string check_format = "json";
  auto* check = app.add_subcommand("check", "run an invariant suite over the built-in corpus");
  check->add_option("suite", suite, "all | thm44 | thm47 | thm51 | prop52 | karamata | intertwine | holder | galois | norms");
  check->add_flag("--strict", strict, "exit 4 when any case fails");
  check->add_option("--seed", copt.seed, "seed for randomized cases");
  check->add_option("--tol", copt.tolerance, "override per-case tolerances");
  check->add_option("--format", check_format, "json | csv")->check(CLI::IsMember({"json", "csv"}));

  std::string kind;
  std::vector<std::string> gen_args;
  std::string gen_out;
  GenOptions gopt;
  auto* gen = app.add_subcommand("gen", "write a corpus member to a file or stdout");
  gen->add_option("kind", kind, "power | harmonic | oscillating | small_ideal | counterexample_z | counterexample_x | finite")
      ->required();
  gen->add_option("args", gen_args, "parameters, then an optional output path");
  gen->add_option("-o,--output", gen_out, "output path (.csv for CSV)");
  gen->add_option("--head", gopt.head, "explicit head length");
  gen->add_flag("--sort", gopt.sort, "sort finite lists into non-increasing order");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }
  af.psi_given = psi_opt->count() > 0;

  try {
    if (analyze->parsed()) return cmd_analyze(af, in, out, err);
    if (check->parsed()) return cmd_check(suite, strict, copt, check_format, out);
    if (gen->parsed()) return cmd_gen(kind, gen_args, gen_out, gopt, out);
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what();
    if (e.index()) err << " (index " << *e.index() << ')';
    err << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInput;
}

}  // namespace singtrace
