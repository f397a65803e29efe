#include "singtrace/checks.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>

#include "singtrace/corpus.hpp"
#include "singtrace/error.hpp"
#include "singtrace/heat.hpp"
#include "singtrace/means.hpp"
#include "singtrace/spaces.hpp"
#include "singtrace/step_function.hpp"
#include "singtrace/zeta.hpp"

namespace singtrace {

namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

double pick_tol(const CheckOptions& o, double own) { return o.tolerance > 0.0 ? o.tolerance : own; }

// c·n^{-α}·f_n with f_n non-increasing in [1, 3]; the tail c·n^{-α} continues it
Spectrum random_spectrum(Rng& rng, double alpha_lo, double alpha_hi) {
  const int m = uniform_int(rng, 5, 60);
  const double c = uniform(rng, 0.2, 3.0);
  const double alpha = uniform(rng, 0.0, 1.0) < 0.5 ? alpha_lo : uniform(rng, alpha_lo, alpha_hi);
  std::vector<double> f(m);
  for (double& v : f) v = uniform(rng, 1.0, 3.0);
  std::sort(f.begin(), f.end(), std::greater<>());
  std::vector<double> head(m);
  for (int n = 1; n <= m; ++n) head[n - 1] = c * std::pow(n, -alpha) * f[n - 1];
  return Spectrum(std::move(head), PowerTail{c, alpha}, "random");
}

StepFunction random_step(Rng& rng, int max_pieces) {
  const int k = uniform_int(rng, 1, max_pieces);
  std::vector<double> values(k);
  std::vector<double> lengths(k);
  for (int i = 0; i < k; ++i) {
    values[i] = uniform(rng, 0.0, 1.0) < 0.15 ? 0.0 : std::round(uniform(rng, 0.0, 4.0) * 8.0) / 8.0;
    lengths[i] = uniform(rng, 0.05, 3.0);
  }
  return StepFunction::from_lengths(values, lengths);
}

CheckCase make_case(std::string name, bool pass, std::vector<std::pair<std::string, double>> values,
                    std::string note = {}) {
  return {std::move(name), pass, std::move(values), std::move(note)};
}

CheckCase error_case(const std::string& name, const std::exception& e) {
  return {name, false, {}, e.what()};
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

std::vector<std::pair<std::string, Profile>> thm44_corpus(Rng& rng) {
  std::vector<std::pair<std::string, Profile>> out;
  for (const auto& [kind, params] : std::vector<std::pair<std::string, std::vector<std::string>>>{
           {"harmonic", {}},
           {"counterexample_z", {"30"}},
           {"small_ideal", {}},
           {"oscillating", {}},
           {"power", {"0.5"}},
           {"finite", {"3,2,2,1,0.5"}}}) {
    CorpusMember m = gen_spectrum(kind, params);
    out.emplace_back(m.name, m.profile);
  }
  for (int i = 0; out.size() < 20; ++i) {
    out.emplace_back("random_" + std::to_string(i), Profile(random_spectrum(rng, 1.0, 2.0)));
  }
  return out;
}

}  // namespace

bool CheckSuite::pass() const { return failures() == 0; }

std::size_t CheckSuite::failures() const {
  return static_cast<std::size_t>(std::count_if(cases.begin(), cases.end(), [](const CheckCase& c) { return !c.pass; }));
}

const std::vector<std::string>& check_suite_names() {
  static const std::vector<std::string> names{"thm44",      "thm47",  "thm51",  "prop52", "karamata",
                                              "intertwine", "holder", "galois", "norms"};
  return names;
}

CheckSuite run_check(const std::string& suite, const CheckOptions& options) {
  static const std::map<std::string, CheckSuite (*)(const CheckOptions&)> table{
      {"thm44", check_thm44},       {"thm47", check_thm47},   {"thm51", check_thm51},
      {"prop52", check_prop52},     {"karamata", check_karamata}, {"intertwine", check_intertwine},
      {"holder", check_holder},     {"galois", check_galois}, {"norms", check_norms}};
  const auto it = table.find(suite);
  if (it == table.end()) throw Error(ErrorCode::kInvalidArgument, "unknown check suite '" + suite + "'");
  return it->second(options);
}

CheckSuite check_thm44(const CheckOptions& options) {
  CheckSuite suite{"thm44", {}};
  Rng rng(options.seed);
  const double e = std::exp(1.0);
  for (const auto& [name, x] : thm44_corpus(rng)) {
    try {
      const SeminormReport z1 = z1_seminorm(x);
      const SupResult norm = marcinkiewicz_norm(x, PsiFunction::psi1());
      const LimitEstimate avg = dixmier_estimate(x, PsiFunction::log1p());
      const bool first = z1.value <= norm.value + 1e-6;
      const bool second = avg.limsup <= e * z1.value + 1e-3;
      suite.cases.push_back(make_case(name, first && second,
                                      {{"z1", z1.value},
                                       {"marcinkiewicz_psi1", norm.value},
                                       {"log_average_limsup", avg.limsup},
                                       {"e_times_z1", e * z1.value}}));
    } catch (const std::exception& ex) {
      suite.cases.push_back(error_case(name, ex));
    }
  }
  return suite;
}

CheckSuite check_thm47(const CheckOptions& options) {
  CheckSuite suite{"thm47", {}};
  struct Item {
    std::string kind;
    std::vector<std::string> params;
    double p;
    double expected;
    double tol;
  };
  const std::vector<Item> items{{"harmonic", {}, 1.0, 1.0, 2e-3},
                                {"power", {"2"}, 2.0, 2.0, 2e-3},
                                {"power", {"3"}, 3.0, 3.0, 2e-3},
                                {"counterexample_z", {"30"}, 1.0, 0.5 / kLn2, 1e-2}};
  for (const Item& it : items) {
    const CorpusMember m = gen_spectrum(it.kind, it.params);
    const double tol = pick_tol(options, it.tol);
    try {
      const Theorem47Report r = theorem47_check(m.profile, it.p);
      const double zeta = r.zeta.estimate.central();
      const double dix = r.scaled_dixmier.central();
      const bool pass = !r.band_only && std::abs(zeta - dix) <= tol && std::abs(zeta - it.expected) <= tol;
      suite.cases.push_back(make_case(m.name, pass,
                                      {{"p", it.p},
                                       {"zeta_limit", zeta},
                                       {"p_times_dixmier", dix},
                                       {"expected", it.expected},
                                       {"difference", std::abs(zeta - dix)},
                                       {"tolerance", tol}}));
    } catch (const std::exception& ex) {
      suite.cases.push_back(error_case(m.name, ex));
    }
  }
  return suite;
}

CheckSuite check_thm51(const CheckOptions& options) {
  CheckSuite suite{"thm51", {}};
  struct Item {
    std::string kind;
    std::vector<std::string> params;
    double p;
    double q;
  };
  const std::vector<Item> items{{"harmonic", {}, 1, 2}, {"power", {"2"}, 2, 2}, {"power", {"2"}, 2, 1}, {"power", {"3"}, 3, 2}};
  const double tol = pick_tol(options, 1e-3);
  for (const Item& it : items) {
    const CorpusMember m = gen_spectrum(it.kind, it.params);
    const double expected = (it.p / it.q) * std::tgamma(it.p / it.q);
    char label[64];
    std::snprintf(label, sizeof label, "%s p=%g q=%g", m.name.c_str(), it.p, it.q);
    try {
      const Theorem51Report r = heat_profile_limit(m.profile, it.p, it.q);
      const double heat = r.heat.central();
      const bool pass = r.pass && std::abs(heat - expected) <= tol;
      suite.cases.push_back(make_case(label, pass,
                                      {{"heat_limit", heat},
                                       {"zeta_side", r.zeta_side.central()},
                                       {"dixmier_side", r.dixmier_side.central()},
                                       {"expected", expected},
                                       {"max_distance", r.max_distance}}));
    } catch (const std::exception& ex) {
      suite.cases.push_back(error_case(label, ex));
    }
  }
  return suite;
}

CheckSuite check_prop52(const CheckOptions& options) {
  CheckSuite suite{"prop52", {}};
  const double rel = pick_tol(options, 2e-2);
  for (const auto& [kind, params, p] : std::vector<std::tuple<std::string, std::vector<std::string>, double>>{
           {"harmonic", {}, 1.0}, {"power", {"2"}, 2.0}}) {
    const CorpusMember m = gen_spectrum(kind, params);
    try {
      const HeatFit fit = heat_asymptotic_fit(m.profile, true);
      const double c_expected = std::tgamma(p / 2.0) / 2.0 * p;  // Σ e^{-t n^{2/p}} ~ Γ(1 + p/2) t^{-p/2}
      const double residue = fit.residue && fit.residue->estimate.value ? *fit.residue->estimate.value : kInf;
      const bool pass = fit.accepted && std::abs(fit.p_hat - p) <= 0.02 * p && rel_diff(fit.C, c_expected) <= rel &&
                        rel_diff(fit.predicted_residue, p) <= rel && rel_diff(fit.predicted_residue, residue) <= rel;
      suite.cases.push_back(make_case(m.name, pass,
                                      {{"p_hat", fit.p_hat},
                                       {"C", fit.C},
                                       {"C_expected", c_expected},
                                       {"predicted_residue", fit.predicted_residue},
                                       {"residue", residue}},
                                      fit.diagnostic));
    } catch (const std::exception& ex) {
      suite.cases.push_back(error_case(m.name, ex));
    }
  }
  return suite;
}

CheckSuite check_karamata(const CheckOptions& options) {
  CheckSuite suite{"karamata", {}};
  try {
    const double c = 2.5;
    const BetaFunction beta = make_beta(uniform_grid(0.0, 400.0, 4001), [c](double t) { return c * t; });
    double worst = 0.0;
    for (double r : {0.25, 1.0, 2.0, 5.0, 10.0}) worst = std::max(worst, std::abs(karamata_transform(beta, r) - c));
    suite.cases.push_back(make_case("beta=c*t", worst < 1e-8, {{"c", c}, {"max_error", worst}}));
  } catch (const std::exception& ex) {
    suite.cases.push_back(error_case("beta=c*t", ex));
  }
  const double tol = pick_tol(options, 1e-3);
  try {
    std::vector<double> grid{0.0};
    for (double t : geometric_grid(1e-8, 1e7, 6001)) grid.push_back(t);
    const BetaFunction beta = make_beta(grid, [](double t) { return t + std::sqrt(t); });
    const KaramataReport r = karamata_compare(beta);
    const double v = r.transform_limit.central();
    suite.cases.push_back(make_case("beta=t+sqrt(t)", r.transform_limit.converged && std::abs(v - 1.0) <= tol,
                                    {{"transform_limit", v},
                                     {"ratio_limit", r.ratio_limit.central()},
                                     {"distance", r.distance}}));
  } catch (const std::exception& ex) {
    suite.cases.push_back(error_case("beta=t+sqrt(t)", ex));
  }
  try {
    const CorpusMember m = gen_spectrum("harmonic", {});
    const BetaFunction beta = beta_from_heat(m.profile, 1.0, 2.0, 5e5);
    const KaramataReport r = karamata_compare(beta);
    const double expected = std::sqrt(M_PI) / 2.0;
    const double v = r.transform_limit.central();
    suite.cases.push_back(make_case("heat beta harmonic", std::abs(v - expected) <= tol,
                                    {{"transform_limit", v},
                                     {"ratio_limit", r.ratio_limit.central()},
                                     {"expected", expected}}));
  } catch (const std::exception& ex) {
    suite.cases.push_back(error_case("heat beta harmonic", ex));
  }
  return suite;
}

CheckSuite check_intertwine(const CheckOptions& options) {
  CheckSuite suite{"intertwine", {}};
  const double tol = pick_tol(options, 1e-6);
  struct Fn {
    std::string name;
    std::function<double(double)> g;       // g(e^v) as a function of v
    std::function<double(double)> mean;    // (1/u)∫_0^u g(e^v) dv
  };
  const std::vector<Fn> fns{
      {"cos(ln t)", [](double v) { return std::cos(v); }, [](double u) { return std::sin(u) / u; }},
      {"1/t", [](double v) { return std::exp(-v); }, [](double u) { return -std::expm1(-u) / u; }},
      {"ln^2 t", [](double v) { return v * v; }, [](double u) { return u * u / 3.0; }},
      {"1/(1+ln t)", [](double v) { return 1.0 / (1.0 + v); }, [](double u) { return std::log1p(u) / u; }},
      {"ln t/t", [](double v) { return v * std::exp(-v); },
       [](double u) { return (1.0 - (1.0 + u) * std::exp(-u)) / u; }},
  };
  const std::vector<double> grid = uniform_grid(0.0, 3.0 * std::log(10.0), 4001);
  for (const Fn& fn : fns) {
    try {
      SampledFunction g{Domain::kHalfLine, grid, {}};
      for (double u : grid) g.values.push_back(fn.g(u));
      const SampledFunction m = apply_transform(g, Transform::kLogCesaro);
      const SampledFunction lhl = apply_transform(
          apply_transform(apply_transform(g, Transform::kLogInverse), Transform::kCesaro), Transform::kLog);
      double intertwine = 0.0;
      double oracle = 0.0;
      for (std::size_t i = 0; i < m.grid.size(); ++i) {
        intertwine = std::max(intertwine, std::abs(lhl.values[i] - m.values[i]));
        if (m.grid[i] > 0.0) oracle = std::max(oracle, std::abs(m.values[i] - fn.mean(m.grid[i])));
      }
      const bool pass = lhl.grid == m.grid && intertwine < tol && oracle < tol;
      suite.cases.push_back(make_case(fn.name, pass, {{"sup_LHLinv_minus_M", intertwine}, {"sup_M_minus_closed_form", oracle}}));
    } catch (const std::exception& ex) {
      suite.cases.push_back(error_case(fn.name, ex));
    }
  }
  return suite;
}

CheckSuite check_holder(const CheckOptions& options) {
  using namespace rearrange;
  CheckSuite suite{"holder", {}};
  Rng rng(options.seed + 1);
  std::size_t violations = 0;
  std::size_t checked = 0;
  double worst = -kInf;
  for (int pair = 0; pair < 200; ++pair) {
    const StepFunction f = random_step(rng, 12);
    const StepFunction g = random_step(rng, 12);
    const double p = uniform(rng, 1.05, 5.0);
    const double q = p / (p - 1.0);
    const StepFunction fg = decreasing_rearrangement(pointwise_product(f, g));
    const StepFunction fp = pointwise_power(decreasing_rearrangement(f), p);
    const StepFunction gq = pointwise_power(decreasing_rearrangement(g), q);
    std::vector<double> kinks;
    for (const StepFunction* h : {&fg, &fp, &gq}) kinks.insert(kinks.end(), h->log_breakpoints().begin(), h->log_breakpoints().end());
    std::sort(kinks.begin(), kinks.end());
    kinks.erase(std::unique(kinks.begin(), kinks.end()), kinks.end());
    for (double u : kinks) {
      const double lhs = partial_integral_log(fg, u);
      const double rhs = std::pow(partial_integral_log(fp, u), 1.0 / p) * std::pow(partial_integral_log(gq, u), 1.0 / q);
      ++checked;
      worst = std::max(worst, lhs - rhs);
      if (lhs > rhs * (1.0 + 1e-12) + 1e-14) ++violations;
    }
  }
  suite.cases.push_back(make_case("200 random pairs", violations == 0,
                                  {{"breakpoints_checked", static_cast<double>(checked)},
                                   {"violations", static_cast<double>(violations)},
                                   {"worst_excess", worst}}));
  return suite;
}

CheckSuite check_galois(const CheckOptions& options) {
  using namespace rearrange;
  CheckSuite suite{"galois", {}};
  Rng rng(options.seed + 2);
  std::size_t equi = 0, galois = 0, inverse = 0, sampled = 0;
  for (int k = 0; k < 100; ++k) {
    const StepFunction f = random_step(rng, 20);
    const StepFunction mu = decreasing_rearrangement(f);
    const DistributionCurve lf = distribution_function(f);
    const DistributionCurve lm = distribution_function(mu);
    if (lf.levels != lm.levels || lf.log_measures != lm.log_measures) ++equi;
    const StepFunction back = mu_from_distribution(lf);
    if (back.log_breakpoints() != mu.log_breakpoints() || back.values() != mu.values()) ++inverse;
    const double top = mu.empty() ? 1.0 : mu.values().front() * 1.2 + 0.1;
    const double len = mu.empty() ? 1.0 : std::exp(mu.log_breakpoints().back()) * 1.2;
    for (int j = 0; j < 50; ++j) {
      const double s = uniform(rng, 1e-9, len);
      const double t = uniform(rng, 0.0, top);
      ++sampled;
      if ((s >= lf.lambda(t)) != (mu.value_at(s) <= t)) ++galois;
    }
  }
  suite.cases.push_back(make_case("equimeasurability", equi == 0, {{"functions", 100}, {"violations", static_cast<double>(equi)}}));
  suite.cases.push_back(make_case("mu_from_distribution inverse", inverse == 0,
                                  {{"functions", 100}, {"violations", static_cast<double>(inverse)}}));
  suite.cases.push_back(make_case("galois connection", galois == 0,
                                  {{"samples", static_cast<double>(sampled)}, {"violations", static_cast<double>(galois)}}));

  // kinks versus a dense brute-force scan, on random pairs and on averaged pairs y ≺≺ x
  std::size_t disagreements = 0, holds = 0;
  for (int k = 0; k < 100; ++k) {
    const StepFunction x = decreasing_rearrangement(random_step(rng, 10));
    StepFunction y = decreasing_rearrangement(random_step(rng, 10));
    if (k % 2 == 0 && x.size() >= 2) {
      std::vector<double> v = x.values();
      for (std::size_t i = 0; i + 1 < v.size(); i += 2) {
        const double a = std::exp(x.log_piece_length(i)), b = std::exp(x.log_piece_length(i + 1));
        v[i] = v[i + 1] = (a * v[i] + b * v[i + 1]) / (a + b);
      }
      y = decreasing_rearrangement(StepFunction(x.log_breakpoints(), v));
    }
    const SubmajorizationResult r = submajorization_leq(y, x);
    holds += r.holds;
    double hi = 0.0;
    for (const StepFunction* h : {&x, static_cast<const StepFunction*>(&y)}) {
      if (!h->empty()) hi = std::max(hi, h->log_breakpoints().back());
    }
    bool brute = true;
    for (double u : uniform_grid(-8.0, hi + 1.0, 4000)) {
      if (partial_integral_log(y, u) > partial_integral_log(x, u) + 1e-12) brute = false;
    }
    for (const StepFunction* h : {&x, static_cast<const StepFunction*>(&y)}) {
      for (double u : h->log_breakpoints()) {
        if (partial_integral_log(y, u) > partial_integral_log(x, u) + 1e-12) brute = false;
      }
    }
    if (brute != r.holds) ++disagreements;
  }
  suite.cases.push_back(make_case("submajorization at kinks", disagreements == 0,
                                  {{"pairs", 100}, {"holds", static_cast<double>(holds)},
                                   {"disagreements", static_cast<double>(disagreements)}}));
  return suite;
}

CheckSuite check_norms(const CheckOptions& options) {
  CheckSuite suite{"norms", {}};
  Rng rng(options.seed + 3);
  struct Norm {
    std::string name;
    std::function<double(const Profile&)> eval;
    double rel_tol;
  };
  const std::vector<Norm> norms{
      {"marcinkiewicz_psi1", [](const Profile& x) { return marcinkiewicz_norm(x, PsiFunction::psi1()).value; }, 1e-12},
      {"marcinkiewicz_psi2", [](const Profile& x) { return marcinkiewicz_norm(x, PsiFunction::psi_p(2.0)).value; }, 1e-12},
      {"log_average", [](const Profile& x) { return log_average_norm(x).value; }, 1e-12},
      {"quasinorm_psi1", [](const Profile& x) { return quasinorm_F(x, PsiFunction::psi1()).value; }, 1e-12},
      {"small_ideal_constant", [](const Profile& x) { return small_ideal_constant(x).value; }, 1e-12},
      {"z1", [](const Profile& x) { return z1_seminorm(x).value; }, 1e-6},
      {"zp_plus_q2", [](const Profile& x) { return zp_seminorm(x, 2.0).plus.value; }, 1e-6},
  };
  std::vector<std::pair<Profile, Profile>> pairs;  // x <= y pointwise
  for (int k = 0; k < 6; ++k) {
    const Spectrum s = random_spectrum(rng, 1.0, 1.5);
    std::vector<double> bump(s.head().size());
    for (double& b : bump) b = uniform(rng, 0.0, 0.5);
    std::sort(bump.begin(), bump.end(), std::greater<>());
    std::vector<double> head = s.head();
    for (std::size_t i = 0; i < head.size(); ++i) head[i] += bump[i];
    pairs.emplace_back(Profile(s), Profile(Spectrum(head, s.tail(), "bumped")));
  }
  pairs.emplace_back(gen_spectrum("harmonic", {}).profile, gen_spectrum("harmonic", {}).profile.scaled(1.25));
  pairs.emplace_back(gen_spectrum("small_ideal", {}).profile, gen_spectrum("harmonic", {}).profile);
  pairs.emplace_back(gen_spectrum("power", {"1.5"}).profile, gen_spectrum("power", {"2"}).profile);
  pairs.emplace_back(gen_spectrum("power", {"2"}).profile, gen_spectrum("power", {"2"}).profile.scaled(1.2));
  pairs.emplace_back(gen_spectrum("counterexample_z", {"30"}).profile,
                     gen_spectrum("counterexample_z", {"30"}).profile.scaled(1.5));
  for (const Norm& n : norms) {
    std::size_t homog = 0, mono = 0;
    double worst_homog = 0.0;
    // a divergent seminorm is +∞
    auto eval = [&](const Profile& p) {
      try {
        return n.eval(p);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::kDivergent) return kInf;
        throw;
      }
    };
    for (const auto& [x, y] : pairs) {
      try {
        const double vx = eval(x);
        const double vy = eval(y);
        for (double c : {0.5, 3.0}) {
          const double vc = eval(x.scaled(c));
          const double err =
              std::isinf(vx) && std::isinf(vc) ? 0.0 : std::abs(vc - c * vx) / std::max(1.0, c * std::abs(vx));
          worst_homog = std::max(worst_homog, err);
          if (!(err <= n.rel_tol)) ++homog;
        }
        if (vx > vy + n.rel_tol * std::max(1.0, std::abs(vy))) ++mono;
      } catch (const std::exception&) {
        ++homog;
      }
    }
    suite.cases.push_back(make_case(n.name, homog == 0 && mono == 0,
                                    {{"pairs", static_cast<double>(pairs.size())},
                                     {"homogeneity_violations", static_cast<double>(homog)},
                                     {"worst_error", worst_homog},
                                     {"monotonicity_violations", static_cast<double>(mono)}}));
  }
  return suite;
}

}  // namespace singtrace
