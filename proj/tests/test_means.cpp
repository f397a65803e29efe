#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "singtrace/checks.hpp"
#include "singtrace/corpus.hpp"
#include "singtrace/error.hpp"
#include "singtrace/means.hpp"
#include "singtrace/spaces.hpp"

using namespace singtrace;

namespace {

SampledFunction sample(Domain d, double lo, double hi, std::size_t n, const std::function<double(double)>& f) {
  SampledFunction s{d, uniform_grid(lo, hi, n), {}};
  for (double x : s.grid) s.values.push_back(f(x));
  return s;
}

Profile harmonic() { return Profile(Spectrum({1.0}, PowerTail{1.0, 1.0}, "harmonic")); }

}  // namespace

TEST_SUITE("means") {
  TEST_CASE("constants are fixed points") {
    const SampledFunction c = sample(Domain::kRealLine, 0.0, 10.0, 101, [](double) { return 2.5; });
    const SampledFunction h = apply_transform(c, Transform::kCesaro);
    for (double v : h.values) CHECK(v == doctest::Approx(2.5).epsilon(1e-15));
    const SampledFunction g = sample(Domain::kHalfLine, 0.0, 10.0, 101, [](double) { return -1.0; });
    for (double v : apply_transform(g, Transform::kLogCesaro).values) CHECK(v == doctest::Approx(-1.0).epsilon(1e-15));
  }

  TEST_CASE("domain tags are enforced") {
    const SampledFunction r = sample(Domain::kRealLine, 0.0, 1.0, 11, [](double x) { return x; });
    const SampledFunction h = sample(Domain::kHalfLine, 0.0, 1.0, 11, [](double x) { return x; });
    CHECK_THROWS_AS(apply_transform(r, Transform::kLogCesaro), Error);
    CHECK_THROWS_AS(apply_transform(h, Transform::kCesaro), Error);
    CHECK_THROWS_AS(apply_transform(h, Transform::kTranslation, 1.0), Error);
    CHECK_THROWS_AS(apply_transform(r, Transform::kPower, 2.0), Error);
    CHECK_THROWS_AS(apply_transform(h, Transform::kLog), Error);
    CHECK_THROWS_AS(apply_transform(r, Transform::kDilation, -1.0), Error);
  }

  TEST_CASE("resampling transforms") {
    const SampledFunction f = sample(Domain::kRealLine, -5.0, 5.0, 1001, [](double x) { return x * x; });
    const SampledFunction t = apply_transform(f, Transform::kTranslation, 1.0);
    for (std::size_t i = 0; i < t.grid.size(); ++i) {
      const double x = t.grid[i];
      CHECK(t.values[i] == doctest::Approx((x + 1.0) * (x + 1.0)).epsilon(1e-4));
    }
    const SampledFunction d = apply_transform(f, Transform::kDilation, 2.0);
    for (std::size_t i = 0; i < d.grid.size(); ++i) {
      CHECK(d.values[i] == doctest::Approx(d.grid[i] * d.grid[i] / 4.0).epsilon(1e-4));
    }
    const SampledFunction g = sample(Domain::kHalfLine, 0.0, 4.0, 401, [](double u) { return u; });
    const SampledFunction p = apply_transform(g, Transform::kPower, 2.0);
    for (std::size_t i = 0; i < p.grid.size(); ++i) CHECK(p.values[i] == doctest::Approx(2.0 * p.grid[i]).epsilon(1e-12));
  }

  TEST_CASE("log conjugation of H is M") {
    const CheckSuite s = check_intertwine();
    for (const CheckCase& c : s.cases) {
      INFO(c.name);
      CHECK(c.pass);
    }
  }

  TEST_CASE("limit of a constant") {
    const SampledFunction g = sample(Domain::kHalfLine, 1.0, 40.0, 500, [](double) { return 3.0; });
    const LimitEstimate e = limit_estimate(g);
    CHECK(e.converged);
    REQUIRE(e.value.has_value());
    CHECK(*e.value == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(e.width() == doctest::Approx(0.0).epsilon(1e-12));
  }

  TEST_CASE("harmonic Dixmier curve") {
    SampledFunction g{Domain::kHalfLine, limit_log_grid(40.0, 500), {}};
    for (double u : g.grid) g.values.push_back(1.0 + oracle::kGammaEuler / u);
    const LimitEstimate e = limit_estimate(g);
    CHECK(e.converged);
    CHECK(*e.value == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(e.liminf <= *e.value);
    CHECK(*e.value <= e.limsup);
  }

  TEST_CASE("closed-form oscillating mean has a band of width sqrt(2)") {
    SampledFunction g{Domain::kHalfLine, limit_log_grid(7.3e5, 4000), {}};
    for (double u : g.grid) g.values.push_back(oracle::oscillating_mean(u));
    const LimitEstimate e = limit_estimate(g);
    CHECK_FALSE(e.converged);
    CHECK_FALSE(e.value.has_value());
    CHECK(e.liminf == doctest::Approx(2.0 - std::sqrt(0.5)).epsilon(1e-3));
    CHECK(e.limsup == doctest::Approx(2.0 + std::sqrt(0.5)).epsilon(1e-3));
  }

  TEST_CASE("short grids are rejected") {
    const SampledFunction g = sample(Domain::kHalfLine, 1.0, 3.0, 50, [](double) { return 1.0; });
    try {
      limit_estimate(g);
      FAIL("expected kGridTooShort");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kGridTooShort);
    }
  }

  TEST_CASE("dilation does not move a converged limit") {
    SampledFunction g{Domain::kHalfLine, limit_log_grid(1e4, 2000), {}};
    for (double u : g.grid) g.values.push_back(2.0 - 1.5 / u);
    const LimitEstimate base = limit_estimate(g);
    REQUIRE(base.converged);
    CHECK(*base.value == doctest::Approx(2.0).epsilon(1e-6));
    for (double a : {0.5, 3.0, 100.0}) {
      const LimitEstimate moved = limit_estimate(apply_transform(g, Transform::kDilation, a));
      REQUIRE(moved.converged);
      CHECK(std::abs(*moved.value - *base.value) <= base.tolerance);
    }
  }

  TEST_CASE("M does not enlarge the tail band") {
    std::vector<std::function<double(double)>> fns{
        [](double u) { return std::sin(u); },
        [](double u) { return std::sin(std::log(u + 1.0)) + 0.1 * std::cos(3.0 * u); },
        [](double u) { return 1.0 / (1.0 + u); },
    };
    for (const auto& f : fns) {
      const SampledFunction g = sample(Domain::kHalfLine, 0.0, 200.0, 20001, f);
      const SampledFunction m = apply_transform(g, Transform::kLogCesaro);
      double glo = INFINITY, ghi = -INFINITY;
      for (double v : g.values) {
        glo = std::min(glo, v);
        ghi = std::max(ghi, v);
      }
      for (double v : m.values) {
        CHECK(v >= glo - 1e-9);
        CHECK(v <= ghi + 1e-9);
      }
    }
  }

  TEST_CASE("Dixmier estimates") {
    const LimitEstimate h = dixmier_estimate(harmonic(), PsiFunction::psi1());
    CHECK(h.converged);
    CHECK(*h.value == doctest::Approx(1.0).epsilon(1e-3));

    const Profile z = gen_spectrum("counterexample_z", {"30"}).profile;
    const LimitEstimate ez = dixmier_estimate(z, PsiFunction::log1p());
    CHECK(ez.converged);
    CHECK(*ez.value == doctest::Approx(0.5 / std::log(2.0)).epsilon(1e-2));

    const LimitEstimate osc = dixmier_estimate(gen_spectrum("oscillating", {}).profile, PsiFunction::psi1());
    CHECK_FALSE(osc.converged);
    CHECK(osc.width() == doctest::Approx(std::sqrt(2.0)).epsilon(0.1));

    try {
      dixmier_estimate(Profile(Spectrum({1.0}, PowerTail{1.0, 0.5})), PsiFunction::psi1());
      FAIL("expected kHypothesis");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kHypothesis);
    }
  }

  TEST_CASE("three Dixmier expressions agree") {
    const TripleReport h = prop_equivalence_triple(harmonic(), PsiFunction::psi1());
    CHECK(h.max_distance < 1e-3);
    CHECK(h.flags_agree);
    CHECK(*h.weighted_mean.value == doctest::Approx(1.0).epsilon(1e-3));

    const TripleReport f = prop_equivalence_triple(Profile(Spectrum({3.0, 2.0, 1.0})), PsiFunction::psi1());
    CHECK(f.flags_agree);
    for (const LimitEstimate* e : {&f.weighted_mean, &f.truncated, &f.truncated_window}) {
      REQUIRE(e->value.has_value());
      CHECK(*e->value == doctest::Approx(0.0).epsilon(1e-3));
    }

    const TripleReport z = prop_equivalence_triple(gen_spectrum("counterexample_z", {"30"}).profile, PsiFunction::log1p());
    CHECK(z.max_distance < 1e-2);
    CHECK(z.flags_agree);
    for (const LimitEstimate* e : {&z.weighted_mean, &z.truncated, &z.truncated_window}) {
      CHECK(e->central() == doctest::Approx(0.5 / std::log(2.0)).epsilon(1e-2));
    }

    try {
      prop_equivalence_triple(harmonic(), PsiFunction::psi_p(2.0));
      FAIL("expected kHypothesis");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kHypothesis);
    }
  }
}
