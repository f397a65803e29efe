#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "singtrace/corpus.hpp"
#include "singtrace/error.hpp"
#include "singtrace/zeta.hpp"

using namespace singtrace;

namespace {

Profile harmonic() { return Profile(Spectrum({1.0}, PowerTail{1.0, 1.0}, "harmonic")); }
Profile root() { return Profile(Spectrum({1.0}, PowerTail{1.0, 0.5}, "power:2")); }

}  // namespace

TEST_SUITE("zeta") {
  TEST_CASE("zeta values") {
    const Bounded basel = zeta_value(harmonic(), 2.0);
    CHECK(basel.value == doctest::Approx(oracle::kPi * oracle::kPi / 6.0).epsilon(1e-10));
    CHECK(std::abs(basel.value - 1.644934) < 1e-6);
    CHECK(basel.error >= 0.0);
    CHECK(basel.error < 1e-8);

    CHECK(zeta_value(Profile(Spectrum({3.0})), 2.0).value == doctest::Approx(9.0).epsilon(1e-15));

    const Bounded r = zeta_value(root(), 3.0);
    CHECK(r.value == doctest::Approx(oracle::riemann_zeta(1.5)).epsilon(1e-10));
    CHECK(r.value == doctest::Approx(2.612375).epsilon(1e-6));

    // step functions integrate piecewise in closed form
    const StepFunction f({std::log(2.0), std::log(5.0)}, {2.0, 1.0});
    CHECK(zeta_value(Profile(f), 3.0).value == doctest::Approx(8.0 * 2.0 + 3.0).epsilon(1e-14));
  }

  TEST_CASE("divergent exponents are rejected") {
    for (double s : {0.5, 1.0, 1.0 + 1e-9}) {
      try {
        zeta_value(harmonic(), s);
        FAIL("expected kDivergent");
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::kDivergent);
      }
    }
    CHECK_THROWS_AS(zeta_value(root(), 2.0), Error);
    CHECK(std::isfinite(zeta_value(Profile(Spectrum({1.0, 0.5})), 0.01).value));
  }

  TEST_CASE("zeta limits") {
    const ZetaLimit h = zeta_limit(harmonic(), 1.0);
    CHECK(h.estimate.converged);
    CHECK(*h.estimate.value == doctest::Approx(1.0).epsilon(1e-3));
    REQUIRE(h.psi1_norm.has_value());
    CHECK(std::isfinite(h.psi1_norm->value));
    for (std::size_t i = 0; i < h.curve.r_grid.size(); ++i) {
      const double r = h.curve.r_grid[i];
      CHECK(h.curve.values[i] == doctest::Approx(oracle::riemann_zeta(1.0 + 1.0 / r) / r).epsilon(1e-9));
    }

    const ZetaLimit two = zeta_limit(root(), 2.0);
    CHECK(*two.estimate.value == doctest::Approx(2.0).epsilon(1e-3));

    const ZetaLimit z = zeta_limit(gen_spectrum("counterexample_z", {"30"}).profile, 1.0);
    CHECK(z.estimate.central() == doctest::Approx(0.5 / std::log(2.0)).epsilon(1e-2));
    const double r = z.curve.r_grid.back();
    CHECK(z.curve.values.back() == doctest::Approx(oracle::counterexample_zeta(1.0 + 1.0 / r) / r).epsilon(1e-9));
  }

  TEST_CASE("residue samples equal zeta-limit samples") {
    for (const Profile& x : {harmonic(), root()}) {
      const double p = x.power_abscissa();
      const ZetaLimit a = zeta_limit(x, p);
      const ZetaLimit b = residue_estimate(x, p);
      CHECK(a.curve.values == b.curve.values);
      CHECK(a.curve.s_grid == b.curve.s_grid);
    }
    CHECK(*residue_estimate(root(), 2.0).estimate.value == doctest::Approx(2.0).epsilon(1e-3));
  }

  TEST_CASE("zeta against p times Dixmier") {
    const Theorem47Report two = theorem47_check(root(), 2.0);
    CHECK(two.pass);
    CHECK_FALSE(two.band_only);
    CHECK(*two.scaled_dixmier.value == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(two.convexification_gap < 1e-12);

    const Theorem47Report one = theorem47_check(harmonic(), 1.0);
    CHECK(one.pass);
    CHECK(one.convexification_gap < 1e-12);

    const Theorem47Report fin = theorem47_check(Profile(Spectrum({2.0, 1.0})), 1.0);
    CHECK(fin.pass);
    CHECK(fin.zeta.estimate.central() == doctest::Approx(0.0).epsilon(1e-3));
    CHECK(fin.dixmier.central() == doctest::Approx(0.0).epsilon(1e-3));
  }

  TEST_CASE("zeta is non-increasing in s when values are at most 1") {
    double prev = INFINITY;
    for (double s = 1.05; s < 6.0; s += 0.25) {
      const double v = zeta_value(harmonic(), s).value;
      CHECK(v <= prev);
      prev = v;
    }
  }

  TEST_CASE("finite zeta limit bounds the weak-L1 norm and log-average band") {
    for (const char* name : {"harmonic", "small_ideal"}) {
      const Profile x = gen_spectrum(name, {}).profile;
      const ZetaLimit z = zeta_limit(x, 1.0);
      REQUIRE(z.estimate.converged);
      CHECK(std::isfinite(marcinkiewicz_norm(x, PsiFunction::psi1()).value));
      const LimitEstimate avg = dixmier_estimate(x, PsiFunction::log1p());
      CHECK(avg.limsup <= std::exp(1.0) * *z.estimate.value + 1e-3);
    }
  }
}
