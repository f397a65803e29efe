#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "singtrace/checks.hpp"
#include "singtrace/corpus.hpp"
#include "singtrace/error.hpp"
#include "singtrace/psi.hpp"
#include "singtrace/spaces.hpp"

using namespace singtrace;

namespace {

const double kLog2 = std::log(2.0);

Profile harmonic() { return Profile(Spectrum({1.0}, PowerTail{1.0, 1.0}, "harmonic")); }
Profile indicator() { return Profile(StepFunction({0.0}, {1.0})); }
Profile zero() { return Profile(Spectrum({0.0})); }

}  // namespace

TEST_SUITE("spaces") {
  TEST_CASE("psi catalog") {
    CHECK(PsiFunction::psi1()(1.0) == doctest::Approx(kLog2).epsilon(1e-15));
    CHECK(PsiFunction::psi1()(0.5) == doctest::Approx(0.5 * kLog2).epsilon(1e-15));
    CHECK(PsiFunction::psi1()(3.0) == doctest::Approx(std::log(4.0)).epsilon(1e-15));
    CHECK(PsiFunction::psi_p(2.0)(4.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(PsiFunction::psi_p(2.0)(0.25) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(PsiFunction::log_sq()(std::exp(1.0) - 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(PsiFunction::psi_p(1.0), Error);
    CHECK_THROWS_AS(make_psi("psi_p:0.5"), Error);
    CHECK_THROWS_AS(make_psi("what"), Error);
    CHECK(make_psi("log2").kind() == PsiKind::kLogSq);
    for (const std::string spec : {"psi1", "psi_p:2", "psi_p:3.5", "log1p", "linear"}) {
      INFO(spec);
      CHECK(check_psi_invariants(make_psi(spec)).empty());
    }
    // ln²(1+t) behaves like t² near 0 and is concave only from t = e − 1 on
    CHECK(check_psi_invariants(PsiFunction::log_sq()).find("concave") != std::string::npos);
  }

  TEST_CASE("weighted mean") {
    const Profile recip = Profile::reciprocal();
    for (double t : {1.0, 2.0, 10.0, 1e6}) {
      CHECK(weighted_mean(recip, PsiFunction::psi1(), t) == doctest::Approx(1.0).epsilon(1e-13));
    }
    const double t = 1e6;
    const double expected = oracle::harmonic_number(1000000) / std::log1p(t);
    CHECK(weighted_mean(harmonic(), PsiFunction::psi1(), t) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(expected == doctest::Approx(1.0418).epsilon(1e-4));
    CHECK(weighted_mean(zero(), PsiFunction::psi1(), 5.0) == 0.0);
  }

  TEST_CASE("marcinkiewicz norm") {
    const SupResult r = marcinkiewicz_norm(Profile::reciprocal(), PsiFunction::psi1());
    CHECK(r.value == doctest::Approx(1.0 / kLog2).epsilon(1e-9));
    CHECK(r.witness_log_t == -INFINITY);
    CHECK(marcinkiewicz_norm(indicator(), PsiFunction::psi1()).value == doctest::Approx(1.0 / kLog2).epsilon(1e-12));
    CHECK(marcinkiewicz_norm(zero(), PsiFunction::psi1()).value == 0.0);
    // 1/n against psi_p(2) is bounded; n^{-1/2} against psi1 is not
    CHECK(std::isfinite(marcinkiewicz_norm(harmonic(), PsiFunction::psi_p(2.0)).value));
    const SupResult div = marcinkiewicz_norm(Profile(Spectrum({1.0}, PowerTail{1.0, 0.5})), PsiFunction::psi1());
    CHECK(div.divergent);
    CHECK(div.value == INFINITY);
  }

  TEST_CASE("quasinorm") {
    const SupResult r = quasinorm_F(Profile::reciprocal(), PsiFunction::linear());
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(quasinorm_F(indicator(), PsiFunction::psi1()).value == doctest::Approx(1.0 / kLog2).epsilon(1e-12));

    // z^{1/2} against psi_2: t·x(t)/ψ(t) at t = 2^{n²} is √n, so the witnesses grow
    const Profile x = gen_spectrum("counterexample_x", {"2", "30"}).profile;
    const SupResult q = quasinorm_F(x, PsiFunction::psi_p(2.0));
    CHECK(q.divergent);
    CHECK(q.value == INFINITY);
    REQUIRE(q.witness_values.size() >= 2);
    for (std::size_t i = 1; i < q.witness_values.size(); ++i) CHECK(q.witness_values[i] > q.witness_values[i - 1]);

    // the exact identity z(2^{n²})·2^{n²} = n at the piece ends
    const Profile z = gen_spectrum("counterexample_z", {"30"}).profile;
    for (int n = 1; n <= 30; ++n) {
      const double u = n * n * kLog2;
      CHECK(std::exp(z.log_value_at_log(u) + u) == doctest::Approx(n).epsilon(1e-12));
    }
  }

  TEST_CASE("fundamental function") {
    for (double t : {0.1, 1.0, 50.0}) CHECK(fundamental_function(PsiFunction::linear(), t) == doctest::Approx(1.0));
    const double t = 1e8;
    CHECK(fundamental_function(PsiFunction::psi1(), t) / (t / std::log1p(t)) == doctest::Approx(1.0).epsilon(1e-9));
    const double e1 = std::exp(1.0) - 1.0;
    CHECK(fundamental_function(PsiFunction::log1p(), e1, 2.0) == doctest::Approx(std::sqrt(e1)).epsilon(1e-12));
    CHECK(std::sqrt(e1) == doctest::Approx(1.3108).epsilon(1e-4));
  }

  TEST_CASE("z1 seminorm") {
    const SeminormReport h = z1_seminorm(harmonic());
    CHECK(h.converged);
    CHECK(h.value == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(h.lo <= h.value);
    CHECK(h.value <= h.hi);
    // raw value at s = 0.01
    const double raw = 0.01 * harmonic().power_integral(1.01).value;
    CHECK(raw == doctest::Approx(0.01 * oracle::riemann_zeta(1.01)).epsilon(1e-10));
    CHECK(raw == doctest::Approx(1.0058).epsilon(1e-4));

    const SeminormReport z = z1_seminorm(gen_spectrum("counterexample_z", {"30"}).profile);
    const double s = 1e-4;
    CHECK(s * oracle::counterexample_series(s) == doctest::Approx(0.5 / kLog2).epsilon(1e-3));
    CHECK(z.value == doctest::Approx(0.5 / kLog2).epsilon(1e-4));

    CHECK(z1_seminorm(Profile(Spectrum({3.0, 2.0, 1.0}))).value == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_THROWS_AS(z1_seminorm(Profile(Spectrum({1.0}, PowerTail{1.0, 0.5}))), Error);
  }

  TEST_CASE("zp seminorm") {
    const Profile h = harmonic();
    const ZpReport one = zp_seminorm(h, 1.0);
    const SeminormReport direct = z1_seminorm(h);
    CHECK(one.plus.value == direct.value);
    CHECK(one.norm.value == direct.value);

    const ZpReport root = zp_seminorm(Profile(Spectrum({1.0}, PowerTail{1.0, 0.5})), 2.0);
    CHECK(root.plus.value == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(root.norm.value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));

    const ZpReport x = zp_seminorm(gen_spectrum("counterexample_x", {"2", "30"}).profile, 2.0);
    CHECK(x.plus.value == doctest::Approx(std::sqrt(0.5 / kLog2)).epsilon(0.05));
    CHECK_THROWS_AS(zp_seminorm(h, 0.5), Error);
  }

  TEST_CASE("psi diagnostics") {
    const PsiDiagnostics d1 = psi_diagnostics(PsiFunction::psi1());
    CHECK(d1.doubling_to_one);
    CHECK(d1.condition_a);
    CHECK(d1.a_curve.front().value == doctest::Approx(1.01).epsilon(1e-3));
    for (const SupResult& c : d1.power_bound) CHECK(std::isfinite(c.value));

    const PsiDiagnostics d2 = psi_diagnostics(PsiFunction::psi_p(2.0));
    REQUIRE(d2.doubling.value.has_value());
    CHECK(*d2.doubling.value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-3));
    CHECK_FALSE(d2.doubling_to_one);

    const PsiDiagnostics dl = psi_diagnostics(PsiFunction::log_sq());
    CHECK(dl.doubling_to_one);
    CHECK(dl.condition_a);
  }

  TEST_CASE("inequality chain, homogeneity and monotonicity") {
    for (const char* name : {"thm44", "norms"}) {
      const CheckSuite s = run_check(name);
      for (const CheckCase& c : s.cases) {
        INFO(name << ": " << c.name << " " << c.note);
        CHECK(c.pass);
      }
    }
  }

  TEST_CASE("weak-L^p membership gives a finite Z_p seminorm") {
    for (const char* p : {"2", "3"}) {
      const Profile x = gen_spectrum("power", {p}).profile;
      const double q = std::stod(p);
      REQUIRE(std::isfinite(quasinorm_F(x, PsiFunction::psi_p(q)).value));
      CHECK(std::isfinite(zp_seminorm(x, q).norm.value));
    }
  }
}
