#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "singtrace/checks.hpp"
#include "singtrace/corpus.hpp"
#include "singtrace/error.hpp"
#include "singtrace/spaces.hpp"
#include "singtrace/step_function.hpp"

using namespace singtrace;
using namespace singtrace::rearrange;

namespace {

std::vector<double> unit(std::initializer_list<double> v) { return std::vector<double>(v); }

StepFunction random_step(std::mt19937_64& rng, int pieces) {
  std::uniform_real_distribution<double> val(0.0, 5.0), len(0.1, 2.0);
  std::vector<double> v(pieces), l(pieces);
  for (int i = 0; i < pieces; ++i) {
    v[i] = std::round(val(rng) * 4.0) / 4.0;
    l[i] = len(rng);
  }
  return StepFunction::from_lengths(v, l);
}

}  // namespace

TEST_SUITE("rearrange") {
  TEST_CASE("sorting unit pieces") {
    const auto v = unit({3, 1, 2});
    const StepFunction r = decreasing_rearrangement(StepFunction::unit_pieces(v));
    REQUIRE(r.size() == 3);
    CHECK(r.values() == unit({3, 2, 1}));
    CHECK(std::exp(r.log_breakpoints()[2]) == doctest::Approx(3.0));
    CHECK(r.rearranged());
  }

  TEST_CASE("indicator moves to the origin") {
    const StepFunction f({std::log(2.0), std::log(5.0)}, {0.0, 1.0});
    const StepFunction r = decreasing_rearrangement(f);
    REQUIRE(r.size() == 1);
    CHECK(r.values()[0] == 1.0);
    CHECK(std::exp(r.log_breakpoints()[0]) == doctest::Approx(3.0));
  }

  TEST_CASE("rearrangement equals the re-pack oracle") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
      const StepFunction f = random_step(rng, 50);
      // oracle: total length per distinct positive value, laid out in descending order
      std::map<double, double, std::greater<>> mass;
      for (std::size_t i = 0; i < f.size(); ++i) {
        if (f.values()[i] > 0.0) mass[f.values()[i]] += std::exp(f.log_piece_length(i));
      }
      const StepFunction r = decreasing_rearrangement(f);
      REQUIRE(r.size() == mass.size());
      double end = 0.0;
      std::size_t j = 0;
      for (const auto& [value, length] : mass) {
        end += length;
        CHECK(r.values()[j] == value);
        CHECK(std::exp(r.log_breakpoints()[j]) == doctest::Approx(end).epsilon(1e-12));
        ++j;
      }
    }
  }

  TEST_CASE("distribution function examples") {
    const DistributionCurve ind = distribution_function(StepFunction({std::log(3.0)}, {1.0}));
    CHECK(ind.lambda(0.5) == doctest::Approx(3.0));
    CHECK(ind.lambda(1.0) == 0.0);
    CHECK(ind.lambda(1.5) == 0.0);

    const DistributionCurve d = distribution_function(StepFunction::unit_pieces(unit({3, 2, 1})));
    CHECK(d.lambda(0.5) == doctest::Approx(3.0));
    CHECK(d.lambda(1.5) == doctest::Approx(2.0));
    CHECK(d.lambda(2.5) == doctest::Approx(1.0));
    CHECK(d.lambda(3.5) == 0.0);
  }

  TEST_CASE("counterexample level measures") {
    const auto member = gen_spectrum("counterexample_z", {"5"});
    const StepFunction& z = std::get<StepFunction>(member.data);
    const DistributionCurve d = distribution_function(z);
    // z equals 1/2 on the first dyadic piece, so only the piece [0, 1) lies above 1/2
    CHECK(d.log_lambda(0.5) == 0.0);
    for (int n = 2; n <= 4; ++n) {
      // λ at level 1/t with t = 2^{n²}
      const double level = std::exp2(-static_cast<double>(n * n));
      CHECK(d.log_lambda(level) == doctest::Approx(n * n * std::log(2.0)).epsilon(1e-14));
    }
  }

  TEST_CASE("generalized inverse") {
    const DistributionCurve ind = distribution_function(StepFunction({std::log(3.0)}, {1.0}));
    const StepFunction mu = mu_from_distribution(ind);
    REQUIRE(mu.size() == 1);
    CHECK(mu.values()[0] == 1.0);
    CHECK(std::exp(mu.log_breakpoints()[0]) == doctest::Approx(3.0));

    CHECK(mu_from_distribution(DistributionCurve{}).empty());

    std::mt19937_64 rng(11);
    for (int k = 0; k < 100; ++k) {
      const StepFunction f = random_step(rng, 15);
      const StepFunction a = mu_from_distribution(distribution_function(f));
      const StepFunction b = decreasing_rearrangement(f);
      REQUIRE(a.size() == b.size());
      CHECK(a.values() == b.values());
      for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.log_breakpoints()[i] == doctest::Approx(b.log_breakpoints()[i]).epsilon(1e-13));
      }
    }
  }

  TEST_CASE("partial integrals") {
    const StepFunction f = StepFunction::unit_pieces(unit({3, 2, 1}));
    CHECK(partial_integral(f, 2.0) == doctest::Approx(5.0));
    CHECK(partial_integral(f, INFINITY) == doctest::Approx(6.0));
    CHECK(partial_integral(StepFunction::unit_pieces(unit({0, 0})), 1.5) == 0.0);
    CHECK(partial_integral(StepFunction({0.0}, {1.0}, 0.5), INFINITY) == INFINITY);

    const auto member = gen_spectrum("counterexample_z", {"40"});
    const StepFunction& z = std::get<StepFunction>(member.data);
    CHECK(partial_integral_log(z, 9.0 * std::log(2.0)) == doctest::Approx(6.15625).epsilon(1e-15));
    // t = 2^{900}: the closed form 1 + Σ n(1 − 2^{−(2n−1)}) stays finite
    double expected = 1.0;
    for (int n = 1; n <= 30; ++n) expected += n * (1.0 - std::exp2(-(2.0 * n - 1.0)));
    CHECK(partial_integral_log(z, 900.0 * std::log(2.0)) == doctest::Approx(expected).epsilon(1e-13));
  }

  TEST_CASE("partial integral is concave for rearranged input") {
    std::mt19937_64 rng(3);
    for (int k = 0; k < 50; ++k) {
      const StepFunction r = decreasing_rearrangement(random_step(rng, 12));
      double prev_slope = INFINITY;
      double prev_t = 0.0;
      double prev_i = 0.0;
      for (double u : r.log_breakpoints()) {
        const double t = std::exp(u);
        const double i = partial_integral(r, t);
        const double slope = (i - prev_i) / (t - prev_t);
        CHECK(i >= prev_i);
        CHECK(slope <= prev_slope * (1.0 + 1e-12));
        prev_slope = slope;
        prev_t = t;
        prev_i = i;
      }
    }
  }

  TEST_CASE("truncated trace") {
    const Profile h(Spectrum({1.0}, PowerTail{1.0, 1.0}));
    CHECK(truncated_trace(h, 1.0 / 10.5) == doctest::Approx(oracle::harmonic_number(10)).epsilon(1e-14));
    CHECK(truncated_trace(h, 1.0) == 0.0);
    CHECK(truncated_trace(h, 2.0) == 0.0);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 100; ++k) {
      std::vector<double> head(1 + static_cast<int>(u(rng) * 40));
      for (double& v : head) v = u(rng) * 3.0;
      std::sort(head.begin(), head.end(), std::greater<>());
      const double a = u(rng) * 3.0;
      double direct = 0.0;
      for (double v : head) direct += v > a ? v : 0.0;
      CHECK(truncated_trace(Profile(Spectrum(head)), a) == doctest::Approx(direct).epsilon(1e-13));
    }
  }

  TEST_CASE("submajorization examples") {
    const StepFunction x = StepFunction::unit_pieces(unit({2, 0}));
    const StepFunction y = StepFunction::unit_pieces(unit({1, 1}));
    CHECK(submajorization_leq(x, x).holds);
    const SubmajorizationResult r = submajorization_leq(x, y);
    CHECK_FALSE(r.holds);
    REQUIRE(r.witness_log_t.has_value());
    CHECK(*r.witness_log_t == doctest::Approx(0.0));
    CHECK(submajorization_leq(y, x).holds);
  }

  TEST_CASE("pointwise product") {
    const StepFunction f = StepFunction::unit_pieces(unit({3, 2}));
    const StepFunction p = pointwise_product(f, StepFunction::unit_pieces(unit({1, 2})));
    CHECK(p.values() == unit({3, 4}));
    CHECK(partial_integral(pointwise_product(f, StepFunction::unit_pieces(unit({0, 0}))), INFINITY) == 0.0);
    const StepFunction cut = pointwise_product(f, StepFunction({std::log(1.5)}, {1.0}));
    CHECK(partial_integral(cut, INFINITY) == doctest::Approx(4.0));
  }

  TEST_CASE("property suites") {
    for (const char* name : {"galois", "holder"}) {
      const CheckSuite s = run_check(name);
      for (const CheckCase& c : s.cases) {
        INFO(name << ": " << c.name << " " << c.note);
        CHECK(c.pass);
      }
    }
  }

  TEST_CASE("invalid input") {
    CHECK_THROWS_AS(StepFunction({1.0, 0.5}, {1.0, 1.0}), Error);
    CHECK_THROWS_AS(StepFunction({0.0}, {-1.0}), Error);
    CHECK_THROWS_AS(StepFunction({0.0}, {NAN}), Error);
  }
}
