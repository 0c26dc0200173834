#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <random>

#include "supercal/medium.hpp"

using namespace supercal;
using rational = boost::multiprecision::cpp_rational;

namespace {

// Exact-rational oracle for the iteration s_i = s_{i-1}(1 + p/n) - (2 - p).
std::vector<rational> rational_moser(int n, rational p, rational s0, int cap) {
  const rational a = 1 + p / n;
  const rational b = 2 - p;
  std::vector<rational> steps{s0};
  rational s = s0;
  for (int i = 0; i < cap && s < 1; ++i) {
    s = s * a - b;
    steps.push_back(s);
  }
  return steps;
}

}  // namespace

TEST_CASE("medium validation") {
  CHECK_THROWS_AS(Medium(0, 1.5), Error);
  CHECK_THROWS_AS(Medium(2, 1.0), Error);
  CHECK_THROWS_AS(Medium(2, 0.5), Error);
  CHECK_NOTHROW(Medium(1, 1.0000001));
}

TEST_CASE("regime classification") {
  CHECK(classify_regime(Medium(2, 1.5)) == Regime::SupercriticalFast);
  CHECK(classify_regime(Medium(2, 3.0)) == Regime::SlowDiffusion);
  CHECK(classify_regime(Medium(3, 1.4)) == Regime::CriticalOrSubcritical);
  CHECK(classify_regime(Medium(2, 2.0)) == Regime::Heat);
  // Exactly on the critical boundary 2n/(n+1).
  CHECK(classify_regime(Medium(3, 1.5)) == Regime::CriticalOrSubcritical);
  CHECK(classify_regime(Medium(1, 1.0 + 1e-12)) == Regime::SupercriticalFast);
}

TEST_CASE("exponent table values") {
  const ExponentTable t = exponent_table(Medium(2, 1.5));
  CHECK(t.lambda == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(t.q_barenblatt == doctest::Approx(1.25).epsilon(1e-12));
  CHECK(t.q_gradient == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
  CHECK(t.s_critical == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(t.g_critical == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(t.sobolev_q(2.0) == doctest::Approx(3.0).epsilon(1e-12));

  const ExponentTable u = exponent_table(Medium(3, 1.8));
  CHECK(u.lambda == doctest::Approx(1.2).epsilon(1e-12));
  CHECK(u.q_barenblatt == doctest::Approx(1.4).epsilon(1e-12));
  CHECK(u.q_gradient == doctest::Approx(1.05).epsilon(1e-12));
  CHECK(u.s_critical == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  const ExponentTable v = exponent_table(Medium(1, 1.5));
  CHECK(v.lambda == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(v.s_critical == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("supercritical iff lambda positive and p below 2") {
  for (int n = 1; n <= 5; ++n) {
    for (int k = 1; k < 200; ++k) {
      const double p = 1.0 + 0.01 * k;
      const Medium medium(n, p);
      const bool fast = classify_regime(medium) == Regime::SupercriticalFast;
      const bool lam = exponent_table(medium).lambda > 0.0 && p < 2.0;
      CHECK(fast == lam);
    }
  }
}

TEST_CASE("exponent gap shrinks toward the critical p") {
  for (int n = 1; n <= 4; ++n) {
    const double p_crit = 2.0 * n / (n + 1.0);
    double prev_gap = -1.0;
    // Sweep p downward toward the critical value; the gap must decrease.
    for (double p = 1.999; p > p_crit + 1e-6; p -= (p - p_crit) * 0.2) {
      const ExponentTable t = exponent_table(Medium(n, p));
      CHECK(t.s_critical < t.q_barenblatt);
      if (prev_gap >= 0.0) CHECK(t.q_barenblatt - t.s_critical < prev_gap);
      prev_gap = t.q_barenblatt - t.s_critical;
    }
    CHECK(prev_gap < 1e-5);
  }
}

TEST_CASE("s_critical is the fixed point of the iteration map") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> un(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const int n = 1 + static_cast<int>(un(rng) * 5);
    const double p_crit = 2.0 * n / (n + 1.0);
    const double p = p_crit + (2.0 - p_crit) * (0.05 + 0.9 * un(rng));
    const ExponentTable t = exponent_table(Medium(n, p));
    const double mapped = t.s_critical * (1.0 + p / n) - (2.0 - p);
    CHECK(std::abs(mapped - t.s_critical) <= 1e-12);
  }
}

TEST_CASE("moser ladder for n=2 p=1.5 s0=0.7") {
  const MoserTrace trace = moser_sequence(Medium(2, 1.5), 0.7);
  REQUIRE(trace.first_ge_one.has_value());
  CHECK(*trace.first_ge_one == 5);
  REQUIRE(trace.steps.size() == 6);
  CHECK(trace.steps[1] == doctest::Approx(0.725).epsilon(1e-12));
  CHECK(trace.steps[2] == doctest::Approx(0.76875).epsilon(1e-12));

  const auto oracle = rational_moser(2, rational(3, 2), rational(7, 10), 64);
  REQUIRE(oracle.size() == 6);
  for (size_t i = 0; i < oracle.size(); ++i)
    CHECK(std::abs(trace.steps[i] - oracle[i].convert_to<double>()) <= 1e-12);
  CHECK(oracle[5] == rational(12429, 10240));  // = 1.21376953125 exactly
  CHECK(trace.closed_form_check <= 1e-12);
}

TEST_CASE("moser trivial starts") {
  const Medium medium(2, 1.5);
  const MoserTrace at_one = moser_sequence(medium, 1.0);
  CHECK(at_one.first_ge_one == 0);
  CHECK(at_one.steps.size() == 1);

  const double s_star = exponent_table(medium).s_critical;
  const MoserTrace fixed = moser_sequence(medium, s_star);
  CHECK_FALSE(fixed.first_ge_one.has_value());
  for (double s : fixed.steps) CHECK(s == s_star);
}

TEST_CASE("moser errors") {
  const Medium medium(2, 1.5);
  CHECK_THROWS_AS(moser_sequence(medium, 0.5), Error);  // below the fixed point
  try {
    moser_sequence(medium, 0.5);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonIterable);
  }
  try {
    moser_sequence(medium, 0.7, 3);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CapExceeded);
  }
  CHECK_THROWS_AS(moser_sequence(Medium(2, 3.0), 0.7), Error);  // wrong regime
}

TEST_CASE("moser recursion matches closed form on random draws") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> un(0.0, 1.0);
  int checked = 0;
  for (int i = 0; i < 1000; ++i) {
    const int n = 1 + static_cast<int>(un(rng) * 5);
    const double p_crit = 2.0 * n / (n + 1.0);
    const double p = p_crit + (2.0 - p_crit) * (0.02 + 0.96 * un(rng));
    const double s_star = exponent_table(Medium(n, p)).s_critical;
    const double s0 = s_star + 0.01 + (1.2 - s_star - 0.01) * un(rng);
    const MoserTrace trace = moser_sequence(Medium(n, p), s0, 200);
    CHECK(trace.closed_form_check <= 1e-12);
    for (size_t k = 1; k < trace.steps.size(); ++k)
      CHECK(trace.steps[k] > trace.steps[k - 1]);
    ++checked;
  }
  CHECK(checked == 1000);
}
