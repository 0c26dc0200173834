#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "supercal/harnack.hpp"

using namespace supercal;

namespace {

std::vector<double> uniform_times(double t_lo, double t_hi, int count) {
  std::vector<double> times(count);
  for (int k = 0; k < count; ++k) times[k] = t_lo + (t_hi - t_lo) * k / (count - 1);
  return times;
}

const Medium kM2(2, 1.5);

}  // namespace

TEST_CASE("weak harnack probe on constant fields") {
  const SourcePtr constant = make_constant_source(4.0);
  for (double c2 : {0.05, 0.1, 0.5}) {
    HarnackProbe probe;
    probe.x0 = 0.5;
    probe.r = 0.25;
    probe.s = 1.0;
    probe.c2_trial = c2;
    const HarnackReport report = weak_harnack_probe(kM2, *constant, probe);
    CHECK(report.avg == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(report.inf_over_window == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(report.admissible_c1 == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(report.window_hi > report.window_lo);
    CHECK(report.window_lo > probe.s);
  }
}

TEST_CASE("weak harnack constant is scale-stable on the Barenblatt family") {
  const double c = normalize_mass(kM2).c;
  const SourcePtr sbb = make_family_source(SolutionFamily::singular_barenblatt(kM2, c));
  const double lambda = exponent_table(kM2).lambda;  // 0.5

  // Intrinsic rescaling family: r -> 2 r with s so that the average rescales
  // self-similarly (s -> 2^lambda s).
  std::vector<HarnackProbe> probes;
  for (int i = 0; i < 5; ++i) {
    HarnackProbe probe;
    probe.x0 = 0.0;
    probe.r = 0.25 * std::pow(2.0, i);
    probe.s = 1.0 * std::pow(2.0, lambda * i);
    probe.c2_trial = 0.1;
    probes.push_back(probe);
  }
  const SweepResult sweep = constant_sweep(kM2, *sbb, probes);
  CHECK(sweep.min_value > 0.0);
  CHECK(sweep.max_value / sweep.min_value <= 2.0);
  CHECK(sweep.coefficient_of_variation < 0.05);
  for (double v : sweep.values) {
    CHECK(v > 0.0);
    CHECK(v <= 1.05);
  }
}

TEST_CASE("weak harnack holds on a discrete supersolution sample") {
  const SolutionFamily power = SolutionFamily::power_supersolution(kM2, 2.0);
  const RadialGrid grid = RadialGrid::uniform(2, 0.05, 1.0, 97);
  const GridField field = sample_family(power, grid, uniform_times(0.5, 1.5, 97));
  SolverConfig loose;
  loose.residual_tol = 0.05;
  const SourcePtr source = make_field_source(field, loose);

  HarnackProbe probe;
  probe.x0 = 0.5;
  probe.r = 0.02;  // B(x0, 16 r) must stay inside [0.05, 1.0]
  probe.s = 0.7;
  const HarnackReport report = weak_harnack_probe(kM2, *source, probe);
  CHECK(report.admissible_c1 > 0.0);
}

TEST_CASE("weak harnack containment") {
  const SolutionFamily family = SolutionFamily::singular_barenblatt(Medium(1, 1.5), 2.0);
  const RadialGrid grid = RadialGrid::uniform(1, 0.0, 2.0, 33);
  const GridField field = sample_family(family, grid, uniform_times(0.5, 1.0, 17));
  const SourcePtr source = make_field_source(field);
  HarnackProbe probe;
  probe.x0 = 0.0;
  probe.r = 0.5;  // 16 r = 8 exceeds the grid radius
  probe.s = 0.6;
  CHECK_THROWS_AS(weak_harnack_probe(Medium(1, 1.5), *source, probe), Error);
  try {
    weak_harnack_probe(Medium(1, 1.5), *source, probe);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ContainmentViolation);
  }
}

TEST_CASE("L1 harnack on constants and the Barenblatt solution") {
  const SourcePtr constant = make_constant_source(3.0);
  const L1HarnackReport flat = l1_harnack_probe(kM2, *constant, 0.0, 1.0, 0.5, 1.0);
  CHECK(flat.lhs == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(flat.rhs_inf == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(flat.admissible_c < 1.0);

  const Medium m1(1, 1.5);
  const double c = std::pow(4.0 * M_PI / std::sqrt(3.0), 1.5) / 3.0;
  const SourcePtr sbb = make_family_source(SolutionFamily::singular_barenblatt(m1, c));
  const L1HarnackReport base = l1_harnack_probe(m1, *sbb, 0.0, 1.0, 0.5, 1.0);
  CHECK(base.admissible_c > 0.0);
  CHECK(std::isfinite(base.admissible_c));

  // Intrinsic rescaling (lambda = 1 here): (r, s, t) -> (2r, 2s, 2t).
  const L1HarnackReport scaled = l1_harnack_probe(m1, *sbb, 0.0, 2.0, 1.0, 2.0);
  CHECK(std::abs(scaled.admissible_c - base.admissible_c) <= 0.2 * base.admissible_c);
}

TEST_CASE("L1 harnack requires a solution source") {
  const SourcePtr power = make_family_source(SolutionFamily::power_supersolution(kM2, 2.0));
  CHECK_THROWS_AS(l1_harnack_probe(kM2, *power, 0.5, 0.1, 0.5, 1.0), Error);
  try {
    l1_harnack_probe(kM2, *power, 0.5, 0.1, 0.5, 1.0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotSolution);
  }

  // The point source is a solution only away from the origin.
  const SourcePtr ips = make_family_source(SolutionFamily::infinite_point_source(kM2));
  CHECK_THROWS_AS(l1_harnack_probe(kM2, *ips, 0.1, 0.1, 0.5, 1.0), Error);
  CHECK_NOTHROW(l1_harnack_probe(kM2, *ips, 0.5, 0.1, 0.5, 1.0));
}

TEST_CASE("pointwise rate detection on the canonical families") {
  // Point source: the rate is (c s)^{1/(2-p)} = 0.75 at s = 1.
  const SourcePtr ips =
      make_family_source(SolutionFamily::infinite_point_source(kM2, true));
  const RateReport ips_rate = pointwise_rate_detect(kM2, *ips, 0.0, 0.0, 1.0);
  CHECK(ips_rate.verdict == RateVerdict::PositiveRate);
  const double exact =
      pointwise_rate_exact(SolutionFamily::infinite_point_source(kM2, true), 0.0, 1.0).value();
  CHECK(ips_rate.rate_estimate.value() == doctest::Approx(exact).epsilon(0.01));

  // Barenblatt: bounded near every point at positive times.
  const SourcePtr sbb =
      make_family_source(SolutionFamily::singular_barenblatt(kM2, 1.0, true));
  CHECK(pointwise_rate_detect(kM2, *sbb, 0.0, 0.0, 1.0).verdict == RateVerdict::ZeroRate);
  CHECK(pointwise_rate_detect(kM2, *sbb, 0.7, 0.0, 1.0).verdict == RateVerdict::ZeroRate);

  // Power supersolution with q > p: infima grow without bound.
  const SourcePtr power =
      make_family_source(SolutionFamily::power_supersolution(kM2, 2.0, true));
  const RateReport power_rate = pointwise_rate_detect(kM2, *power, 0.0, 0.0, 1.0);
  CHECK(power_rate.verdict == RateVerdict::PositiveRate);
  CHECK(power_rate.rate_estimate.is_pos_inf());
}

TEST_CASE("rate detector agrees with the exact rate across families") {
  const std::vector<SolutionFamily> families = {
      SolutionFamily::infinite_point_source(kM2, true),
      SolutionFamily::singular_barenblatt(kM2, 0.5, true),
      SolutionFamily::power_supersolution(kM2, 2.0, true),
  };
  for (const SolutionFamily& family : families) {
    const SourcePtr source = make_family_source(family);
    for (double s : {0.5, 2.0}) {
      const ExtReal exact = pointwise_rate_exact(family, 0.0, s);
      const RateReport detected = pointwise_rate_detect(kM2, *source, 0.0, 0.0, s);
      if (exact.is_pos_inf()) {
        CHECK(detected.verdict == RateVerdict::PositiveRate);
        CHECK(detected.rate_estimate.is_pos_inf());
      } else if (exact.value() == 0.0) {
        CHECK(detected.verdict == RateVerdict::ZeroRate);
      } else {
        CHECK(detected.verdict == RateVerdict::PositiveRate);
        CHECK(detected.rate_estimate.value() ==
              doctest::Approx(exact.value()).epsilon(0.01));
      }
    }
  }
}

TEST_CASE("constant sweep aggregates and rejects empty input") {
  const SourcePtr constant = make_constant_source(2.0);
  std::vector<HarnackProbe> probes;
  for (double r : {0.1, 0.2, 0.4}) {
    HarnackProbe probe;
    probe.x0 = 0.0;
    probe.r = r;
    probe.s = 1.0;
    probes.push_back(probe);
  }
  const SweepResult sweep = constant_sweep(kM2, *constant, probes);
  CHECK(sweep.values.size() == 3);
  for (double v : sweep.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(sweep.coefficient_of_variation == doctest::Approx(0.0).epsilon(1e-9));

  CHECK_THROWS_AS(constant_sweep(kM2, *constant, {}), Error);
  try {
    constant_sweep(kM2, *constant, {});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyProbeList);
  }
}
