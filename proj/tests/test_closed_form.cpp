#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "supercal/closed_form.hpp"

using namespace supercal;

namespace {

double rel_scale(const EvalResult& r) {
  return std::abs(r.time_derivative.value()) + std::abs(r.flux_divergence.value()) + 1e-30;
}

}  // namespace

TEST_CASE("singular Barenblatt point values") {
  const SolutionFamily f = SolutionFamily::singular_barenblatt(Medium(1, 1.5), 1.0);
  // lambda = 1, prefactor (t)^{-1}, inner c = 1 at the origin.
  CHECK(f.evaluate(0.0, 1.0).value.value() == doctest::Approx(1.0).epsilon(1e-12));
  // inner = 1 + 1/3, power -1.
  CHECK(f.evaluate(1.0, 1.0).value.value() == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(f.evaluate(0.0, 1.0).radial_gradient.value() == doctest::Approx(0.0));
}

TEST_CASE("point source constant") {
  CHECK(ips_constant(Medium(2, 1.5)) == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-12));
  CHECK(ips_constant(Medium(1, 1.5)) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
  try {
    ips_constant(Medium(3, 1.5));  // exactly the critical value 2n/(n+1)
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateConstant);
  }
}

TEST_CASE("power supersolution constant") {
  CHECK(power_constant(Medium(2, 1.5), 2.0) == doctest::Approx(1.5).epsilon(1e-12));
  // q = p reduces to the point source constant.
  CHECK(power_constant(Medium(2, 1.5), 1.5) ==
        doctest::Approx(ips_constant(Medium(2, 1.5))).epsilon(1e-12));
  // Sign of the factor decides: q/(2-p) - q + p - n = -0.4 at q = 0.1.
  const double factor = 0.1 / 0.5 - 0.1 + 1.5 - 2.0;
  REQUIRE(factor <= 0.0);
  try {
    power_constant(Medium(2, 1.5), 0.1);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonpositiveFactor);
  }
}

TEST_CASE("q = p consistency across supercritical media") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> un(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const int n = 1 + static_cast<int>(un(rng) * 4);
    const double p_crit = 2.0 * n / (n + 1.0);
    const double p = p_crit + (2.0 - p_crit) * (0.05 + 0.9 * un(rng));
    const Medium medium(n, p);
    CHECK(std::abs(power_constant(medium, p) - ips_constant(medium)) <= 1e-12);
  }
}

TEST_CASE("zero extension evaluates to exact zero") {
  const SolutionFamily f = SolutionFamily::infinite_point_source(Medium(2, 1.5), true);
  for (double t : {-1.0, -1e-9, 0.0}) {
    const EvalResult r = f.evaluate(1.0, t);
    CHECK(r.value.value() == 0.0);
    CHECK(r.radial_gradient.value() == 0.0);
    CHECK(r.time_derivative.value() == 0.0);
    CHECK(r.flux_divergence.value() == 0.0);
    CHECK(r.residual.value() == 0.0);
  }
}

TEST_CASE("non-extended families are undefined for t <= 0") {
  const SolutionFamily f = SolutionFamily::singular_barenblatt(Medium(2, 1.5), 1.0);
  try {
    f.evaluate(1.0, 0.0);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UndefinedPoint);
  }
}

TEST_CASE("point source singular marker at the origin") {
  const SolutionFamily f = SolutionFamily::infinite_point_source(Medium(2, 1.5));
  const EvalResult r = f.evaluate(0.0, 1.0);
  CHECK(r.value.is_pos_inf());
  CHECK(r.radial_gradient.is_undefined());
  CHECK(r.residual.is_undefined());
  CHECK_THROWS_AS(r.value.value(), Error);  // arithmetic on the marker is forbidden
  CHECK(r.value.csv_string() == "inf");
}

TEST_CASE("analytic residual vanishes on exact solutions") {
  const SolutionFamily sbb =
      SolutionFamily::singular_barenblatt(Medium(1, 1.5), 1.0);
  const SolutionFamily ips = SolutionFamily::infinite_point_source(Medium(2, 1.5));
  for (double r : {0.2, 0.7, 1.3, 3.0}) {
    for (double t : {0.3, 1.0, 4.0}) {
      const EvalResult a = sbb.evaluate(r, t);
      CHECK(std::abs(a.residual.value()) <= 1e-11 * rel_scale(a));
      const EvalResult b = ips.evaluate(r, t);
      CHECK(std::abs(b.residual.value()) <= 1e-11 * rel_scale(b));
    }
  }
}

TEST_CASE("finite-difference oracle confirms the analytic derivatives") {
  const SolutionFamily sbb = SolutionFamily::singular_barenblatt(Medium(1, 1.5), 1.0);
  const double fd = pde_residual_fd(sbb, 1.0, 1.0, 1e-3);
  CHECK(std::abs(fd) < 1e-5);

  // Second-order vanishing on the point source away from the singularity.
  const SolutionFamily ips = SolutionFamily::infinite_point_source(Medium(2, 1.5));
  const double f1 = pde_residual_fd(ips, 0.5, 1.0, 1e-3);
  const double f2 = pde_residual_fd(ips, 0.5, 1.0, 5e-4);
  CHECK(std::abs(f1 / f2) == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("power supersolution residual sign") {
  const SolutionFamily f = SolutionFamily::power_supersolution(Medium(2, 1.5), 2.0);
  CHECK(f.c() == doctest::Approx(1.5).epsilon(1e-12));
  // Equality exactly on the unit sphere, strict supersolution inside.
  const EvalResult at_r1 = f.evaluate(1.0, 1.0);
  CHECK(std::abs(at_r1.residual.value()) <= 1e-12 * rel_scale(at_r1));
  const EvalResult inside = f.evaluate(0.5, 1.0);
  CHECK(inside.residual.value() > 0.0);
  // The finite-difference oracle agrees with the analytic residual.
  const double fd = pde_residual_fd(f, 0.5, 1.0, 1e-4);
  CHECK(fd == doctest::Approx(inside.residual.value()).epsilon(1e-4));

  // Supersolution sign across the punctured unit ball.
  for (double r = 0.05; r <= 1.0; r += 0.05)
    for (double t : {0.1, 0.5, 1.0, 2.0})
      CHECK(f.evaluate(r, t).residual.value() >= -1e-12);
}

TEST_CASE("oracle decay order two at random smooth points") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> un(0.0, 1.0);
  const SolutionFamily families[] = {
      SolutionFamily::singular_barenblatt(Medium(1, 1.5), 1.0),
      SolutionFamily::singular_barenblatt(Medium(2, 1.5), 1.0),
      SolutionFamily::infinite_point_source(Medium(2, 1.5)),
      SolutionFamily::power_supersolution(Medium(2, 1.5), 2.0),
  };
  int order_ok = 0, total = 0;
  for (const SolutionFamily& f : families) {
    for (int i = 0; i < 25; ++i) {
      const double r = 0.3 + 2.0 * un(rng);
      const double t = 0.4 + 2.0 * un(rng);
      const double analytic = f.evaluate(r, t).residual.value();
      const double h = 1e-2 * std::min(r, t);
      const double e1 = pde_residual_fd(f, r, t, h) - analytic;
      const double e2 = pde_residual_fd(f, r, t, h / 2.0) - analytic;
      ++total;
      if (std::abs(e2) < 1e-14) {
        ++order_ok;  // already at roundoff
        continue;
      }
      const double order = std::log2(std::abs(e1 / e2));
      if (order > 1.6 && order < 2.6) ++order_ok;
    }
  }
  CHECK(order_ok >= total * 9 / 10);
}

TEST_CASE("degenerate Barenblatt has a sharp support boundary") {
  const Medium medium(1, 3.0);
  const SolutionFamily f = SolutionFamily::degenerate_barenblatt(medium, 1.0);
  // Find the support edge at t = 1: inner = c - (p-2)/p (lambda t)^{...} r^{kappa}.
  const double lambda = 1.0 * (3.0 - 2.0) + 3.0;  // 4
  const double kappa = 3.0 / 2.0;
  const double B = (1.0 / 3.0) * std::pow(lambda, -3.0 / (lambda * 2.0));
  const double edge = std::pow(1.0 / B, 1.0 / kappa);
  CHECK(f.evaluate(edge * 1.01, 1.0).value.value() == 0.0);
  CHECK(f.evaluate(edge * 0.99, 1.0).value.value() > 0.0);
  // Interior smooth point: the analytic residual vanishes and the oracle agrees.
  const EvalResult mid = f.evaluate(edge * 0.5, 1.0);
  CHECK(std::abs(mid.residual.value()) <= 1e-10 * rel_scale(mid));
  CHECK(std::abs(pde_residual_fd(f, edge * 0.5, 1.0, 1e-4)) < 1e-5);
}

TEST_CASE("mass normalization against the 1d analytic oracle") {
  // For n=1, p=3/2 the mass reduces to 4 pi / (sqrt(3) (3c)^{2/3}).
  const double c_oracle = std::pow(4.0 * M_PI / std::sqrt(3.0), 1.5) / 3.0;
  const NormalizedConstant norm = normalize_mass(Medium(1, 1.5));
  CHECK(norm.c == doctest::Approx(c_oracle).epsilon(1e-7));
  CHECK(norm.report.max_relative_spread < 1e-6);

  // Monotonicity: a larger target mass needs a smaller constant.
  const NormalizedConstant norm2 = normalize_mass(Medium(1, 1.5), 2.0);
  CHECK(norm2.c < norm.c);
}

TEST_CASE("mass normalization in 2d against the analytic profile integral") {
  // mass(c) = 4 pi^2 / (sqrt(3) (3c)^{1/3}) for n=2, p=3/2.
  const double c_oracle = std::pow(4.0 * M_PI * M_PI / std::sqrt(3.0), 3.0) / 3.0;
  const NormalizedConstant norm = normalize_mass(Medium(2, 1.5));
  CHECK(norm.c == doctest::Approx(c_oracle).epsilon(1e-7));
  CHECK(norm.report.max_relative_spread < 1e-6);
  CHECK(norm.report.time_samples == std::vector<double>{0.1, 1.0, 10.0});
}

TEST_CASE("mass is conserved across two decades of time") {
  const MassReport report = mass_report(Medium(2, 1.5), 2.0, {0.05, 0.5, 5.0});
  CHECK(report.max_relative_spread < 1e-6);
}

TEST_CASE("pointwise rate closed forms") {
  const SolutionFamily ips = SolutionFamily::infinite_point_source(Medium(2, 1.5), true);
  CHECK(pointwise_rate_exact(ips, 0.0, 1.0).value() == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(pointwise_rate_exact(ips, 0.5, 1.0).value() == 0.0);
  CHECK(pointwise_rate_exact(ips, 0.0, -1.0).value() == 0.0);

  const SolutionFamily sbb = SolutionFamily::singular_barenblatt(Medium(2, 1.5), 1.0);
  CHECK(pointwise_rate_exact(sbb, 0.0, 1.0).value() == 0.0);
  CHECK(pointwise_rate_exact(sbb, 2.0, 1.0).value() == 0.0);

  const SolutionFamily power = SolutionFamily::power_supersolution(Medium(2, 1.5), 2.0);
  CHECK(pointwise_rate_exact(power, 0.0, 1.0).is_pos_inf());
}

TEST_CASE("step validation in the finite-difference oracle") {
  const SolutionFamily f = SolutionFamily::infinite_point_source(Medium(2, 1.5));
  try {
    pde_residual_fd(f, 0.1, 1.0, 0.05);  // h >= radius/4
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::StepTooLarge);
  }
}
