#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "supercal/obstacle.hpp"

using namespace supercal;

namespace {

std::vector<double> uniform_times(double t_lo, double t_hi, int count) {
  std::vector<double> times(count);
  for (int k = 0; k < count; ++k) times[k] = t_lo + (t_hi - t_lo) * k / (count - 1);
  return times;
}

GridField constant_field(const RadialGrid& grid, const std::vector<double>& times, double p,
                         double value) {
  GridField field;
  field.grid = grid;
  field.p = p;
  field.times = times;
  field.values.assign(times.size() * grid.count(), value);
  field.boundary.initial.assign(grid.count(), value);
  field.boundary.outer.assign(times.size(), value);
  if (!grid.starts_at_origin()) field.boundary.inner.assign(times.size(), value);
  field.boundary.provenance = "constant obstacle";
  return field;
}

// C1 bump obstacle above its own boundary trace.
GridField bump_field(const RadialGrid& grid, const std::vector<double>& times, double p,
                     double base, double height, double rc, double rw, double tc, double tw) {
  auto bump1 = [](double x) {
    const double y = 1.0 - x * x;
    return y <= 0.0 ? 0.0 : y * y;
  };
  GridField psi;
  psi.grid = grid;
  psi.p = p;
  psi.times = times;
  psi.values.resize(times.size() * grid.count());
  for (size_t k = 0; k < times.size(); ++k)
    for (size_t j = 0; j < grid.count(); ++j)
      psi.at(k, j) =
          base + height * bump1((grid.nodes[j] - rc) / rw) * bump1((times[k] - tc) / tw);
  psi.boundary.initial.assign(psi.values.begin(), psi.values.begin() + grid.count());
  psi.boundary.outer.resize(times.size());
  for (size_t k = 0; k < times.size(); ++k) psi.boundary.outer[k] = psi.at(k, grid.count() - 1);
  if (!grid.starts_at_origin()) {
    psi.boundary.inner.resize(times.size());
    for (size_t k = 0; k < times.size(); ++k) psi.boundary.inner[k] = psi.at(k, 0);
  }
  psi.boundary.provenance = "bump obstacle";
  return psi;
}

}  // namespace

TEST_CASE("constant solution dominates a low obstacle") {
  const RadialGrid grid = RadialGrid::uniform(1, 0.0, 1.0, 33);
  const auto times = uniform_times(0.0, 0.5, 11);
  ObstacleProblem problem;
  problem.psi = constant_field(grid, times, 1.5, -1.0);
  problem.boundary.initial.assign(grid.count(), 0.0);
  problem.boundary.outer.assign(times.size(), 0.0);
  const ObstacleSolution solution = solve_obstacle(problem);
  for (double v : solution.u.values) CHECK(v == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(solution.contact_fraction == 0.0);
  CHECK(solution.complementarity_residual < 1e-6);
}

TEST_CASE("a discrete solution is its own least supersolution majorant") {
  const Medium medium(1, 1.5);
  const SolutionFamily family = SolutionFamily::singular_barenblatt(medium, 6.514);
  const RadialGrid grid = RadialGrid::uniform(1, 0.0, 3.0, 97);
  const auto times = uniform_times(1.0, 2.0, 97);
  SolverConfig config;
  config.picard_tol = 1e-10;
  config.picard_max = 200000;

  // The obstacle is the discrete evolution itself.
  ObstacleProblem problem;
  problem.psi = solve_from_family(family, grid, times, config);
  problem.config = config;
  const ObstacleSolution solution = solve_obstacle(problem);

  const double scale = std::max(1.0, problem.psi.max_abs());
  double gap = 0.0;
  for (size_t i = 0; i < solution.u.values.size(); ++i)
    gap = std::max(gap, std::abs(solution.u.values[i] - problem.psi.values[i]));
  CHECK(gap <= 10.0 * config.picard_tol * scale);
  CHECK(solution.contact_fraction == 1.0);
}

TEST_CASE("interior bump yields a strict contact set and complementarity") {
  const RadialGrid grid = RadialGrid::uniform(1, 0.0, 1.0, 97);
  const auto times = uniform_times(0.0, 0.5, 41);
  ObstacleProblem problem;
  problem.psi = bump_field(grid, times, 1.5, 0.0, 1.0, 0.35, 0.3, 0.25, 0.2);
  problem.config.picard_tol = 1e-9;
  problem.config.picard_max = 200000;
  const ObstacleSolution solution = solve_obstacle(problem);

  // u >= psi everywhere and equals the data on the parabolic boundary.
  for (size_t i = 0; i < solution.u.values.size(); ++i)
    CHECK(solution.u.values[i] >= problem.psi.values[i] - 1e-9);
  CHECK(solution.contact_fraction > 0.0);
  CHECK(solution.contact_fraction < 1.0);
  CHECK(solution.complementarity_residual < 1e-3);

  // Solution property off the contact set, skipping cells that touch it.
  const ResidualClassification rc = residual_sign(solution.u, problem.config);
  const size_t J = solution.u.cols() - 1;
  const size_t K = solution.u.rows() - 1;
  size_t checked = 0;
  for (size_t k = 1; k <= K; ++k)
    for (size_t j = 1; j < J; ++j) {
      bool near_contact = false;
      for (int dk = -1; dk <= 1; ++dk)
        for (int dj = -1; dj <= 1; ++dj)
          if (solution.contact_at(k + dk, j + dj)) near_contact = true;
      if (near_contact) continue;
      CHECK(rc.at(k, j) == CellClass::Solution);
      ++checked;
    }
  CHECK(checked > 100);
}

TEST_CASE("monotonicity in the obstacle") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> un(0.0, 1.0);
  const RadialGrid grid = RadialGrid::uniform(1, 0.0, 1.0, 49);
  const auto times = uniform_times(0.0, 0.4, 17);
  SolverConfig config;
  config.picard_tol = 1e-9;
  config.picard_max = 200000;

  for (int trial = 0; trial < 5; ++trial) {
    const double h1 = 0.3 + 0.4 * un(rng);
    const double lift = 0.1 + 0.4 * un(rng);
    const double rc = 0.3 + 0.3 * un(rng);
    ObstacleProblem prob1, prob2;
    prob1.psi = bump_field(grid, times, 1.5, 0.0, h1, rc, 0.25, 0.2, 0.15);
    prob2.psi = bump_field(grid, times, 1.5, 0.0, h1 + lift, rc, 0.25, 0.2, 0.15);
    prob1.config = prob2.config = config;
    const ObstacleSolution sol1 = solve_obstacle(prob1);
    const ObstacleSolution sol2 = solve_obstacle(prob2);
    for (size_t i = 0; i < sol1.u.values.size(); ++i)
      CHECK(sol1.u.values[i] <= sol2.u.values[i] + 10.0 * config.picard_tol);
  }
}

TEST_CASE("increasing obstacles converge monotonically from below") {
  const RadialGrid grid = RadialGrid::uniform(1, 0.0, 1.0, 49);
  const auto times = uniform_times(0.0, 0.4, 17);
  SolverConfig config;
  config.picard_tol = 1e-10;
  config.picard_max = 400000;

  ObstacleProblem full;
  full.psi = bump_field(grid, times, 1.5, 0.0, 1.0, 0.4, 0.3, 0.2, 0.15);
  full.config = config;
  const ObstacleSolution limit = solve_obstacle(full);

  double prev = -HUGE_VAL;
  for (double frac : {0.25, 0.5, 0.75, 1.0}) {
    ObstacleProblem staged;
    staged.psi = bump_field(grid, times, 1.5, 0.0, frac, 0.4, 0.3, 0.2, 0.15);
    staged.config = config;
    // Boundary data of the limit problem, so only the obstacle varies.
    staged.boundary.initial = full.psi.boundary.initial;
    staged.boundary.outer = full.psi.boundary.outer;
    const ObstacleSolution stage = solve_obstacle(staged);
    double max_val = 0.0;
    for (size_t i = 0; i < stage.u.values.size(); ++i) {
      CHECK(stage.u.values[i] <= limit.u.values[i] + 10.0 * config.picard_tol);
      max_val = std::max(max_val, stage.u.values[i]);
    }
    CHECK(max_val >= prev - 1e-12);
    prev = max_val;
  }
}

TEST_CASE("poisson modification fixes solutions and lowers supersolutions") {
  const Medium medium(1, 1.5);
  const SolutionFamily family = SolutionFamily::singular_barenblatt(medium, 2.0);
  const RadialGrid grid = RadialGrid::uniform(1, 0.0, 2.0, 65);
  const auto times = uniform_times(0.5, 1.0, 33);
  SolverConfig config;
  config.picard_tol = 1e-10;

  // Solutions are fixed points.
  const GridField u = solve_from_family(family, grid, times, config);
  const GridField modified = poisson_modify(u, 0.5, 1.5, 0.6, 0.9, config);
  double dev = 0.0;
  for (size_t i = 0; i < u.values.size(); ++i)
    dev = std::max(dev, std::abs(u.values[i] - modified.values[i]));
  CHECK(dev <= 10.0 * config.picard_tol * std::max(1.0, u.max_abs()));

  // Full-domain modification equals a plain solve with u's data.
  const GridField full = poisson_modify(u, grid.nodes.front(), grid.nodes.back(),
                                        times.front(), times.back(), config);
  dev = 0.0;
  for (size_t i = 0; i < u.values.size(); ++i)
    dev = std::max(dev, std::abs(full.values[i] - u.values[i]));
  CHECK(dev <= 10.0 * config.picard_tol * std::max(1.0, u.max_abs()));

  // A strict supersolution decreases inside the box (comparison corollary).
  const SolutionFamily power = SolutionFamily::power_supersolution(Medium(2, 1.5), 2.0);
  const RadialGrid annulus = RadialGrid::uniform(2, 0.3, 0.9, 61);
  const GridField v = sample_family(power, annulus, uniform_times(0.5, 1.0, 61));
  const GridField vmod = poisson_modify(v, 0.4, 0.8, 0.6, 0.9, config);
  double rise = 0.0;
  for (size_t i = 0; i < v.values.size(); ++i)
    rise = std::max(rise, vmod.values[i] - v.values[i]);
  CHECK(rise <= 1e-4);  // h <= u up to discretization of the sampled supersolution
  CHECK(vmod.value_interp(0.6, 0.75) < v.value_interp(0.6, 0.75));

  // Idempotence over the same box.
  const GridField vmod2 = poisson_modify(vmod, 0.4, 0.8, 0.6, 0.9, config);
  dev = 0.0;
  for (size_t i = 0; i < vmod.values.size(); ++i)
    dev = std::max(dev, std::abs(vmod2.values[i] - vmod.values[i]));
  CHECK(dev <= 10.0 * config.picard_tol * std::max(1.0, v.max_abs()));
}

TEST_CASE("minimality check") {
  const RadialGrid grid = RadialGrid::uniform(1, 0.0, 1.0, 49);
  const auto times = uniform_times(0.0, 0.4, 17);
  ObstacleProblem problem;
  problem.psi = bump_field(grid, times, 1.5, 0.0, 0.8, 0.4, 0.3, 0.2, 0.15);
  problem.config.picard_tol = 1e-9;
  problem.config.picard_max = 200000;
  const ObstacleSolution solution = solve_obstacle(problem);

  CHECK(minimality_check(solution, problem.psi, solution.u, problem.config));

  GridField lifted = solution.u;
  for (double& v : lifted.values) v += 1.0;
  for (auto* trace :
       {&lifted.boundary.initial, &lifted.boundary.inner, &lifted.boundary.outer})
    for (double& v : *trace) v += 1.0;
  CHECK(minimality_check(solution, problem.psi, lifted, problem.config));

  GridField dipped = solution.u;
  dipped.values[dipped.values.size() / 2] = -5.0;
  CHECK_THROWS_AS(minimality_check(solution, problem.psi, dipped, problem.config), Error);
  try {
    minimality_check(solution, problem.psi, dipped, problem.config);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PreconditionViolation);
  }
}

TEST_CASE("obstacle outputs") {
  const RadialGrid grid = RadialGrid::uniform(1, 0.0, 1.0, 17);
  const auto times = uniform_times(0.0, 0.2, 5);
  ObstacleProblem problem;
  problem.psi = bump_field(grid, times, 1.5, 0.0, 0.5, 0.4, 0.3, 0.1, 0.08);
  problem.config.picard_max = 200000;
  const ObstacleSolution solution = solve_obstacle(problem);

  const auto dir = std::filesystem::temp_directory_path();
  const std::string field_csv = (dir / "obs_field.csv").string();
  const std::string sidecar = (dir / "obs_field.json").string();
  const std::string contact_csv = (dir / "obs_contact.csv").string();
  const std::string summary = (dir / "obs_summary.json").string();
  write_obstacle_outputs(solution, field_csv, sidecar, contact_csv, summary);
  CHECK(std::filesystem::exists(field_csv));
  CHECK(std::filesystem::exists(contact_csv));
  CHECK(std::filesystem::exists(summary));
  const GridField back = read_field_csv(field_csv, sidecar);
  CHECK(back.values == solution.u.values);
  for (const auto& path : {field_csv, sidecar, contact_csv, summary})
    std::filesystem::remove(path);
}
