#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "supercal/grid.hpp"

using namespace supercal;

namespace {

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("grid constructors") {
  const RadialGrid g = RadialGrid::uniform(2, 0.0, 4.0, 5);
  CHECK(g.starts_at_origin());
  CHECK(g.nodes == std::vector<double>{0.0, 1.0, 2.0, 3.0, 4.0});

  const RadialGrid geo = RadialGrid::geometric(1, 0.1, 10.0, 5);
  CHECK(geo.nodes[0] == doctest::Approx(0.1));
  CHECK(geo.nodes[4] == doctest::Approx(10.0));
  CHECK(geo.nodes[2] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_FALSE(geo.starts_at_origin());

  CHECK_THROWS_AS(RadialGrid::uniform(2, 0.0, 4.0, 2), Error);
  CHECK_THROWS_AS(RadialGrid::geometric(2, 0.0, 4.0, 5), Error);
  CHECK_THROWS_AS(RadialGrid::explicit_nodes(2, {0.0, 0.5, 0.5, 1.0}), Error);
}

TEST_CASE("family sampling fills boundary records") {
  const SolutionFamily f = SolutionFamily::singular_barenblatt(Medium(2, 1.5), 1.0);
  const RadialGrid grid = RadialGrid::uniform(2, 0.0, 2.0, 9);
  const GridField field = sample_family(f, grid, {0.5, 0.75, 1.0});
  CHECK(field.rows() == 3);
  CHECK(field.cols() == 9);
  CHECK(field.at(1, 3) ==
        doctest::Approx(f.evaluate(grid.nodes[3], 0.75).value.value()).epsilon(1e-14));
  CHECK(field.boundary.inner.empty());
  CHECK(field.boundary.outer.size() == 3);

  // A grid through the origin cannot host the point source sample.
  const SolutionFamily ips = SolutionFamily::infinite_point_source(Medium(2, 1.5));
  CHECK_THROWS_AS(sample_family(ips, grid, {0.5, 1.0}), Error);
}

TEST_CASE("interpolation reproduces bilinear data") {
  GridField field;
  field.grid = RadialGrid::uniform(1, 0.0, 2.0, 3);
  field.p = 1.5;
  field.times = {0.0, 1.0};
  // u = 2r + 3t on nodes; bilinear interpolation is exact for it.
  field.values = {0.0, 2.0, 4.0, 3.0, 5.0, 7.0};
  CHECK(field.value_interp(0.5, 0.25) == doctest::Approx(1.75).epsilon(1e-14));
  CHECK(field.gradient_interp(0.5, 0.25) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(field.value_interp(2.5, 0.5), Error);
}

TEST_CASE("csv round trip preserves the field exactly") {
  const SolutionFamily f = SolutionFamily::singular_barenblatt(Medium(1, 1.5), 2.0, true);
  const RadialGrid grid = RadialGrid::geometric(1, 0.3, 3.0, 7);
  GridField field = sample_family(f, grid, {0.25, 0.5, 0.75, 1.0});
  field.meta.delta_used = 1e-8;

  const std::string csv = temp_path("supercal_field.csv");
  const std::string sidecar = temp_path("supercal_field.json");
  write_field_csv(field, csv, sidecar);
  const GridField back = read_field_csv(csv, sidecar);

  CHECK(back.grid.same_nodes(field.grid));
  CHECK(back.p == field.p);
  CHECK(back.times == field.times);
  CHECK(back.values == field.values);  // 17 significant digits round-trip
  CHECK(back.boundary.outer == field.boundary.outer);
  CHECK(back.boundary.provenance == field.boundary.provenance);
  CHECK(back.meta.delta_used == field.meta.delta_used);
  std::remove(csv.c_str());
  std::remove(sidecar.c_str());
}
