#include "supercal/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace supercal {

using nlohmann::json;

const char* spacing_name(Spacing s) {
  switch (s) {
    case Spacing::Uniform: return "uniform";
    case Spacing::Geometric: return "geometric";
    case Spacing::Explicit: return "explicit";
  }
  return "unknown";
}

RadialGrid RadialGrid::uniform(int n, double r_lo, double r_hi, int count) {
  require(count >= 3, ErrorCode::InvalidArgument, "grid needs at least 3 nodes");
  require(r_lo >= 0.0 && r_hi > r_lo, ErrorCode::InvalidArgument, "need 0 <= r_lo < r_hi");
  RadialGrid g;
  g.n = n;
  g.spacing = Spacing::Uniform;
  g.nodes.resize(count);
  for (int j = 0; j < count; ++j) g.nodes[j] = r_lo + (r_hi - r_lo) * j / (count - 1);
  g.nodes.front() = r_lo;
  g.nodes.back() = r_hi;
  g.validate();
  return g;
}

RadialGrid RadialGrid::geometric(int n, double r_lo, double r_hi, int count) {
  require(count >= 3, ErrorCode::InvalidArgument, "grid needs at least 3 nodes");
  require(r_lo > 0.0 && r_hi > r_lo, ErrorCode::InvalidArgument,
          "geometric spacing needs 0 < r_lo < r_hi");
  RadialGrid g;
  g.n = n;
  g.spacing = Spacing::Geometric;
  g.nodes.resize(count);
  const double ratio = std::pow(r_hi / r_lo, 1.0 / (count - 1));
  for (int j = 0; j < count; ++j) g.nodes[j] = r_lo * std::pow(ratio, j);
  g.nodes.front() = r_lo;
  g.nodes.back() = r_hi;
  g.validate();
  return g;
}

RadialGrid RadialGrid::explicit_nodes(int n, std::vector<double> nodes) {
  RadialGrid g;
  g.n = n;
  g.spacing = Spacing::Explicit;
  g.nodes = std::move(nodes);
  g.validate();
  return g;
}

void RadialGrid::validate() const {
  require(n >= 1, ErrorCode::InvalidArgument, "grid dimension must be >= 1");
  require(nodes.size() >= 3, ErrorCode::InvalidArgument, "grid needs at least 3 nodes");
  require(nodes.front() >= 0.0, ErrorCode::InvalidArgument, "radii must be nonnegative");
  for (size_t j = 0; j + 1 < nodes.size(); ++j)
    require(nodes[j] < nodes[j + 1], ErrorCode::InvalidArgument,
            "radii must be strictly increasing");
}

bool RadialGrid::same_nodes(const RadialGrid& other) const {
  if (n != other.n || nodes.size() != other.nodes.size()) return false;
  for (size_t j = 0; j < nodes.size(); ++j) {
    const double scale = std::max({1e-300, std::abs(nodes[j]), std::abs(other.nodes[j])});
    if (std::abs(nodes[j] - other.nodes[j]) > 1e-12 * scale) return false;
  }
  return true;
}

void GridField::validate() const {
  grid.validate();
  require(p > 1.0, ErrorCode::InvalidArgument, "field exponent p must exceed 1");
  require(times.size() >= 2, ErrorCode::InvalidArgument, "field needs at least 2 time levels");
  for (size_t k = 0; k + 1 < times.size(); ++k)
    require(times[k] < times[k + 1], ErrorCode::InvalidArgument,
            "times must be strictly increasing");
  require(values.size() == rows() * cols(), ErrorCode::InvalidArgument,
          "value matrix shape mismatch");
  for (double v : values)
    require(std::isfinite(v), ErrorCode::InvalidArgument, "field values must be finite");

  const size_t J = cols() - 1;
  if (!boundary.initial.empty()) {
    require(boundary.initial.size() == cols(), ErrorCode::InvalidArgument,
            "initial trace length mismatch");
    for (size_t j = 0; j < cols(); ++j)
      require(std::abs(at(0, j) - boundary.initial[j]) <= 1e-9 * (1.0 + std::abs(at(0, j))),
              ErrorCode::InvalidArgument, "initial row deviates from the boundary record");
  }
  if (!boundary.outer.empty()) {
    require(boundary.outer.size() == rows(), ErrorCode::InvalidArgument,
            "outer trace length mismatch");
    for (size_t k = 0; k < rows(); ++k)
      require(std::abs(at(k, J) - boundary.outer[k]) <= 1e-9 * (1.0 + std::abs(at(k, J))),
              ErrorCode::InvalidArgument, "outer column deviates from the boundary record");
  }
  if (!boundary.inner.empty()) {
    require(!grid.starts_at_origin(), ErrorCode::InvalidArgument,
            "origin grids carry no inner Dirichlet trace");
    require(boundary.inner.size() == rows(), ErrorCode::InvalidArgument,
            "inner trace length mismatch");
    for (size_t k = 0; k < rows(); ++k)
      require(std::abs(at(k, 0) - boundary.inner[k]) <= 1e-9 * (1.0 + std::abs(at(k, 0))),
              ErrorCode::InvalidArgument, "inner column deviates from the boundary record");
  }
}

double GridField::min_value() const {
  return *std::min_element(values.begin(), values.end());
}

double GridField::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

namespace {

// Index of the cell [x_i, x_{i+1}] containing x, with edge tolerance.
size_t locate(const std::vector<double>& xs, double x, const char* what) {
  const double span = xs.back() - xs.front();
  require(x >= xs.front() - 1e-9 * span && x <= xs.back() + 1e-9 * span,
          ErrorCode::ContainmentViolation, std::string("point outside the field ") + what);
  const double xq = std::clamp(x, xs.front(), xs.back());
  size_t i = std::upper_bound(xs.begin(), xs.end(), xq) - xs.begin();
  i = std::min(std::max<size_t>(i, 1), xs.size() - 1) - 1;
  return i;
}

}  // namespace

double GridField::value_interp(double r, double t) const {
  const size_t j = locate(grid.nodes, r, "radii");
  const size_t k = locate(times, t, "times");
  const double fr = (r - grid.nodes[j]) / (grid.nodes[j + 1] - grid.nodes[j]);
  const double ft = (t - times[k]) / (times[k + 1] - times[k]);
  const double lo = at(k, j) * (1.0 - fr) + at(k, j + 1) * fr;
  const double hi = at(k + 1, j) * (1.0 - fr) + at(k + 1, j + 1) * fr;
  return lo * (1.0 - ft) + hi * ft;
}

double GridField::gradient_interp(double r, double t) const {
  const size_t j = locate(grid.nodes, r, "radii");
  const size_t k = locate(times, t, "times");
  auto node_grad = [&](size_t kk, size_t jj) {
    const size_t lo = jj == 0 ? 0 : jj - 1;
    const size_t hi = jj + 1 >= cols() ? cols() - 1 : jj + 1;
    return (at(kk, hi) - at(kk, lo)) / (grid.nodes[hi] - grid.nodes[lo]);
  };
  const double fr = (r - grid.nodes[j]) / (grid.nodes[j + 1] - grid.nodes[j]);
  const double ft = (t - times[k]) / (times[k + 1] - times[k]);
  const double lo = node_grad(k, j) * (1.0 - fr) + node_grad(k, j + 1) * fr;
  const double hi = node_grad(k + 1, j) * (1.0 - fr) + node_grad(k + 1, j + 1) * fr;
  return lo * (1.0 - ft) + hi * ft;
}

GridField sample_family(const SolutionFamily& family, const RadialGrid& grid,
                        const std::vector<double>& times) {
  grid.validate();
  require(times.size() >= 2, ErrorCode::InvalidArgument, "need at least 2 time levels");
  require(!(family.singular_at_origin() && grid.starts_at_origin()),
          ErrorCode::InvalidArgument,
          "cannot sample a family with a standing singularity on a grid through the origin");
  GridField field;
  field.grid = grid;
  field.p = family.medium().p;
  field.times = times;
  field.values.resize(times.size() * grid.count());
  for (size_t k = 0; k < times.size(); ++k)
    for (size_t j = 0; j < grid.count(); ++j)
      field.at(k, j) = family.evaluate(grid.nodes[j], times[k]).value.value();

  field.boundary.initial.assign(field.values.begin(), field.values.begin() + grid.count());
  field.boundary.outer.resize(times.size());
  for (size_t k = 0; k < times.size(); ++k) field.boundary.outer[k] = field.at(k, grid.count() - 1);
  if (!grid.starts_at_origin()) {
    field.boundary.inner.resize(times.size());
    for (size_t k = 0; k < times.size(); ++k) field.boundary.inner[k] = field.at(k, 0);
  }
  field.boundary.provenance = std::string("sampled from ") + family_kind_name(family.kind());
  field.validate();
  return field;
}

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json grid_to_json(const RadialGrid& grid) {
  return json{{"spacing", spacing_name(grid.spacing)}, {"nodes", grid.nodes}};
}

RadialGrid grid_from_json(int n, const json& j) {
  RadialGrid grid;
  grid.n = n;
  const std::string spacing = j.at("spacing").get<std::string>();
  if (spacing == "uniform")
    grid.spacing = Spacing::Uniform;
  else if (spacing == "geometric")
    grid.spacing = Spacing::Geometric;
  else
    grid.spacing = Spacing::Explicit;
  grid.nodes = j.at("nodes").get<std::vector<double>>();
  grid.validate();
  return grid;
}

}  // namespace

void write_field_csv(const GridField& field, const std::string& csv_path,
                     const std::string& sidecar_path) {
  field.validate();
  std::ofstream csv(csv_path);
  require(csv.good(), ErrorCode::IoFailure, "cannot open " + csv_path);
  csv << "r,t,value\n";
  for (size_t k = 0; k < field.rows(); ++k)
    for (size_t j = 0; j < field.cols(); ++j)
      csv << fmt17(field.grid.nodes[j]) << ',' << fmt17(field.times[k]) << ','
          << fmt17(field.at(k, j)) << '\n';
  require(csv.good(), ErrorCode::IoFailure, "write failed for " + csv_path);

  json sidecar{
      {"n", field.grid.n},
      {"p", field.p},
      {"grid", grid_to_json(field.grid)},
      {"times", field.times},
      {"boundary",
       {{"initial", field.boundary.initial},
        {"inner", field.boundary.inner},
        {"outer", field.boundary.outer},
        {"provenance", field.boundary.provenance}}},
      {"config",
       {{"delta", field.meta.delta_used}, {"picard_iterations", field.meta.picard_iterations}}},
  };
  std::ofstream side(sidecar_path);
  require(side.good(), ErrorCode::IoFailure, "cannot open " + sidecar_path);
  side << sidecar.dump(2) << '\n';
  require(side.good(), ErrorCode::IoFailure, "write failed for " + sidecar_path);
}

GridField read_field_csv(const std::string& csv_path, const std::string& sidecar_path) {
  std::ifstream side(sidecar_path);
  require(side.good(), ErrorCode::IoFailure, "cannot open " + sidecar_path);
  json sidecar;
  try {
    side >> sidecar;
  } catch (const json::exception& e) {
    fail(ErrorCode::IoFailure, std::string("bad sidecar: ") + e.what());
  }

  GridField field;
  try {
    const int n = sidecar.at("n").get<int>();
    field.grid = grid_from_json(n, sidecar.at("grid"));
    field.p = sidecar.at("p").get<double>();
    field.times = sidecar.at("times").get<std::vector<double>>();
    const json& b = sidecar.at("boundary");
    field.boundary.initial = b.at("initial").get<std::vector<double>>();
    field.boundary.inner = b.at("inner").get<std::vector<double>>();
    field.boundary.outer = b.at("outer").get<std::vector<double>>();
    field.boundary.provenance = b.value("provenance", "");
    field.meta.delta_used = sidecar.at("config").value("delta", 0.0);
  } catch (const json::exception& e) {
    fail(ErrorCode::IoFailure, std::string("bad sidecar: ") + e.what());
  }

  field.values.assign(field.rows() * field.cols(), 0.0);
  std::ifstream csv(csv_path);
  require(csv.good(), ErrorCode::IoFailure, "cannot open " + csv_path);
  std::string line;
  std::getline(csv, line);
  require(line == "r,t,value", ErrorCode::IoFailure, "unexpected CSV header in " + csv_path);
  size_t count = 0;
  while (std::getline(csv, line)) {
    if (line.empty()) continue;
    double r, t, v;
    require(std::sscanf(line.c_str(), "%lf,%lf,%lf", &r, &t, &v) == 3, ErrorCode::IoFailure,
            "bad CSV row: " + line);
    const size_t k = count / field.cols();
    const size_t j = count % field.cols();
    require(k < field.rows(), ErrorCode::IoFailure, "too many CSV rows");
    require(std::abs(r - field.grid.nodes[j]) <= 1e-9 * (1.0 + std::abs(r)) &&
                std::abs(t - field.times[k]) <= 1e-9 * (1.0 + std::abs(t)),
            ErrorCode::IoFailure, "CSV coordinates disagree with the sidecar");
    field.at(k, j) = v;
    ++count;
  }
  require(count == field.rows() * field.cols(), ErrorCode::IoFailure, "missing CSV rows");
  field.validate();
  return field;
}

}  // namespace supercal
