#pragma once

#include <string>
#include <vector>

#include "supercal/closed_form.hpp"
#include "supercal/medium.hpp"

namespace supercal {

enum class Spacing { Uniform, Geometric, Explicit };

const char* spacing_name(Spacing s);

/// Strictly increasing radial nodes r_0 < ... < r_J with r_0 >= 0. A grid
/// starting at the origin gets a zero-flux symmetry condition there.
struct RadialGrid {
  int n = 1;
  Spacing spacing = Spacing::Uniform;
  std::vector<double> nodes;

  static RadialGrid uniform(int n, double r_lo, double r_hi, int count);
  static RadialGrid geometric(int n, double r_lo, double r_hi, int count);
  static RadialGrid explicit_nodes(int n, std::vector<double> nodes);

  size_t count() const { return nodes.size(); }
  bool starts_at_origin() const { return nodes.front() == 0.0; }
  void validate() const;

  bool same_nodes(const RadialGrid& other) const;
};

/// Dirichlet traces pinned during a solve: the initial row and the lateral
/// columns (inner column absent on origin grids).
struct BoundaryRecord {
  std::vector<double> initial;
  std::vector<double> inner;
  std::vector<double> outer;
  std::string provenance;
};

struct FieldMeta {
  double delta_used = 0.0;
  std::vector<int> picard_iterations;
};

/// Radially symmetric discrete space-time field: values[k][j] at time t_k and
/// radius r_j.
struct GridField {
  RadialGrid grid;
  double p = 2.0;
  std::vector<double> times;
  std::vector<double> values;  // (K+1) x (J+1), time-major
  BoundaryRecord boundary;
  FieldMeta meta;

  size_t rows() const { return times.size(); }
  size_t cols() const { return grid.count(); }
  double& at(size_t k, size_t j) { return values[k * cols() + j]; }
  double at(size_t k, size_t j) const { return values[k * cols() + j]; }

  Medium medium() const { return Medium(grid.n, p); }
  void validate() const;

  double min_value() const;
  double max_abs() const;

  /// Bilinear interpolation in (r, t); throws outside the covered rectangle.
  double value_interp(double r, double t) const;
  /// Radial derivative of the field: centered node differences interpolated
  /// bilinearly.
  double gradient_interp(double r, double t) const;
};

/// Samples a closed-form family on a grid; rejects grids through a standing
/// singularity.
GridField sample_family(const SolutionFamily& family, const RadialGrid& grid,
                        const std::vector<double>& times);

/// CSV (r, t, value) plus a JSON sidecar carrying n, p, the grid spec, times,
/// boundary provenance and solver config.
void write_field_csv(const GridField& field, const std::string& csv_path,
                     const std::string& sidecar_path);
GridField read_field_csv(const std::string& csv_path, const std::string& sidecar_path);

}  // namespace supercal
