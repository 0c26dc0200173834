#pragma once

#include <cstdint>
#include <vector>

#include "supercal/grid.hpp"

namespace supercal {

/// Knobs of the implicit solver. delta < 0 asks for the automatic
/// regularization 1e-8 * data scale (0 for p >= 2, where the diffusivity is
/// already bounded at zero gradient).
struct SolverConfig {
  double delta = -1.0;
  double picard_tol = 1e-9;  // relative fixed-point tolerance
  int picard_max = 5000;
  double residual_tol = 1e-3;  // residual-sign classification, relative to local scale
};

/// Dirichlet traces for a solve: initial row (size J+1), lateral columns
/// (size K+1 each; inner empty on origin grids).
struct DirichletData {
  std::vector<double> initial;
  std::vector<double> inner;
  std::vector<double> outer;
  std::string provenance;
};

/// Backward-Euler evolution of d_t u = div(|d_r u|^{p-2} d_r u) on the grid,
/// one frozen-coefficient Picard iteration (tridiagonal solve per sweep) per
/// time step. Zero-flux symmetry applies at r = 0 on origin grids.
GridField solve(const Medium& medium, const RadialGrid& grid, const std::vector<double>& times,
                const DirichletData& data, const SolverConfig& config = {});

/// Convenience: initial and Dirichlet traces sampled from a closed form.
GridField solve_from_family(const SolutionFamily& family, const RadialGrid& grid,
                            const std::vector<double>& times, const SolverConfig& config = {});

enum class CellClass : std::uint8_t { Solution, Supersolution, Subsolution, Indeterminate };

/// Sign classification of the discrete residual (backward difference in time,
/// centered flux in space) on interior cells k = 1..K, j interior.
struct ResidualClassification {
  size_t time_count = 0;   // classified time levels (K)
  size_t space_count = 0;  // classified nodes per level
  size_t j_begin = 0;      // first classified column (0 on origin grids)
  std::vector<CellClass> cells;
  std::vector<double> residuals;

  CellClass at(size_t k, size_t j) const { return cells[(k - 1) * space_count + (j - j_begin)]; }
  double residual_at(size_t k, size_t j) const {
    return residuals[(k - 1) * space_count + (j - j_begin)];
  }

  size_t count(CellClass c) const;
  double fraction(CellClass c) const;
  bool all_at_least_supersolution() const;  // every cell Solution or Supersolution
  bool all_at_most_subsolution() const;     // every cell Solution or Subsolution
};

ResidualClassification residual_sign(const GridField& field, const SolverConfig& config = {});

/// Entrywise minimum; boundary records take the minimum of the traces.
GridField pointwise_min(const GridField& u, const GridField& v);
GridField pointwise_min(const GridField& u, double k);

struct ComparisonReport {
  bool boundary_ordered = false;
  bool interior_ordered = false;
  double max_violation = 0.0;  // largest interior excess of u over v
};

/// Checks u <= v + tol on the discrete parabolic boundary and in the interior.
ComparisonReport compare(const GridField& u, const GridField& v, double tol);

}  // namespace supercal
