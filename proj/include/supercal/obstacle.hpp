#pragma once

#include "supercal/solver.hpp"

namespace supercal {

/// Discrete obstacle problem. By default the obstacle supplies the parabolic
/// boundary data (u = psi there); explicit traces may override it, as long as
/// they stay above the obstacle on the boundary.
struct ObstacleProblem {
  GridField psi;
  SolverConfig config;
  DirichletData boundary;  // empty traces: psi's own rows/columns are used
};

struct ObstacleSolution {
  GridField u;
  std::vector<std::uint8_t> contact;  // per cell, same layout as u.values
  double complementarity_residual = 0.0;
  double contact_fraction = 0.0;

  bool contact_at(size_t k, size_t j) const { return contact[k * u.cols() + j] != 0; }
};

/// Smallest discrete supersolution above psi: per time step the backward-Euler
/// variational inequality is solved by projected Gauss-Seidel sweeps
/// (projection onto {w >= psi} after each update).
ObstacleSolution solve_obstacle(const ObstacleProblem& problem);

/// Replaces u inside the space-time sub-box by the solution of the equation
/// with u's trace as lateral/initial data; unchanged outside. Bounds are
/// snapped to the nearest grid nodes / time levels.
GridField poisson_modify(const GridField& u, double r_lo, double r_hi, double t_lo, double t_hi,
                         const SolverConfig& config = {});

/// True iff solution.u <= candidate + 10 * picard_tol everywhere. The
/// candidate must lie above the obstacle and classify as a discrete
/// supersolution, else PreconditionViolation.
bool minimality_check(const ObstacleSolution& solution, const GridField& psi,
                      const GridField& candidate, const SolverConfig& config = {});

/// GridField CSV plus contact mask CSV (r, t, 0/1) and a JSON summary.
void write_obstacle_outputs(const ObstacleSolution& solution, const std::string& field_csv,
                            const std::string& sidecar_json, const std::string& contact_csv,
                            const std::string& summary_json);

}  // namespace supercal
