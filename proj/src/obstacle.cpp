#include "supercal/obstacle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

namespace supercal {

namespace {

bool is_contact(double u, double psi) { return u - psi < 1e-6 * (1.0 + std::abs(psi)); }

}  // namespace

ObstacleSolution solve_obstacle(const ObstacleProblem& problem) {
  const GridField& psi = problem.psi;
  psi.validate();
  const SolverConfig& config = problem.config;
  require(config.picard_tol > 0.0, ErrorCode::InvalidArgument, "picard_tol must be positive");
  require(config.picard_max >= 1, ErrorCode::InvalidArgument, "picard_max must be >= 1");

  const RadialGrid& grid = psi.grid;
  const size_t J = grid.count() - 1;
  const size_t K = psi.times.size() - 1;
  const bool origin = grid.starts_at_origin();
  const double p = psi.p;
  const double scale = std::max(1.0, psi.max_abs());
  const double delta = config.delta >= 0.0 ? config.delta : (p < 2.0 ? 1e-8 * scale : 0.0);
  require(!(p < 2.0 && delta == 0.0), ErrorCode::SingularDiffusivity,
          "fast diffusion needs delta > 0");
  const double delta2 = delta * delta;

  const auto& r = grid.nodes;
  std::vector<double> face(J), weight(J), volume(J + 1);
  for (size_t j = 0; j < J; ++j) {
    face[j] = 0.5 * (r[j] + r[j + 1]);
    weight[j] = std::pow(face[j], grid.n - 1.0);
  }
  for (size_t j = 0; j <= J; ++j) {
    const double lo = j == 0 ? r[0] : face[j - 1];
    const double hi = j == J ? r[J] : face[j];
    volume[j] = (std::pow(hi, grid.n) - std::pow(lo, grid.n)) / grid.n;
  }

  // Resolve the parabolic boundary data: psi's own traces unless overridden.
  DirichletData data = problem.boundary;
  if (data.initial.empty())
    data.initial.assign(psi.values.begin(), psi.values.begin() + grid.count());
  if (data.outer.empty()) {
    data.outer.resize(psi.times.size());
    for (size_t k = 0; k <= K; ++k) data.outer[k] = psi.at(k, J);
  }
  if (!origin && data.inner.empty()) {
    data.inner.resize(psi.times.size());
    for (size_t k = 0; k <= K; ++k) data.inner[k] = psi.at(k, 0);
  }
  require(data.initial.size() == grid.count() && data.outer.size() == psi.times.size() &&
              (origin ? data.inner.empty() : data.inner.size() == psi.times.size()),
          ErrorCode::InvalidArgument, "boundary trace lengths mismatch");
  for (size_t j = 0; j <= J; ++j)
    require(data.initial[j] >= psi.at(0, j) - 1e-9 * (1.0 + std::abs(psi.at(0, j))),
            ErrorCode::InvalidArgument, "boundary data dips below the obstacle");
  for (size_t k = 0; k <= K; ++k) {
    require(data.outer[k] >= psi.at(k, J) - 1e-9 * (1.0 + std::abs(psi.at(k, J))),
            ErrorCode::InvalidArgument, "boundary data dips below the obstacle");
    if (!origin)
      require(data.inner[k] >= psi.at(k, 0) - 1e-9 * (1.0 + std::abs(psi.at(k, 0))),
              ErrorCode::InvalidArgument, "boundary data dips below the obstacle");
  }

  GridField u = psi;
  u.boundary.initial = data.initial;
  u.boundary.inner = data.inner;
  u.boundary.outer = data.outer;
  u.boundary.provenance = "obstacle problem over " + psi.boundary.provenance;
  u.meta.delta_used = delta;
  u.meta.picard_iterations.clear();
  for (size_t j = 0; j <= J; ++j) u.at(0, j) = data.initial[j];

  const size_t j0 = origin ? 0 : 1;
  const size_t j1 = J - 1;

  auto diffusivity = [&](double s) { return std::pow(s * s + delta2, 0.5 * (p - 2.0)); };

  // Per step: outer Picard on the frozen coefficients. Each outer pass does
  // one projected tridiagonal solve (fast on the stiff zero-gradient zones,
  // where plain sweeps contract like 1 - O(h^2/delta^{2-p}) and would crawl)
  // followed by projected Gauss-Seidel smoothing sweeps that restore
  // complementarity around the contact interface.
  std::vector<double> sub(grid.count()), diag(grid.count()), super(grid.count()),
      rhs(grid.count());
  for (size_t k = 1; k <= K; ++k) {
    const double dt = u.times[k] - u.times[k - 1];
    std::vector<double> w(grid.count());
    for (size_t j = 0; j <= J; ++j) w[j] = std::max(u.at(k - 1, j), psi.at(k, j));
    w[J] = data.outer[k];
    if (!origin) w[0] = data.inner[k];

    std::vector<double> trans(J);
    auto freeze = [&] {
      for (size_t j = 0; j < J; ++j) {
        const double h = r[j + 1] - r[j];
        trans[j] = weight[j] * diffusivity((w[j + 1] - w[j]) / h) / h;
      }
    };
    auto row = [&](size_t j, double& tl, double& tr, double& dg, double& rh) {
      tl = j == 0 ? 0.0 : trans[j - 1];
      tr = trans[j];
      dg = volume[j] / dt + tl + tr;
      rh = volume[j] / dt * u.at(k - 1, j);
    };

    // Warm start: iterate [freeze, unconstrained tridiagonal solve, project]
    // to its own fixed point. On contact-free steps (and when the obstacle is
    // itself a discrete solution) this lands on the answer directly,
    // including the stiff zero-gradient zones where plain sweeps crawl. Its
    // fixed point is not the variational inequality in general, so the
    // projected Gauss-Seidel loop below owns convergence.
    const size_t m = j1 - j0 + 1;
    auto projected_direct = [&] {
      freeze();
      for (size_t j = j0; j <= j1; ++j) {
        double tl, tr, dg, rh;
        row(j, tl, tr, dg, rh);
        const size_t i = j - j0;
        sub[i] = i == 0 ? 0.0 : -tl;
        super[i] = i == m - 1 ? 0.0 : -tr;
        diag[i] = dg;
        rhs[i] = rh;
        if (j == j0 && !origin) rhs[i] += tl * w[0];
        if (j == j1) rhs[i] += tr * w[J];
      }
      for (size_t i = 1; i < m; ++i) {
        const double f = sub[i] / diag[i - 1];
        diag[i] -= f * super[i - 1];
        rhs[i] -= f * rhs[i - 1];
      }
      rhs[m - 1] /= diag[m - 1];
      for (size_t i = m - 1; i-- > 0;) rhs[i] = (rhs[i] - super[i] * rhs[i + 1]) / diag[i];
      double change = 0.0;
      for (size_t j = j0; j <= j1; ++j) {
        const double cand = std::max(psi.at(k, j), rhs[j - j0]);
        change = std::max(change, std::abs(cand - w[j]));
        w[j] = cand;
      }
      return change;
    };
    {
      double prev = HUGE_VAL;
      for (int it = 0; it < 200; ++it) {
        const double change = projected_direct();
        if (change <= 1e-2 * config.picard_tol * scale || change > prev) break;
        prev = change;
      }
    }

    // Projected Gauss-Seidel sweeps, coefficients refrozen every sweep. The
    // sweep-to-sweep change underestimates the error by 1/(1 - rate), so the
    // stop criterion extrapolates with the observed contraction rate and
    // requires three consecutive passes.
    int work = 0;
    double last_change = HUGE_VAL;
    double rate = 0.0;
    int passes = 0;
    for (;; ++work) {
      if (work >= config.picard_max) {
        char what[160];
        std::snprintf(what, sizeof(what),
                      "projected Gauss-Seidel sweep cap exceeded at step %zu, last change %.3e",
                      k, last_change);
        fail(ErrorCode::ProjectionStall, what);
      }
      freeze();
      double change = 0.0;
      for (size_t j = j0; j <= j1; ++j) {
        double tl, tr, dg, rh;
        row(j, tl, tr, dg, rh);
        rh += (j == 0 ? 0.0 : tl * w[j - 1]) + tr * w[j + 1];
        const double cand = std::max(psi.at(k, j), rh / dg);
        change = std::max(change, std::abs(cand - w[j]));
        w[j] = cand;
      }
      if (change <= 1e-14 * scale) break;  // floating-point floor
      if (last_change > 0.0 && last_change < HUGE_VAL)
        rate = std::max(0.5 * rate, std::min(change / last_change, 0.999999));
      const double err_est = change * std::max(1.0, rate / (1.0 - rate));
      last_change = change;
      if (err_est <= config.picard_tol * scale) {
        if (++passes >= 3) break;
      } else {
        passes = 0;
      }
    }

    u.meta.picard_iterations.push_back(work + 1);
    for (size_t j = 0; j <= J; ++j) u.at(k, j) = w[j];
  }

  ObstacleSolution out;
  out.u = u;
  out.contact.assign(u.values.size(), 0);
  size_t contact_count = 0;
  for (size_t k = 0; k <= K; ++k)
    for (size_t j = 0; j <= J; ++j)
      if (is_contact(u.at(k, j), psi.at(k, j))) {
        out.contact[k * u.cols() + j] = 1;
        ++contact_count;
      }
  out.contact_fraction = static_cast<double>(contact_count) / u.values.size();

  // max over interior cells of |min(residual, u - psi)|: both the
  // supersolution property and complementary slackness in one number.
  const ResidualClassification rc = residual_sign(u, config);
  double comp = 0.0;
  for (size_t k = 1; k <= K; ++k)
    for (size_t j = j0; j <= j1; ++j) {
      const double res = rc.residual_at(k, j);
      const double gap = u.at(k, j) - psi.at(k, j);
      comp = std::max(comp, std::abs(std::min(res, gap)));
    }
  out.complementarity_residual = comp;
  return out;
}

GridField poisson_modify(const GridField& u, double r_lo, double r_hi, double t_lo, double t_hi,
                         const SolverConfig& config) {
  u.validate();
  const auto& nodes = u.grid.nodes;
  const auto& times = u.times;
  require(r_lo < r_hi && t_lo < t_hi, ErrorCode::InvalidArgument, "empty sub-box");
  require(r_lo >= nodes.front() - 1e-12 && r_hi <= nodes.back() + 1e-12 &&
              t_lo >= times.front() - 1e-12 && t_hi <= times.back() + 1e-12,
          ErrorCode::InvalidArgument, "sub-box not contained in the field domain");

  auto nearest = [](const std::vector<double>& xs, double x) {
    size_t best = 0;
    for (size_t i = 1; i < xs.size(); ++i)
      if (std::abs(xs[i] - x) < std::abs(xs[best] - x)) best = i;
    return best;
  };
  const size_t ja = nearest(nodes, r_lo), jb = nearest(nodes, r_hi);
  const size_t ka = nearest(times, t_lo), kb = nearest(times, t_hi);
  require(jb >= ja + 2 && kb >= ka + 1, ErrorCode::InvalidArgument,
          "sub-box too small after snapping to the grid");

  RadialGrid sub_grid = RadialGrid::explicit_nodes(
      u.grid.n, std::vector<double>(nodes.begin() + ja, nodes.begin() + jb + 1));
  std::vector<double> sub_times(times.begin() + ka, times.begin() + kb + 1);

  DirichletData data;
  data.provenance = "Poisson modification of " + u.boundary.provenance;
  data.initial.resize(sub_grid.count());
  for (size_t j = 0; j < sub_grid.count(); ++j) data.initial[j] = u.at(ka, ja + j);
  data.outer.resize(sub_times.size());
  for (size_t k = 0; k < sub_times.size(); ++k) data.outer[k] = u.at(ka + k, jb);
  if (!sub_grid.starts_at_origin()) {
    data.inner.resize(sub_times.size());
    for (size_t k = 0; k < sub_times.size(); ++k) data.inner[k] = u.at(ka + k, ja);
  }

  const Medium medium(u.grid.n, u.p);
  const GridField h = solve(medium, sub_grid, sub_times, data, config);

  GridField out = u;
  const size_t inner_lo = sub_grid.starts_at_origin() ? 0 : 1;
  for (size_t k = 1; k < sub_times.size(); ++k)
    for (size_t j = inner_lo; j + 1 < sub_grid.count(); ++j)
      out.at(ka + k, ja + j) = h.at(k, j);
  return out;
}

bool minimality_check(const ObstacleSolution& solution, const GridField& psi,
                      const GridField& candidate, const SolverConfig& config) {
  require(candidate.grid.same_nodes(psi.grid) && candidate.times.size() == psi.times.size(),
          ErrorCode::GridMismatch, "candidate lives on a different grid");

  for (size_t i = 0; i < candidate.values.size(); ++i)
    if (candidate.values[i] < psi.values[i] - 1e-6 * (1.0 + std::abs(psi.values[i])))
      fail(ErrorCode::PreconditionViolation, "candidate dips below the obstacle");

  // Supersolution precondition, with an allowance for iteration lag: solver
  // outputs carry residual noise of order picard_tol * scale / dt.
  const ResidualClassification rc = residual_sign(candidate, config);
  double dt_min = HUGE_VAL;
  for (size_t k = 1; k < candidate.times.size(); ++k)
    dt_min = std::min(dt_min, candidate.times[k] - candidate.times[k - 1]);
  const double lag =
      1e3 * config.picard_tol * std::max(1.0, candidate.max_abs()) / dt_min;
  const size_t j_begin = candidate.grid.starts_at_origin() ? 0 : 1;
  for (size_t k = 1; k < candidate.times.size(); ++k)
    for (size_t j = j_begin; j + 1 < candidate.cols(); ++j)
      if (rc.at(k, j) == CellClass::Subsolution && rc.residual_at(k, j) < -lag)
        fail(ErrorCode::PreconditionViolation, "candidate is not a discrete supersolution");

  const double slack = 10.0 * config.picard_tol * std::max(1.0, solution.u.max_abs());
  for (size_t i = 0; i < candidate.values.size(); ++i)
    if (solution.u.values[i] > candidate.values[i] + slack) return false;
  return true;
}

void write_obstacle_outputs(const ObstacleSolution& solution, const std::string& field_csv,
                            const std::string& sidecar_json, const std::string& contact_csv,
                            const std::string& summary_json) {
  write_field_csv(solution.u, field_csv, sidecar_json);

  std::ofstream mask(contact_csv);
  require(mask.good(), ErrorCode::IoFailure, "cannot open " + contact_csv);
  mask << "r,t,contact\n";
  char buf[40];
  for (size_t k = 0; k < solution.u.rows(); ++k)
    for (size_t j = 0; j < solution.u.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", solution.u.grid.nodes[j]);
      mask << buf << ',';
      std::snprintf(buf, sizeof(buf), "%.17g", solution.u.times[k]);
      mask << buf << ',' << (solution.contact_at(k, j) ? 1 : 0) << '\n';
    }
  require(mask.good(), ErrorCode::IoFailure, "write failed for " + contact_csv);

  nlohmann::json summary{{"complementarity_residual", solution.complementarity_residual},
                         {"contact_fraction", solution.contact_fraction}};
  std::ofstream out(summary_json);
  require(out.good(), ErrorCode::IoFailure, "cannot open " + summary_json);
  out << summary.dump(2) << '\n';
}

}  // namespace supercal
