#include "supercal/solver.hpp"

#include <algorithm>
#include <cmath>

namespace supercal {

namespace {

double sign_pow(double s, double e) {
  if (s == 0.0) return 0.0;
  return s > 0.0 ? std::pow(s, e) : -std::pow(-s, e);
}

/// Finite-volume geometry shared by the solver and the residual classifier.
struct FvGeometry {
  std::vector<double> face;    // face radii r_{j+1/2}, size J (face[j] between j and j+1)
  std::vector<double> weight;  // r_{j+1/2}^{n-1}
  std::vector<double> volume;  // cell volumes, size J+1

  FvGeometry(const RadialGrid& grid) {
    const auto& r = grid.nodes;
    const size_t J = r.size() - 1;
    face.resize(J);
    weight.resize(J);
    for (size_t j = 0; j < J; ++j) {
      face[j] = 0.5 * (r[j] + r[j + 1]);
      weight[j] = std::pow(face[j], grid.n - 1.0);
    }
    volume.resize(J + 1);
    for (size_t j = 0; j <= J; ++j) {
      const double lo = j == 0 ? r[0] : face[j - 1];
      const double hi = j == J ? r[J] : face[j];
      volume[j] = (std::pow(hi, grid.n) - std::pow(lo, grid.n)) / grid.n;
    }
  }
};

double data_scale(const DirichletData& data) {
  double scale = 0.0;
  for (const auto* trace : {&data.initial, &data.inner, &data.outer})
    for (double v : *trace) scale = std::max(scale, std::abs(v));
  return scale;
}

double resolve_delta(const SolverConfig& config, double p, double scale) {
  if (config.delta >= 0.0) {
    require(!(p < 2.0 && config.delta == 0.0), ErrorCode::SingularDiffusivity,
            "fast diffusion needs delta > 0: the diffusivity blows up at zero gradient");
    return config.delta;
  }
  return p < 2.0 ? 1e-8 * std::max(1.0, scale) : 0.0;
}

// Solves the tridiagonal system in place: diag b, sub a, super c, rhs d.
void thomas(std::vector<double>& a, std::vector<double>& b, std::vector<double>& c,
            std::vector<double>& d) {
  const size_t m = b.size();
  for (size_t i = 1; i < m; ++i) {
    const double w = a[i] / b[i - 1];
    b[i] -= w * c[i - 1];
    d[i] -= w * d[i - 1];
  }
  d[m - 1] /= b[m - 1];
  for (size_t i = m - 1; i-- > 0;) d[i] = (d[i] - c[i] * d[i + 1]) / b[i];
}

}  // namespace

GridField solve(const Medium& medium, const RadialGrid& grid, const std::vector<double>& times,
                const DirichletData& data, const SolverConfig& config) {
  grid.validate();
  require(grid.n == medium.n, ErrorCode::InvalidArgument, "grid dimension disagrees with medium");
  require(times.size() >= 2, ErrorCode::InvalidArgument, "need at least 2 time levels");
  for (size_t k = 0; k + 1 < times.size(); ++k)
    require(times[k] < times[k + 1], ErrorCode::InvalidArgument,
            "times must be strictly increasing");
  require(config.picard_tol > 0.0, ErrorCode::InvalidArgument, "picard_tol must be positive");
  require(config.picard_max >= 1, ErrorCode::InvalidArgument, "picard_max must be >= 1");

  const size_t J = grid.count() - 1;
  const size_t K = times.size() - 1;
  const bool origin = grid.starts_at_origin();

  require(data.initial.size() == grid.count(), ErrorCode::InvalidArgument,
          "initial trace length mismatch");
  require(data.outer.size() == times.size(), ErrorCode::InvalidArgument,
          "outer trace length mismatch");
  if (origin)
    require(data.inner.empty(), ErrorCode::InvalidArgument,
            "origin grids take no inner Dirichlet trace");
  else
    require(data.inner.size() == times.size(), ErrorCode::InvalidArgument,
            "inner trace length mismatch");
  for (const auto* trace : {&data.initial, &data.inner, &data.outer})
    for (double v : *trace)
      require(std::isfinite(v), ErrorCode::InvalidArgument, "traces must be finite");

  const double scale = data_scale(data);
  const double corner_tol = 1e-6 * (1.0 + scale);
  require(std::abs(data.initial.back() - data.outer.front()) <= corner_tol,
          ErrorCode::InvalidArgument, "initial and outer traces disagree at the corner");
  if (!origin)
    require(std::abs(data.initial.front() - data.inner.front()) <= corner_tol,
            ErrorCode::InvalidArgument, "initial and inner traces disagree at the corner");

  const double p = medium.p;
  const double delta = resolve_delta(config, p, scale);
  const double delta2 = delta * delta;
  const FvGeometry geo(grid);

  GridField field;
  field.grid = grid;
  field.p = p;
  field.times = times;
  field.values.resize(times.size() * grid.count());
  field.boundary.initial = data.initial;
  field.boundary.inner = data.inner;
  field.boundary.outer = data.outer;
  field.boundary.provenance = data.provenance;
  field.meta.delta_used = delta;

  for (size_t j = 0; j <= J; ++j) field.at(0, j) = data.initial[j];

  const size_t j0 = origin ? 0 : 1;  // first unknown
  const size_t j1 = J - 1;           // last unknown
  const size_t m = j1 - j0 + 1;
  std::vector<double> sub(m), diag(m), super(m), rhs(m);
  std::vector<double> cur(grid.count()), next(grid.count());

  auto diffusivity = [&](double s) { return std::pow(s * s + delta2, 0.5 * (p - 2.0)); };

  for (size_t k = 1; k <= K; ++k) {
    const double dt = times[k] - times[k - 1];
    for (size_t j = 0; j <= J; ++j) cur[j] = field.at(k - 1, j);
    cur[J] = data.outer[k];
    if (!origin) cur[0] = data.inner[k];

    double prev_err = HUGE_VAL;
    int iter = 0;
    for (;; ++iter) {
      if (iter >= config.picard_max)
        fail(ErrorCode::PicardDivergence, "Picard iteration cap exceeded");

      // Frozen-coefficient transmissibilities g_{j+1/2} W_{j+1/2} / h_{j+1/2}.
      std::vector<double> trans(J);
      for (size_t j = 0; j < J; ++j) {
        const double h = grid.nodes[j + 1] - grid.nodes[j];
        const double s = (cur[j + 1] - cur[j]) / h;
        trans[j] = geo.weight[j] * diffusivity(s) / h;
      }

      for (size_t j = j0; j <= j1; ++j) {
        const size_t i = j - j0;
        const double tl = j == 0 ? 0.0 : trans[j - 1];  // zero flux at the origin
        const double tr = trans[j];
        diag[i] = geo.volume[j] / dt + tl + tr;
        sub[i] = i == 0 ? 0.0 : -tl;
        super[i] = i == m - 1 ? 0.0 : -tr;
        rhs[i] = geo.volume[j] / dt * field.at(k - 1, j);
        if (j == j0 && !origin) rhs[i] += tl * data.inner[k];
        if (j == j1) rhs[i] += tr * data.outer[k];
      }

      std::vector<double> a = sub, b = diag, c = super, d = rhs;
      thomas(a, b, c, d);

      next = cur;
      for (size_t j = j0; j <= j1; ++j) next[j] = d[j - j0];

      double err = 0.0;
      for (size_t j = 0; j <= J; ++j) err = std::max(err, std::abs(next[j] - cur[j]));

      // Damp oscillating iterates once the first sweeps are past.
      if (iter > 10 && err > prev_err)
        for (size_t j = j0; j <= j1; ++j) next[j] = 0.5 * (next[j] + cur[j]);

      prev_err = err;
      cur.swap(next);
      if (err <= config.picard_tol * std::max(1.0, scale)) break;
    }

    field.meta.picard_iterations.push_back(iter + 1);
    for (size_t j = 0; j <= J; ++j) field.at(k, j) = cur[j];
  }

  field.validate();
  return field;
}

GridField solve_from_family(const SolutionFamily& family, const RadialGrid& grid,
                            const std::vector<double>& times, const SolverConfig& config) {
  DirichletData data;
  data.initial.resize(grid.count());
  for (size_t j = 0; j < grid.count(); ++j)
    data.initial[j] = family.evaluate(grid.nodes[j], times.front()).value.value();
  data.outer.resize(times.size());
  for (size_t k = 0; k < times.size(); ++k)
    data.outer[k] = family.evaluate(grid.nodes.back(), times[k]).value.value();
  if (!grid.starts_at_origin()) {
    data.inner.resize(times.size());
    for (size_t k = 0; k < times.size(); ++k)
      data.inner[k] = family.evaluate(grid.nodes.front(), times[k]).value.value();
  }
  data.provenance = std::string("traces of ") + family_kind_name(family.kind());
  return solve(family.medium(), grid, times, data, config);
}

size_t ResidualClassification::count(CellClass c) const {
  return std::count(cells.begin(), cells.end(), c);
}

double ResidualClassification::fraction(CellClass c) const {
  return cells.empty() ? 0.0 : static_cast<double>(count(c)) / cells.size();
}

bool ResidualClassification::all_at_least_supersolution() const {
  return std::all_of(cells.begin(), cells.end(), [](CellClass c) {
    return c == CellClass::Solution || c == CellClass::Supersolution;
  });
}

bool ResidualClassification::all_at_most_subsolution() const {
  return std::all_of(cells.begin(), cells.end(), [](CellClass c) {
    return c == CellClass::Solution || c == CellClass::Subsolution;
  });
}

ResidualClassification residual_sign(const GridField& field, const SolverConfig& config) {
  field.validate();
  const RadialGrid& grid = field.grid;
  const size_t J = grid.count() - 1;
  const size_t K = field.times.size() - 1;
  const bool origin = grid.starts_at_origin();
  const double p = field.p;
  const FvGeometry geo(grid);

  ResidualClassification out;
  out.j_begin = origin ? 0 : 1;
  out.space_count = J - out.j_begin;
  out.time_count = K;
  out.cells.resize(out.space_count * K);
  out.residuals.resize(out.space_count * K);

  // Raw residuals, their local scales, and a per-cell noise bound. Value
  // noise eps*|u| passes through the flux as |noise/h|^{p-1} when the
  // gradient itself sits at noise level (the flux is not Lipschitz at zero
  // gradient for p < 2), so the bound must follow the same power law.
  const double eps = std::numeric_limits<double>::epsilon();
  std::vector<double> scales(out.space_count * K);
  std::vector<double> noise(out.space_count * K);

  auto flux_noise = [&](double s, double du) {
    // upper bound for | |s+du|^{p-2}(s+du) - |s|^{p-2} s |
    if (p < 2.0)
      return std::pow(du, p - 1.0) +
             (p - 1.0) * std::pow(std::max(std::abs(s), du), p - 2.0) * du;
    return (p - 1.0) * std::pow(std::abs(s) + du, p - 2.0) * du;
  };

  for (size_t k = 1; k <= K; ++k) {
    const double dt = field.times[k] - field.times[k - 1];
    std::vector<double> flux(J), slope(J), du(J);
    for (size_t j = 0; j < J; ++j) {
      const double h = grid.nodes[j + 1] - grid.nodes[j];
      slope[j] = (field.at(k, j + 1) - field.at(k, j)) / h;
      flux[j] = geo.weight[j] * sign_pow(slope[j], p - 1.0);
      du[j] = 2.0 * eps * std::max(std::abs(field.at(k, j)), std::abs(field.at(k, j + 1))) / h;
    }
    for (size_t j = out.j_begin; j < J; ++j) {
      const double dt_term = (field.at(k, j) - field.at(k - 1, j)) / dt;
      const double left = j == 0 ? 0.0 : flux[j - 1];
      const double div_term = (flux[j] - left) / geo.volume[j];
      const size_t idx = (k - 1) * out.space_count + (j - out.j_begin);
      out.residuals[idx] = dt_term - div_term;
      scales[idx] = std::abs(dt_term) + std::abs(div_term);
      const double left_noise =
          j == 0 ? 0.0 : geo.weight[j - 1] * flux_noise(slope[j - 1], du[j - 1]);
      const double right_noise = geo.weight[j] * flux_noise(slope[j], du[j]);
      noise[idx] =
          2.0 * eps * (std::abs(field.at(k, j)) + std::abs(field.at(k - 1, j))) / dt +
          (left_noise + right_noise) / geo.volume[j];
    }
  }

  for (size_t idx = 0; idx < out.cells.size(); ++idx) {
    const double tol = config.residual_tol * scales[idx] + 8.0 * noise[idx] + 1e-300;
    const double res = out.residuals[idx];
    if (std::abs(res) <= tol)
      out.cells[idx] = CellClass::Solution;
    else if (res > tol)
      out.cells[idx] = CellClass::Supersolution;
    else
      out.cells[idx] = CellClass::Subsolution;
  }
  return out;
}

namespace {

void check_same_layout(const GridField& u, const GridField& v) {
  require(u.grid.same_nodes(v.grid), ErrorCode::GridMismatch, "fields live on different grids");
  require(u.times.size() == v.times.size(), ErrorCode::GridMismatch, "time levels differ");
  for (size_t k = 0; k < u.times.size(); ++k)
    require(std::abs(u.times[k] - v.times[k]) <= 1e-12 * (1.0 + std::abs(u.times[k])),
            ErrorCode::GridMismatch, "time levels differ");
  require(u.p == v.p, ErrorCode::GridMismatch, "fields carry different exponents p");
}

std::vector<double> min_trace(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = std::min(a[i], b[i]);
  return out;
}

}  // namespace

GridField pointwise_min(const GridField& u, const GridField& v) {
  check_same_layout(u, v);
  GridField out = u;
  for (size_t i = 0; i < out.values.size(); ++i) out.values[i] = std::min(u.values[i], v.values[i]);
  if (u.boundary.initial.size() == v.boundary.initial.size())
    out.boundary.initial = min_trace(u.boundary.initial, v.boundary.initial);
  if (u.boundary.inner.size() == v.boundary.inner.size())
    out.boundary.inner = min_trace(u.boundary.inner, v.boundary.inner);
  if (u.boundary.outer.size() == v.boundary.outer.size())
    out.boundary.outer = min_trace(u.boundary.outer, v.boundary.outer);
  out.boundary.provenance = "min(" + u.boundary.provenance + ", " + v.boundary.provenance + ")";
  out.meta.picard_iterations.clear();
  return out;
}

GridField pointwise_min(const GridField& u, double k) {
  require(std::isfinite(k), ErrorCode::InvalidArgument, "truncation level must be finite");
  GridField out = u;
  for (double& v : out.values) v = std::min(v, k);
  for (auto* trace : {&out.boundary.initial, &out.boundary.inner, &out.boundary.outer})
    for (double& v : *trace) v = std::min(v, k);
  return out;
}

ComparisonReport compare(const GridField& u, const GridField& v, double tol) {
  check_same_layout(u, v);
  const size_t J = u.cols() - 1;
  const bool origin = u.grid.starts_at_origin();

  ComparisonReport report;
  report.boundary_ordered = true;
  report.interior_ordered = true;
  report.max_violation = 0.0;

  for (size_t k = 0; k < u.rows(); ++k) {
    for (size_t j = 0; j <= J; ++j) {
      const bool on_boundary = k == 0 || j == J || (!origin && j == 0);
      const double excess = u.at(k, j) - v.at(k, j);
      if (on_boundary) {
        if (excess > tol) report.boundary_ordered = false;
      } else {
        if (excess > tol) report.interior_ordered = false;
        report.max_violation = std::max(report.max_violation, excess);
      }
    }
  }
  return report;
}

}  // namespace supercal
