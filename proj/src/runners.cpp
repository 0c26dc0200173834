#include "supercal/runners.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace supercal {

using nlohmann::json;

namespace {

[[noreturn]] void bad_config(const std::string& what) { fail(ErrorCode::BadConfig, what); }

const json& need(const json& cfg, const char* key) {
  if (!cfg.contains(key)) bad_config(std::string("missing config key '") + key + "'");
  return cfg.at(key);
}

double need_number(const json& cfg, const char* key) {
  const json& v = need(cfg, key);
  if (!v.is_number()) bad_config(std::string("config key '") + key + "' must be a number");
  return v.get<double>();
}

int need_int(const json& cfg, const char* key) {
  const json& v = need(cfg, key);
  if (!v.is_number_integer()) bad_config(std::string("config key '") + key + "' must be an integer");
  return v.get<int>();
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json ext_to_json(const ExtReal& x) {
  if (x.is_pos_inf()) return "inf";
  if (x.is_undefined()) return "nan";
  return x.value();
}

}  // namespace

Medium medium_from_json(const json& cfg) {
  try {
    return Medium(need_int(cfg, "n"), need_number(cfg, "p"));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidArgument) bad_config(e.what());
    throw;
  }
}

SolutionFamily family_from_json(const json& cfg) {
  const std::string kind = need(cfg, "family").get<std::string>();
  const Medium medium = medium_from_json(cfg);
  const bool zero_extend = cfg.value("zero_extend", false);
  if (kind == "sbb") {
    const double c =
        cfg.contains("c") ? need_number(cfg, "c") : normalize_mass(medium).c;
    return SolutionFamily::singular_barenblatt(medium, c, zero_extend);
  }
  if (kind == "dbb")
    return SolutionFamily::degenerate_barenblatt(medium, need_number(cfg, "c"), zero_extend);
  if (kind == "ips") return SolutionFamily::infinite_point_source(medium, zero_extend);
  if (kind == "power") {
    const double q = need_number(cfg, "q");
    if (cfg.contains("c"))
      return SolutionFamily::power_supersolution(medium, q, need_number(cfg, "c"), zero_extend);
    return SolutionFamily::power_supersolution(medium, q, zero_extend);
  }
  bad_config("family must be one of sbb, dbb, ips, power");
}

SolverConfig solver_config_from_json(const json& cfg) {
  SolverConfig config;
  config.delta = cfg.value("delta", -1.0);
  config.picard_tol = cfg.value("picard_tol", 1e-9);
  config.picard_max = cfg.value("picard_max", 5000);
  config.residual_tol = cfg.value("residual_tol", 1e-3);
  return config;
}

SourcePtr source_from_json(const json& cfg) {
  const std::string kind = cfg.value("kind", "family");
  SourcePtr source;
  if (kind == "family") {
    source = make_family_source(family_from_json(need(cfg, "family")));
  } else if (kind == "field") {
    GridField field = read_field_csv(need(cfg, "csv").get<std::string>(),
                                     need(cfg, "sidecar").get<std::string>());
    source = make_field_source(std::move(field));
  } else if (kind == "constant") {
    source = make_constant_source(need_number(cfg, "value"));
  } else {
    bad_config("source kind must be family, field, or constant");
  }
  if (cfg.contains("truncate")) source = make_truncated_source(source, need_number(cfg, "truncate"));
  if (cfg.contains("shift")) source = make_shifted_source(source, need_number(cfg, "shift"));
  return source;
}

namespace {

RadialGrid grid_from_config(int n, const json& cfg) {
  const std::string kind = cfg.value("kind", "uniform");
  if (kind == "explicit")
    return RadialGrid::explicit_nodes(n, need(cfg, "nodes").get<std::vector<double>>());
  const double r_lo = need_number(cfg, "r_lo");
  const double r_hi = need_number(cfg, "r_hi");
  const int count = need_int(cfg, "count");
  return kind == "geometric" ? RadialGrid::geometric(n, r_lo, r_hi, count)
                             : RadialGrid::uniform(n, r_lo, r_hi, count);
}

std::vector<double> times_from_config(const json& cfg) {
  if (cfg.contains("values")) return cfg.at("values").get<std::vector<double>>();
  const double t_lo = need_number(cfg, "t_lo");
  const double t_hi = need_number(cfg, "t_hi");
  const int count = need_int(cfg, "count");
  if (count < 2) bad_config("times.count must be >= 2");
  std::vector<double> times(count);
  for (int k = 0; k < count; ++k) times[k] = t_lo + (t_hi - t_lo) * k / (count - 1);
  return times;
}

Cylinder cylinder_from_config(const json& cfg) {
  Cylinder cyl;
  cyl.x0 = cfg.value("x0", 0.0);
  cyl.r = need_number(cfg, "r");
  cyl.t1 = need_number(cfg, "t1");
  cyl.t2 = need_number(cfg, "t2");
  cyl.validate();
  return cyl;
}

json scan_to_json(const IntegralScan& scan) {
  return json{{"q", scan.q},
              {"cutoffs", scan.cutoffs},
              {"values", scan.values},
              {"verdict", verdict_name(scan.verdict)},
              {"slope", scan.slope}};
}

void write_scan_csv(const std::vector<IntegralScan>& scans, const std::string& path) {
  std::ofstream out(path);
  require(out.good(), ErrorCode::IoFailure, "cannot open " + path);
  out << "q,rho,I,verdict\n";
  for (const IntegralScan& scan : scans)
    for (size_t k = 0; k < scan.cutoffs.size(); ++k)
      out << fmt17(scan.q) << ',' << fmt17(scan.cutoffs[k]) << ',' << fmt17(scan.values[k]) << ','
          << verdict_name(scan.verdict) << '\n';
  require(out.good(), ErrorCode::IoFailure, "write failed for " + path);
}

}  // namespace

json run_exponents(const json& cfg) {
  const Medium medium = medium_from_json(cfg);
  const ExponentTable t = exponent_table(medium);
  return json{{"n", medium.n},
              {"p", medium.p},
              {"regime", regime_name(classify_regime(medium))},
              {"lambda", t.lambda},
              {"q_barenblatt", t.q_barenblatt},
              {"q_gradient", t.q_gradient},
              {"s_critical", t.s_critical},
              {"g_critical", t.g_critical},
              {"sobolev_q", {{"offset", t.p_value}, {"slope", t.p_over_n}}}};
}

json run_moser(const json& cfg) {
  const Medium medium = medium_from_json(cfg);
  const MoserTrace trace =
      moser_sequence(medium, need_number(cfg, "s0"), cfg.value("cap", 64));
  json out{{"s0", trace.s0},
           {"steps", trace.steps},
           {"closed_form_check", trace.closed_form_check}};
  if (trace.first_ge_one)
    out["first_ge_one"] = *trace.first_ge_one;
  else
    out["first_ge_one"] = nullptr;
  return out;
}

json run_eval(const json& cfg) {
  const SolutionFamily family = family_from_json(cfg);

  std::vector<std::pair<double, double>> points;
  if (cfg.contains("points")) {
    for (const auto& pt : cfg.at("points")) {
      if (!pt.is_array() || pt.size() != 2) bad_config("points must be [radius, t] pairs");
      points.emplace_back(pt[0].get<double>(), pt[1].get<double>());
    }
  } else if (cfg.contains("points_file")) {
    std::ifstream in(cfg.at("points_file").get<std::string>());
    require(in.good(), ErrorCode::IoFailure,
            "cannot open " + cfg.at("points_file").get<std::string>());
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#' || line.rfind("radius", 0) == 0 ||
          line.rfind("r,", 0) == 0)
        continue;
      double r, t;
      if (std::sscanf(line.c_str(), "%lf,%lf", &r, &t) != 2)
        bad_config("bad points row: " + line);
      points.emplace_back(r, t);
    }
  } else {
    bad_config("eval needs points or points_file");
  }

  std::ostringstream csv;
  csv << "radius,t,value,radial_gradient,time_derivative,flux_divergence,residual\n";
  for (const auto& [r, t] : points) {
    const EvalResult res = family.evaluate(r, t);
    csv << fmt17(r) << ',' << fmt17(t) << ',' << res.value.csv_string() << ','
        << res.radial_gradient.csv_string() << ',' << res.time_derivative.csv_string() << ','
        << res.flux_divergence.csv_string() << ',' << res.residual.csv_string() << '\n';
  }

  json out{{"family", family_kind_name(family.kind())},
           {"c", family.c()},
           {"count", points.size()}};
  if (cfg.contains("output")) {
    const std::string path = cfg.at("output").get<std::string>();
    std::ofstream file(path);
    require(file.good(), ErrorCode::IoFailure, "cannot open " + path);
    file << csv.str();
    require(file.good(), ErrorCode::IoFailure, "write failed for " + path);
    out["output"] = path;
  } else {
    out["csv"] = csv.str();
  }
  return out;
}

json run_solve(const json& cfg) {
  const Medium medium = medium_from_json(need(cfg, "medium"));
  const RadialGrid grid = grid_from_config(medium.n, need(cfg, "grid"));
  const std::vector<double> times = times_from_config(need(cfg, "times"));
  const SolverConfig config = solver_config_from_json(cfg.value("solver", json::object()));

  const json& data_cfg = need(cfg, "data");
  const std::string kind = data_cfg.value("kind", "family");
  GridField field = [&] {
    if (kind == "family")
      return solve_from_family(family_from_json(need(data_cfg, "family")), grid, times, config);
    if (kind == "constant") {
      const double v = need_number(data_cfg, "value");
      DirichletData data;
      data.initial.assign(grid.count(), v);
      data.outer.assign(times.size(), v);
      if (!grid.starts_at_origin()) data.inner.assign(times.size(), v);
      data.provenance = "constant data";
      return solve(medium, grid, times, data, config);
    }
    if (kind == "values") {
      DirichletData data;
      data.initial = need(data_cfg, "initial").get<std::vector<double>>();
      data.outer = need(data_cfg, "outer").get<std::vector<double>>();
      if (data_cfg.contains("inner"))
        data.inner = data_cfg.at("inner").get<std::vector<double>>();
      data.provenance = data_cfg.value("provenance", "explicit traces");
      return solve(medium, grid, times, data, config);
    }
    bad_config("data.kind must be family, constant, or values");
  }();

  json out{{"delta_used", field.meta.delta_used},
           {"picard_iterations", field.meta.picard_iterations},
           {"max_abs", field.max_abs()}};
  if (cfg.contains("output")) {
    const json& o = cfg.at("output");
    write_field_csv(field, need(o, "field_csv").get<std::string>(),
                    need(o, "sidecar").get<std::string>());
    out["field_csv"] = o.at("field_csv");
    out["sidecar"] = o.at("sidecar");
  }
  return out;
}

namespace {

GridField obstacle_from_config(const Medium& medium, const RadialGrid& grid,
                               const std::vector<double>& times, const json& cfg) {
  const std::string kind = cfg.value("kind", "bump");
  if (kind == "family")
    return sample_family(family_from_json(need(cfg, "family")), grid, times);
  if (kind == "bump") {
    // base + height * C1 bump centered in the box.
    const double base = cfg.value("base", 0.0);
    const double height = need_number(cfg, "height");
    const double rc = need_number(cfg, "r_center");
    const double rw = need_number(cfg, "r_width");
    const double tc = need_number(cfg, "t_center");
    const double tw = need_number(cfg, "t_width");
    auto bump1 = [](double x) {
      const double y = 1.0 - x * x;
      return y <= 0.0 ? 0.0 : y * y;
    };
    GridField psi;
    psi.grid = grid;
    psi.p = medium.p;
    psi.times = times;
    psi.values.resize(times.size() * grid.count());
    for (size_t k = 0; k < times.size(); ++k)
      for (size_t j = 0; j < grid.count(); ++j)
        psi.at(k, j) = base + height * bump1((grid.nodes[j] - rc) / rw) *
                                  bump1((times[k] - tc) / tw);
    psi.boundary.initial.assign(psi.values.begin(), psi.values.begin() + grid.count());
    psi.boundary.outer.resize(times.size());
    for (size_t k = 0; k < times.size(); ++k) psi.boundary.outer[k] = psi.at(k, grid.count() - 1);
    if (!grid.starts_at_origin()) {
      psi.boundary.inner.resize(times.size());
      for (size_t k = 0; k < times.size(); ++k) psi.boundary.inner[k] = psi.at(k, 0);
    }
    psi.boundary.provenance = "interior bump obstacle";
    psi.validate();
    return psi;
  }
  bad_config("obstacle.kind must be family or bump");
}

}  // namespace

json run_obstacle(const json& cfg) {
  const Medium medium = medium_from_json(need(cfg, "medium"));
  const RadialGrid grid = grid_from_config(medium.n, need(cfg, "grid"));
  const std::vector<double> times = times_from_config(need(cfg, "times"));

  ObstacleProblem problem{
      obstacle_from_config(medium, grid, times, need(cfg, "obstacle")),
      solver_config_from_json(cfg.value("solver", json::object()))};
  const ObstacleSolution solution = solve_obstacle(problem);

  json out{{"complementarity_residual", solution.complementarity_residual},
           {"contact_fraction", solution.contact_fraction},
           {"sweeps", solution.u.meta.picard_iterations}};
  if (cfg.contains("output")) {
    const json& o = cfg.at("output");
    write_obstacle_outputs(solution, need(o, "field_csv").get<std::string>(),
                           need(o, "sidecar").get<std::string>(),
                           need(o, "contact_csv").get<std::string>(),
                           need(o, "summary").get<std::string>());
    out["field_csv"] = o.at("field_csv");
  }
  return out;
}

json run_scan(const json& cfg) {
  const Medium medium = medium_from_json(need(cfg, "medium"));
  const SourcePtr source = source_from_json(need(cfg, "source"));
  const Cylinder cyl = cylinder_from_config(need(cfg, "cylinder"));
  const Selector selector =
      cfg.value("selector", "value") == std::string("gradient") ? Selector::Gradient
                                                                : Selector::Value;
  const int cutoff_count = cfg.value("cutoff_count", 40);

  json out;
  std::vector<IntegralScan> scans;
  if (cfg.contains("q")) {
    scans.push_back(
        scan_integral(*source, medium.n, cyl, need_number(cfg, "q"), selector, cutoff_count));
    out["scan"] = scan_to_json(scans.back());
  } else {
    const ExponentScanResult result =
        exponent_scan(*source, medium.n, cyl, selector, need_number(cfg, "q_lo"),
                      need_number(cfg, "q_hi"), cutoff_count, cfg.value("bracket_width", 0.02));
    scans = result.scans;
    out["q_star"] = result.q_star;
    out["q_lo"] = result.q_lo;
    out["q_hi"] = result.q_hi;
    json items = json::array();
    for (const IntegralScan& scan : result.scans)
      items.push_back(json{{"q", scan.q}, {"verdict", verdict_name(scan.verdict)}});
    out["scans"] = items;
  }
  if (cfg.contains("output")) {
    write_scan_csv(scans, cfg.at("output").get<std::string>());
    out["output"] = cfg.at("output");
  }
  return out;
}

json run_classify(const json& cfg) {
  const Medium medium = medium_from_json(need(cfg, "medium"));
  const SourcePtr source = source_from_json(need(cfg, "source"));

  Cylinder probe;
  if (cfg.contains("probe")) {
    probe = cylinder_from_config(cfg.at("probe"));
  } else {
    const SourceDomain dom = source->domain();
    probe.x0 = 0.0;
    probe.r = std::isfinite(dom.s_hi) ? 0.45 * (dom.s_lo + dom.s_hi) : 1.0;
    const bool extended = dom.t_lo == -HUGE_VAL;
    probe.t1 = extended ? -0.5 : std::max(dom.t_lo, 1e-12) + 0.25;
    probe.t2 = probe.t1 + 1.0;
  }

  const ClassificationReport report = classify(medium, *source, probe);
  return json{{"verdict", class_verdict_name(report.verdict)},
              {"evidence",
               {{"slice_sup_finite", report.slice_sup_finite},
                {"slice_sup_value", ext_to_json(report.slice_sup_value)},
                {"scan_at_s_critical", verdict_name(report.scan_at_s_critical)},
                {"rate_verdict", rate_verdict_name(report.rate_verdict)},
                {"rate_value", ext_to_json(report.rate_value)},
                {"note", report.note}}}};
}

json run_harnack(const json& cfg) {
  const Medium medium = medium_from_json(need(cfg, "medium"));
  const SourcePtr source = source_from_json(need(cfg, "source"));
  const std::string mode = cfg.value("mode", "weak");

  if (mode == "weak") {
    HarnackProbe probe;
    probe.x0 = cfg.value("x0", 0.0);
    probe.r = need_number(cfg, "r");
    probe.s = need_number(cfg, "s");
    probe.c2_trial = cfg.value("c2_trial", 0.1);
    const HarnackReport report = weak_harnack_probe(medium, *source, probe);
    return json{{"avg", report.avg},
                {"theta", report.theta},
                {"window", {report.window_lo, report.window_hi}},
                {"inf_over_window", report.inf_over_window},
                {"admissible_c1", report.admissible_c1}};
  }
  if (mode == "l1") {
    const L1HarnackReport report =
        l1_harnack_probe(medium, *source, cfg.value("x0", 0.0), need_number(cfg, "r"),
                         need_number(cfg, "s"), need_number(cfg, "t"));
    return json{{"lhs", report.lhs},
                {"rhs_inf", report.rhs_inf},
                {"drift", report.drift},
                {"admissible_c", report.admissible_c}};
  }
  if (mode == "rate") {
    const double t0 = cfg.value("t0", 0.0);
    const double s = need_number(cfg, "s");
    const double x0 = cfg.value("x0", 0.0);
    const RateReport report = cfg.contains("r0")
                                  ? pointwise_rate_detect(
                                        medium, *source, x0, t0, s,
                                        make_rate_schedule(medium, need_number(cfg, "r0"),
                                                           cfg.value("dt0", 0.1),
                                                           cfg.value("count", 13)))
                                  : pointwise_rate_detect(medium, *source, x0, t0, s);
    return json{{"radii", report.radii},
                {"infima", report.infima},
                {"rate_estimate", ext_to_json(report.rate_estimate)},
                {"verdict", rate_verdict_name(report.verdict)}};
  }
  if (mode == "sweep") {
    std::vector<HarnackProbe> probes;
    for (const json& pj : need(cfg, "probes")) {
      HarnackProbe probe;
      probe.x0 = pj.value("x0", 0.0);
      probe.r = need_number(pj, "r");
      probe.s = need_number(pj, "s");
      probe.c2_trial = pj.value("c2_trial", 0.1);
      probes.push_back(probe);
    }
    const SweepResult sweep = constant_sweep(medium, *source, probes);
    if (cfg.contains("output")) {
      const std::string path = cfg.at("output").get<std::string>();
      std::ofstream out(path);
      require(out.good(), ErrorCode::IoFailure, "cannot open " + path);
      out << "scale,admissible_constant\n";
      for (size_t i = 0; i < probes.size(); ++i)
        out << fmt17(probes[i].r) << ',' << fmt17(sweep.values[i]) << '\n';
    }
    return json{{"values", sweep.values},
                {"coefficient_of_variation", sweep.coefficient_of_variation},
                {"min", sweep.min_value},
                {"max", sweep.max_value}};
  }
  bad_config("harnack mode must be weak, l1, rate, or sweep");
}

json run_command(const std::string& command, const json& cfg) {
  if (command == "exponents") return run_exponents(cfg);
  if (command == "moser") return run_moser(cfg);
  if (command == "eval") return run_eval(cfg);
  if (command == "solve") return run_solve(cfg);
  if (command == "obstacle") return run_obstacle(cfg);
  if (command == "scan") return run_scan(cfg);
  if (command == "classify") return run_classify(cfg);
  if (command == "harnack") return run_harnack(cfg);
  bad_config("unknown command: " + command);
}

}  // namespace supercal
