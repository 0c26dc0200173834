#include "supercal/integrability.hpp"

#include <algorithm>
#include <cmath>

#include "supercal/quadrature.hpp"

namespace supercal {

namespace {

double smoothstep(double x) {
  x = std::clamp(x, 0.0, 1.0);
  return x * x * (3.0 - 2.0 * x);
}

double smoothstep_d(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return 6.0 * x * (1.0 - x);
}

}  // namespace

CutoffFn::CutoffFn(double s_in, double s_out, double t_out_lo, double t_in_lo, double t_in_hi,
                   double t_out_hi)
    : s_in_(s_in),
      s_out_(s_out),
      t_out_lo_(t_out_lo),
      t_in_lo_(t_in_lo),
      t_in_hi_(t_in_hi),
      t_out_hi_(t_out_hi) {
  require(0.0 < s_in && s_in < s_out, ErrorCode::InvalidArgument,
          "cutoff needs 0 < s_in < s_out");
  require(t_out_lo < t_in_lo && t_in_lo < t_in_hi && t_in_hi < t_out_hi,
          ErrorCode::InvalidArgument, "cutoff needs t_out_lo < t_in_lo < t_in_hi < t_out_hi");
}

double CutoffFn::radial(double s) const {
  if (s <= s_in_) return 1.0;
  if (s >= s_out_) return 0.0;
  return smoothstep((s_out_ - s) / (s_out_ - s_in_));
}

double CutoffFn::temporal(double t) const {
  if (t <= t_out_lo_ || t >= t_out_hi_) return 0.0;
  if (t < t_in_lo_) return smoothstep((t - t_out_lo_) / (t_in_lo_ - t_out_lo_));
  if (t <= t_in_hi_) return 1.0;
  return smoothstep((t_out_hi_ - t) / (t_out_hi_ - t_in_hi_));
}

double CutoffFn::grad_abs(double s, double t) const {
  if (s <= s_in_ || s >= s_out_) return 0.0;
  const double width = s_out_ - s_in_;
  return smoothstep_d((s_out_ - s) / width) / width * temporal(t);
}

double CutoffFn::dt_phi_p_abs(double s, double t, double p) const {
  const double pr = radial(s);
  if (pr <= 0.0) return 0.0;
  double dt;
  if (t > t_out_lo_ && t < t_in_lo_) {
    const double width = t_in_lo_ - t_out_lo_;
    dt = smoothstep_d((t - t_out_lo_) / width) / width;
  } else if (t > t_in_hi_ && t < t_out_hi_) {
    const double width = t_out_hi_ - t_in_hi_;
    dt = smoothstep_d((t_out_hi_ - t) / width) / width;
  } else {
    return 0.0;
  }
  const double pt = temporal(t);
  if (pt <= 0.0) return 0.0;
  return p * std::pow(pr, p) * std::pow(pt, p - 1.0) * dt;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Convergent: return "Convergent";
    case Verdict::Divergent: return "Divergent";
    case Verdict::Borderline: return "Borderline";
  }
  return "Unknown";
}

const char* class_verdict_name(ClassVerdict v) {
  switch (v) {
    case ClassVerdict::ClassB: return "ClassB";
    case ClassVerdict::ClassM: return "ClassM";
    case ClassVerdict::Undetermined: return "Undetermined";
  }
  return "Unknown";
}

namespace {

struct Integrand {
  const RadialSource* source;
  double q;
  Selector selector;

  double operator()(double s, double t) const {
    const double f = selector == Selector::Value ? source->value(s, t)
                                                 : std::abs(source->gradient(s, t));
    return std::pow(f, q);
  }
};

void check_cylinder(const RadialSource& source, const Cylinder& cyl) {
  cyl.validate();
  const SourceDomain dom = source.domain();
  require(std::max(0.0, cyl.x0 - cyl.r) >= dom.s_lo && cyl.x0 + cyl.r <= dom.s_hi &&
              cyl.t1 >= dom.t_lo && cyl.t2 <= dom.t_hi,
          ErrorCode::ContainmentViolation, "cylinder leaves the source domain");
}

void check_nonnegative(const RadialSource& source, const Cylinder& cyl) {
  const double s_lo = std::max(1e-9 * cyl.r, cyl.x0 - cyl.r);
  for (int i = 0; i <= 8; ++i) {
    const double s = s_lo + (cyl.x0 + cyl.r - s_lo) * i / 8.0;
    for (int j = 0; j <= 8; ++j) {
      const double t = cyl.t1 + (cyl.t2 - cyl.t1) * (j + 0.5) / 9.0;
      if (t <= 0.0) continue;  // zero-extended region contributes zero
      const double v = source.value(s, t);
      require(v >= -1e-12 * (1.0 + std::abs(v)), ErrorCode::InvalidArgument,
              "source must be nonnegative on the cylinder; shift by a constant first");
    }
  }
}

/// Time integral of the integrand at fixed radius s over (t1, t2), on a
/// logarithmic axis toward t = 0 where the zero extension starts.
double time_integral(const Integrand& f, double s, double t1, double t2) {
  const double start = std::max(t1, 0.0);
  if (t2 <= start) return 0.0;
  const double floor = start > 0.0 ? start : t2 * 1e-30;
  return quad::adaptive(
      [&](double tau) {
        const double t = std::exp(tau);
        return f(s, t) * t;
      },
      std::log(floor), std::log(t2), 5e-9);
}

/// One radial shell [d_lo, d_hi] around the cylinder center.
double shell_integral(const Integrand& f, int n, const Cylinder& cyl, double d_lo, double d_hi) {
  return quad::ball_integral([&](double s) { return time_integral(f, s, cyl.t1, cyl.t2); }, n,
                             cyl.x0, d_hi, d_lo);
}

struct IncrementVerdict {
  Verdict verdict;
  double ratio;  // geometric mean of the tail increment ratios
};

/// Geometric behaviour of the tail increments: decay => convergent, constant
/// => borderline (logarithmic endpoint), growth => divergent.
IncrementVerdict classify_increments(const std::vector<double>& increments, double total,
                                     int tail_len) {
  const double tiny = 1e-14 * (std::abs(total) + 1e-300);
  IncrementVerdict out{Verdict::Convergent, 0.0};
  const int K = static_cast<int>(increments.size());
  int used = 0;
  double log_sum = 0.0;
  for (int k = std::max(1, K - tail_len); k < K; ++k) {
    if (increments[k - 1] <= tiny || increments[k] <= tiny) continue;
    log_sum += std::log(increments[k] / increments[k - 1]);
    ++used;
  }
  if (used == 0) {
    out.verdict = Verdict::Convergent;  // increments vanished: the tail is exhausted
    out.ratio = 0.0;
    return out;
  }
  out.ratio = std::exp(log_sum / used);
  if (out.ratio < 0.98)
    out.verdict = Verdict::Convergent;
  else if (out.ratio <= 1.02)
    out.verdict = Verdict::Borderline;
  else
    out.verdict = Verdict::Divergent;
  return out;
}

}  // namespace

double local_integral(const RadialSource& source, int n, const Cylinder& cyl, double q,
                      Selector selector, double rho) {
  check_cylinder(source, cyl);
  require(q > 0.0, ErrorCode::InvalidArgument, "integrability exponent q must be positive");
  require(rho >= 0.0 && rho < cyl.r, ErrorCode::InvalidArgument, "need 0 <= rho < r");
  require(selector == Selector::Value || source.has_gradient(), ErrorCode::NonEvaluable,
          "source has no gradient accessor");
  check_nonnegative(source, cyl);

  const Integrand f{&source, q, selector};
  return quad::ball_integral([&](double s) { return time_integral(f, s, cyl.t1, cyl.t2); }, n,
                             cyl.x0, cyl.r, rho);
}

IntegralScan scan_integral(const RadialSource& source, int n, const Cylinder& cyl, double q,
                           Selector selector, int cutoff_count) {
  check_cylinder(source, cyl);
  require(q > 0.0, ErrorCode::InvalidArgument, "integrability exponent q must be positive");
  require(cutoff_count >= 8 && cutoff_count <= 60, ErrorCode::InvalidArgument,
          "cutoff count out of range");
  require(selector == Selector::Value || source.has_gradient(), ErrorCode::NonEvaluable,
          "source has no gradient accessor");
  check_nonnegative(source, cyl);

  const Integrand f{&source, q, selector};
  IntegralScan scan;
  scan.q = q;

  std::vector<double> increments;
  double running = 0.0;
  for (int k = 0; k < cutoff_count; ++k) {
    const double d_hi = cyl.r * std::pow(2.0, -k);
    const double d_lo = 0.5 * d_hi;
    const double shell = std::max(0.0, shell_integral(f, n, cyl, d_lo, d_hi));
    increments.push_back(shell);
    running += shell;
    scan.cutoffs.push_back(d_lo);
    scan.values.push_back(running);
  }

  const IncrementVerdict iv = classify_increments(increments, running, 8);
  scan.verdict = iv.verdict;
  // d log I / d log rho, least squares over the tail of the schedule.
  const int tail = 8;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int m = 0;
  for (int k = std::max(0, cutoff_count - tail); k < cutoff_count; ++k) {
    if (scan.values[k] <= 0.0) continue;
    const double x = std::log(scan.cutoffs[k]);
    const double y = std::log(scan.values[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  scan.slope = m >= 2 ? (m * sxy - sx * sy) / (m * sxx - sx * sx) : 0.0;
  return scan;
}

ExponentScanResult exponent_scan(const RadialSource& source, int n, const Cylinder& cyl,
                                 Selector selector, double q_lo, double q_hi, int cutoff_count,
                                 double bracket_width) {
  require(q_lo > 0.0 && q_lo < q_hi, ErrorCode::InvalidArgument, "need 0 < q_lo < q_hi");
  ExponentScanResult out;

  auto probe = [&](double q) {
    IntegralScan scan = scan_integral(source, n, cyl, q, selector, cutoff_count);
    const Verdict v = scan.verdict;
    out.scans.push_back(std::move(scan));
    return v;
  };

  require(probe(q_lo) == Verdict::Convergent, ErrorCode::InconsistentVerdicts,
          "scan at q_lo is not convergent; convergence must be monotone in q");
  require(probe(q_hi) != Verdict::Convergent, ErrorCode::InconsistentVerdicts,
          "scan at q_hi is convergent; convergence must be monotone in q");

  double lo = q_lo, hi = q_hi;
  while (hi - lo > bracket_width) {
    const double mid = 0.5 * (lo + hi);
    (probe(mid) == Verdict::Convergent ? lo : hi) = mid;
  }
  out.q_lo = lo;
  out.q_hi = hi;
  out.q_star = 0.5 * (lo + hi);
  return out;
}

namespace {

struct SliceResult {
  double value;
  bool divergent;
};

SliceResult slice_integral(const RadialSource& source, int n, double x0, double R, double t,
                           double alpha) {
  auto profile = [&](double s) { return std::pow(source.value(s, t), alpha); };
  const bool origin_inside = x0 < R;
  if (!origin_inside || !source.singular_at_origin())
    return {quad::ball_integral(profile, n, x0, R), false};

  // Standing singularity at the origin inside the ball: excise shells around
  // it and watch the increments.
  const double rho0 = 0.5 * (R - x0);
  double total = quad::ball_integral(profile, n, x0, R, rho0);
  std::vector<double> increments;
  for (int k = 0; k < 24; ++k) {
    const double d_hi = rho0 * std::pow(2.0, -k);
    const double d_lo = 0.5 * d_hi;
    const double shell = std::max(0.0, quad::ball_integral(profile, n, x0, d_hi, d_lo));
    increments.push_back(shell);
    total += shell;
  }
  const IncrementVerdict iv = classify_increments(increments, total, 6);
  return {total, iv.verdict != Verdict::Convergent};
}

}  // namespace

SliceSup slice_sup_norm(const RadialSource& source, int n, double x0, double R, double t_lo,
                        double t_hi, double alpha, int samples) {
  require(alpha > 0.0, ErrorCode::InvalidArgument, "slice exponent alpha must be positive");
  require(R > 0.0 && x0 >= 0.0 && t_lo <= t_hi, ErrorCode::InvalidArgument,
          "bad slice geometry");
  require(samples >= 1, ErrorCode::InvalidArgument, "need at least one time sample");
  const SourceDomain dom = source.domain();
  require(std::max(0.0, x0 - R) >= dom.s_lo && x0 + R <= dom.s_hi && t_lo >= dom.t_lo &&
              t_hi <= dom.t_hi,
          ErrorCode::ContainmentViolation, "slice region leaves the source domain");

  SliceSup out;
  double sup = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double t = samples == 1 ? t_lo : t_lo + (t_hi - t_lo) * i / (samples - 1);
    if (t <= 0.0 && dom.t_lo == -HUGE_VAL) {
      // zero-extended region: the slice vanishes
      continue;
    }
    const SliceResult slice = slice_integral(source, n, x0, R, t, alpha);
    if (slice.divergent) {
      out.divergent = true;
      out.sup_value = ExtReal::pos_inf();
      return out;
    }
    sup = std::max(sup, slice.value);
  }
  out.divergent = false;
  out.sup_value = ExtReal::finite(sup);
  return out;
}

ClassificationReport classify(const Medium& medium, const RadialSource& source,
                              const Cylinder& probe) {
  probe.validate();
  ClassificationReport report;

  // Slice L1 sups over nested compact sub-regions of the probe.
  bool any_divergent = false;
  double sup_val = 0.0;
  for (double shrink : {1.0, 0.5}) {
    const SliceSup s = slice_sup_norm(source, medium.n, probe.x0, probe.r * shrink, probe.t1,
                                      probe.t2, 1.0, 17);
    if (s.divergent)
      any_divergent = true;
    else
      sup_val = std::max(sup_val, s.sup_value.value());
  }
  report.slice_sup_finite = !any_divergent;
  report.slice_sup_value = any_divergent ? ExtReal::pos_inf() : ExtReal::finite(sup_val);

  // Scan at the critical exponent n(2-p)/p.
  const double s_crit = exponent_table(medium).s_critical;
  report.scan_at_s_critical =
      scan_integral(source, medium.n, probe, s_crit, Selector::Value).verdict;

  // Pointwise rate at the probe center.
  const double t0 = std::max(probe.t1, 0.0);
  const double s_rate = t0 + 0.5 * (probe.t2 - t0);
  const RateSchedule schedule =
      make_rate_schedule(medium, probe.r / 4.0, 0.25 * (probe.t2 - s_rate));
  const RateReport rate =
      pointwise_rate_detect(medium, source, probe.x0, t0, s_rate, schedule);
  report.rate_verdict = rate.verdict;
  report.rate_value = rate.rate_estimate;

  const bool m_conclusive = any_divergent || rate.verdict == RateVerdict::PositiveRate ||
                            report.scan_at_s_critical == Verdict::Divergent;
  const bool b_conclusive = !any_divergent && rate.verdict == RateVerdict::ZeroRate &&
                            report.scan_at_s_critical == Verdict::Convergent;
  if (m_conclusive) {
    report.verdict = ClassVerdict::ClassM;
    report.note = "slice blow-up, positive pointwise rate, or critical-scan divergence";
  } else if (b_conclusive) {
    report.verdict = ClassVerdict::ClassB;
    report.note = "finite slice sups, zero rate, convergent critical scan";
  } else {
    report.verdict = ClassVerdict::Undetermined;
    report.note = "evidence conflicts or is borderline";
  }
  return report;
}

namespace {

/// Tensor quadrature of g(s, t) against the radial measure over the cutoff
/// support, with panel cuts at the cutoff joints.
double cutoff_integral(const CutoffFn& cutoff, int n,
                       const std::function<double(double, double)>& g, int t_panels,
                       int s_panels) {
  const double area = quad::sphere_area(n);
  const double s_hi = cutoff.support_radius();
  std::vector<double> s_breaks;
  {
    const double s_floor = 1e-12 * s_hi;
    const auto head = quad::uniform_breaks(s_floor, cutoff.inner_radius(), s_panels);
    const auto tail = quad::uniform_breaks(cutoff.inner_radius(), s_hi, s_panels);
    s_breaks = head;
    s_breaks.insert(s_breaks.end(), tail.begin() + 1, tail.end());
  }
  auto spatial = [&](double t) {
    return quad::composite(
        [&](double s) { return area * std::pow(s, n - 1.0) * g(s, t); }, s_breaks);
  };
  const auto t_breaks =
      quad::uniform_breaks(cutoff.support_t_lo(), cutoff.support_t_hi(), t_panels);
  return quad::composite(spatial, t_breaks);
}

/// esssup over t of the spatial integral, sampled on a uniform time grid.
double cutoff_sup(const CutoffFn& cutoff, int n,
                  const std::function<double(double, double)>& g, int t_samples, int s_panels) {
  const double area = quad::sphere_area(n);
  const double s_hi = cutoff.support_radius();
  std::vector<double> s_breaks;
  {
    const double s_floor = 1e-12 * s_hi;
    const auto head = quad::uniform_breaks(s_floor, cutoff.inner_radius(), s_panels);
    const auto tail = quad::uniform_breaks(cutoff.inner_radius(), s_hi, s_panels);
    s_breaks = head;
    s_breaks.insert(s_breaks.end(), tail.begin() + 1, tail.end());
  }
  double sup = 0.0;
  for (int i = 0; i <= t_samples; ++i) {
    const double t = cutoff.support_t_lo() +
                     (cutoff.support_t_hi() - cutoff.support_t_lo()) * i / t_samples;
    sup = std::max(sup, quad::composite([&](double s) {
                     return area * std::pow(s, n - 1.0) * g(s, t);
                   }, s_breaks));
  }
  return sup;
}

}  // namespace

CaccioppoliSides caccioppoli_sides(const Medium& medium, const RadialSource& source,
                                   const CutoffFn& cutoff, double eps) {
  require(eps > 0.0 && eps < 1.0, ErrorCode::InvalidArgument, "need eps in (0,1)");
  const double p = medium.p;
  require(source.is_supersolution_on(0.0, cutoff.support_radius(), cutoff.support_t_lo(),
                                     cutoff.support_t_hi()),
          ErrorCode::NotSupersolution,
          "the Caccioppoli inequality is stated for nonnegative supersolutions");

  CaccioppoliSides sides;
  sides.grad_term = cutoff_integral(
      cutoff, medium.n,
      [&](double s, double t) {
        const double phi = cutoff.phi(s, t);
        if (phi <= 0.0) return 0.0;
        const double u = source.value(s, t);
        const double gu = std::abs(source.gradient(s, t));
        if (gu == 0.0) return 0.0;
        return std::pow(gu, p) * std::pow(u, -eps - 1.0) * std::pow(phi, p);
      },
      24, 24);
  sides.sup_term = cutoff_sup(
      cutoff, medium.n,
      [&](double s, double t) {
        const double phi = cutoff.phi(s, t);
        if (phi <= 0.0) return 0.0;
        return std::pow(source.value(s, t), 1.0 - eps) * std::pow(phi, p);
      },
      48, 24);
  sides.rhs = cutoff_integral(
      cutoff, medium.n,
      [&](double s, double t) {
        const double u = source.value(s, t);
        const double gphi = cutoff.grad_abs(s, t);
        const double dtp = cutoff.dt_phi_p_abs(s, t, p);
        double sum = 0.0;
        if (gphi > 0.0) sum += std::pow(u, p - 1.0 - eps) * std::pow(gphi, p);
        if (dtp > 0.0) sum += std::pow(u, 1.0 - eps) * dtp;
        return sum;
      },
      24, 24);
  return sides;
}

SobolevSides sobolev_sides(const Medium& medium, const RadialSource& source,
                           const CutoffFn& cutoff, double m) {
  require(m > 0.0, ErrorCode::InvalidArgument, "need m > 0");
  const double p = medium.p;
  SobolevSides sides;
  sides.m = m;
  sides.q = p + p * m / medium.n;

  sides.lhs = cutoff_integral(
      cutoff, medium.n,
      [&](double s, double t) {
        const double w = cutoff.phi(s, t) * source.value(s, t);
        return w <= 0.0 ? 0.0 : std::pow(w, sides.q);
      },
      24, 24);
  sides.grad_factor = cutoff_integral(
      cutoff, medium.n,
      [&](double s, double t) {
        const double phi = cutoff.phi(s, t);
        const double u = source.value(s, t);
        // d_s phi is nonpositive on the down ramp; track the sign explicitly.
        const double dphi = -cutoff.grad_abs(s, t);
        const double g = phi * source.gradient(s, t) + u * dphi;
        return std::pow(std::abs(g), p);
      },
      24, 24);
  sides.sup_factor = std::pow(cutoff_sup(
                                  cutoff, medium.n,
                                  [&](double s, double t) {
                                    const double w = cutoff.phi(s, t) * source.value(s, t);
                                    return w <= 0.0 ? 0.0 : std::pow(w, m);
                                  },
                                  48, 24),
                              p / medium.n);
  return sides;
}

}  // namespace supercal
