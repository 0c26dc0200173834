#include "supercal/harnack.hpp"

#include <algorithm>
#include <cmath>

#include "supercal/quadrature.hpp"

namespace supercal {

namespace {

double ball_average(const RadialSource& source, int n, double x0, double R, double t) {
  const double integral =
      quad::ball_integral([&](double s) { return source.value(s, t); }, n, x0, R);
  return integral / quad::ball_volume(n, R);
}

/// Min of the source over {|x - x0| <= R} x [t_a, t_b], by sampling radial
/// distances (log-refined toward the center) and times.
double window_infimum(const RadialSource& source, double x0, double R, double t_a, double t_b,
                      int t_samples, int s_samples) {
  double inf = HUGE_VAL;
  for (int it = 0; it < t_samples; ++it) {
    const double t = t_samples == 1 ? t_a : t_a + (t_b - t_a) * it / (t_samples - 1);
    for (int is = 0; is <= s_samples; ++is) {
      // Distance from the probe center, denser toward small d.
      const double frac = static_cast<double>(is) / s_samples;
      const double d = R * frac * frac;
      // The sphere of distance d around x0 spans |x| in [|x0-d|, x0+d].
      const double lo = std::abs(x0 - d), hi = x0 + d;
      for (int m = 0; m <= 8; ++m) {
        const double s = lo + (hi - lo) * m / 8.0;
        inf = std::min(inf, source.value(s, t));
      }
    }
  }
  return inf;
}

void require_contained(const RadialSource& source, double s_a, double s_b, double t_a,
                       double t_b) {
  const SourceDomain dom = source.domain();
  require(dom.contains(std::max(0.0, s_a), s_b, t_a, t_b), ErrorCode::ContainmentViolation,
          "probe leaves the source domain");
}

}  // namespace

const char* rate_verdict_name(RateVerdict v) {
  switch (v) {
    case RateVerdict::PositiveRate: return "PositiveRate";
    case RateVerdict::ZeroRate: return "ZeroRate";
    case RateVerdict::Inconclusive: return "Inconclusive";
  }
  return "Unknown";
}

HarnackReport weak_harnack_probe(const Medium& medium, const RadialSource& source,
                                 const HarnackProbe& probe) {
  require(probe.r > 0.0 && probe.x0 >= 0.0, ErrorCode::InvalidArgument,
          "probe needs r > 0 and x0 >= 0");
  require(probe.c2_trial > 0.0 && probe.c2_trial < 1.0, ErrorCode::InvalidArgument,
          "c2_trial must lie in (0, 1)");
  const double p = medium.p;
  require(p < 2.0, ErrorCode::InvalidArgument,
          "the intrinsic waiting time needs the fast diffusion range p < 2");

  HarnackReport report;
  report.avg = ball_average(source, medium.n, probe.x0, 2.0 * probe.r, probe.s);
  require(report.avg > 0.0 && std::isfinite(report.avg), ErrorCode::InvalidArgument,
          "probe average must be positive and finite");
  report.theta = probe.c2_trial * std::pow(report.avg, 2.0 - p);
  const double wait = report.theta * std::pow(probe.r, p);
  report.window_lo = probe.s + 0.75 * wait;
  report.window_hi = probe.s + wait;

  require_contained(source, probe.x0 - 16.0 * probe.r, probe.x0 + 16.0 * probe.r, probe.s,
                    probe.s + wait);

  report.inf_over_window =
      window_infimum(source, probe.x0, 2.0 * probe.r, report.window_lo, report.window_hi, 33, 16);
  report.admissible_c1 = report.inf_over_window / report.avg;
  return report;
}

L1HarnackReport l1_harnack_probe(const Medium& medium, const RadialSource& source, double x0,
                                 double r, double s, double t) {
  require(r > 0.0 && x0 >= 0.0 && t > s, ErrorCode::InvalidArgument,
          "probe needs r > 0 and t > s");
  const double p = medium.p;
  require(p > 1.0 && p < 2.0, ErrorCode::InvalidArgument,
          "the drift term needs the fast diffusion range 1 < p < 2");
  require_contained(source, x0 - 2.0 * r, x0 + 2.0 * r, s, t);
  require(source.is_solution_on(std::max(0.0, x0 - 2.0 * r), x0 + 2.0 * r, s, t),
          ErrorCode::NotSolution, "the L1 Harnack inequality is stated for weak solutions");

  L1HarnackReport report;
  report.lhs = 0.0;
  report.rhs_inf = HUGE_VAL;
  const int samples = 33;
  for (int i = 0; i < samples; ++i) {
    // Open sampling of (s, t): the sup/inf are over interior times.
    const double tau = s + (t - s) * (i + 0.5) / samples;
    report.lhs = std::max(report.lhs, ball_average(source, medium.n, x0, r, tau));
    report.rhs_inf = std::min(report.rhs_inf, ball_average(source, medium.n, x0, 2.0 * r, tau));
  }
  report.drift = std::pow((t - s) / std::pow(r, p), 1.0 / (2.0 - p));
  report.admissible_c = report.lhs / (report.rhs_inf + report.drift);
  return report;
}

RateSchedule make_rate_schedule(const Medium& medium, double r0, double dt0, int count) {
  require(r0 > 0.0 && dt0 > 0.0 && count >= 2, ErrorCode::InvalidArgument,
          "schedule needs r0 > 0, dt0 > 0, count >= 2");
  RateSchedule schedule;
  for (int k = 0; k < count; ++k) {
    const double rk = r0 * std::pow(2.0, -k);
    schedule.radii.push_back(rk);
    schedule.offsets.push_back(dt0 * std::pow(rk / r0, medium.p));
  }
  return schedule;
}

RateReport pointwise_rate_detect(const Medium& medium, const RadialSource& source, double x0,
                                 double t0, double s, const RateSchedule& schedule) {
  require(!schedule.radii.empty() && schedule.radii.size() == schedule.offsets.size(),
          ErrorCode::InvalidArgument, "empty or inconsistent rate schedule");
  require(s > t0, ErrorCode::InvalidArgument, "the rate is probed at times s > t0");
  const double p = medium.p;
  const double exponent = p / (2.0 - p);

  RateReport report;
  report.radii = schedule.radii;
  report.offsets = schedule.offsets;

  for (size_t k = 0; k < schedule.radii.size(); ++k) {
    const double rk = schedule.radii[k];
    const double dtk = schedule.offsets[k];
    double inf = HUGE_VAL;
    // Punctured neighborhood: distances d in (0, rk], times just above s.
    for (int id = 0; id <= 24; ++id) {
      const double d = rk * std::pow(2.0, -16.0 * id / 24.0);
      for (double frac : {1e-3, 0.05, 0.25, 0.6, 1.0}) {
        const double t = s + dtk * frac;
        const double lo = std::abs(x0 - d), hi = x0 + d;
        for (int m = 0; m <= 6; ++m) {
          const double sr = lo + (hi - lo) * m / 6.0;
          const double v = source.value(sr, t);
          inf = std::min(inf, v * std::pow(d, exponent));
        }
      }
    }
    report.infima.push_back(inf);
  }

  const size_t K = report.infima.size();
  const double first = report.infima.front();
  const double last = report.infima.back();

  bool growing = K >= 3;
  for (size_t k = 1; k < K && growing; ++k)
    if (report.infima[k] < report.infima[k - 1]) growing = false;

  double tail_lo = HUGE_VAL, tail_hi = 0.0;
  const size_t tail = std::min<size_t>(4, K);
  for (size_t k = K - tail; k < K; ++k) {
    tail_lo = std::min(tail_lo, report.infima[k]);
    tail_hi = std::max(tail_hi, report.infima[k]);
  }

  if (growing && last > 16.0 * std::max(first, 1e-300)) {
    report.verdict = RateVerdict::PositiveRate;
    report.rate_estimate = ExtReal::pos_inf();  // infima grow without bound
  } else if (last <= std::max(1e-4 * first, 1e-300)) {
    report.verdict = RateVerdict::ZeroRate;
    report.rate_estimate = ExtReal::finite(0.0);
  } else if (last > 0.0 && std::isfinite(last) && tail_hi - tail_lo <= 0.05 * tail_hi) {
    report.verdict = RateVerdict::PositiveRate;
    report.rate_estimate = ExtReal::finite(last);
  } else {
    report.verdict = RateVerdict::Inconclusive;
    report.rate_estimate = ExtReal::undefined();
  }
  return report;
}

RateReport pointwise_rate_detect(const Medium& medium, const RadialSource& source, double x0,
                                 double t0, double s) {
  const SourceDomain dom = source.domain();
  const double headroom = std::min(dom.t_hi - s, 1.0);
  require(headroom > 0.0, ErrorCode::InvalidArgument, "no time headroom above s");
  double r0 = 0.5;
  if (std::isfinite(dom.s_hi)) r0 = std::min(r0, 0.25 * (dom.s_hi - dom.s_lo));
  const RateSchedule schedule = make_rate_schedule(medium, r0, 0.5 * headroom);
  return pointwise_rate_detect(medium, source, x0, t0, s, schedule);
}

SweepResult constant_sweep(const Medium& medium, const RadialSource& source,
                           const std::vector<HarnackProbe>& probes) {
  require(!probes.empty(), ErrorCode::EmptyProbeList, "no probes given");
  SweepResult sweep;
  double sum = 0.0, sum_sq = 0.0;
  sweep.min_value = HUGE_VAL;
  sweep.max_value = 0.0;
  for (const HarnackProbe& probe : probes) {
    const HarnackReport report = weak_harnack_probe(medium, source, probe);
    sweep.values.push_back(report.admissible_c1);
    sum += report.admissible_c1;
    sum_sq += report.admissible_c1 * report.admissible_c1;
    sweep.min_value = std::min(sweep.min_value, report.admissible_c1);
    sweep.max_value = std::max(sweep.max_value, report.admissible_c1);
  }
  const double mean = sum / probes.size();
  const double var = std::max(0.0, sum_sq / probes.size() - mean * mean);
  sweep.coefficient_of_variation = mean > 0.0 ? std::sqrt(var) / mean : 0.0;
  return sweep;
}

}  // namespace supercal
