#pragma once

#include "supercal/extended.hpp"
#include "supercal/medium.hpp"
#include "supercal/source.hpp"

namespace supercal {

/// Geometry of one intrinsic weak Harnack probe: the average is taken over
/// B(x0, 2r) at time s, the waiting time is theta r^p with
/// theta = c2_trial * avg^{2-p}, and containment requires
/// B(x0, 16r) x [s, s + theta r^p] inside the source domain.
struct HarnackProbe {
  double x0 = 0.0;
  double r = 0.0;
  double s = 0.0;
  double c2_trial = 0.1;
};

struct HarnackReport {
  double avg = 0.0;
  double theta = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
  double inf_over_window = 0.0;
  double admissible_c1 = 0.0;  // inf_over_window / avg
};

HarnackReport weak_harnack_probe(const Medium& medium, const RadialSource& source,
                                 const HarnackProbe& probe);

struct L1HarnackReport {
  double lhs = 0.0;      // sup over tau of the B(x0, r) average
  double rhs_inf = 0.0;  // inf over tau of the B(x0, 2r) average
  double drift = 0.0;    // ((t - s)/r^p)^{1/(2-p)}
  double admissible_c = 0.0;
};

/// Requires a solution source (closed form on a region where it solves, or a
/// field whose residual classifies Solution everywhere).
L1HarnackReport l1_harnack_probe(const Medium& medium, const RadialSource& source, double x0,
                                 double r, double s, double t);

enum class RateVerdict { PositiveRate, ZeroRate, Inconclusive };

const char* rate_verdict_name(RateVerdict v);

struct RateSchedule {
  std::vector<double> radii;
  std::vector<double> offsets;  // t - s > 0 per entry
};

/// Radii r0 2^{-k}, k = 0..count-1, offsets matched to each radius's
/// intrinsic scale dt0 (r_k/r0)^p.
RateSchedule make_rate_schedule(const Medium& medium, double r0, double dt0, int count = 13);

struct RateReport {
  std::vector<double> radii;
  std::vector<double> offsets;
  std::vector<double> infima;
  ExtReal rate_estimate;
  RateVerdict verdict = RateVerdict::Inconclusive;
};

/// Measures inf of u(x,t) |x - x0|^{p/(2-p)} over shrinking punctured
/// neighborhoods of x0 with t just above s; detects the monster-class rate.
RateReport pointwise_rate_detect(const Medium& medium, const RadialSource& source, double x0,
                                 double t0, double s, const RateSchedule& schedule);

/// Default schedule sized to the source's domain headroom above s.
RateReport pointwise_rate_detect(const Medium& medium, const RadialSource& source, double x0,
                                 double t0, double s);

struct SweepResult {
  std::vector<double> values;  // admissible_c1 per probe
  double coefficient_of_variation = 0.0;
  double min_value = 0.0;
  double max_value = 0.0;
};

SweepResult constant_sweep(const Medium& medium, const RadialSource& source,
                           const std::vector<HarnackProbe>& probes);

}  // namespace supercal
