#pragma once

#include <optional>
#include <vector>

#include "supercal/errors.hpp"

namespace supercal {

/// Spatial dimension n and diffusion exponent p of the evolution
/// d_t u = div(|grad u|^{p-2} grad u).
struct Medium {
  int n;
  double p;

  Medium(int n_, double p_) : n(n_), p(p_) {
    require(n >= 1, ErrorCode::InvalidArgument, "dimension n must be >= 1");
    require(p > 1.0, ErrorCode::InvalidArgument, "exponent p must exceed 1");
  }

  /// Critical boundary 2n/(n+1) between the supercritical and subcritical
  /// fast-diffusion ranges.
  double critical_p() const { return 2.0 * n / (n + 1.0); }
};

enum class Regime {
  SlowDiffusion,          // p > 2
  Heat,                   // p = 2
  SupercriticalFast,      // 2n/(n+1) < p < 2
  CriticalOrSubcritical,  // 1 < p <= 2n/(n+1)
};

const char* regime_name(Regime r);

/// Boundaries are exact comparisons, never tolerances: Heat needs p == 2, and
/// the supercritical test is the sign of lambda = n(p-2)+p, so the boundary
/// value lambda = 0 lands in CriticalOrSubcritical.
Regime classify_regime(const Medium& medium);

/// Every derived critical exponent in play, by the defining formulas.
struct ExponentTable {
  double lambda;        // n(p-2) + p
  double q_barenblatt;  // p - 1 + p/n
  double q_gradient;    // p - 1 + 1/(n+1)
  double s_critical;    // n(2-p)/p
  double g_critical;    // n(2-p)/2

  double p_over_n;  // slope of the Sobolev exponent map
  double p_value;

  /// q = p + pm/n in the parabolic Sobolev inequality.
  double sobolev_q(double m) const { return p_value + p_over_n * m; }
};

ExponentTable exponent_table(const Medium& medium);

/// Bookkeeping of the iteration s_i = s_{i-1}(1 + p/n) - (2 - p), which lifts
/// integrability from just above s_critical to 1 and beyond.
struct MoserTrace {
  double s0;
  std::vector<double> steps;  // steps[0] == s0
  std::optional<int> first_ge_one;
  double closed_form_check;  // max |recursive s_i - closed-form s_i|
};

/// Requires the supercritical fast-diffusion regime. s0 below s_critical makes
/// the sequence decrease (NonIterable); s0 exactly at the fixed point yields a
/// constant trace with no first_ge_one.
MoserTrace moser_sequence(const Medium& medium, double s0, int cap = 64);

}  // namespace supercal
