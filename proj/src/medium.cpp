#include "supercal/medium.hpp"

#include <algorithm>
#include <cmath>

namespace supercal {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonIterable: return "NonIterable";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::UndefinedPoint: return "UndefinedPoint";
    case ErrorCode::DegenerateConstant: return "DegenerateConstant";
    case ErrorCode::NonpositiveFactor: return "NonpositiveFactor";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::BracketFailure: return "BracketFailure";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::PicardDivergence: return "PicardDivergence";
    case ErrorCode::SingularDiffusivity: return "SingularDiffusivity";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::ProjectionStall: return "ProjectionStall";
    case ErrorCode::PreconditionViolation: return "PreconditionViolation";
    case ErrorCode::ContainmentViolation: return "ContainmentViolation";
    case ErrorCode::NotSolution: return "NotSolution";
    case ErrorCode::NotSupersolution: return "NotSupersolution";
    case ErrorCode::EmptyProbeList: return "EmptyProbeList";
    case ErrorCode::NonEvaluable: return "NonEvaluable";
    case ErrorCode::InconsistentVerdicts: return "InconsistentVerdicts";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::BadConfig: return "BadConfig";
  }
  return "UnknownError";
}

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::SlowDiffusion: return "SlowDiffusion";
    case Regime::Heat: return "Heat";
    case Regime::SupercriticalFast: return "SupercriticalFast";
    case Regime::CriticalOrSubcritical: return "CriticalOrSubcritical";
  }
  return "UnknownRegime";
}

Regime classify_regime(const Medium& medium) {
  if (medium.p > 2.0) return Regime::SlowDiffusion;
  if (medium.p == 2.0) return Regime::Heat;
  // p > 2n/(n+1) iff lambda > 0; the lambda sign is the exact comparison
  // (no tolerance), and it keeps the boundary case lambda = 0 subcritical.
  const double lambda = medium.n * (medium.p - 2.0) + medium.p;
  return lambda > 0.0 ? Regime::SupercriticalFast : Regime::CriticalOrSubcritical;
}

ExponentTable exponent_table(const Medium& medium) {
  const double n = medium.n;
  const double p = medium.p;
  ExponentTable t;
  t.lambda = n * (p - 2.0) + p;
  t.q_barenblatt = p - 1.0 + p / n;
  t.q_gradient = p - 1.0 + 1.0 / (n + 1.0);
  t.s_critical = n * (2.0 - p) / p;
  t.g_critical = n * (2.0 - p) / 2.0;
  t.p_over_n = p / n;
  t.p_value = p;
  return t;
}

MoserTrace moser_sequence(const Medium& medium, double s0, int cap) {
  require(classify_regime(medium) == Regime::SupercriticalFast, ErrorCode::InvalidArgument,
          "Moser iteration requires the supercritical fast-diffusion regime");
  require(s0 > 0.0, ErrorCode::InvalidArgument, "starting exponent must be positive");
  require(cap >= 1, ErrorCode::InvalidArgument, "cap must be >= 1");

  const double a = 1.0 + medium.p / medium.n;
  const double b = 2.0 - medium.p;
  const double s_star = exponent_table(medium).s_critical;

  MoserTrace trace;
  trace.s0 = s0;
  trace.closed_form_check = 0.0;

  if (s0 < s_star)
    fail(ErrorCode::NonIterable,
         "starting exponent below the critical fixed point; the sequence decreases");

  auto closed_form = [&](int i) { return std::pow(a, i) * (s0 - s_star) + s_star; };

  double s = s0;
  trace.steps.push_back(s);
  if (s >= 1.0) {
    trace.first_ge_one = 0;
    return trace;
  }

  if (s0 == s_star) {
    // Fixed point: the sequence is constant and never reaches 1.
    trace.steps.assign(static_cast<size_t>(cap) + 1, s0);
    return trace;
  }

  for (int i = 1; i <= cap; ++i) {
    s = s * a - b;
    trace.steps.push_back(s);
    trace.closed_form_check =
        std::max(trace.closed_form_check, std::abs(s - closed_form(i)));
    if (s >= 1.0) {
      trace.first_ge_one = i;
      return trace;
    }
  }
  fail(ErrorCode::CapExceeded, "exponent 1 not reached within the iteration cap");
}

}  // namespace supercal
