#pragma once

#include <memory>

#include "supercal/closed_form.hpp"
#include "supercal/grid.hpp"
#include "supercal/solver.hpp"

namespace supercal {

/// Space-time rectangle covered by a source, in radial coordinates.
struct SourceDomain {
  double s_lo = 0.0;
  double s_hi = HUGE_VAL;
  double t_lo = -HUGE_VAL;
  double t_hi = HUGE_VAL;

  bool contains(double s_a, double s_b, double t_a, double t_b) const {
    return s_a >= s_lo && s_b <= s_hi && t_a >= t_lo && t_b <= t_hi;
  }
};

/// Measurement-side view of a radially symmetric field: pointwise value and
/// radial derivative as plain doubles (+inf allowed at singular points).
class RadialSource {
 public:
  virtual ~RadialSource() = default;

  virtual double value(double s, double t) const = 0;
  virtual double gradient(double s, double t) const = 0;
  virtual bool has_gradient() const { return true; }
  virtual SourceDomain domain() const = 0;
  virtual bool singular_at_origin() const { return false; }

  /// Whether the source is a weak solution on the given radial box; used by
  /// probes that require solutions rather than supersolutions.
  virtual bool is_solution_on(double s_a, double s_b, double t_a, double t_b) const = 0;

  /// Whether the source is (at least) a supersolution there.
  virtual bool is_supersolution_on(double s_a, double s_b, double t_a, double t_b) const = 0;
};

using SourcePtr = std::shared_ptr<const RadialSource>;

SourcePtr make_family_source(const SolutionFamily& family);
SourcePtr make_field_source(GridField field, const SolverConfig& config = {});
SourcePtr make_constant_source(double value);

/// min(u, k); the gradient vanishes on {u > k}.
SourcePtr make_truncated_source(SourcePtr base, double level);

/// u + shift; derivatives unchanged. Solution/supersolution classification is
/// preserved (the operator only sees derivatives of u, and constants solve).
SourcePtr make_shifted_source(SourcePtr base, double shift);

}  // namespace supercal
