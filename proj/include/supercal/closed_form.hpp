#pragma once

#include <vector>

#include "supercal/extended.hpp"
#include "supercal/medium.hpp"

namespace supercal {

enum class FamilyKind {
  SingularBarenblatt,
  DegenerateBarenblatt,
  InfinitePointSource,
  PowerSupersolution,
};

const char* family_kind_name(FamilyKind kind);

/// Pointwise evaluation of a closed-form family: value, radial derivative,
/// time derivative, and the radial flux divergence
/// r^{1-n} d_r(r^{n-1} |d_r u|^{p-2} d_r u). residual = time_derivative -
/// flux_divergence; it vanishes at smooth points of exact solutions.
struct EvalResult {
  ExtReal value;
  ExtReal radial_gradient;
  ExtReal time_derivative;
  ExtReal flux_divergence;
  ExtReal residual;

  static EvalResult all_zero();
};

/// c = (2-p)(p/(2-p))^{p-1}(p/(2-p) - n), the constant of the infinite point
/// source solution U = (ct/|x|^p)^{1/(2-p)}. DegenerateConstant at and below
/// the critical exponent, where p/(2-p) - n <= 0.
double ips_constant(const Medium& medium);

/// c = (2-p)(q/(2-p))^{p-1}(q/(2-p) - q + p - n), the constant making
/// (ct/|x|^q)^{1/(2-p)} a supersolution in the punctured unit ball.
/// NonpositiveFactor when q/(2-p) - q + p - n <= 0.
double power_constant(const Medium& medium, double q);

/// Immutable tagged closed-form solution over a Medium. zero_extended
/// families evaluate to exact zero for t <= 0.
class SolutionFamily {
 public:
  static SolutionFamily singular_barenblatt(const Medium& medium, double c,
                                            bool zero_extended = false);
  static SolutionFamily degenerate_barenblatt(const Medium& medium, double c,
                                              bool zero_extended = false);
  static SolutionFamily infinite_point_source(const Medium& medium, bool zero_extended = false);
  static SolutionFamily power_supersolution(const Medium& medium, double q, double c,
                                            bool zero_extended = false);
  /// Power supersolution with the canonical constant of power_constant().
  static SolutionFamily power_supersolution(const Medium& medium, double q,
                                            bool zero_extended = false);

  EvalResult evaluate(double radius, double t) const;

  const Medium& medium() const { return medium_; }
  FamilyKind kind() const { return kind_; }
  double c() const { return c_; }
  double q() const { return q_; }
  bool zero_extended() const { return zero_extended_; }

  /// True for the point-source and power families (value +inf at the origin).
  bool singular_at_origin() const;

  /// True when the family is a weak solution on the annulus x cylinder
  /// [s_lo, s_hi] x [t_lo, t_hi] given in radial coordinates.
  bool is_solution_on(double s_lo, double s_hi, double t_lo, double t_hi) const;

 private:
  SolutionFamily(const Medium& medium, FamilyKind kind, double c, double q, bool zero_extended);

  Medium medium_;
  FamilyKind kind_;
  double c_;
  double q_;
  bool zero_extended_;
};

/// Masses of the singular Barenblatt solution at several times; conservation
/// makes them agree up to quadrature error.
struct MassReport {
  double c_used;
  std::vector<double> time_samples;
  std::vector<double> masses;
  double max_relative_spread;
};

MassReport mass_report(const Medium& medium, double c, const std::vector<double>& times);

struct NormalizedConstant {
  double c;
  MassReport report;
};

/// Finds c with integral of the singular Barenblatt solution over R^n equal
/// to target, by bisection on the strictly decreasing map c -> mass.
NormalizedConstant normalize_mass(const Medium& medium, double target = 1.0);

/// Central-difference approximation of d_t u - div(|grad u|^{p-2} grad u)
/// built from family values only; the independent oracle for EvalResult.
double pde_residual_fd(const SolutionFamily& family, double radius, double t, double h);

/// Analytic value of liminf u(x,t)|x - x0|^{p/(2-p)} as (x,t) -> (x0, s),
/// t > s: the monster-class pointwise singularity rate.
ExtReal pointwise_rate_exact(const SolutionFamily& family, double x0_radius, double s);

}  // namespace supercal
