#pragma once

#include <functional>
#include <vector>

#include "supercal/errors.hpp"

namespace supercal::quad {

using Fn = std::function<double(double)>;

/// 16-point Gauss-Legendre rule on [a, b].
double gl_panel(const Fn& f, double a, double b);

/// Composite GL16 over consecutive panels defined by breakpoints.
double composite(const Fn& f, const std::vector<double>& breaks);

/// Geometrically spaced breakpoints from a to b (0 < a < b), at least
/// `per_decade` panels per decade and at least `min_panels` overall.
std::vector<double> log_breaks(double a, double b, int per_decade = 4, int min_panels = 4);

/// Uniformly spaced breakpoints, `panels` panels.
std::vector<double> uniform_breaks(double a, double b, int panels);

/// Adaptive Gauss-Kronrod on [a, b] to a relative tolerance. Throws
/// QuadratureFailure when the error estimate cannot reach the tolerance.
double adaptive(const Fn& f, double a, double b, double rel_tol = 1e-10);

/// Surface measure of the unit sphere in R^n (2 for n = 1).
double sphere_area(int n);

/// Volume of the ball of radius R in R^n.
double ball_volume(int n, double R);

/// Weight A(s) such that, for radial f, the integral of f(|x|) over the ball
/// B(x0, R) with |x0| = a equals the integral of A(s) f(s) ds over s >= 0.
/// A(s) is the (n-1)-measure of the sphere {|x| = s} inside the ball.
double cap_weight(int n, double s, double a, double R);

/// Integral of a radial profile over B(x0, R) (center at radial distance a),
/// optionally with the concentric ball B(x0, rho) excised. The integrand may
/// be singular at the spatial origin; panels are log-refined toward it.
double ball_integral(const Fn& radial_profile, int n, double a, double R, double rho = 0.0);

}  // namespace supercal::quad
