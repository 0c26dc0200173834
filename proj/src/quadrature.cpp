#include "supercal/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace supercal::quad {

namespace {

// 16-point Gauss-Legendre abscissas/weights on [-1, 1] (positive half).
constexpr double kGlX[8] = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274, 0.6178762444026438,
    0.7554044083550030, 0.8656312023878318, 0.9445750230732326, 0.9894009349916499};
constexpr double kGlW[8] = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

}  // namespace

double gl_panel(const Fn& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double dx = half * kGlX[i];
    sum += kGlW[i] * (f(mid - dx) + f(mid + dx));
  }
  return sum * half;
}

double composite(const Fn& f, const std::vector<double>& breaks) {
  double sum = 0.0;
  for (size_t i = 0; i + 1 < breaks.size(); ++i) sum += gl_panel(f, breaks[i], breaks[i + 1]);
  return sum;
}

std::vector<double> log_breaks(double a, double b, int per_decade, int min_panels) {
  require(a > 0.0 && b > a, ErrorCode::InvalidArgument, "log_breaks needs 0 < a < b");
  const double la = std::log(a), lb = std::log(b);
  const double decades = (lb - la) / std::log(10.0);
  const int panels = std::max(min_panels, static_cast<int>(std::ceil(decades * per_decade)));
  std::vector<double> breaks(panels + 1);
  for (int i = 0; i <= panels; ++i) breaks[i] = std::exp(la + (lb - la) * i / panels);
  breaks.front() = a;
  breaks.back() = b;
  return breaks;
}

std::vector<double> uniform_breaks(double a, double b, int panels) {
  require(panels >= 1, ErrorCode::InvalidArgument, "need at least one panel");
  std::vector<double> breaks(panels + 1);
  for (int i = 0; i <= panels; ++i) breaks[i] = a + (b - a) * i / panels;
  return breaks;
}

double adaptive(const Fn& f, double a, double b, double rel_tol) {
  if (a == b) return 0.0;
  double err = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, rel_tol, &err);
  if (!(err <= 1e3 * rel_tol * (std::abs(value) + 1e-300) || err < 1e-280))
    fail(ErrorCode::QuadratureFailure, "adaptive quadrature did not reach the tolerance");
  return value;
}

double sphere_area(int n) {
  require(n >= 1, ErrorCode::InvalidArgument, "dimension must be >= 1");
  return 2.0 * std::pow(M_PI, 0.5 * n) / boost::math::tgamma(0.5 * n);
}

double ball_volume(int n, double R) { return sphere_area(n) * std::pow(R, n) / n; }

namespace {

// Fraction of the unit sphere S^{n-1} within geodesic angle theta of a pole.
double cap_fraction(int n, double cos_theta) {
  cos_theta = std::clamp(cos_theta, -1.0, 1.0);
  if (n == 2) return std::acos(cos_theta) / (2.0 * M_PI) * 2.0;  // arc fraction theta/pi
  if (n == 3) return 0.5 * (1.0 - cos_theta);
  const double z = 1.0 - cos_theta * cos_theta;  // sin^2 theta
  const double half = 0.5 * boost::math::ibeta(0.5 * (n - 1), 0.5, z);
  return cos_theta >= 0.0 ? half : 1.0 - half;
}

}  // namespace

double cap_weight(int n, double s, double a, double R) {
  if (s < 0.0 || R <= 0.0) return 0.0;
  if (n == 1) {
    // |x| = s picks the points +s and -s on the line; the ball is (a-R, a+R).
    double w = 0.0;
    if (std::abs(s - a) < R) w += 1.0;
    if (s > 0.0 && std::abs(-s - a) < R) w += 1.0;
    return w;
  }
  const double full = sphere_area(n) * std::pow(s, n - 1);
  if (a <= 0.0) return s < R ? full : 0.0;
  if (s <= R - a) return full;                  // sphere entirely inside the ball
  if (s <= std::abs(a - R) || s >= a + R) return 0.0;
  const double cos_theta = (a * a + s * s - R * R) / (2.0 * a * s);
  return full * cap_fraction(n, cos_theta);
}

namespace {

// Breakpoints on [lo, hi], geometrically refined toward endpoints where the
// cap weight has square-root behaviour (sphere tangent to the ball).
std::vector<double> panel_breaks(double lo, double hi, bool grade_lo, bool grade_hi) {
  std::vector<double> fracs;
  if (grade_lo)
    for (int k = 24; k >= 2; --k) fracs.push_back(std::pow(2.0, -k));
  for (int i = 0; i <= 8; ++i) fracs.push_back(0.25 + 0.5 * i / 8.0);
  if (grade_hi)
    for (int k = 2; k <= 24; ++k) fracs.push_back(1.0 - std::pow(2.0, -k));
  std::vector<double> breaks{lo};
  for (double f : fracs) breaks.push_back(lo + (hi - lo) * f);
  breaks.push_back(hi);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  return breaks;
}

}  // namespace

double ball_integral(const Fn& radial_profile, int n, double a, double R, double rho) {
  require(R > 0.0 && a >= 0.0 && rho >= 0.0, ErrorCode::InvalidArgument,
          "ball_integral needs R > 0, a >= 0, rho >= 0");
  if (rho >= R) return 0.0;
  const double s_hi = a + R;
  const double s_lo = std::max(0.0, a - R);

  auto weighted = [&](double s) {
    const double w = cap_weight(n, s, a, R) - (rho > 0.0 ? cap_weight(n, s, a, rho) : 0.0);
    return w <= 0.0 ? 0.0 : w * radial_profile(s);
  };

  // Split at the kinks of the cap weight; tangency radii get graded panels.
  std::vector<double> cuts = {s_lo, s_hi, std::abs(a - R), a + R};
  std::vector<double> tangents;
  if (a > 0.0 && n >= 2) tangents = {std::abs(a - R), a + R};
  if (rho > 0.0) {
    cuts.push_back(std::abs(a - rho));
    cuts.push_back(a + rho);
    if (a > 0.0 && n >= 2) {
      tangents.push_back(std::abs(a - rho));
      tangents.push_back(a + rho);
    }
  }
  const double floor = 1e-22 * s_hi;
  for (double& c : cuts) c = std::clamp(c, std::max(s_lo, floor), s_hi);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [&](double x, double y) { return std::abs(x - y) <= 1e-15 * s_hi; }),
             cuts.end());
  if (s_lo == 0.0 && cuts.front() > floor) cuts.insert(cuts.begin(), floor);

  auto is_tangent = [&](double s) {
    for (double t : tangents)
      if (std::abs(s - t) <= 1e-12 * s_hi) return true;
    return false;
  };

  double sum = 0.0;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i], hi = cuts[i + 1];
    if (hi - lo <= 0.0) continue;
    const bool grade_lo = is_tangent(lo);
    const bool grade_hi = is_tangent(hi);
    std::vector<double> breaks;
    if (lo > 0.0 && hi / lo > 4.0 && !grade_lo && !grade_hi)
      breaks = log_breaks(lo, hi, 8, 4);
    else if (grade_lo || grade_hi)
      breaks = panel_breaks(lo, hi, grade_lo, grade_hi);
    else
      breaks = uniform_breaks(lo, hi, 8);
    sum += composite(weighted, breaks);
  }
  return sum;
}

}  // namespace supercal::quad
