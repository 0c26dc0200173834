#include "supercal/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "supercal/quadrature.hpp"

namespace supercal {

namespace {

double sign_pow(double s, double e) {
  // |s|^e * sign(s), the odd power entering the flux.
  if (s == 0.0) return 0.0;
  return s > 0.0 ? std::pow(s, e) : -std::pow(-s, e);
}

}  // namespace

const char* family_kind_name(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::SingularBarenblatt: return "SingularBarenblatt";
    case FamilyKind::DegenerateBarenblatt: return "DegenerateBarenblatt";
    case FamilyKind::InfinitePointSource: return "InfinitePointSource";
    case FamilyKind::PowerSupersolution: return "PowerSupersolution";
  }
  return "UnknownFamily";
}

std::string ExtReal::csv_string() const {
  if (tag_ == Tag::PosInf) return "inf";
  if (tag_ == Tag::Undefined) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v_);
  return buf;
}

EvalResult EvalResult::all_zero() {
  EvalResult r;
  r.value = ExtReal::finite(0.0);
  r.radial_gradient = ExtReal::finite(0.0);
  r.time_derivative = ExtReal::finite(0.0);
  r.flux_divergence = ExtReal::finite(0.0);
  r.residual = ExtReal::finite(0.0);
  return r;
}

double ips_constant(const Medium& medium) {
  const double p = medium.p;
  require(p > 1.0 && p < 2.0, ErrorCode::InvalidArgument,
          "the point source constant needs fast diffusion 1 < p < 2");
  const double beta = p / (2.0 - p);
  if (beta - medium.n <= 0.0)
    fail(ErrorCode::DegenerateConstant, "p/(2-p) - n <= 0 at or below the critical exponent");
  return (2.0 - p) * std::pow(beta, p - 1.0) * (beta - medium.n);
}

double power_constant(const Medium& medium, double q) {
  const double p = medium.p;
  require(p > 1.0 && p < 2.0, ErrorCode::InvalidArgument,
          "the power supersolution needs fast diffusion 1 < p < 2");
  require(q > 0.0, ErrorCode::InvalidArgument, "the power exponent q must be positive");
  const double factor = q / (2.0 - p) - q + p - medium.n;
  if (factor <= 0.0) fail(ErrorCode::NonpositiveFactor, "q/(2-p) - q + p - n <= 0");
  return (2.0 - p) * std::pow(q / (2.0 - p), p - 1.0) * factor;
}

SolutionFamily::SolutionFamily(const Medium& medium, FamilyKind kind, double c, double q,
                               bool zero_extended)
    : medium_(medium), kind_(kind), c_(c), q_(q), zero_extended_(zero_extended) {}

SolutionFamily SolutionFamily::singular_barenblatt(const Medium& medium, double c,
                                                   bool zero_extended) {
  require(classify_regime(medium) == Regime::SupercriticalFast, ErrorCode::InvalidArgument,
          "the singular Barenblatt solution needs 2n/(n+1) < p < 2");
  require(c > 0.0, ErrorCode::InvalidArgument, "Barenblatt constant must be positive");
  return SolutionFamily(medium, FamilyKind::SingularBarenblatt, c, 0.0, zero_extended);
}

SolutionFamily SolutionFamily::degenerate_barenblatt(const Medium& medium, double c,
                                                     bool zero_extended) {
  require(classify_regime(medium) == Regime::SlowDiffusion, ErrorCode::InvalidArgument,
          "the degenerate Barenblatt solution needs p > 2");
  require(c > 0.0, ErrorCode::InvalidArgument, "Barenblatt constant must be positive");
  return SolutionFamily(medium, FamilyKind::DegenerateBarenblatt, c, 0.0, zero_extended);
}

SolutionFamily SolutionFamily::infinite_point_source(const Medium& medium, bool zero_extended) {
  require(classify_regime(medium) == Regime::SupercriticalFast, ErrorCode::InvalidArgument,
          "the infinite point source solution needs 2n/(n+1) < p < 2");
  const double c = ips_constant(medium);  // throws DegenerateConstant at the boundary
  return SolutionFamily(medium, FamilyKind::InfinitePointSource, c, medium.p, zero_extended);
}

SolutionFamily SolutionFamily::power_supersolution(const Medium& medium, double q, double c,
                                                   bool zero_extended) {
  require(medium.p > 1.0 && medium.p < 2.0, ErrorCode::InvalidArgument,
          "the power supersolution needs fast diffusion 1 < p < 2");
  require(c > 0.0, ErrorCode::InvalidArgument, "constant must be positive");
  require(q > 0.0, ErrorCode::InvalidArgument, "q must be positive");
  return SolutionFamily(medium, FamilyKind::PowerSupersolution, c, q, zero_extended);
}

SolutionFamily SolutionFamily::power_supersolution(const Medium& medium, double q,
                                                   bool zero_extended) {
  return power_supersolution(medium, q, power_constant(medium, q), zero_extended);
}

bool SolutionFamily::singular_at_origin() const {
  return kind_ == FamilyKind::InfinitePointSource || kind_ == FamilyKind::PowerSupersolution;
}

bool SolutionFamily::is_solution_on(double s_lo, double s_hi, double t_lo, double t_hi) const {
  if (!(s_lo >= 0.0 && s_hi > s_lo && t_hi > t_lo)) return false;
  if (t_lo <= 0.0) return false;  // across t = 0 only the supercaloric extension survives
  switch (kind_) {
    case FamilyKind::SingularBarenblatt:
    case FamilyKind::DegenerateBarenblatt:
      return true;
    case FamilyKind::InfinitePointSource:
      return s_lo > 0.0;  // solution only away from the standing singularity
    case FamilyKind::PowerSupersolution:
      return false;  // strict supersolution inside the unit ball
  }
  return false;
}

EvalResult SolutionFamily::evaluate(double radius, double t) const {
  require(radius >= 0.0, ErrorCode::InvalidArgument, "radius must be nonnegative");
  if (t <= 0.0) {
    if (zero_extended_) return EvalResult::all_zero();
    fail(ErrorCode::UndefinedPoint, "family not defined for t <= 0 without zero extension");
  }

  const double n = medium_.n;
  const double p = medium_.p;
  EvalResult out;

  if (kind_ == FamilyKind::InfinitePointSource || kind_ == FamilyKind::PowerSupersolution) {
    const double gamma = 1.0 / (2.0 - p);
    const double beta = q_ / (2.0 - p);
    if (radius == 0.0) {
      out.value = ExtReal::pos_inf();
      out.radial_gradient = ExtReal::undefined();
      out.time_derivative = ExtReal::undefined();
      out.flux_divergence = ExtReal::undefined();
      out.residual = ExtReal::undefined();
      return out;
    }
    const double ct = c_ * t;
    const double value = std::pow(ct, gamma) * std::pow(radius, -beta);
    const double grad = -beta * std::pow(ct, gamma) * std::pow(radius, -beta - 1.0);
    const double ut = gamma * c_ * std::pow(ct, gamma - 1.0) * std::pow(radius, -beta);
    const double div = std::pow(beta, p - 1.0) * (beta * (p - 1.0) + p - n) *
                       std::pow(ct, gamma * (p - 1.0)) *
                       std::pow(radius, -beta * (p - 1.0) - p);
    out.value = ExtReal::finite(value);
    out.radial_gradient = ExtReal::finite(grad);
    out.time_derivative = ExtReal::finite(ut);
    out.flux_divergence = ExtReal::finite(div);
    out.residual = ExtReal::finite(ut - div);
    return out;
  }

  // Barenblatt branches share the profile variable inner(r, t).
  const double lambda = n * (p - 2.0) + p;
  const double kappa = p / (p - 1.0);
  const double lt = lambda * t;
  const double A = std::pow(lt, -n / lambda);
  const double Ap = -n * std::pow(lt, -n / lambda - 1.0);
  const double time_pow = std::pow(lt, -p / (lambda * (p - 1.0)));
  const double time_pow_d = std::pow(lt, -p / (lambda * (p - 1.0)) - 1.0);

  if (kind_ == FamilyKind::SingularBarenblatt) {
    const double m = (p - 1.0) / (2.0 - p);
    const double B = (2.0 - p) / p * time_pow;
    const double Bp = -(2.0 - p) / (p - 1.0) * time_pow_d;
    const double rk = std::pow(radius, kappa);
    const double inner = c_ + B * rk;
    const double value = A * std::pow(inner, -m);
    const double grad =
        -A * m * B * kappa * std::pow(inner, -m - 1.0) * std::pow(radius, kappa - 1.0);
    const double ut = Ap * std::pow(inner, -m) - A * m * std::pow(inner, -m - 1.0) * Bp * rk;
    const double D = std::pow(A * m * B * kappa, p - 1.0);
    const double div =
        -D * std::pow(inner, -m - 1.0) * (n * inner - m * B * kappa * rk);
    out.value = ExtReal::finite(value);
    out.radial_gradient = ExtReal::finite(grad);
    out.time_derivative = ExtReal::finite(ut);
    out.flux_divergence = ExtReal::finite(div);
    out.residual = ExtReal::finite(ut - div);
    return out;
  }

  // Degenerate Barenblatt, compactly supported: exact zero outside.
  const double m = (p - 1.0) / (p - 2.0);
  const double B = (p - 2.0) / p * time_pow;
  const double Bp = -(p - 2.0) / (p - 1.0) * time_pow_d;
  const double rk = std::pow(radius, kappa);
  const double inner = c_ - B * rk;
  if (inner <= 0.0) return EvalResult::all_zero();
  const double value = A * std::pow(inner, m);
  const double grad =
      -A * m * B * kappa * std::pow(inner, m - 1.0) * std::pow(radius, kappa - 1.0);
  const double ut = Ap * std::pow(inner, m) - A * m * std::pow(inner, m - 1.0) * Bp * rk;
  const double D = std::pow(A * m * B * kappa, p - 1.0);
  const double div = -D * std::pow(inner, m - 1.0) * (n * inner - m * B * kappa * rk);
  out.value = ExtReal::finite(value);
  out.radial_gradient = ExtReal::finite(grad);
  out.time_derivative = ExtReal::finite(ut);
  out.flux_divergence = ExtReal::finite(div);
  out.residual = ExtReal::finite(ut - div);
  return out;
}

namespace {

// Mass integral of the singular Barenblatt profile at a fixed time, head by
// adaptive quadrature and tail by a binomial series on the power-law decay.
double barenblatt_mass_at(const Medium& medium, double c, double t) {
  const double n = medium.n;
  const double p = medium.p;
  const double lambda = n * (p - 2.0) + p;
  const double kappa = p / (p - 1.0);
  const double m = (p - 1.0) / (2.0 - p);
  const double lt = lambda * t;
  const double A = std::pow(lt, -n / lambda);
  const double B = (2.0 - p) / p * std::pow(lt, -p / (lambda * (p - 1.0)));

  const double r_cross = std::pow(c / B, 1.0 / kappa);
  const double R = 4.0 * r_cross;

  auto integrand = [&](double r) {
    return A * std::pow(c + B * std::pow(r, kappa), -m) * std::pow(r, n - 1.0);
  };
  const double head = quad::adaptive(integrand, 0.0, R, 1e-11);

  // tail = A B^{-m} sum_j binom(-m, j) (c/B)^j R^{n - kappa m - kappa j}
  //        / (kappa m + kappa j - n); converges since (c/B) R^{-kappa} < 1.
  const double x = (c / B) * std::pow(R, -kappa);
  double tail = 0.0;
  double coeff = 1.0;  // binom(-m, j) (c/B)^j R^{-kappa j} accumulated
  const double base = A * std::pow(B, -m) * std::pow(R, n - kappa * m);
  for (int j = 0; j < 200; ++j) {
    const double denom = kappa * (m + j) - n;
    require(denom > 0.0, ErrorCode::QuadratureFailure, "tail integral does not converge");
    const double term = base * coeff / denom;
    tail += term;
    if (std::abs(term) < 1e-17 * (std::abs(tail) + 1e-300)) break;
    coeff *= (-m - j) / (j + 1.0) * x;
  }
  return quad::sphere_area(medium.n) * (head + tail);
}

}  // namespace

MassReport mass_report(const Medium& medium, double c, const std::vector<double>& times) {
  require(classify_regime(medium) == Regime::SupercriticalFast, ErrorCode::InvalidArgument,
          "mass normalization applies to the supercritical fast-diffusion Barenblatt family");
  require(c > 0.0, ErrorCode::InvalidArgument, "c must be positive");
  MassReport report;
  report.c_used = c;
  report.time_samples = times;
  double lo = HUGE_VAL, hi = -HUGE_VAL, sum = 0.0;
  for (double t : times) {
    require(t > 0.0, ErrorCode::InvalidArgument, "mass sample times must be positive");
    const double mass = barenblatt_mass_at(medium, c, t);
    report.masses.push_back(mass);
    lo = std::min(lo, mass);
    hi = std::max(hi, mass);
    sum += mass;
  }
  report.max_relative_spread = times.empty() ? 0.0 : (hi - lo) / (sum / times.size());
  return report;
}

NormalizedConstant normalize_mass(const Medium& medium, double target) {
  require(classify_regime(medium) == Regime::SupercriticalFast, ErrorCode::InvalidArgument,
          "mass normalization applies to the supercritical fast-diffusion Barenblatt family");
  require(target > 0.0, ErrorCode::InvalidArgument, "target mass must be positive");

  auto mass_of = [&](double c) { return barenblatt_mass_at(medium, c, 1.0); };

  // mass(c) is strictly decreasing; expand a bracket around the target.
  double c_lo = 1.0, c_hi = 1.0;
  int guard = 0;
  while (mass_of(c_lo) <= target) {
    c_lo /= 8.0;
    require(++guard < 200, ErrorCode::BracketFailure, "no lower bracket for the mass target");
  }
  guard = 0;
  while (mass_of(c_hi) >= target) {
    c_hi *= 8.0;
    require(++guard < 200, ErrorCode::BracketFailure, "no upper bracket for the mass target");
  }

  double c_mid = std::sqrt(c_lo * c_hi);
  for (int it = 0; it < 120; ++it) {
    c_mid = std::sqrt(c_lo * c_hi);
    const double mass = mass_of(c_mid);
    if (std::abs(mass - target) <= 1e-10 * target) break;
    (mass > target ? c_lo : c_hi) = c_mid;
  }

  NormalizedConstant out;
  out.c = c_mid;
  out.report = mass_report(medium, c_mid, {0.1, 1.0, 10.0});
  return out;
}

double pde_residual_fd(const SolutionFamily& family, double radius, double t, double h) {
  require(h > 0.0, ErrorCode::InvalidArgument, "step must be positive");
  if (!(h < radius / 4.0 && h < t / 4.0))
    fail(ErrorCode::StepTooLarge, "need h < radius/4 and h < t/4");
  const double n = family.medium().n;
  const double p = family.medium().p;

  auto v = [&](double r, double s) { return family.evaluate(r, s).value.value(); };

  const double ut = (v(radius, t + h) - v(radius, t - h)) / (2.0 * h);
  const double s_plus = (v(radius + h, t) - v(radius, t)) / h;
  const double s_minus = (v(radius, t) - v(radius - h, t)) / h;
  const double w_plus = std::pow(radius + 0.5 * h, n - 1.0);
  const double w_minus = std::pow(radius - 0.5 * h, n - 1.0);
  const double div = (w_plus * sign_pow(s_plus, p - 1.0) - w_minus * sign_pow(s_minus, p - 1.0)) /
                     (std::pow(radius, n - 1.0) * h);
  return ut - div;
}

ExtReal pointwise_rate_exact(const SolutionFamily& family, double x0_radius, double s) {
  require(x0_radius >= 0.0, ErrorCode::InvalidArgument, "center radius must be nonnegative");
  if (s <= 0.0) {
    require(family.zero_extended(), ErrorCode::InvalidArgument,
            "family not defined near t <= 0 without zero extension");
    return ExtReal::finite(0.0);  // u vanishes on a neighbourhood of t <= 0 slices
  }
  if (family.singular_at_origin() && x0_radius == 0.0) {
    const double p = family.medium().p;
    if (family.q() == p)
      return ExtReal::finite(std::pow(family.c() * s, 1.0 / (2.0 - p)));
    if (family.q() > p) return ExtReal::pos_inf();
  }
  return ExtReal::finite(0.0);
}

}  // namespace supercal
