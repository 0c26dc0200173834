#include "supercal/source.hpp"

#include <algorithm>
#include <cmath>

namespace supercal {

namespace {

class FamilySource final : public RadialSource {
 public:
  explicit FamilySource(const SolutionFamily& family) : family_(family) {}

  double value(double s, double t) const override {
    if (t <= 0.0 && family_.zero_extended()) return 0.0;
    return family_.evaluate(s, t).value.as_double();
  }

  double gradient(double s, double t) const override {
    if (t <= 0.0 && family_.zero_extended()) return 0.0;
    return family_.evaluate(s, t).radial_gradient.as_double();
  }

  SourceDomain domain() const override {
    SourceDomain d;
    d.s_lo = 0.0;
    d.s_hi = HUGE_VAL;
    d.t_lo = family_.zero_extended() ? -HUGE_VAL : 0.0;
    d.t_hi = HUGE_VAL;
    return d;
  }

  bool singular_at_origin() const override { return family_.singular_at_origin(); }

  bool is_solution_on(double s_a, double s_b, double t_a, double t_b) const override {
    return family_.is_solution_on(s_a, s_b, t_a, t_b);
  }

  bool is_supersolution_on(double s_a, double s_b, double t_a, double t_b) const override {
    if (!(s_a >= 0.0 && s_b > s_a && t_b > t_a)) return false;
    if (t_a <= 0.0 && !family_.zero_extended()) return false;
    if (family_.kind() == FamilyKind::PowerSupersolution)
      return s_b <= 1.0 + 1e-12;  // supersolution in the punctured unit ball
    return true;
  }

 private:
  SolutionFamily family_;
};

class FieldSource final : public RadialSource {
 public:
  FieldSource(GridField field, const SolverConfig& config) : field_(std::move(field)) {
    field_.validate();
    const ResidualClassification rc = residual_sign(field_, config);
    all_solution_ = rc.fraction(CellClass::Solution) == 1.0;
    all_supersolution_ = rc.all_at_least_supersolution();
  }

  double value(double s, double t) const override { return field_.value_interp(s, t); }
  double gradient(double s, double t) const override { return field_.gradient_interp(s, t); }

  SourceDomain domain() const override {
    SourceDomain d;
    d.s_lo = field_.grid.nodes.front();
    d.s_hi = field_.grid.nodes.back();
    d.t_lo = field_.times.front();
    d.t_hi = field_.times.back();
    return d;
  }

  bool is_solution_on(double, double, double, double) const override { return all_solution_; }
  bool is_supersolution_on(double, double, double, double) const override {
    return all_supersolution_;
  }

 private:
  GridField field_;
  bool all_solution_ = false;
  bool all_supersolution_ = false;
};

class ConstantSource final : public RadialSource {
 public:
  explicit ConstantSource(double v) : v_(v) {}
  double value(double, double) const override { return v_; }
  double gradient(double, double) const override { return 0.0; }
  SourceDomain domain() const override { return SourceDomain{}; }
  bool is_solution_on(double, double, double, double) const override { return true; }
  bool is_supersolution_on(double, double, double, double) const override { return true; }

 private:
  double v_;
};

class TruncatedSource final : public RadialSource {
 public:
  TruncatedSource(SourcePtr base, double level) : base_(std::move(base)), level_(level) {
    require(std::isfinite(level_), ErrorCode::InvalidArgument,
            "truncation level must be finite");
  }

  double value(double s, double t) const override {
    return std::min(base_->value(s, t), level_);
  }
  double gradient(double s, double t) const override {
    return base_->value(s, t) > level_ ? 0.0 : base_->gradient(s, t);
  }
  bool has_gradient() const override { return base_->has_gradient(); }
  SourceDomain domain() const override { return base_->domain(); }
  bool is_solution_on(double, double, double, double) const override { return false; }
  bool is_supersolution_on(double s_a, double s_b, double t_a, double t_b) const override {
    // min of a supersolution and a constant stays a supersolution.
    return base_->is_supersolution_on(s_a, s_b, t_a, t_b);
  }

 private:
  SourcePtr base_;
  double level_;
};

class ShiftedSource final : public RadialSource {
 public:
  ShiftedSource(SourcePtr base, double shift) : base_(std::move(base)), shift_(shift) {
    require(std::isfinite(shift_), ErrorCode::InvalidArgument, "shift must be finite");
  }

  double value(double s, double t) const override { return base_->value(s, t) + shift_; }
  double gradient(double s, double t) const override { return base_->gradient(s, t); }
  bool has_gradient() const override { return base_->has_gradient(); }
  SourceDomain domain() const override { return base_->domain(); }
  bool singular_at_origin() const override { return base_->singular_at_origin(); }
  bool is_solution_on(double s_a, double s_b, double t_a, double t_b) const override {
    return base_->is_solution_on(s_a, s_b, t_a, t_b);
  }
  bool is_supersolution_on(double s_a, double s_b, double t_a, double t_b) const override {
    return base_->is_supersolution_on(s_a, s_b, t_a, t_b);
  }

 private:
  SourcePtr base_;
  double shift_;
};

}  // namespace

SourcePtr make_family_source(const SolutionFamily& family) {
  return std::make_shared<FamilySource>(family);
}

SourcePtr make_field_source(GridField field, const SolverConfig& config) {
  return std::make_shared<FieldSource>(std::move(field), config);
}

SourcePtr make_constant_source(double value) { return std::make_shared<ConstantSource>(value); }

SourcePtr make_truncated_source(SourcePtr base, double level) {
  return std::make_shared<TruncatedSource>(std::move(base), level);
}

SourcePtr make_shifted_source(SourcePtr base, double shift) {
  return std::make_shared<ShiftedSource>(std::move(base), shift);
}

}  // namespace supercal
