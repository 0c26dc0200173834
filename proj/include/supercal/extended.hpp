#pragma once

#include <cmath>
#include <string>

#include "supercal/errors.hpp"

namespace supercal {

/// Extended real used by closed-form evaluation. The infinite point source
/// solution is genuinely +inf at the spatial origin, which is distinct from
/// overflow or an error; derivatives there carry an explicit undefined tag.
/// Arithmetic on non-finite values is forbidden: value() throws instead of
/// leaking an IEEE infinity into downstream computations.
class ExtReal {
 public:
  enum class Tag { Finite, PosInf, Undefined };

  ExtReal() : tag_(Tag::Finite), v_(0.0) {}
  static ExtReal finite(double v) {
    ExtReal x;
    x.tag_ = Tag::Finite;
    x.v_ = v;
    return x;
  }
  static ExtReal pos_inf() {
    ExtReal x;
    x.tag_ = Tag::PosInf;
    return x;
  }
  static ExtReal undefined() {
    ExtReal x;
    x.tag_ = Tag::Undefined;
    return x;
  }

  Tag tag() const { return tag_; }
  bool is_finite() const { return tag_ == Tag::Finite; }
  bool is_pos_inf() const { return tag_ == Tag::PosInf; }
  bool is_undefined() const { return tag_ == Tag::Undefined; }

  double value() const {
    require(tag_ == Tag::Finite, ErrorCode::UndefinedPoint,
            "arithmetic on a non-finite extended real");
    return v_;
  }

  /// Lossy view for measurement code: +inf maps to HUGE_VAL, undefined to NaN.
  double as_double() const {
    if (tag_ == Tag::Finite) return v_;
    if (tag_ == Tag::PosInf) return HUGE_VAL;
    return std::nan("");
  }

  std::string csv_string() const;

 private:
  Tag tag_;
  double v_ = 0.0;
};

}  // namespace supercal
