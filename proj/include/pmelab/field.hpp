#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "pmelab/errors.hpp"

namespace pmelab {

/// Porous medium exponent m > 1.
class Exponent
{
public:
  explicit Exponent(double m) : m_(m)
  {
    if (!std::isfinite(m) || !(m > 1.0))
      throw ValidationError("exponent m must be finite and > 1, got " + std::to_string(m));
  }

  double value() const noexcept { return m_; }
  operator double() const noexcept { return m_; }

private:
  double m_;
};

/// Mixing parameter alpha in [0, 1] of the generalized curvature condition.
class MixingParameter
{
public:
  explicit MixingParameter(double alpha) : alpha_(alpha)
  {
    if (!(alpha >= 0.0 && alpha <= 1.0))
      throw ValidationError("mixing parameter alpha must lie in [0, 1], got " +
                            std::to_string(alpha));
  }

  double value() const noexcept { return alpha_; }
  operator double() const noexcept { return alpha_; }

private:
  double alpha_;
};

namespace detail {

template <bool AllowZero>
class BoundedField
{
public:
  BoundedField() = default;

  explicit BoundedField(std::vector<double> values) : values_(std::move(values))
  {
    for (std::size_t i = 0; i < values_.size(); ++i) {
      const double v = values_[i];
      const bool ok = std::isfinite(v) && (AllowZero ? v >= 0.0 : v > 0.0);
      if (!ok)
        throw ValidationError(std::string(AllowZero ? "nonnegative" : "positive") +
                              " field: bad value " + std::to_string(v) + " at index " +
                              std::to_string(i));
    }
  }

  BoundedField(std::initializer_list<double> values) : BoundedField(std::vector<double>(values)) {}

  BoundedField(std::size_t n, double value) : BoundedField(std::vector<double>(n, value)) {}

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }
  const std::vector<double>& vector() const noexcept { return values_; }
  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }

  /// Pointwise rescaling by lambda > 0.
  BoundedField scaled(double lambda) const
  {
    std::vector<double> out = values_;
    for (double& v : out)
      v *= lambda;
    return BoundedField(std::move(out));
  }

private:
  std::vector<double> values_;
};

} // namespace detail

/// Field X -> (0, inf), indexed by vertex.
using PositiveField = detail::BoundedField<false>;

/// Field X -> [0, inf). Accepted by the curvature operators only for m >= 2,
/// where they extend continuously to zero values.
using NonnegativeField = detail::BoundedField<true>;

/// Read-only view on a positive or nonnegative field handed to the operators.
class FieldView
{
public:
  FieldView(const PositiveField& f) noexcept : values_(f.values()), zeros_allowed_(false) {}
  FieldView(const NonnegativeField& f) noexcept : values_(f.values()), zeros_allowed_(true) {}

  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  bool zeros_allowed() const noexcept { return zeros_allowed_; }

  static FieldView unchecked(std::span<const double> values, bool zeros_allowed) noexcept
  {
    return FieldView(values, zeros_allowed);
  }

private:
  FieldView(std::span<const double> values, bool zeros_allowed) noexcept
    : values_(values), zeros_allowed_(zeros_allowed)
  {
  }

  std::span<const double> values_;
  bool zeros_allowed_;
};

} // namespace pmelab
