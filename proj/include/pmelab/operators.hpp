#pragma once

#include <cassert>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "pmelab/errors.hpp"
#include "pmelab/field.hpp"
#include "pmelab/graph.hpp"

namespace pmelab {

/// Lf(x) = sum_y k(x, y) (f(y) - f(x)).
inline double laplacian(const Graph& g, std::span<const double> f, Vertex x)
{
  const double fx = f[x];
  double s = 0.0;
  for (const auto& [y, k] : g.neighbors(x))
    s += k * (f[y] - fx);
  return s;
}

/// Upsilon(r) = e^r - 1 - r, >= 0. Saturates to +inf for large r.
inline double upsilon(double r)
{
  if (r == std::numeric_limits<double>::infinity())
    return r;
  return std::expm1(r) - r;
}

/// (m-1)^2/m * Upsilon(m r/(m-1)) - (m-1) Upsilon(r), >= 0.
inline double tilde_upsilon(Exponent m, double r)
{
  const double mm = m.value();
  const double lead = upsilon(mm / (mm - 1.0) * r);
  if (!std::isfinite(lead))
    return std::numeric_limits<double>::infinity();
  return (mm - 1.0) * (mm - 1.0) / mm * lead - (mm - 1.0) * upsilon(r);
}

/// Psi_H(w)(x) = sum_y k(x, y) H(w(y) - w(x)).
template <class H>
double psi(const Graph& g, H&& h, std::span<const double> w, Vertex x)
{
  const double wx = w[x];
  double s = 0.0;
  for (const auto& [y, k] : g.neighbors(x))
    s += k * h(w[y] - wx);
  return s;
}

/// Carre du champ: 1/2 sum_y k(x, y) (f(y) - f(x))^2.
inline double gamma(const Graph& g, std::span<const double> f, Vertex x)
{
  const double fx = f[x];
  double s = 0.0;
  for (const auto& [y, k] : g.neighbors(x))
    s += k * (f[y] - fx) * (f[y] - fx);
  return 0.5 * s;
}

inline double pressure_value(double m, double u) { return m / (m - 1.0) * std::pow(u, m - 1.0); }

inline double pressure_inverse_value(double m, double v)
{
  return std::pow((m - 1.0) / m * v, 1.0 / (m - 1.0));
}

/// Pressure v = m/(m-1) u^(m-1).
template <bool Z>
detail::BoundedField<Z> pressure(Exponent m, const detail::BoundedField<Z>& u)
{
  std::vector<double> v(u.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    v[i] = pressure_value(m, u[i]);
  return detail::BoundedField<Z>(std::move(v));
}

/// Inverse of pressure(): u = ((m-1)/m v)^(1/(m-1)).
template <bool Z>
detail::BoundedField<Z> pressure_inverse(Exponent m, const detail::BoundedField<Z>& v)
{
  std::vector<double> u(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    u[i] = pressure_inverse_value(m, v[i]);
  return detail::BoundedField<Z>(std::move(u));
}

namespace detail {

/// A computed value together with the sum of absolute values of the terms
/// that produced it; rounding error is bounded by a small multiple of
/// eps * magnitude.
struct Estimate
{
  double value = 0.0;
  double magnitude = 0.0;

  double noise() const noexcept { return 64.0 * std::numeric_limits<double>::epsilon() * magnitude; }
};

inline void require_domain(FieldView u, Vertex v, double m, const char* op)
{
  const double val = u[v];
  if (val > 0.0 && std::isfinite(val))
    return;
  if (val == 0.0 && u.zeros_allowed() && m >= 2.0)
    return;
  throw DomainError(std::string(op) + ": field value " + std::to_string(val) + " at vertex " +
                    std::to_string(v) + " is outside the operator domain");
}

inline void require_closed_neighborhood(const Graph& g, FieldView u, Vertex x, double m,
                                        const char* op)
{
  require_domain(u, x, m, op);
  for (const auto& n : g.neighbors(x))
    require_domain(u, n.vertex, m, op);
}

inline void require_two_hop(const Graph& g, FieldView u, Vertex x, double m, const char* op)
{
  require_domain(u, x, m, op);
  for (const auto& n : g.neighbors(x))
    require_closed_neighborhood(g, u, n.vertex, m, op);
}

/// (1 + h)^p - 1 - p h without the cancellation of the naive form near h = 0.
inline double bregman_power(double p, double h)
{
  if (std::abs(p * h) < 0.1) {
    double term = p * (p - 1.0) / 2.0 * h * h;
    double sum = 0.0;
    for (int k = 2; k < 60 && term != 0.0; ++k) {
      sum += term;
      if (std::abs(term) <= 1e-17 * std::abs(sum))
        break;
      term *= (p - k) / (k + 1.0) * h;
    }
    return sum;
  }
  return std::expm1(p * std::log1p(h)) - p * h;
}

/// Edge term of tilde_psi. For wx > 0 it equals
/// (m-1)^2/m wx^2 [(wy/wx)^p - 1 - p (wy/wx - 1)], p = m/(m-1), which is
/// evaluated directly so that near-equal neighbors do not cancel and the
/// term stays finite as m -> 1. The magnitude is that of the three-term
/// power sum.
inline Estimate tilde_psi_edge(double m, double wx, double wy)
{
  const double p = m / (m - 1.0);
  const double c1 = (m - 1.0) / m * wx * wx;
  const double c3 = (m - 1.0) * wx * wy;
  if (wx > 0.0) {
    const double c2 = (m - 1.0) * (m - 1.0) / m * wx * wx * std::pow(wy / wx, p);
    const double value =
      (m - 1.0) * (m - 1.0) / m * wx * wx * bregman_power(p, (wy - wx) / wx);
    return {value, std::abs(c1) + std::abs(c2) + std::abs(c3)};
  }
  const double c2 = (m - 1.0) * (m - 1.0) / m * std::pow(wx, (m - 2.0) / (m - 1.0)) * std::pow(wy, p);
  return {c1 + c2 - c3, std::abs(c1) + std::abs(c2) + std::abs(c3)};
}

inline Estimate tilde_psi_sum(const Graph& g, double m, std::span<const double> w, Vertex x)
{
  Estimate e;
  for (const auto& [y, k] : g.neighbors(x)) {
    const Estimate t = tilde_psi_edge(m, w[x], w[y]);
    e.value += k * t.value;
    e.magnitude += k * t.magnitude;
  }
  return e;
}

/// G(x) = Lv(x) + alpha Psi~(v)(x) / ((m-1) v(x)), v = pressure(u).
inline Estimate g_quantity_estimate(const Graph& g, double m, double alpha,
                                    std::span<const double> u, Vertex x)
{
  const double vx = pressure_value(m, u[x]);
  Estimate lap;
  Estimate tpsi;
  for (const auto& [y, k] : g.neighbors(x)) {
    const double vy = pressure_value(m, u[y]);
    lap.value += k * (vy - vx);
    lap.magnitude += k * (std::abs(vy) + std::abs(vx));
    if (alpha > 0.0) {
      const Estimate t = tilde_psi_edge(m, vx, vy);
      tpsi.value += k * t.value;
      tpsi.magnitude += k * t.magnitude;
    }
  }
  if (alpha == 0.0)
    return lap;
  const double scale = alpha / ((m - 1.0) * vx);
  return {lap.value + scale * tpsi.value, lap.magnitude + scale * tpsi.magnitude};
}

/// L(u^m)(y) with magnitude.
inline Estimate laplacian_of_power(const Graph& g, double m, std::span<const double> u, Vertex y)
{
  const double uy = std::pow(u[y], m);
  Estimate e;
  for (const auto& [z, k] : g.neighbors(y)) {
    const double uz = std::pow(u[z], m);
    e.value += k * (uz - uy);
    e.magnitude += k * (uz + uy);
  }
  return e;
}

/// D_{m,alpha}(u)(x); alpha = 0 gives D_m.
inline Estimate d_m_alpha_estimate(const Graph& g, double m, double alpha,
                                   std::span<const double> u, Vertex x)
{
  const double ux = u[x];
  const Estimate lx = laplacian_of_power(g, m, u, x);
  const double ux_pow = std::pow(ux, m - 2.0);
  Estimate e;
  for (const auto& [y, k] : g.neighbors(x)) {
    const Estimate ly = laplacian_of_power(g, m, u, y);
    const double uy_pow = std::pow(u[y], m - 2.0);
    double a = 1.0;
    double b = m;
    if (alpha > 0.0) {
      const double ratio = u[y] / ux;
      a = 1.0 - alpha + alpha * ratio;
      b = m - alpha + alpha * std::pow(ratio, m);
    }
    const double first = a * m * uy_pow * ly.value;
    const double second = b * ux_pow * lx.value;
    e.value += k * (first - second);
    e.magnitude += k * (std::abs(a) * m * uy_pow * ly.magnitude +
                        std::abs(b) * ux_pow * lx.magnitude);
  }
  return e;
}

} // namespace detail

/// Log form u^2(x) Psi_{tilde Upsilon}(log u)(x) of tilde_psi. Independent
/// route used to cross-check the power-sum form; overflows when m is close
/// to 1.
inline double tilde_psi_log_form(const Graph& g, Exponent m, const PositiveField& w, Vertex x)
{
  std::vector<double> logs(w.size());
  for (std::size_t i = 0; i < w.size(); ++i)
    logs[i] = std::log(w[i]);
  return w[x] * w[x] * psi(g, [&](double r) { return tilde_upsilon(m, r); }, logs, x);
}

/// tilde Psi^{(m)}(w)(x) = sum_y k(x, y) [ (m-1)/m w(x)^2
///   + (m-1)^2/m w(x)^((m-2)/(m-1)) w(y)^(m/(m-1)) - (m-1) w(x) w(y) ].
///
/// Evaluated in power form; needs w > 0 on the closed neighborhood of x
/// (zeros allowed for nonnegative fields when m >= 2). Result is >= 0 up to
/// rounding.
inline double tilde_psi(const Graph& g, Exponent m, FieldView w, Vertex x)
{
  detail::require_closed_neighborhood(g, w, x, m, "tilde_psi");
  const double value = detail::tilde_psi_sum(g, m, w.values(), x).value;
#ifndef NDEBUG
  if (!w.zeros_allowed() && m.value() >= 1.05) {
    std::vector<double> logs(w.size());
    for (std::size_t i = 0; i < w.size(); ++i)
      logs[i] = std::log(w[i]);
    const double via_logs =
      w[x] * w[x] * psi(g, [&](double r) { return tilde_upsilon(m, r); }, logs, x);
    const double mag = detail::tilde_psi_sum(g, m, w.values(), x).magnitude;
    if (std::isfinite(via_logs))
      assert(std::abs(via_logs - value) <= 1e-9 * std::abs(via_logs) + 1e-12 * mag);
  }
#endif
  return value;
}

/// D_m(u)(x) = m sum_y k(x, y) [u^(m-2)(y) L(u^m)(y) - u^(m-2)(x) L(u^m)(x)].
/// Needs u in the operator domain on the two-hop ball of x.
inline double d_m(const Graph& g, Exponent m, FieldView u, Vertex x)
{
  detail::require_two_hop(g, u, x, m, "d_m");
  return detail::d_m_alpha_estimate(g, m, 0.0, u.values(), x).value;
}

/// D_{m,alpha}(u)(x) = sum_y k(x, y) [ (1 - a + a u(y)/u(x)) m u^(m-2)(y) L(u^m)(y)
///   - (m - a + a (u(y)/u(x))^m) u^(m-2)(x) L(u^m)(x) ].
/// Time derivative of G along solutions; alpha = 0 reduces to d_m.
inline double d_m_alpha(const Graph& g, Exponent m, MixingParameter alpha, FieldView u, Vertex x)
{
  detail::require_two_hop(g, u, x, m, "d_m_alpha");
  if (alpha > 0.0 && !(u[x] > 0.0))
    throw DomainError("d_m_alpha: u(x) must be positive when alpha > 0");
  return detail::d_m_alpha_estimate(g, m, alpha, u.values(), x).value;
}

/// G(x) = Lv(x) + alpha Psi~(v)(x) / ((m-1) v(x)) with v = pressure(m, u).
/// The curvature conditions constrain -G.
inline double g_quantity(const Graph& g, Exponent m, MixingParameter alpha, FieldView u, Vertex x)
{
  detail::require_closed_neighborhood(g, u, x, m, "g_quantity");
  if (alpha > 0.0 && !(u[x] > 0.0))
    throw DomainError("g_quantity: u(x) must be positive when alpha > 0");
  return detail::g_quantity_estimate(g, m, alpha, u.values(), x).value;
}

} // namespace pmelab
