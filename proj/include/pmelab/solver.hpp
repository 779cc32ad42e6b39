#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "pmelab/errors.hpp"
#include "pmelab/field.hpp"
#include "pmelab/graph.hpp"
#include "pmelab/operators.hpp"

namespace pmelab {

struct SolverConfig
{
  double rel_tol = 1e-10;
  double abs_tol = 1e-10;
  double max_step = 0.1;
  double initial_step = 1e-4;
  // Any stage value at or below this is treated as a positivity failure and
  // the step is retried with half the size.
  double positivity_floor = 1e-300;

  void validate() const
  {
    auto pos = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!pos(rel_tol) || !pos(abs_tol) || !pos(max_step) || !pos(initial_step) ||
        !pos(positivity_floor))
      throw ValidationError("solver config: tolerances and step sizes must be finite and > 0");
  }
};

namespace detail {

inline void rhs_into(const Graph& g, double m, std::span<const double> u, std::span<double> out)
{
  std::vector<double> um(u.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    um[i] = std::pow(u[i], m);
  for (Vertex x = 0; x < u.size(); ++x)
    out[x] = laplacian(g, um, x);
}

} // namespace detail

/// Right-hand side x -> L(u^m)(x) of the porous medium equation.
inline std::vector<double> rhs(const Graph& g, Exponent m, const PositiveField& u)
{
  std::vector<double> out(u.size());
  detail::rhs_into(g, m, u.values(), out);
  return out;
}

inline double mass(std::span<const double> u)
{
  double s = 0.0;
  for (double v : u)
    s += v;
  return s;
}

/// Reported solution of the PME. Holds the accepted integrator knots so that
/// at(t) can interpolate between report times.
class Trajectory
{
public:
  struct Knot
  {
    double t;
    std::vector<double> u;
    std::vector<double> du;
  };

  /// Trajectory from given states; knots are the states themselves with
  /// derivatives from the PME right-hand side.
  Trajectory(Graph g, Exponent m, std::vector<double> times, std::vector<PositiveField> states)
    : Trajectory(std::move(g), m, std::move(times), std::move(states), {})
  {
  }

  Trajectory(Graph g, Exponent m, std::vector<double> times, std::vector<PositiveField> states,
             std::vector<Knot> knots)
    : graph_(std::move(g)), m_(m), times_(std::move(times)), states_(std::move(states)),
      knots_(std::move(knots))
  {
    if (times_.empty() || times_.size() != states_.size())
      throw ValidationError("trajectory: need one state per time and at least one time");
    if (!(times_.front() >= 0.0))
      throw ValidationError("trajectory: times must be >= 0");
    for (std::size_t i = 1; i < times_.size(); ++i)
      if (!(times_[i] > times_[i - 1]))
        throw ValidationError("trajectory: times must be strictly increasing");
    for (const auto& s : states_)
      if (s.size() != graph_.size())
        throw ValidationError("trajectory: state size does not match graph");
    if (knots_.empty()) {
      for (std::size_t i = 0; i < times_.size(); ++i) {
        Knot k{times_[i], states_[i].vector(), std::vector<double>(graph_.size())};
        detail::rhs_into(graph_, m_, k.u, k.du);
        knots_.push_back(std::move(k));
      }
    }
  }

  const Graph& graph() const noexcept { return graph_; }
  Exponent m() const noexcept { return m_; }
  const std::vector<double>& times() const noexcept { return times_; }
  const std::vector<PositiveField>& states() const noexcept { return states_; }
  std::size_t size() const noexcept { return times_.size(); }
  const std::vector<Knot>& knots() const noexcept { return knots_; }

  /// Cubic Hermite interpolation between accepted steps.
  PositiveField at(double t) const
  {
    if (t < knots_.front().t || t > knots_.back().t)
      throw ValidationError("trajectory: time " + std::to_string(t) + " outside the solved range");
    auto it = std::upper_bound(knots_.begin(), knots_.end(), t,
                               [](double v, const Knot& k) { return v < k.t; });
    if (it == knots_.begin())
      ++it;
    if (it == knots_.end())
      return PositiveField(knots_.back().u);
    const Knot& a = *(it - 1);
    const Knot& b = *it;
    const double h = b.t - a.t;
    const double s = (t - a.t) / h;
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
    const double h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s);
    const double h11 = s * s * (s - 1);
    std::vector<double> u(a.u.size());
    for (std::size_t i = 0; i < u.size(); ++i)
      u[i] = h00 * a.u[i] + h10 * h * a.du[i] + h01 * b.u[i] + h11 * h * b.du[i];
    return PositiveField(std::move(u));
  }

private:
  Graph graph_;
  Exponent m_;
  std::vector<double> times_;
  std::vector<PositiveField> states_;
  std::vector<Knot> knots_;
};

/// Integrates du/dt = L(u^m) from u(0) = u0 with the Dormand-Prince 5(4)
/// pair and reports the solution at t_eval. Steps are shortened to land on
/// every report time, so reported states are integrator states; at() on the
/// result interpolates in between.
inline Trajectory integrate(const Graph& g, Exponent m, const PositiveField& u0,
                            std::vector<double> t_eval, const SolverConfig& cfg = {})
{
  cfg.validate();
  if (u0.size() != g.size())
    throw ValidationError("integrate: initial field size does not match graph");
  if (t_eval.empty() || !(t_eval.front() >= 0.0))
    throw ValidationError("integrate: t_eval must be nonempty with t_eval[0] >= 0");
  for (std::size_t i = 1; i < t_eval.size(); ++i)
    if (!(t_eval[i] > t_eval[i - 1]))
      throw ValidationError("integrate: t_eval must be strictly increasing");

  // Dormand-Prince coefficients; the system is autonomous so the nodes c_i
  // are not needed.
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  // b - b* (fifth minus fourth order weights).
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  const std::size_t n = g.size();
  const double t_end = t_eval.back();
  const double h_min = 1e-14 * std::max(t_end, 1e-300);
  const double mm = m.value();

  std::vector<double> y = u0.vector();
  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), ynew(n);
  detail::rhs_into(g, mm, y, k1);

  std::vector<Trajectory::Knot> knots{{0.0, y, k1}};
  std::vector<double> times;
  std::vector<PositiveField> states;
  std::size_t next = 0;
  auto report_if_due = [&](double t) {
    while (next < t_eval.size() && t_eval[next] <= t) {
      times.push_back(t_eval[next]);
      states.emplace_back(y);
      ++next;
    }
  };
  report_if_due(0.0);

  auto positive = [&](std::span<const double> v) {
    for (double x : v)
      if (!(x > cfg.positivity_floor) || !std::isfinite(x))
        return false;
    return true;
  };
  auto stage = [&](std::initializer_list<std::pair<double, const std::vector<double>*>> terms,
                   double h, std::vector<double>& out) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (const auto& [a, k] : terms)
        s += a * (*k)[i];
      tmp[i] = y[i] + h * s;
    }
    if (!positive(tmp))
      return false;
    detail::rhs_into(g, mm, tmp, out);
    return true;
  };

  double t = 0.0;
  double h = std::min(cfg.initial_step, cfg.max_step);
  while (next < t_eval.size()) {
    const double target = t_eval[next];
    bool clipped = false;
    double step = std::min(h, cfg.max_step);
    // Stretch by up to 1% rather than leave a sliver before the report time.
    if (t + 1.01 * step >= target) {
      step = target - t;
      clipped = true;
    }
    if (step < h_min) {
      std::ostringstream msg;
      msg << "integrate: step size " << step << " below " << h_min << " at t = " << t;
      throw StiffnessError(msg.str(), t);
    }

    bool ok = stage({{a21, &k1}}, step, k2) && stage({{a31, &k1}, {a32, &k2}}, step, k3) &&
              stage({{a41, &k1}, {a42, &k2}, {a43, &k3}}, step, k4) &&
              stage({{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}, step, k5) &&
              stage({{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}, step, k6);
    double err = std::numeric_limits<double>::infinity();
    if (ok) {
      for (std::size_t i = 0; i < n; ++i)
        ynew[i] = y[i] + step * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
      ok = positive(ynew);
    }
    if (ok) {
      detail::rhs_into(g, mm, ynew, k7);
      err = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double e = step * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                 e6 * k6[i] + e7 * k7[i]);
        const double sc = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
        err = std::max(err, std::abs(e) / sc);
      }
    }
    if (!ok) {
      h = step * 0.5;
      continue;
    }
    const double factor =
      err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    if (err > 1.0) {
      h = step * factor;
      continue;
    }
    t = clipped ? target : t + step;
    y.swap(ynew);
    k1.swap(k7);
    knots.push_back({t, y, k1});
    report_if_due(t);
    // A clipped step says nothing about the admissible size; keep the old h.
    h = clipped ? std::max(h, step * factor) : step * factor;
  }
  return Trajectory(g, m, std::move(times), std::move(states), std::move(knots));
}

/// Closed-form solution on the two-point graph with m = 2.
inline std::pair<double, double> exact_two_point(double a1, double a2, double t)
{
  if (!(a1 > 0.0) || !(a2 > 0.0) || !std::isfinite(a1) || !std::isfinite(a2))
    throw ValidationError("exact_two_point: a1 and a2 must be positive");
  const double lambda = a1 + a2;
  const double decay = std::exp(-2.0 * lambda * t);
  return {(a1 - a2) / 2.0 * decay + lambda / 2.0, (a2 - a1) / 2.0 * decay + lambda / 2.0};
}

/// Density of a measure with respect to counting measure.
class Measure
{
public:
  explicit Measure(std::vector<double> pi) : pi_(std::move(pi))
  {
    for (double p : pi_)
      if (!std::isfinite(p) || !(p > 0.0))
        throw ValidationError("measure: densities must be finite and > 0");
  }

  static Measure counting(std::size_t n) { return Measure(std::vector<double>(n, 1.0)); }

  std::size_t size() const noexcept { return pi_.size(); }
  double operator[](std::size_t i) const { return pi_[i]; }

  /// Throws unless k(x, y) pi(x) = k(y, x) pi(y) for all pairs.
  void require_reversible(const Graph& g, double rel_tol = 1e-12) const
  {
    if (pi_.size() != g.size())
      throw ValidationError("measure: size does not match graph");
    for (Vertex x = 0; x < g.size(); ++x) {
      for (const auto& [y, k] : g.neighbors(x)) {
        const double lhs = k * pi_[x];
        const double rhs = g.kernel(y, x) * pi_[y];
        if (std::abs(lhs - rhs) > rel_tol * std::max(lhs, rhs))
          throw ValidationError("measure: detailed balance fails between '" + g.id(x) +
                                "' and '" + g.id(y) + "'");
      }
    }
  }

private:
  std::vector<double> pi_;
};

/// Renyi entropy sum_x u(x)^m pi(x) / (m (m - 1)).
inline double renyi_entropy(const Graph& g, Exponent m, const PositiveField& u, const Measure& mu)
{
  mu.require_reversible(g);
  if (u.size() != g.size())
    throw ValidationError("renyi_entropy: field size does not match graph");
  double s = 0.0;
  for (Vertex x = 0; x < g.size(); ++x)
    s += std::pow(u[x], m.value()) * mu[x];
  return s / (m.value() * (m.value() - 1.0));
}

/// Entropy dissipation -(1/m) sum_x u(x) Psi~(v)(x) pi(x), v = pressure(u).
inline double entropy_dissipation(const Graph& g, Exponent m, const PositiveField& u,
                                  const Measure& mu)
{
  const PositiveField v = pressure(m, u);
  double s = 0.0;
  for (Vertex x = 0; x < g.size(); ++x)
    s += u[x] * tilde_psi(g, m, v, x) * mu[x];
  return -s / m.value();
}

/// Max over interior report times of |centered difference of the entropy -
/// entropy_dissipation|. On uniform grids with at least five points the
/// fourth-order five-point stencil is used at the times where it fits;
/// otherwise the three-point difference at every interior time.
inline double entropy_dissipation_residual(const Trajectory& traj, const Measure& mu)
{
  if (traj.size() < 3)
    throw ValidationError("entropy_dissipation_residual: need at least 3 time points");
  const Graph& g = traj.graph();
  mu.require_reversible(g);
  const auto& ts = traj.times();
  const std::size_t n = ts.size();
  std::vector<double> e(n);
  for (std::size_t i = 0; i < n; ++i)
    e[i] = renyi_entropy(g, traj.m(), traj.states()[i], mu);

  const double h = (ts.back() - ts.front()) / static_cast<double>(n - 1);
  bool uniform = n >= 5;
  for (std::size_t i = 1; i < n && uniform; ++i)
    uniform = std::abs(ts[i] - ts[i - 1] - h) <= 1e-9 * h;

  double worst = 0.0;
  const std::size_t margin = uniform ? 2 : 1;
  for (std::size_t i = margin; i + margin < n; ++i) {
    const double fd = uniform
      ? (e[i - 2] - 8.0 * e[i - 1] + 8.0 * e[i + 1] - e[i + 2]) / (12.0 * h)
      : (e[i + 1] - e[i - 1]) / (ts[i + 1] - ts[i - 1]);
    worst = std::max(worst, std::abs(fd - entropy_dissipation(g, traj.m(), traj.states()[i], mu)));
  }
  return worst;
}

/// Exact time derivative of the pressure along a solution:
/// dv/dt = m u^(m-2) L(u^m).
inline std::vector<double> pressure_time_derivative(const Graph& g, Exponent m,
                                                    const PositiveField& u)
{
  std::vector<double> du = rhs(g, m, u);
  for (Vertex x = 0; x < g.size(); ++x)
    du[x] *= m.value() * std::pow(u[x], m.value() - 2.0);
  return du;
}

/// Max over report times and vertices of |dv/dt - (m-1) v Lv - Psi~(v)|,
/// with dv/dt taken from pressure_time_derivative.
inline double pressure_equation_residual(const Trajectory& traj)
{
  if (traj.size() < 3)
    throw ValidationError("pressure_equation_residual: need at least 3 time points");
  const Graph& g = traj.graph();
  const Exponent m = traj.m();
  double worst = 0.0;
  for (const auto& u : traj.states()) {
    const PositiveField v = pressure(m, u);
    const auto dv = pressure_time_derivative(g, m, u);
    for (Vertex x = 0; x < g.size(); ++x) {
      const double r = (m.value() - 1.0) * v[x] * laplacian(g, v.values(), x) + tilde_psi(g, m, v, x);
      worst = std::max(worst, std::abs(dv[x] - r));
    }
  }
  return worst;
}

} // namespace pmelab
