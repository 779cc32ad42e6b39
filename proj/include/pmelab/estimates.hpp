#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "pmelab/errors.hpp"
#include "pmelab/field.hpp"
#include "pmelab/graph.hpp"
#include "pmelab/operators.hpp"
#include "pmelab/solver.hpp"

namespace pmelab {

enum class EstimateKind { ab, diff_harnack, harnack_path, harnack_distance };

inline const char* to_string(EstimateKind k)
{
  switch (k) {
  case EstimateKind::ab: return "ab";
  case EstimateKind::diff_harnack: return "diff_harnack";
  case EstimateKind::harnack_path: return "harnack_path";
  case EstimateKind::harnack_distance: return "harnack_distance";
  }
  return "?";
}

/// One evaluated inequality. Single-time checks use t2 = t1 and x2 = x1.
struct SlackPoint
{
  double t1 = 0.0;
  double t2 = 0.0;
  Vertex x1 = 0;
  Vertex x2 = 0;
  double slack = 0.0;
};

struct EstimateReport
{
  EstimateKind kind = EstimateKind::ab;
  double m = 2.0;
  double alpha_or_lambda = 0.0;
  double d_or_mu = 0.0;
  double tolerance = 1e-8;
  double min_slack = std::numeric_limits<double>::infinity();
  SlackPoint argmin;
  std::size_t points_checked = 0;
  std::vector<SlackPoint> points;
  // Harnack only: the best path correction never exceeded the distance one.
  bool path_le_distance = true;

  bool holds() const noexcept { return min_slack >= -tolerance; }

  void add(const SlackPoint& p)
  {
    ++points_checked;
    if (p.slack < min_slack) {
      min_slack = p.slack;
      argmin = p;
    }
    points.push_back(p);
  }
};

namespace detail {

/// Report grid plus nine dense-output samples in each of the first
/// `refined_intervals` report intervals, where d/t is largest.
inline std::vector<std::pair<double, PositiveField>> check_points(const Trajectory& traj,
                                                                  std::size_t refined_intervals = 1)
{
  std::vector<std::pair<double, PositiveField>> pts;
  const auto& ts = traj.times();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    pts.emplace_back(ts[i], traj.states()[i]);
    if (i + 1 < ts.size() && i < refined_intervals) {
      for (int k = 1; k < 10; ++k) {
        const double t = ts[i] + k * (ts[i + 1] - ts[i]) / 10.0;
        pts.emplace_back(t, traj.at(t));
      }
    }
  }
  return pts;
}

inline void require_positive_times(const Trajectory& traj, const char* op)
{
  if (!(traj.times().front() > 0.0))
    throw ValidationError(std::string(op) + ": trajectory times must all be > 0");
}

inline void require_harnack_lambda(double lambda, const char* op)
{
  if (lambda == 1.0)
    throw DegenerateHarnackError(std::string(op) +
                                 ": lambda = 1 gives no Harnack inequality; need lambda < 1");
  if (!(lambda >= 0.0 && lambda < 1.0))
    throw ValidationError(std::string(op) + ": lambda must lie in [0, 1)");
}

inline void require_times(double t1, double t2, const char* op)
{
  if (!(t1 > 0.0) || !(t1 < t2) || !std::isfinite(t2))
    throw ValidationError(std::string(op) + ": need 0 < t1 < t2");
}

} // namespace detail

/// Aronson-Benilan check: slack = d/t + G(t, x) at every check point, and
/// the equivalent form d/t - ((1-alpha) Psi~(v) - dv/dt) / ((m-1) v) with the
/// exact derivative; the report holds the smaller of the two.
inline EstimateReport ab_check(const Trajectory& traj, MixingParameter alpha, double d,
                               double tol = 1e-8)
{
  detail::require_positive_times(traj, "ab_check");
  if (!(d > 0.0))
    throw ValidationError("ab_check: d must be > 0");
  const Graph& g = traj.graph();
  const Exponent m = traj.m();
  EstimateReport rep;
  rep.kind = EstimateKind::ab;
  rep.m = m;
  rep.alpha_or_lambda = alpha;
  rep.d_or_mu = d;
  rep.tolerance = tol;
  for (const auto& [t, u] : detail::check_points(traj)) {
    const PositiveField v = pressure(m, u);
    const auto dv = pressure_time_derivative(g, m, u);
    for (Vertex x = 0; x < g.size(); ++x) {
      const double s1 = d / t + g_quantity(g, m, alpha, u, x);
      const double tp = tilde_psi(g, m, v, x);
      const double s2 =
        d / t - ((1.0 - alpha.value()) * tp - dv[x]) / ((m.value() - 1.0) * v[x]);
      rep.add({t, t, x, x, std::min(s1, s2)});
    }
  }
  return rep;
}

/// sup over check points of t (-Lv(t, x)); the two-point graph has the exact
/// value (a1 - a2)/((a1 + a2) e).
inline double ab_sharpness(const Trajectory& traj, Vertex x)
{
  const Graph& g = traj.graph();
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& [t, u] : detail::check_points(traj)) {
    const PositiveField v = pressure(traj.m(), u);
    best = std::max(best, -t * laplacian(g, v.values(), x));
  }
  return best;
}

/// Differential Harnack hypothesis: slack = dv/dt - (1-lambda) Psi~(v) + (mu/t) v.
inline EstimateReport diff_harnack_residual(const Trajectory& traj, double lambda, double mu,
                                            double tol = 1e-8)
{
  detail::require_positive_times(traj, "diff_harnack_residual");
  detail::require_harnack_lambda(lambda, "diff_harnack_residual");
  if (!(mu > 0.0))
    throw ValidationError("diff_harnack_residual: mu must be > 0");
  const Graph& g = traj.graph();
  const Exponent m = traj.m();
  EstimateReport rep;
  rep.kind = EstimateKind::diff_harnack;
  rep.m = m;
  rep.alpha_or_lambda = lambda;
  rep.d_or_mu = mu;
  rep.tolerance = tol;
  for (const auto& [t, u] : detail::check_points(traj)) {
    const PositiveField v = pressure(m, u);
    const auto dv = pressure_time_derivative(g, m, u);
    for (Vertex x = 0; x < g.size(); ++x) {
      const double s = dv[x] - (1.0 - lambda) * tilde_psi(g, m, v, x) + mu / t * v[x];
      rep.add({t, t, x, x, s});
    }
  }
  return rep;
}

/// Correction term of the path Harnack inequality:
/// 2 N^2 / ((1-lambda)(mu+1)(t2-t1)^2) sum_j (tau_j^(mu+1) - tau_{j-1}^(mu+1)) / k(y_{j-1}, y_j).
inline double harnack_rhs_path(const Graph& g, double mu, double lambda, double t1, double t2,
                               const VertexPath& path)
{
  detail::require_harnack_lambda(lambda, "harnack_rhs_path");
  detail::require_times(t1, t2, "harnack_rhs_path");
  if (!(mu > 0.0))
    throw ValidationError("harnack_rhs_path: mu must be > 0");
  const auto pts = path.points();
  const std::size_t n = path.length();
  const double nn = static_cast<double>(n);
  double sum = 0.0;
  for (std::size_t j = 1; j <= n; ++j) {
    const double k = g.kernel(pts[j - 1], pts[j]);
    if (!(k > 0.0))
      throw ValidationError("harnack_rhs_path: path is not a path of this graph");
    const double a = t1 + static_cast<double>(j - 1) * (t2 - t1) / nn;
    const double b = j == n ? t2 : t1 + static_cast<double>(j) * (t2 - t1) / nn;
    sum += (std::pow(b, mu + 1) - std::pow(a, mu + 1)) / k;
  }
  return 2.0 * nn * nn / ((1.0 - lambda) * (mu + 1) * (t2 - t1) * (t2 - t1)) * sum;
}

/// Correction term of the distance Harnack inequality:
/// 2 d(x1,x2)^2 (t2^(mu+1) - t1^(mu+1)) / ((1-lambda)(mu+1) k_min (t2-t1)^2).
inline double harnack_rhs_distance(const Graph& g, double mu, double lambda, double t1, double t2,
                                   Vertex x1, Vertex x2)
{
  detail::require_harnack_lambda(lambda, "harnack_rhs_distance");
  detail::require_times(t1, t2, "harnack_rhs_distance");
  if (!(mu > 0.0))
    throw ValidationError("harnack_rhs_distance: mu must be > 0");
  const double dist = graph_distance(g, x1, x2);
  return 2.0 * dist * dist * (std::pow(t2, mu + 1) - std::pow(t1, mu + 1)) /
         ((1.0 - lambda) * (mu + 1) * k_min(g) * (t2 - t1) * (t2 - t1));
}

struct HarnackPair
{
  double t1;
  double t2;
  Vertex x1;
  Vertex x2;
};

/// Seeded tuples with t_lo <= t1 < t2 <= t_hi and uniformly drawn vertices.
inline std::vector<HarnackPair> random_harnack_pairs(const Graph& g, double t_lo, double t_hi,
                                                     std::size_t count, std::uint64_t seed)
{
  if (!(t_lo > 0.0) || !(t_lo < t_hi))
    throw ValidationError("random_harnack_pairs: need 0 < t_lo < t_hi");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ut(t_lo, t_hi);
  std::uniform_int_distribution<std::size_t> uv(0, g.size() - 1);
  std::vector<HarnackPair> out;
  while (out.size() < count) {
    double a = ut(rng), b = ut(rng);
    if (a == b)
      continue;
    if (a > b)
      std::swap(a, b);
    out.push_back({a, b, uv(rng), uv(rng)});
  }
  return out;
}

/// Harnack inequality along a trajectory. For each tuple the distance form
/// and the path form (minimized over simple paths with at most d(x1,x2) + 2
/// edges) are evaluated; the report holds the smaller slack of the two.
inline EstimateReport harnack_check(const Trajectory& traj, double mu, double lambda,
                                    const std::vector<HarnackPair>& pairs, double tol = 1e-8)
{
  detail::require_harnack_lambda(lambda, "harnack_check");
  const Graph& g = traj.graph();
  if (!g.symmetric() || !is_connected(g))
    throw ValidationError("harnack_check: graph must be symmetric and connected");
  const double lo = traj.times().front();
  const double hi = traj.times().back();
  const Exponent m = traj.m();
  EstimateReport rep;
  rep.kind = EstimateKind::harnack_path;
  rep.m = m;
  rep.alpha_or_lambda = lambda;
  rep.d_or_mu = mu;
  rep.tolerance = tol;
  for (const auto& p : pairs) {
    detail::require_times(p.t1, p.t2, "harnack_check");
    if (p.t1 < lo || p.t2 > hi)
      throw ValidationError("harnack_check: tuple times outside the trajectory range");
    const double v1 = pressure_value(m, traj.at(p.t1)[p.x1]);
    const double v2 = pressure_value(m, traj.at(p.t2)[p.x2]);
    const double base = std::pow(p.t2, mu) * v2 - std::pow(p.t1, mu) * v1;
    const double dist_rhs = harnack_rhs_distance(g, mu, lambda, p.t1, p.t2, p.x1, p.x2);
    double slack = base + dist_rhs;
    if (p.x1 != p.x2) {
      const auto cap = static_cast<std::size_t>(graph_distance(g, p.x1, p.x2)) + 2;
      double best_path = std::numeric_limits<double>::infinity();
      for (const auto& path : simple_paths(g, p.x1, p.x2, cap))
        best_path = std::min(best_path, harnack_rhs_path(g, mu, lambda, p.t1, p.t2, path));
      if (best_path > dist_rhs * (1 + 1e-12))
        rep.path_le_distance = false;
      slack = std::min(slack, base + best_path);
    }
    rep.add({p.t1, p.t2, p.x1, p.x2, slack});
  }
  return rep;
}

struct Lemma61Result
{
  double min_slack = std::numeric_limits<double>::infinity();
  double argmin = 1.0;
  std::vector<std::pair<double, double>> ratio_probes;   // (x, tilde Upsilon(log x)/(x-1)^2)
};

/// min over the grid of tilde Upsilon(log x) - (x-1)^2/2. Grid points must
/// lie in [1, inf) for m <= 2 and in (0, 1] for m >= 2.
inline Lemma61Result lemma61_check(Exponent m, const std::vector<double>& grid)
{
  const double mm = m.value();
  Lemma61Result r;
  for (double x : grid) {
    const bool ok = mm == 2.0 ? x > 0.0 : (mm < 2.0 ? x >= 1.0 : (x > 0.0 && x <= 1.0));
    if (!ok || !std::isfinite(x))
      throw ValidationError("lemma61_check: grid point " + std::to_string(x) +
                            " outside the regime for m = " + std::to_string(mm));
    const double s = tilde_upsilon(m, std::log(x)) - 0.5 * (x - 1) * (x - 1);
    if (s < r.min_slack) {
      r.min_slack = s;
      r.argmin = x;
    }
  }
  for (int k = 2; k <= 6; ++k) {
    const double h = std::pow(10.0, -k);
    for (double x : {1.0 - h, 1.0 + h})
      r.ratio_probes.emplace_back(x, tilde_upsilon(m, std::log(x)) / ((x - 1) * (x - 1)));
  }
  return r;
}

struct Lemma63Result
{
  double lhs_upper = 0.0;   // min_s (psi(s) - 1/c int_s^t2 tau^-nu psi^2)
  double lhs_lower = 0.0;   // min_s (psi(s) - 1/c int_t1^s tau^-nu psi^2)
  double rhs = 0.0;
  bool passed = false;
};

/// Both min-inequalities for psi sampled on a uniform grid of [t1, t2];
/// integrals by the composite trapezoid rule, slack >= -1e-6 accepted.
inline Lemma63Result lemma63_check(double t1, double t2, double c, double nu,
                                   const std::vector<double>& psi)
{
  detail::require_times(t1, t2, "lemma63_check");
  if (!(c > 0.0) || !(nu > 0.0))
    throw ValidationError("lemma63_check: c and nu must be > 0");
  if (psi.size() < 100)
    throw ValidationError("lemma63_check: need at least 100 samples of psi");
  const std::size_t n = psi.size();
  const double h = (t2 - t1) / static_cast<double>(n - 1);
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double tau = i + 1 == n ? t2 : t1 + static_cast<double>(i) * h;
    f[i] = std::pow(tau, -nu) * psi[i] * psi[i];
  }
  std::vector<double> from_left(n, 0.0);
  for (std::size_t i = 1; i < n; ++i)
    from_left[i] = from_left[i - 1] + 0.5 * h * (f[i - 1] + f[i]);
  const double total = from_left.back();
  Lemma63Result r;
  r.lhs_upper = std::numeric_limits<double>::infinity();
  r.lhs_lower = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    r.lhs_upper = std::min(r.lhs_upper, psi[i] - (total - from_left[i]) / c);
    r.lhs_lower = std::min(r.lhs_lower, psi[i] - from_left[i] / c);
  }
  r.rhs = c / (nu + 1) * (std::pow(t2, nu + 1) - std::pow(t1, nu + 1)) / ((t2 - t1) * (t2 - t1));
  r.passed = r.rhs - r.lhs_upper >= -1e-6 && r.rhs - r.lhs_lower >= -1e-6;
  return r;
}

/// t1^mu v1 - t2^mu v2 with mu = (m-1) d and v = pressure(u).
inline double harnack_lhs(Exponent m, double d, double t1, double t2, double u1, double u2)
{
  const double mu = (m.value() - 1) * d;
  return std::pow(t1, mu) * pressure_value(m, u1) - std::pow(t2, mu) * pressure_value(m, u2);
}

/// m -> 1 limit of harnack_lhs: d log(t1/t2) + log(u1/u2).
inline double harnack_lhs_limit(double d, double t1, double t2, double u1, double u2)
{
  return d * std::log(t1 / t2) + std::log(u1 / u2);
}

/// m -> 1 limit of tilde_psi(pressure(u))(x): sum_y k(x,y) Upsilon(log u(y) - log u(x)).
inline double tilde_psi_heat_limit(const Graph& g, const PositiveField& u, Vertex x)
{
  std::vector<double> logs(u.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    logs[i] = std::log(u[i]);
  return psi(g, upsilon, logs, x);
}

} // namespace pmelab
