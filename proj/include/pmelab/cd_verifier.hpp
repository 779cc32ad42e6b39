#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "pmelab/errors.hpp"
#include "pmelab/field.hpp"
#include "pmelab/graph.hpp"
#include "pmelab/operators.hpp"

namespace pmelab {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Budget and box of the violation search in verify_cd_at.
struct SearchConfig
{
  std::size_t samples = 20000;
  std::size_t refine = 200;   // simplex iterations per restart
  std::size_t restarts = 8;   // best samples handed to the simplex
  std::uint64_t seed = 0;
  double hi = 4.0;            // upper box bound, relative to u(x) = 1
  double floor = 1e-6;        // lower box bound when zeros are not allowed
  double delta = 1e-12;       // strictness margin for -G(x) > delta
  double rel_tol = 1e-6;      // violation needs ratio > d (1 + rel_tol)
  unsigned jobs = 1;

  void validate() const
  {
    if (samples == 0)
      throw ValidationError("search: sample budget must be positive");
    if (!(hi > 1.0) || !(floor > 0.0 && floor < 1.0) || !(delta >= 0.0) || !(rel_tol >= 0.0))
      throw ValidationError("search: need hi > 1, floor in (0, 1), delta >= 0, rel_tol >= 0");
  }
};

/// A field together with the base vertex at which it was tested.
struct AdmissibleConfig
{
  Vertex base_vertex = 0;
  std::vector<double> field;   // full field on the graph
  bool zeros_allowed = false;
  double m = 2.0;
  double alpha = 0.0;
  double delta = 0.0;

  FieldView view() const { return FieldView::unchecked(field, zeros_allowed); }
};

struct AdmissibilityResult
{
  bool admissible = false;
  double minus_g = 0.0;                                   // -G(x)
  std::vector<std::pair<Vertex, double>> neighbor_minus_g; // -G(y) for k(x, y) > 0
  std::string reason;

  explicit operator bool() const noexcept { return admissible; }
};

enum class Verdict { holds_empirically, violated, inconclusive };

inline const char* to_string(Verdict v)
{
  switch (v) {
  case Verdict::holds_empirically: return "holds_empirically";
  case Verdict::violated: return "violated";
  case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

struct CDReport
{
  Vertex vertex = 0;
  double m = 2.0;
  double alpha = 0.0;
  std::optional<double> d_tested;
  Verdict verdict = Verdict::inconclusive;
  std::optional<AdmissibleConfig> witness;
  double empirical_optimal_d = 0.0;   // +inf when D <= 0 was reached
  std::size_t samples_used = 0;
  std::uint64_t seed = 0;
  double lower_bound = 0.0;           // lower box bound actually used
  std::size_t admissible_samples = 0;
};

namespace detail {

/// -G at x and its neighbors plus the tie tolerance of the comparison.
struct MaxPropEval
{
  Estimate gx;
  std::vector<std::pair<Vertex, Estimate>> gy;
};

inline MaxPropEval eval_max_prop(const Graph& g, double m, double alpha, std::span<const double> u,
                                 Vertex x)
{
  MaxPropEval e;
  e.gx = g_quantity_estimate(g, m, alpha, u, x);
  for (const auto& n : g.neighbors(x))
    e.gy.emplace_back(n.vertex, g_quantity_estimate(g, m, alpha, u, n.vertex));
  return e;
}

/// Ties -G(x) = -G(y) are decided up to the rounding noise of both sides.
inline bool max_prop_holds(const MaxPropEval& e, double delta, std::string* reason = nullptr)
{
  const double mgx = -e.gx.value;
  if (!(mgx > delta)) {
    if (reason)
      *reason = "-G(x) = " + std::to_string(mgx) + " is not > " + std::to_string(delta);
    return false;
  }
  for (const auto& [y, gy] : e.gy) {
    const double tie = e.gx.noise() + gy.noise();
    if (!(mgx >= -gy.value - tie)) {
      if (reason)
        *reason = "-G(x) < -G(y) at neighbor " + std::to_string(y);
      return false;
    }
  }
  return true;
}

/// Certified-lower-bound ratio (-G - noise)^2 / (D + noise); +inf when the
/// denominator is nonpositive even after noise.
inline double conservative_ratio(const Estimate& gx, const Estimate& dx)
{
  const double num = std::max(0.0, -gx.value - gx.noise());
  const double den = dx.value + dx.noise();
  if (den <= 0.0)
    return kInfinity;
  return num * num / den;
}

inline void check_alpha_positive_base(double alpha, FieldView u, Vertex x, const char* op)
{
  if (alpha > 0.0 && !(u[x] > 0.0))
    throw DomainError(std::string(op) + ": u(x) must be positive when alpha > 0");
}

/// First primes, used as Halton bases.
inline unsigned prime(std::size_t i)
{
  static const std::vector<unsigned> primes = [] {
    std::vector<unsigned> p;
    for (unsigned c = 2; p.size() < 256; ++c) {
      bool is = true;
      for (unsigned q : p) {
        if (q * q > c)
          break;
        if (c % q == 0) {
          is = false;
          break;
        }
      }
      if (is)
        p.push_back(c);
    }
    return p;
  }();
  if (i >= primes.size())
    throw ValidationError("search: too many dimensions for the Halton sequence");
  return primes[i];
}

inline double radical_inverse(std::uint64_t index, unsigned base)
{
  double f = 1.0;
  double r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

/// Evaluation of one candidate point of the normalized search box.
class CDObjective
{
public:
  CDObjective(const Graph& g, double m, double alpha, Vertex x, double delta)
    : g_(g), m_(m), alpha_(alpha), x_(x), delta_(delta), ball_(two_hop_ball(g, x))
  {
    others_.reserve(ball_.size());
    for (Vertex v : ball_)
      if (v != x)
        others_.push_back(v);
  }

  std::size_t dims() const noexcept { return others_.size(); }
  const std::vector<Vertex>& coordinates() const noexcept { return others_; }

  std::vector<double> field(std::span<const double> c) const
  {
    std::vector<double> u(g_.size(), 1.0);
    for (std::size_t i = 0; i < others_.size(); ++i)
      u[others_[i]] = c[i];
    return u;
  }

  /// Conservative ratio at the point, or nullopt when inadmissible.
  std::optional<double> score(std::span<const double> c) const
  {
    const std::vector<double> u = field(c);
    const MaxPropEval mp = eval_max_prop(g_, m_, alpha_, u, x_);
    if (!(-mp.gx.value - mp.gx.noise() > delta_))
      return std::nullopt;
    if (!max_prop_holds(mp, delta_))
      return std::nullopt;
    const Estimate dx = d_m_alpha_estimate(g_, m_, alpha_, u, x_);
    const double r = conservative_ratio(mp.gx, dx);
    if (std::isnan(r))
      return std::nullopt;
    return r;
  }

private:
  const Graph& g_;
  double m_;
  double alpha_;
  Vertex x_;
  double delta_;
  std::vector<Vertex> ball_;
  std::vector<Vertex> others_;
};

struct SearchOutcome
{
  double best = -kInfinity;
  std::vector<double> best_point;
  std::size_t evaluated = 0;
  std::size_t admissible = 0;
  double lo = 0.0;
};

/// Nelder-Mead on -score over the box, inadmissible points scored +inf.
inline void simplex_refine(const CDObjective& obj, std::vector<double> start, double lo, double hi,
                           std::size_t iterations, SearchOutcome& out)
{
  const std::size_t n = start.size();
  if (n == 0 || iterations == 0)
    return;
  auto clamp_point = [&](std::vector<double>& p) {
    for (double& v : p)
      v = std::clamp(v, lo, hi);
  };
  auto f = [&](std::vector<double>& p) {
    clamp_point(p);
    ++out.evaluated;
    const auto s = obj.score(p);
    if (!s)
      return kInfinity;
    if (*s > out.best) {
      out.best = *s;
      out.best_point = p;
    }
    return -*s;
  };

  std::vector<std::vector<double>> simplex(n + 1, start);
  for (std::size_t i = 0; i < n; ++i) {
    const double step = 0.05 * (hi - lo);
    simplex[i + 1][i] += (start[i] + step <= hi) ? step : -step;
  }
  std::vector<double> fv(n + 1);
  for (std::size_t i = 0; i <= n; ++i)
    fv[i] = f(simplex[i]);

  std::vector<std::size_t> order(n + 1);
  for (std::size_t it = 0; it < iterations; ++it) {
    if (out.best == kInfinity)
      return;
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return fv[a] < fv[b]; });
    const std::size_t worst = order[n];
    const std::size_t second = order[n - 1];
    const std::size_t bestv = order[0];

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i <= n; ++i)
      if (i != worst)
        for (std::size_t j = 0; j < n; ++j)
          centroid[j] += simplex[i][j] / static_cast<double>(n);
    auto along = [&](double t) {
      std::vector<double> p(n);
      for (std::size_t j = 0; j < n; ++j)
        p[j] = centroid[j] + t * (simplex[worst][j] - centroid[j]);
      return p;
    };

    std::vector<double> xr = along(-1.0);
    const double fr = f(xr);
    if (fr < fv[bestv]) {
      std::vector<double> xe = along(-2.0);
      const double fe = f(xe);
      if (fe < fr) {
        simplex[worst] = xe;
        fv[worst] = fe;
      } else {
        simplex[worst] = xr;
        fv[worst] = fr;
      }
      continue;
    }
    if (fr < fv[second]) {
      simplex[worst] = xr;
      fv[worst] = fr;
      continue;
    }
    std::vector<double> xc = fr < fv[worst] ? along(-0.5) : along(0.5);
    const double fc = f(xc);
    if (fc < std::min(fr, fv[worst])) {
      simplex[worst] = xc;
      fv[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == bestv)
        continue;
      for (std::size_t j = 0; j < n; ++j)
        simplex[i][j] = simplex[bestv][j] + 0.5 * (simplex[i][j] - simplex[bestv][j]);
      fv[i] = f(simplex[i]);
    }
  }
}

/// Seeded quasi-random search for the supremum of the conservative ratio over
/// admissible fields normalized to u(x) = 1.
inline SearchOutcome search_sup_ratio(const Graph& g, double m, double alpha, Vertex x,
                                      const SearchConfig& cfg)
{
  cfg.validate();
  const bool zeros = m >= 2.0 && alpha == 0.0;
  const double lo = zeros ? 0.0 : cfg.floor;
  const double hi = cfg.hi;
  const CDObjective obj(g, m, alpha, x, cfg.delta);
  const std::size_t dims = obj.dims();

  SearchOutcome out;
  out.lo = lo;
  auto consider = [&](const std::vector<double>& p, double s) {
    if (s > out.best) {
      out.best = s;
      out.best_point = p;
    }
  };

  // Cranley-Patterson shift of the Halton sequence.
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> shift(dims);
  for (double& s : shift)
    s = unit(rng);

  // Half of each coordinate's mass lies below the base value u(x) = 1,
  // which is where maxima of -G at x live.
  auto point = [&](std::size_t i) {
    std::vector<double> p(dims);
    for (std::size_t j = 0; j < dims; ++j) {
      double s = radical_inverse(i + 1, prime(j)) + shift[j];
      s -= std::floor(s);
      p[j] = s < 0.5 ? lo + (1.0 - lo) * (s / 0.5) : 1.0 + (hi - 1.0) * ((s - 0.5) / 0.5);
    }
    return p;
  };

  std::vector<double> scores(cfg.samples, -kInfinity);
  std::vector<char> admissible(cfg.samples, 0);
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      if (auto s = obj.score(point(i))) {
        scores[i] = *s;
        admissible[i] = 1;
      }
    }
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(cfg.jobs, 64));
  if (jobs == 1 || cfg.samples < 256) {
    work(0, cfg.samples);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (cfg.samples + jobs - 1) / jobs;
    for (unsigned w = 0; w < jobs; ++w) {
      const std::size_t b = w * chunk;
      const std::size_t e = std::min(cfg.samples, b + chunk);
      if (b < e)
        pool.emplace_back(work, b, e);
    }
    for (auto& t : pool)
      t.join();
  }
  out.evaluated = cfg.samples;

  // Reduction in index order keeps the result independent of the job count.
  std::vector<std::size_t> ranked;
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    if (admissible[i]) {
      ++out.admissible;
      ranked.push_back(i);
      consider(point(i), scores[i]);
    }
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [&](auto a, auto b) { return scores[a] > scores[b]; });

  // Boundary probes: the all-lo corner, and the best samples with subsets of
  // their coordinates pushed to lo.
  auto probe = [&](std::vector<double> p) {
    ++out.evaluated;
    if (auto s = obj.score(p)) {
      ++out.admissible;
      consider(p, *s);
    }
  };
  probe(std::vector<double>(dims, lo));
  const std::size_t top = std::min(ranked.size(), cfg.restarts);
  for (std::size_t r = 0; r < top; ++r) {
    const std::vector<double> base = point(ranked[r]);
    if (dims <= 10) {
      for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << dims); ++mask) {
        std::vector<double> p = base;
        for (std::size_t j = 0; j < dims; ++j)
          if (mask >> j & 1u)
            p[j] = lo;
        probe(std::move(p));
      }
    } else {
      for (std::size_t j = 0; j < dims; ++j) {
        std::vector<double> p = base;
        p[j] = lo;
        probe(std::move(p));
      }
    }
  }

  if (out.best < kInfinity) {
    std::vector<std::vector<double>> starts;
    for (std::size_t r = 0; r < top; ++r)
      starts.push_back(point(ranked[r]));
    if (!out.best_point.empty() &&
        std::find(starts.begin(), starts.end(), out.best_point) == starts.end())
      starts.insert(starts.begin(), out.best_point);
    starts.resize(std::min(starts.size(), std::max<std::size_t>(cfg.restarts, 1)));
    for (const auto& s : starts) {
      if (out.best == kInfinity)
        break;
      simplex_refine(obj, s, lo, hi, cfg.refine, out);
    }
  }
  return out;
}

} // namespace detail

/// Checks the maximum property at x: -G(x) > delta and -G(x) >= -G(y) for all
/// neighbors y. Equality is decided up to floating-point rounding of G.
inline AdmissibilityResult is_admissible(const Graph& g, Exponent m, MixingParameter alpha,
                                         FieldView u, Vertex x, double delta = 0.0)
{
  if (!(delta >= 0.0))
    throw ValidationError("is_admissible: delta must be >= 0");
  for (const auto& n : g.neighbors(x))
    detail::require_closed_neighborhood(g, u, n.vertex, m, "is_admissible");
  detail::require_closed_neighborhood(g, u, x, m, "is_admissible");
  detail::check_alpha_positive_base(alpha, u, x, "is_admissible");
  for (const auto& n : g.neighbors(x))
    detail::check_alpha_positive_base(alpha, u, n.vertex, "is_admissible");

  const auto mp = detail::eval_max_prop(g, m, alpha, u.values(), x);
  AdmissibilityResult r;
  r.minus_g = -mp.gx.value;
  for (const auto& [y, e] : mp.gy)
    r.neighbor_minus_g.emplace_back(y, -e.value);
  r.admissible = detail::max_prop_holds(mp, delta, &r.reason);
  return r;
}

/// (-G(x))^2 / D_{m,alpha}(u)(x) for admissible u; +inf when D <= 0. The
/// condition CD_{m,alpha}(0, d) holds for this field iff the ratio is <= d.
inline double cd_ratio(const Graph& g, Exponent m, MixingParameter alpha, FieldView u, Vertex x)
{
  const auto adm = is_admissible(g, m, alpha, u, x, 0.0);
  if (!adm)
    throw PreconditionError("cd_ratio: field is not admissible at the vertex (" + adm.reason + ")");
  detail::require_two_hop(g, u, x, m, "cd_ratio");
  const double dx = detail::d_m_alpha_estimate(g, m, alpha, u.values(), x).value;
  if (dx <= 0.0)
    return kInfinity;
  return adm.minus_g * adm.minus_g / dx;
}

/// Searches for a field violating CD_{m,alpha}(0, d) at x. "holds_empirically"
/// only means that the seeded budget found no violation.
inline CDReport verify_cd_at(const Graph& g, Exponent m, MixingParameter alpha, double d,
                             Vertex x, const SearchConfig& search = {})
{
  if (!(d > 0.0))
    throw ValidationError("verify_cd_at: d must be > 0");
  const auto out = detail::search_sup_ratio(g, m, alpha, x, search);
  CDReport rep;
  rep.vertex = x;
  rep.m = m;
  rep.alpha = alpha;
  rep.d_tested = d;
  rep.samples_used = out.evaluated;
  rep.seed = search.seed;
  rep.lower_bound = out.lo;
  rep.admissible_samples = out.admissible;
  rep.empirical_optimal_d = out.admissible ? out.best : 0.0;
  if (out.admissible == 0) {
    rep.verdict = Verdict::inconclusive;
    return rep;
  }
  if (out.best > d * (1.0 + search.rel_tol)) {
    rep.verdict = Verdict::violated;
    const detail::CDObjective obj(g, m, alpha, x, search.delta);
    rep.witness = AdmissibleConfig{x, obj.field(out.best_point), out.lo == 0.0, m, alpha,
                                   search.delta};
  } else {
    rep.verdict = Verdict::holds_empirically;
  }
  return rep;
}

/// Supremum of cd_ratio over the searched admissible set (+inf if D <= 0 was
/// reached); 0 if nothing admissible was found.
inline double empirical_optimal_d(const Graph& g, Exponent m, MixingParameter alpha, Vertex x,
                                  const SearchConfig& search = {})
{
  const auto out = detail::search_sup_ratio(g, m, alpha, x, search);
  return out.admissible ? out.best : 0.0;
}

/// Closed form f_{nu,m}(z) = nu D_m(u)(x1) - (-Lv(x1))^2 on the complete graph
/// with u(x1) = 1, u(x_{j+1}) = z_j.
inline double complete_graph_f(double nu, Exponent m, std::span<const double> z)
{
  if (z.empty())
    throw ValidationError("complete_graph_f: need at least one z");
  for (double zj : z)
    if (!(zj > 0.0 && zj <= 1.0))
      throw ValidationError("complete_graph_f: z values must lie in (0, 1]");
  const double mm = m.value();
  const double n1 = static_cast<double>(z.size());   // D - 1
  double s_m2 = 0, s_m = 0, s_2m2 = 0, s_m1 = 0, cross = 0;
  for (double zj : z) {
    s_m2 += std::pow(zj, mm - 2);
    s_m += std::pow(zj, mm);
    s_2m2 += std::pow(zj, 2 * mm - 2);
    s_m1 += std::pow(zj, mm - 1);
  }
  for (double zj : z)
    cross += std::pow(zj, mm - 2) * (s_m - std::pow(zj, mm));
  const double dpart = cross + s_m2 - n1 * s_2m2 - n1 * s_m + n1 * n1;
  const double gpart = s_m1 * s_m1 - 2 * n1 * s_m1 + n1 * n1;
  return nu * mm * dpart - mm * mm / ((mm - 1) * (mm - 1)) * gpart;
}

struct ChainCounterexample
{
  Graph graph;
  NonnegativeField field;
  Vertex vertex;
  double d_m;        // D_m(u)(vertex)
  double minus_lv;   // -Lv(vertex)
};

/// The explicit chain fields violating CD_m(0, d) for every d. For n = 3, 4
/// the limiting fields with zero entries are used and eps is ignored; for
/// n = 5 the family v_eps = (0, eps, 1, 2 - 2 eps, 3 - 5 eps) in pressure
/// variables is evaluated at the middle vertex.
inline ChainCounterexample chain_counterexample(int n, Exponent m, double eps)
{
  if (n == 3 || n == 4) {
    if (m.value() != 2.0)
      throw ValidationError("chain_counterexample: n = 3, 4 are defined for m = 2 only");
    Graph g = path_graph(n);
    std::vector<double> u = n == 3 ? std::vector<double>{1.5, 1.0, 0.0}
                                   : std::vector<double>{1.5, 1.0, 0.0, 0.0};
    NonnegativeField f(std::move(u));
    const Vertex x = 1;
    const double dm = d_m(g, m, f, x);
    const double lv = -laplacian(g, pressure(m, f).values(), x);
    return {std::move(g), std::move(f), x, dm, lv};
  }
  if (n != 5)
    throw ValidationError("chain_counterexample: n must be 3, 4 or 5");
  if (!(m.value() >= 2.0))
    throw ValidationError("chain_counterexample: n = 5 needs m >= 2");
  if (!(eps > 0.0 && eps <= 0.6))
    throw ValidationError("chain_counterexample: eps must lie in (0, 3/5]");
  Graph g = path_graph(5);
  const NonnegativeField v(std::vector<double>{0.0, eps, 1.0, 2.0 - 2.0 * eps, 3.0 - 5.0 * eps});
  NonnegativeField u = pressure_inverse(m, v);
  const Vertex x = 2;
  const double dm = d_m(g, m, u, x);
  const double lv = -laplacian(g, pressure(m, u).values(), x);
  return {std::move(g), std::move(u), x, dm, lv};
}

/// eps -> 0 limit of D_m(u_eps)(x) on the 5-chain, m > 2, in the final closed
/// form (m-1)^2/m 2^(-1/(m-1)) (2 3^p - 4^p - 2^p + 2 - 2^p), p = m/(m-1).
inline double chain5_limit(Exponent m)
{
  const double mm = m.value();
  const double p = mm / (mm - 1);
  return (mm - 1) * (mm - 1) / mm * std::pow(2.0, -1.0 / (mm - 1)) *
         (2 * std::pow(3.0, p) - std::pow(4.0, p) - std::pow(2.0, p) + 2 - std::pow(2.0, p));
}

/// The same limit in its first, unsimplified form
/// (m-1)^2/m (2^((m-2)/(m-1)) (3^p + 1 - 2 2^p) - 2 (2^p - 2)).
inline double chain5_limit_unsimplified(Exponent m)
{
  const double mm = m.value();
  const double p = mm / (mm - 1);
  return (mm - 1) * (mm - 1) / mm *
         (std::pow(2.0, (mm - 2) / (mm - 1)) * (std::pow(3.0, p) + 1 - 2 * std::pow(2.0, p)) -
          2 * (std::pow(2.0, p) - 2));
}

/// Lattice quantities at the center z in the ratio variables a = v(z+1)/v(z),
/// b = v(z-1)/v(z), sigma = v(z+2)/v(z), nu = v(z-2)/v(z).
struct LatticeTuple
{
  double a, b, sigma, nu;
};

/// D_{m,1}(u)(z) / ((m-1)^2/m^2 v(z)^2) as a polynomial in the ratio variables.
inline double lattice_scaled_d(Exponent m, const LatticeTuple& t)
{
  const double mm = m.value();
  const double p = mm / (mm - 1);
  const double A = std::pow(t.a, p), B = std::pow(t.b, p);
  const double S = std::pow(t.sigma, p), N = std::pow(t.nu, p);
  return -2 * (mm - 1) * (A + B - 2) - A * (A + B - 2) + mm * t.a * (S + 1 - 2 * A) -
         B * (A + B - 2) + mm * t.b * (N + 1 - 2 * B);
}

/// (-G(z))^2 / ((m-1)^2/m^2 v(z)^2) = (2 - a^p - b^p)^2.
inline double lattice_scaled_g2(Exponent m, const LatticeTuple& t)
{
  const double p = m.value() / (m.value() - 1);
  const double s = 2 - std::pow(t.a, p) - std::pow(t.b, p);
  return s * s;
}

/// True iff the tuple satisfies the maximum property at z (constraints
/// (I), (II)', (III)' of the lattice argument). The lower bounds on sigma and
/// nu are accepted up to a relative rounding margin of 1e-12.
inline bool lattice_constraints_hold(Exponent m, const LatticeTuple& t)
{
  const double mm = m.value();
  const double p = mm / (mm - 1);
  const double q = 1.0 / (mm - 1);
  const double A = std::pow(t.a, p), B = std::pow(t.b, p);
  if (!(A + B < 2))
    return false;
  const double ii = 2 * A - 1 - 2 * std::pow(t.a, q) + std::pow(t.a, (mm + 1) / (mm - 1)) +
                    std::pow(t.a, q) * B;
  const double iii = 2 * B - 1 - 2 * std::pow(t.b, q) + std::pow(t.b, (mm + 1) / (mm - 1)) +
                     A * std::pow(t.b, q);
  auto above = [](double value, double bound) {
    return value >= bound - 1e-12 * std::max(1.0, std::abs(bound));
  };
  return above(std::pow(t.sigma, p), ii) && above(std::pow(t.nu, p), iii);
}

/// Draws a tuple from the constraint region: (a^p, b^p) uniform on the open
/// triangle A + B < 2, then sigma^p, nu^p above their lower bounds (exactly on
/// the bound for a quarter of the draws).
template <class Rng>
LatticeTuple random_lattice_tuple(Exponent m, Rng& rng)
{
  const double mm = m.value();
  const double p = mm / (mm - 1);
  const double q = 1.0 / (mm - 1);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  double A, B;
  do {
    A = 2 * u01(rng);
    B = 2 * u01(rng);
  } while (!(A + B < 2) || A <= 0 || B <= 0);
  const double a = std::pow(A, 1 / p), b = std::pow(B, 1 / p);
  const double ii = 2 * A - 1 - 2 * std::pow(a, q) + std::pow(a, (mm + 1) / (mm - 1)) +
                    std::pow(a, q) * B;
  const double iii = 2 * B - 1 - 2 * std::pow(b, q) + std::pow(b, (mm + 1) / (mm - 1)) +
                     A * std::pow(b, q);
  auto above = [&](double bound) {
    const double base = std::max(bound, 0.0);
    const double r = u01(rng);
    double s = r < 0.25 && bound > 0 ? base : base + 3 * u01(rng);
    if (s <= 0)
      s = std::max(1e-300, 3 * u01(rng));
    return std::pow(s, 1 / p);
  };
  return {a, b, above(ii), above(iii)};
}

/// Most negative value of scaled D_{m,1} - (m-1) (scaled -G)^2 over seeded
/// tuples from the constraint region; >= 0 up to rounding if the lattice
/// satisfies CD_{m,1}(0, 1/(m-1)).
inline double z_lattice_cd_check(Exponent m, std::size_t samples, std::uint64_t seed)
{
  if (samples == 0)
    throw ValidationError("z_lattice_cd_check: samples must be >= 1");
  std::mt19937_64 rng(seed);
  double worst = kInfinity;
  for (std::size_t i = 0; i < samples; ++i) {
    const LatticeTuple t = random_lattice_tuple(m, rng);
    const double v = lattice_scaled_d(m, t) - (m.value() - 1) * lattice_scaled_g2(m, t);
    worst = std::min(worst, v);
  }
  return worst;
}

} // namespace pmelab
