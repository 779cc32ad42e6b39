// Acceptance run: one PASS/FAIL line per criterion, details indented below.
// Exits 1 if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "pmelab/pmelab.hpp"

using namespace pmelab;

namespace {

struct Criterion
{
  bool ok = true;
  std::vector<std::string> notes;

  void expect(bool cond, const std::string& what)
  {
    ok = ok && cond;
    notes.push_back(std::string(cond ? "ok   " : "FAIL ") + what);
  }
};

std::string fmt(double x)
{
  return format_double(x);
}

SearchConfig search_config()
{
  SearchConfig s;
  s.seed = 1;
  s.jobs = std::max(1u, std::thread::hardware_concurrency());
  return s;
}

Graph random_graph(std::mt19937_64& rng)
{
  std::uniform_int_distribution<int> nd(3, 7);
  std::uniform_real_distribution<double> wd(0.2, 2.0), coin(0.0, 1.0);
  const int n = nd(rng);
  std::vector<Edge> edges;
  // spanning path keeps every vertex in use, extra chords at random
  for (int i = 1; i < n; ++i)
    edges.push_back({std::to_string(i - 1), std::to_string(i), wd(rng)});
  for (int i = 0; i < n; ++i)
    for (int j = i + 2; j < n; ++j)
      if (coin(rng) < 0.4)
        edges.push_back({std::to_string(i), std::to_string(j), wd(rng)});
  return build_graph(edges, true);
}

PositiveField random_field(std::size_t n, std::mt19937_64& rng, double lo = 0.1, double hi = 2.0)
{
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> u(n);
  for (double& x : u)
    x = d(rng);
  return PositiveField(std::move(u));
}

double rel_err(double a, double b)
{
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

void c1_complete_graphs(Criterion& c)
{
  const SearchConfig s = search_config();
  for (int D : {2, 3, 5, 8}) {
    const double d = empirical_optimal_d(complete_graph(D), Exponent(2), MixingParameter(0), 0, s);
    const double want = 2.0 * (D - 1) / D;
    c.expect(std::abs(d - want) <= 1e-3,
             "m=2 D=" + std::to_string(D) + ": " + fmt(d) + " vs " + fmt(want));
  }
  for (int D : {2, 3, 5}) {
    const double d = empirical_optimal_d(complete_graph(D), Exponent(3), MixingParameter(0), 0, s);
    c.expect(std::abs(d - 0.75) <= 1e-3, "m=3 D=" + std::to_string(D) + ": " + fmt(d) + " vs 0.75");
  }
}

void c2_square(Criterion& c)
{
  const Graph g = square_graph();
  SearchConfig s = search_config();
  s.samples = 20000;
  for (Vertex x = 0; x < g.size(); ++x) {
    const auto r = verify_cd_at(g, Exponent(2), MixingParameter(0), 4.0 / 3.0, x, s);
    c.expect(r.verdict == Verdict::holds_empirically,
             "d=4/3 at " + g.id(x) + ": " + to_string(r.verdict));
  }
  const Vertex x = g.index("x");
  const auto bad = verify_cd_at(g, Exponent(2), MixingParameter(0), 1.32, x, s);
  c.expect(bad.verdict == Verdict::violated, "d=1.32 at x: " + std::string(to_string(bad.verdict)));
  if (bad.witness) {
    const auto& f = bad.witness->field;
    const double far = std::max({f[g.index("y1")], f[g.index("y2")], f[g.index("z")]});
    c.expect(far / f[x] <= 0.05, "witness near u(y1)=u(y2)=u(z)=0: max ratio " + fmt(far / f[x]));
    const auto again = verify_cd_at(g, Exponent(2), MixingParameter(0), 1.32, x, s);
    c.expect(again.witness && again.witness->field == f, "witness reproducible under the same seed");
    const double ratio = cd_ratio(g, Exponent(2), MixingParameter(0), bad.witness->view(), x);
    c.expect(ratio > 1.32, "witness ratio " + fmt(ratio) + " > 1.32");
  } else {
    c.expect(false, "violation carries a witness");
  }
  const double d = empirical_optimal_d(g, Exponent(2), MixingParameter(0), x, s);
  c.expect(std::abs(d - 4.0 / 3.0) <= 1e-3, "empirical optimal d " + fmt(d));
}

void c3_chains(Criterion& c)
{
  for (int n : {3, 4}) {
    const auto ce = chain_counterexample(n, Exponent(2), 0.0);
    c.expect(ce.d_m == -1.5, "n=" + std::to_string(n) + ": D_2 = " + fmt(ce.d_m));
  }
  const auto c5 = chain_counterexample(5, Exponent(2), 1e-3);
  c.expect(c5.d_m >= -1.05 && c5.d_m <= -0.95,
           "n=5, eps=1e-3: D_2 = " + fmt(c5.d_m) + " expected in [-1.05, -0.95]");
  const double lim = chain5_limit(Exponent(3));
  const double first = chain5_limit_unsimplified(Exponent(3));
  c.expect(lim < 0.0, "m=3 limit " + fmt(lim) + " < 0");
  c.expect(std::abs(first - lim) <= 1e-6, "m=3 limit forms agree: " + fmt(first) + " vs " + fmt(lim));
  const auto c5m3 = chain_counterexample(5, Exponent(3), 1e-3);
  c.expect(c5m3.d_m < 0.0, "m=3, eps=1e-3: D_3 = " + fmt(c5m3.d_m) + " < 0");
}

void c4_lattice(Criterion& c)
{
  for (double m : {1.5, 2.0, 3.0}) {
    const double worst = z_lattice_cd_check(Exponent(m), 10000, 1);
    c.expect(worst >= -1e-9, "m=" + fmt(m) + ": max violation " + fmt(worst));
  }
}

void c5_solver(Criterion& c)
{
  const auto ts = linspace(0.0, 5.0, 501);
  for (auto [a1, a2] : {std::pair{1.0, 0.1}, std::pair{2.0, 0.5}, std::pair{1.0, 1e-6}}) {
    const auto traj = integrate(complete_graph(2), Exponent(2), PositiveField{a1, a2}, ts);
    double err = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
      const auto [e1, e2] = exact_two_point(a1, a2, ts[i]);
      err = std::max({err, std::abs(traj.states()[i][0] - e1), std::abs(traj.states()[i][1] - e2)});
    }
    c.expect(err <= 1e-8, "two-point a=(" + fmt(a1) + "," + fmt(a2) + "): max error " + fmt(err));
  }
  std::mt19937_64 rng(1);
  const std::vector<std::pair<std::string, Graph>> graphs = {
    {"complete:2", complete_graph(2)}, {"complete:3", complete_graph(3)},
    {"complete:5", complete_graph(5)}, {"complete:8", complete_graph(8)},
    {"square", square_graph()},        {"path:4", path_graph(4)},
    {"path:5", path_graph(5)},         {"zwindow:2", lattice_window(2)}};
  for (const auto& [name, g] : graphs) {
    for (double m : {1.5, 2.0, 3.0}) {
      const PositiveField u0 = random_field(g.size(), rng);
      const auto traj = integrate(g, Exponent(m), u0, linspace(0.0, 5.0, 51));
      const double m0 = mass(u0.values());
      double drift = 0.0;
      for (const auto& u : traj.states())
        drift = std::max(drift, std::abs(mass(u.values()) - m0) / m0);
      c.expect(drift <= 1e-9, name + " m=" + fmt(m) + ": mass drift " + fmt(drift));
    }
  }
}

void c6_identities(Criterion& c)
{
  const std::vector<std::tuple<std::string, Graph, double>> cases = {
    {"complete:5", complete_graph(5), 2.0}, {"path:4", path_graph(4), 3.0}};
  for (const auto& [name, g, m] : cases) {
    const PositiveField u0 = parse_u0("random:0.1:2", g, 1);
    const auto traj = integrate(g, Exponent(m), u0, linspace(0.1, 2.0, 1901));
    const double pr = pressure_equation_residual(traj);
    const double er = entropy_dissipation_residual(traj, Measure::counting(g.size()));
    c.expect(pr <= 1e-9, name + " m=" + fmt(m) + ": pressure equation residual " + fmt(pr));
    c.expect(er <= 1e-5, name + " m=" + fmt(m) + ": entropy dissipation residual " + fmt(er));
  }
}

Trajectory standard(const Graph& g, double m)
{
  return integrate(g, Exponent(m), parse_u0("random:0.1:2", g, 1), linspace(1e-3, 5.0, 1000));
}

void c7_aronson_benilan(Criterion& c)
{
  auto run = [&](const std::string& name, const Graph& g, double m, double d) {
    const auto rep = ab_check(standard(g, m), MixingParameter(0), d, 1e-8);
    c.expect(rep.min_slack >= -1e-8, name + " m=" + fmt(m) + " d=" + fmt(d) + ": min slack " +
                                       fmt(rep.min_slack));
  };
  run("square", square_graph(), 2.0, 4.0 / 3.0);
  for (int D : {2, 3, 5})
    run("complete:" + std::to_string(D), complete_graph(D), 3.0, 0.75);
  run("complete:2", complete_graph(2), 2.0, 1.0);

  const auto traj =
    integrate(complete_graph(2), Exponent(2), PositiveField{1.0, 1e-6}, linspace(1e-3, 3.0, 3000));
  const double sup = ab_sharpness(traj, 0);
  const double e = std::exp(1.0);
  c.expect(sup >= 0.99 / e && sup <= 1.0 / e,
           "sharpness sup t(-Lv) = " + fmt(sup) + " in [0.99/e, 1/e]");
}

void c8_harnack(Criterion& c)
{
  auto run = [&](const std::string& name, const Graph& g, double m, double mu) {
    const auto pairs = random_harnack_pairs(g, 0.05, 5.0, 100, 1);
    const auto rep = harnack_check(standard(g, m), mu, 0.0, pairs, 1e-8);
    c.expect(rep.min_slack >= -1e-8,
             name + " m=" + fmt(m) + " mu=" + fmt(mu) + ": min slack " + fmt(rep.min_slack));
    c.expect(rep.path_le_distance, name + ": path form <= distance form on every tuple");
  };
  run("square", square_graph(), 2.0, 4.0 / 3.0);
  run("complete:3", complete_graph(3), 2.0, 4.0 / 3.0);
  run("complete:4", complete_graph(4), 3.0, 1.5);
}

void c9_lemmas(Criterion& c)
{
  for (double m : {1.2, 1.5, 2.0, 3.0, 5.0}) {
    const auto grid = m < 2.0 ? linspace(1.0, 10.0, 1000)
                              : (m > 2.0 ? linspace(1e-3, 1.0, 1000) : linspace(1e-3, 10.0, 1000));
    const auto r = lemma61_check(Exponent(m), grid);
    c.expect(r.min_slack >= -1e-12, "convexity gap m=" + fmt(m) + ": min slack " + fmt(r.min_slack));
    if (m == 2.0) {
      double worst = 0.0;
      for (double x : grid)
        worst = std::max(worst, std::abs(tilde_upsilon(Exponent(2), std::log(x)) - 0.5 * (x - 1) * (x - 1)));
      c.expect(worst <= 1e-12, "m=2 slack identically 0: max |slack| " + fmt(worst));
    }
    for (const auto& [x, q] : r.ratio_probes)
      if (std::abs(std::abs(x - 1) - 1e-4) < 1e-9)
        c.expect(std::abs(q - 0.5) <= 1e-3, "m=" + fmt(m) + " ratio at " + fmt(x) + ": " + fmt(q));
  }
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  for (auto [nu, cc] : {std::pair{0.5, 1.0}, std::pair{1.0, 2.0}, std::pair{4.0 / 3.0, 3.0}}) {
    std::size_t failures = 0;
    for (int k = 0; k < 100; ++k) {
      const double a = coef(rng), b = coef(rng), q = coef(rng), d = coef(rng);
      std::vector<double> psi(2001);
      for (std::size_t i = 0; i < psi.size(); ++i) {
        const double t = 0.5 + 1.5 * static_cast<double>(i) / 2000.0;
        psi[i] = a + t * (b + t * (q + t * d));
      }
      if (!lemma63_check(0.5, 2.0, cc, nu, psi).passed)
        ++failures;
    }
    c.expect(failures == 0, "integral inequality (nu, c) = (" + fmt(nu) + ", " + fmt(cc) + "): " +
                              std::to_string(failures) + " of 100 cubics fail");
  }
}

void c10_properties(Criterion& c)
{
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> md(1.2, 4.0), ld(0.1, 10.0), ad(0.0, 1.0);
  double hom = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Graph g = random_graph(rng);
    const Exponent m(md(rng));
    const MixingParameter alpha(ad(rng));
    const double lambda = ld(rng);
    const PositiveField u = random_field(g.size(), rng);
    const PositiveField lu = u.scaled(lambda);
    std::uniform_int_distribution<Vertex> vd(0, g.size() - 1);
    const Vertex x = vd(rng);
    const double s = std::pow(lambda, 2 * m - 2);
    hom = std::max(hom, rel_err(d_m_alpha(g, m, alpha, lu, x), s * d_m_alpha(g, m, alpha, u, x)));
    const double g1 = g_quantity(g, m, alpha, u, x), g2 = g_quantity(g, m, alpha, lu, x);
    hom = std::max(hom, rel_err(g2 * g2, s * g1 * g1));
  }
  c.expect(hom <= 1e-9, "homogeneity of D_{m,alpha} and (-G)^2, 1000 cases: max rel error " + fmt(hom));

  double logsum = 0.0, collapse = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Graph g = random_graph(rng);
    const Exponent m(md(rng));
    const PositiveField w = random_field(g.size(), rng);
    std::uniform_int_distribution<Vertex> vd(0, g.size() - 1);
    const Vertex x = vd(rng);
    logsum = std::max(logsum, rel_err(tilde_psi(g, m, w, x), tilde_psi_log_form(g, m, w, x)));
    collapse = std::max(collapse, rel_err(tilde_psi(g, Exponent(2), w, x), gamma(g, w.values(), x)));
  }
  c.expect(logsum <= 1e-9, "tilde_psi log form vs sum form: max rel error " + fmt(logsum));
  c.expect(collapse <= 1e-12, "m=2 tilde_psi = Gamma: max rel error " + fmt(collapse));

  const Graph g = square_graph();
  const PositiveField u{1.0, 0.4, 1.7, 0.8};
  const double psi_oracle = tilde_psi_heat_limit(g, u, 0);
  std::vector<double> psi_err;
  for (double m : {1.1, 1.01, 1.001})
    psi_err.push_back(std::abs(tilde_psi(g, Exponent(m), pressure(Exponent(m), u), 0) - psi_oracle));
  c.expect(psi_err[0] > psi_err[1] && psi_err[1] > psi_err[2] && psi_err[2] <= 1e-2 * std::max(1.0, psi_oracle),
           "tilde_psi m -> 1: errors " + fmt(psi_err[0]) + ", " + fmt(psi_err[1]) + ", " +
             fmt(psi_err[2]));

  const double d = 1.5, t1 = 0.5, t2 = 2.0, u1 = 0.7, u2 = 1.9;
  const double h_oracle = harnack_lhs_limit(d, t1, t2, u1, u2);
  std::vector<double> h_err;
  for (double m : {1.1, 1.01, 1.001})
    h_err.push_back(std::abs(harnack_lhs(Exponent(m), d, t1, t2, u1, u2) - h_oracle));
  c.expect(h_err[0] > h_err[1] && h_err[1] > h_err[2] && h_err[2] <= 1e-2 * std::max(1.0, std::abs(h_oracle)),
           "Harnack LHS m -> 1: errors " + fmt(h_err[0]) + ", " + fmt(h_err[1]) + ", " +
             fmt(h_err[2]));
}

} // namespace

int main()
{
  const std::vector<std::pair<std::string, std::function<void(Criterion&)>>> criteria = {
    {"complete-graph optimal constants", c1_complete_graphs},
    {"square graph CD_2(0, 4/3)", c2_square},
    {"chain counterexamples", c3_chains},
    {"Z lattice CD_{m,1}(0, 1/(m-1))", c4_lattice},
    {"solver against the two-point solution, mass conservation", c5_solver},
    {"pressure equation and entropy dissipation identities", c6_identities},
    {"Aronson-Benilan estimates and sharpness", c7_aronson_benilan},
    {"Harnack inequality", c8_harnack},
    {"convexity and integral lemmas", c9_lemmas},
    {"operator property suites", c10_properties},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    Criterion c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      run(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %2d %s (%.2fs)\n", c.ok ? "PASS" : "FAIL", index, name.c_str(), secs);
    for (const auto& n : c.notes)
      std::printf("       %s\n", n.c_str());
    failed += c.ok ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", index - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
