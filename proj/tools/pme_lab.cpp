// pme_lab: command-line front end for the porous medium verification lab.
//
// Exit status: 0 pass, 1 estimate or CD violation, 2 usage error,
// 3 numerical failure.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "pmelab/pmelab.hpp"

namespace fs = std::filesystem;
using namespace pmelab;

namespace {

enum Exit { kPass = 0, kViolation = 1, kUsage = 2, kNumerical = 3 };

struct Options
{
  std::string graph = "square";
  bool directed = false;
  double m = 2.0;
  double alpha = 0.0;
  double d = 0.0;
  double mu = 0.0;
  double lambda = 0.0;
  std::string u0 = "random:0.1:2";
  double t_start = 0.01;
  double t_end = 5.0;
  std::size_t points = 500;
  std::uint64_t seed = 1;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  std::string out;
  double tol = 1e-8;
  SolverConfig solver;
  SearchConfig search;
  std::vector<std::string> vertices;
  std::size_t pairs = 100;
  std::string check_kind;
  std::string example;
};

fs::path out_dir(const Options& o)
{
  fs::path p = o.out;
  if (p.empty()) {
    const char* env = std::getenv("PME_LAB_OUT");
    p = env && *env ? env : ".";
  }
  fs::create_directories(p);
  return p;
}

void write_file(const fs::path& p, const std::string& content)
{
  std::ofstream f(p);
  if (!f)
    throw ValidationError("cannot write '" + p.string() + "'");
  f << content;
}

json base_config(const Options& o)
{
  return {{"graph", o.graph}, {"directed", o.directed}, {"m", o.m}, {"seed", o.seed},
          {"jobs", o.jobs}};
}

json time_config(const Options& o)
{
  return {{"u0", o.u0},
          {"t_start", o.t_start},
          {"t_end", o.t_end},
          {"points", o.points},
          {"solver", to_json(o.solver)}};
}

Trajectory run_solver(const Options& o, const Graph& g)
{
  if (!(o.t_start > 0.0) || !(o.t_end > o.t_start) || o.points < 2)
    throw ValidationError("time grid: need 0 < t-start < t-end and points >= 2");
  const PositiveField u0 = parse_u0(o.u0, g, o.seed);
  return integrate(g, Exponent(o.m), u0, linspace(o.t_start, o.t_end, o.points), o.solver);
}

int cmd_simulate(const Options& o)
{
  const Graph g = graph_from_spec(o.graph, !o.directed);
  const fs::path dir = out_dir(o);
  json summary = {{"command", "simulate"}, {"config", base_config(o)}};
  summary["config"]["time"] = time_config(o);
  try {
    const Trajectory traj = run_solver(o, g);
    {
      std::ofstream f(dir / "trajectory.csv");
      write_trajectory_csv(f, traj);
    }
    const Measure mu = Measure::counting(g.size());
    const bool reversible = g.symmetric();
    std::vector<double> ts = traj.times(), masses, entropies;
    std::string series = reversible ? "t,mass,entropy\n" : "t,mass\n";
    for (std::size_t i = 0; i < traj.size(); ++i) {
      masses.push_back(mass(traj.states()[i].values()));
      series += format_double(ts[i]) + "," + format_double(masses.back());
      if (reversible) {
        entropies.push_back(renyi_entropy(g, traj.m(), traj.states()[i], mu));
        series += "," + format_double(entropies.back());
      }
      series += "\n";
    }
    write_file(dir / "series.csv", series);

    const double m0 = mass(parse_u0(o.u0, g, o.seed).values());
    double drift = 0.0;
    for (double mm : masses)
      drift = std::max(drift, std::abs(mm - m0) / m0);
    summary["mass_drift_relative"] = number(drift);
    summary["pressure_equation_residual"] = number(pressure_equation_residual(traj));
    if (reversible) {
      bool monotone = true;
      for (std::size_t i = 1; i < entropies.size(); ++i)
        monotone = monotone && entropies[i] <= entropies[i - 1] + 1e-10;
      summary["entropy_nonincreasing"] = monotone;
      summary["entropy_dissipation_residual"] = number(entropy_dissipation_residual(traj, mu));
      std::ofstream svg(dir / "entropy.svg");
      write_svg_polyline(svg, ts, entropies, "Renyi entropy", "t", "entropy");
    }
    summary["status"] = "ok";
    write_file(dir / "summary.json", summary.dump(2) + "\n");
    std::cout << "simulate: " << traj.size() << " states written to " << dir.string() << "\n";
    return kPass;
  } catch (const StiffnessError& e) {
    summary["status"] = "stiffness";
    summary["error"] = e.what();
    summary["failure_time"] = e.failure_time();
    write_file(dir / "summary.json", summary.dump(2) + "\n");
    std::cerr << "simulate: " << e.what() << "\n";
    return kNumerical;
  }
}

int cmd_verify_cd(Options o)
{
  const Graph g = graph_from_spec(o.graph, !o.directed);
  if (!(o.d > 0.0))
    throw ValidationError("verify-cd: --d must be > 0");
  o.search.seed = o.seed;
  o.search.jobs = o.jobs;
  std::vector<Vertex> targets;
  if (o.vertices.empty())
    for (Vertex x = 0; x < g.size(); ++x)
      targets.push_back(x);
  else
    for (const auto& id : o.vertices)
      targets.push_back(g.index(id));

  json config = base_config(o);
  config["alpha"] = o.alpha;
  config["d"] = o.d;
  config["search"] = to_json(o.search);
  json reports = json::array();
  bool violated = false;
  for (Vertex x : targets) {
    const CDReport r = verify_cd_at(g, Exponent(o.m), MixingParameter(o.alpha), o.d, x, o.search);
    violated = violated || r.verdict == Verdict::violated;
    reports.push_back(to_json(g, r));
    std::cout << g.id(x) << ": " << to_string(r.verdict)
              << "  empirical_optimal_d=" << format_double(r.empirical_optimal_d) << "\n";
  }
  const json doc = {{"command", "verify-cd"}, {"config", config}, {"reports", reports}};
  write_file(out_dir(o) / "cd_report.json", doc.dump(2) + "\n");
  return violated ? kViolation : kPass;
}

int cmd_check(const Options& o)
{
  const Graph g = graph_from_spec(o.graph, !o.directed);
  json config = base_config(o);
  config["time"] = time_config(o);
  config["tol"] = o.tol;
  Trajectory traj = [&] {
    try {
      return run_solver(o, g);
    } catch (const StiffnessError& e) {
      json doc = {{"command", "check"}, {"config", config}, {"status", "stiffness"},
                  {"error", e.what()}, {"failure_time", e.failure_time()}};
      write_file(out_dir(o) / "estimate_report.json", doc.dump(2) + "\n");
      throw;
    }
  }();

  EstimateReport rep;
  if (o.check_kind == "ab") {
    if (!(o.d > 0.0))
      throw ValidationError("check ab: --d must be > 0");
    config["alpha"] = o.alpha;
    config["d"] = o.d;
    rep = ab_check(traj, MixingParameter(o.alpha), o.d, o.tol);
  } else if (o.check_kind == "diff-harnack") {
    config["mu"] = o.mu;
    config["lambda"] = o.lambda;
    rep = diff_harnack_residual(traj, o.lambda, o.mu, o.tol);
  } else {
    config["mu"] = o.mu;
    config["lambda"] = o.lambda;
    config["pairs"] = o.pairs;
    const auto pairs = random_harnack_pairs(g, o.t_start, o.t_end, o.pairs, o.seed);
    rep = harnack_check(traj, o.mu, o.lambda, pairs, o.tol);
  }

  const fs::path dir = out_dir(o);
  const json doc = {{"command", "check " + o.check_kind},
                    {"config", config},
                    {"report", to_json(g, rep)}};
  write_file(dir / "estimate_report.json", doc.dump(2) + "\n");
  const bool single = rep.kind == EstimateKind::ab || rep.kind == EstimateKind::diff_harnack;
  std::string csv = single ? "t,x,slack\n" : "t1,t2,x1,x2,slack\n";
  for (const auto& p : rep.points) {
    if (single)
      csv += format_double(p.t1) + "," + g.id(p.x1) + "," + format_double(p.slack) + "\n";
    else
      csv += format_double(p.t1) + "," + format_double(p.t2) + "," + g.id(p.x1) + "," +
             g.id(p.x2) + "," + format_double(p.slack) + "\n";
  }
  write_file(dir / "slack.csv", csv);
  if (single) {
    // Minimum over vertices at each time.
    std::vector<double> ts, mins;
    for (const auto& p : rep.points) {
      if (ts.empty() || ts.back() != p.t1) {
        ts.push_back(p.t1);
        mins.push_back(p.slack);
      } else {
        mins.back() = std::min(mins.back(), p.slack);
      }
    }
    std::vector<std::size_t> order(ts.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return ts[a] < ts[b]; });
    std::vector<double> xs, ys;
    for (auto i : order) {
      xs.push_back(ts[i]);
      ys.push_back(mins[i]);
    }
    std::ofstream svg(dir / "slack.svg");
    write_svg_polyline(svg, xs, ys, "min slack over vertices", "t", "slack");
  }
  std::cout << "check " << o.check_kind << ": min_slack=" << format_double(rep.min_slack)
            << (rep.holds() ? "  PASS" : "  FAIL") << "\n";
  return rep.holds() ? kPass : kViolation;
}

int cmd_reproduce(const Options& o, bool m_given)
{
  ReproduceOptions ro;
  if (m_given)
    ro.m = o.m;
  ro.seed = o.seed;
  ro.jobs = o.jobs;
  const ReproductionResult r = run_reproduction(o.example, ro);
  std::string name = o.example;
  for (char& ch : name)
    if (ch == ':' || ch == '/')
      ch = '_';
  write_file(out_dir(o) / ("reproduce_" + name + ".json"), r.report.dump(2) + "\n");
  for (const auto& c : r.report["checks"])
    std::cout << (c["passed"].get<bool>() ? "PASS  " : "FAIL  ") << c["check"].get<std::string>()
              << "\n";
  std::cout << o.example << ": " << (r.passed ? "PASS" : "FAIL") << "\n";
  return r.passed ? kPass : kViolation;
}

int cmd_gen_graph(const Options& o)
{
  const Graph g = graph_from_spec(o.graph, !o.directed);
  if (o.out.empty()) {
    write_edge_list(std::cout, g);
  } else {
    std::ofstream f(o.out);
    if (!f)
      throw ValidationError("cannot write '" + o.out + "'");
    write_edge_list(f, g);
  }
  return kPass;
}

} // namespace

int main(int argc, char** argv)
{
  Options o;
  CLI::App app{"Verification lab for the porous medium equation on graphs"};
  app.require_subcommand(1);

  auto add_graph = [&](CLI::App* c) {
    c->add_option("--graph", o.graph, "complete:D, path:n, square, zwindow:r or edge-list file");
    c->add_flag("--directed", o.directed, "do not symmetrize edge-list files");
  };
  auto add_common = [&](CLI::App* c) {
    add_graph(c);
    c->add_option("--m", o.m, "porous medium exponent m > 1");
    c->add_option("--seed", o.seed, "seed for every randomized step");
    c->add_option("--jobs", o.jobs, "worker threads");
    c->add_option("--out", o.out, "output directory (default $PME_LAB_OUT or .)");
  };
  auto add_time = [&](CLI::App* c) {
    c->add_option("--u0", o.u0, "const:c | values:a,b,.. | random:lo:hi | file:path");
    c->add_option("--t-start", o.t_start, "first report time (> 0)");
    c->add_option("--t-end", o.t_end, "last report time");
    c->add_option("--points", o.points, "number of report times");
    c->add_option("--rel-tol", o.solver.rel_tol, "integrator relative tolerance");
    c->add_option("--abs-tol", o.solver.abs_tol, "integrator absolute tolerance");
    c->add_option("--max-step", o.solver.max_step, "integrator step cap");
  };

  auto* sim = app.add_subcommand("simulate", "integrate the PME and write trajectory reports");
  add_common(sim);
  add_time(sim);

  auto* vcd = app.add_subcommand("verify-cd", "search for violations of CD_{m,alpha}(0,d)");
  add_common(vcd);
  vcd->add_option("--alpha", o.alpha, "mixing parameter in [0,1]");
  vcd->add_option("--d", o.d, "dimension constant to test")->required();
  vcd->add_option("--vertex", o.vertices, "vertex id to check (repeatable; default all)");
  vcd->add_option("--samples", o.search.samples, "quasi-random samples");
  vcd->add_option("--refine", o.search.refine, "simplex iterations per restart");
  vcd->add_option("--restarts", o.search.restarts, "simplex restarts");
  vcd->add_option("--hi", o.search.hi, "upper box bound relative to u(x) = 1");
  vcd->add_option("--floor", o.search.floor, "lower box bound when zeros are excluded");

  auto* chk = app.add_subcommand("check", "integrate, then check an estimate along the solution");
  add_common(chk);
  add_time(chk);
  chk->add_option("kind", o.check_kind, "ab | diff-harnack | harnack")
    ->required()
    ->check(CLI::IsMember({"ab", "diff-harnack", "harnack"}));
  chk->add_option("--alpha", o.alpha, "mixing parameter (ab)");
  chk->add_option("--d", o.d, "AB constant d (ab)");
  chk->add_option("--mu", o.mu, "Harnack exponent mu");
  chk->add_option("--lambda", o.lambda, "Harnack parameter lambda in [0,1)");
  chk->add_option("--tol", o.tol, "slack tolerance");
  chk->add_option("--pairs", o.pairs, "random (t1,t2,x1,x2) tuples (harnack)");

  auto* rep = app.add_subcommand("reproduce", "rerun a worked example by id");
  add_common(rep);
  rep->add_option("id", o.example, "example id, e.g. ex3.5:5")->required();

  auto* gen = app.add_subcommand("gen-graph", "write a generated graph as an edge list");
  add_graph(gen);
  gen->add_option("--out", o.out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    if (*sim)
      return cmd_simulate(o);
    if (*vcd)
      return cmd_verify_cd(o);
    if (*chk)
      return cmd_check(o);
    if (*rep)
      return cmd_reproduce(o, rep->count("--m") > 0);
    if (*gen)
      return cmd_gen_graph(o);
  } catch (const StiffnessError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  } catch (const UnknownExampleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  }
  return kUsage;
}
