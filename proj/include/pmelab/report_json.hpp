#pragma once

#include <cmath>
#include <string>

#include <json.hpp>

#include "pmelab/cd_verifier.hpp"
#include "pmelab/estimates.hpp"
#include "pmelab/graph.hpp"
#include "pmelab/solver.hpp"

namespace pmelab {

using json = nlohmann::ordered_json;

/// JSON has no infinities; they are written as the strings "inf" / "-inf".
/// nlohmann emits finite doubles with round-trip precision.
inline json number(double x)
{
  if (std::isnan(x))
    return "nan";
  if (std::isinf(x))
    return x > 0 ? "inf" : "-inf";
  return x;
}

inline json field_json(const Graph& g, std::span<const double> u)
{
  json j = json::object();
  for (Vertex x = 0; x < g.size(); ++x)
    j[g.id(x)] = number(u[x]);
  return j;
}

inline json to_json(const SearchConfig& s)
{
  return {{"samples", s.samples}, {"refine", s.refine},   {"restarts", s.restarts},
          {"seed", s.seed},       {"hi", s.hi},           {"floor", s.floor},
          {"delta", s.delta},     {"rel_tol", s.rel_tol}, {"jobs", s.jobs}};
}

inline json to_json(const SolverConfig& c)
{
  return {{"rel_tol", c.rel_tol},
          {"abs_tol", c.abs_tol},
          {"max_step", c.max_step},
          {"initial_step", c.initial_step},
          {"positivity_floor", c.positivity_floor}};
}

inline json to_json(const Graph& g, const AdmissibleConfig& w)
{
  return {{"base_vertex", g.id(w.base_vertex)},
          {"field", field_json(g, w.field)},
          {"m", w.m},
          {"alpha", w.alpha},
          {"delta", w.delta}};
}

inline json to_json(const Graph& g, const CDReport& r)
{
  json j;
  j["vertex"] = g.id(r.vertex);
  j["m"] = r.m;
  j["alpha"] = r.alpha;
  j["d_tested"] = r.d_tested ? number(*r.d_tested) : json(nullptr);
  j["verdict"] = to_string(r.verdict);
  j["witness"] = r.witness ? to_json(g, *r.witness) : json(nullptr);
  j["empirical_optimal_d"] = number(r.empirical_optimal_d);
  j["samples_used"] = r.samples_used;
  j["seed"] = r.seed;
  j["lower_bound"] = r.lower_bound;
  j["admissible_samples"] = r.admissible_samples;
  return j;
}

inline json to_json(const Graph& g, const EstimateReport& r)
{
  const bool single = r.kind == EstimateKind::ab || r.kind == EstimateKind::diff_harnack;
  json loc;
  if (single) {
    loc = {{"t", r.argmin.t1}, {"x", g.id(r.argmin.x1)}};
  } else {
    loc = {{"t1", r.argmin.t1}, {"t2", r.argmin.t2}, {"x1", g.id(r.argmin.x1)},
           {"x2", g.id(r.argmin.x2)}};
  }
  json params = {{"m", r.m}};
  if (r.kind == EstimateKind::ab) {
    params["alpha"] = r.alpha_or_lambda;
    params["d"] = r.d_or_mu;
  } else {
    params["lambda"] = r.alpha_or_lambda;
    params["mu"] = r.d_or_mu;
  }
  json j = {{"kind", to_string(r.kind)},
            {"parameters", params},
            {"min_slack", number(r.min_slack)},
            {"argmin", loc},
            {"points_checked", r.points_checked},
            {"tolerance", r.tolerance},
            {"holds", r.holds()}};
  if (r.kind == EstimateKind::harnack_path || r.kind == EstimateKind::harnack_distance)
    j["path_le_distance"] = r.path_le_distance;
  return j;
}

} // namespace pmelab
