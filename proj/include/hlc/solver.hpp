#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "hlc/conditions.hpp"
#include "hlc/correspondence.hpp"
#include "hlc/errors.hpp"
#include "hlc/hypergraph.hpp"
#include "hlc/lists.hpp"
#include "hlc/rng.hpp"

namespace hlc {

enum class Regime { Auto, C1, C2, C3 };

inline std::string to_string(Regime r) {
  switch (r) {
    case Regime::Auto: return "auto";
    case Regime::C1: return "c1";
    case Regime::C2: return "c2";
    case Regime::C3: return "c3";
  }
  return "?";
}

inline Regime parse_regime(const std::string& s) {
  if (s == "auto") return Regime::Auto;
  if (s == "c1") return Regime::C1;
  if (s == "c2") return Regime::C2;
  if (s == "c3") return Regime::C3;
  throw InvalidInput("unknown regime '" + s + "'");
}

/// Which variables a violated event gives back to the sampler.
///  - Neighborhood: all of N(v) \ V_j, the variable set of "L_phi(v) is empty".
///  - Witness: the other owners of one blocking edge per color of v, the
///    variable set of the aux-edge event that occurred.
enum class ResamplePolicy { Neighborhood, Witness };

struct SolverConfig {
  std::optional<std::size_t> j;  // unset: auto picks a part
  Regime regime = Regime::Auto;
  std::uint64_t seed = 0;
  std::optional<std::size_t> max_resamples;  // unset: 100 |V|
  bool record_trace = false;
};

enum class SolveStatus { Success, BudgetExhausted, InfeasibleList };

inline std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Success: return "success";
    case SolveStatus::BudgetExhausted: return "budget-exhausted";
    case SolveStatus::InfeasibleList: return "infeasible-list";
  }
  return "?";
}

struct TraceEvent {
  VertexId v;
  std::vector<VertexId> resampled;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

struct SolveOutcome {
  SolveStatus status = SolveStatus::BudgetExhausted;
  Coloring coloring;  // colors (list solver) or slots (cover solver); total on success
  std::size_t resample_count = 0;
  std::vector<TraceEvent> trace;
  std::optional<VertexId> infeasible_vertex;
  std::size_t j = 0;
  std::optional<Condition> guarantee;  // satisfied condition backing this run, if any
  ResamplePolicy policy = ResamplePolicy::Neighborhood;

  bool success() const { return status == SolveStatus::Success; }
  bool within_guarantee() const { return guarantee.has_value(); }
};

namespace detail {

inline ParamVector params_from(std::size_t k, std::size_t j, const std::vector<std::size_t>& q,
                               const std::vector<std::size_t>& D, const std::vector<std::size_t>& Delta) {
  ParamVector pv;
  pv.k = k;
  pv.j = j;
  for (std::size_t i = 0; i < k; ++i) {
    pv.q.push_back(static_cast<double>(q[i]));
    pv.D.push_back(static_cast<double>(D[i]));
    pv.Delta.push_back(static_cast<double>(Delta[i]));
  }
  return pv;
}

inline bool holds(Condition c, const ParamVector& pv) {
  try {
    return evaluate(c, pv).satisfied;
  } catch (const InvalidInput&) {
    return false;  // parameters outside the condition's domain
  }
}

struct Plan {
  std::size_t j;
  std::optional<Condition> guarantee;
  ResamplePolicy policy;
};

/// Picks j and the resampling policy. `allowed` lists the conditions that
/// carry a guarantee in this setting.
inline Plan plan_run(std::size_t k, const SolverConfig& cfg, const std::vector<Condition>& allowed,
                     const auto& params_for) {
  std::vector<std::size_t> parts;
  if (cfg.j) {
    if (*cfg.j >= k) throw InvalidInput("j must be a part index below k");
    parts.push_back(*cfg.j);
  } else {
    for (std::size_t i = 0; i < k; ++i) parts.push_back(i);
  }
  std::vector<Condition> wanted;
  switch (cfg.regime) {
    case Regime::Auto: wanted = {Condition::C1, Condition::C2, Condition::C3}; break;
    case Regime::C1: wanted = {Condition::C1}; break;
    case Regime::C2: wanted = {Condition::C2}; break;
    case Regime::C3: wanted = {Condition::C3}; break;
  }
  auto policy_for = [](Condition c) {
    return c == Condition::C1 ? ResamplePolicy::Witness : ResamplePolicy::Neighborhood;
  };
  for (std::size_t j : parts) {
    const ParamVector pv = params_for(j);
    for (Condition c : wanted) {
      if (std::find(allowed.begin(), allowed.end(), c) == allowed.end()) continue;
      if (holds(c, pv)) return {j, c, policy_for(c)};
    }
  }
  const std::size_t j = cfg.j ? *cfg.j : k - 1;
  const ResamplePolicy policy = cfg.regime == Regime::Auto ? ResamplePolicy::Neighborhood : policy_for(wanted.front());
  return {j, std::nullopt, policy};
}

/// Slot-level view of a list assignment: variables are slot indices.
class ListModel {
 public:
  ListModel(const PartiteHypergraph& h, const ListAssignment& lists) : h_(h), lists_(lists) {}

  std::size_t list_size(std::size_t f) const { return lists_.list(f).size(); }

  /// First edge through v blocking slot s of v, if any.
  std::optional<std::size_t> blocking_edge(const Coloring& slots, VertexId v, std::size_t s) const {
    const Color c = lists_.list(h_.flat(v))[s];
    for (std::size_t ei : h_.incident(v)) {
      const Edge& e = h_.edge(ei);
      const bool all = std::all_of(e.begin(), e.end(), [&](const VertexId& u) {
        if (u == v) return true;
        const auto& su = slots[h_.flat(u)];
        return su && lists_.list(h_.flat(u))[static_cast<std::size_t>(*su)] == c;
      });
      if (all) return ei;
    }
    return std::nullopt;
  }

  std::vector<std::size_t> edge_others(std::size_t ei, VertexId v) const {
    std::vector<std::size_t> out;
    for (const VertexId& u : h_.edge(ei)) {
      if (u != v) out.push_back(h_.flat(u));
    }
    return out;
  }

  Coloring to_colors(const Coloring& slots) const {
    Coloring out(slots.size());
    for (std::size_t f = 0; f < slots.size(); ++f) {
      if (slots.assigned(f)) out.set(f, lists_.list(f)[static_cast<std::size_t>(*slots[f])]);
    }
    return out;
  }

  bool verify(const Coloring& colors) const { return is_proper_L_coloring(h_, lists_, colors); }

 private:
  const PartiteHypergraph& h_;
  const ListAssignment& lists_;
};

class CoverModel {
 public:
  explicit CoverModel(const PartiteHypergraph& h, const CorrespondenceCover& cover) : h_(h), cover_(cover) {}

  std::size_t list_size(std::size_t f) const { return cover_.list_size(f); }

  std::optional<std::size_t> blocking_edge(const Coloring& slots, VertexId v, std::size_t s) const {
    return dp_blocking_edge(cover_, slots, v, static_cast<std::uint32_t>(s));
  }

  std::vector<std::size_t> edge_others(std::size_t ci, VertexId v) const {
    std::vector<std::size_t> out;
    for (const CoverColor& c : cover_.edge(ci)) {
      if (c.owner != v) out.push_back(h_.flat(c.owner));
    }
    return out;
  }

  Coloring to_colors(const Coloring& slots) const { return slots; }

  bool verify(const Coloring& slots) const { return is_proper_dp_coloring(h_, cover_, slots); }

 private:
  const PartiteHypergraph& h_;
  const CorrespondenceCover& cover_;
};

template <class Model>
std::optional<std::size_t> lowest_residual_slot(const Model& m, const Coloring& slots, VertexId v, std::size_t f) {
  for (std::size_t s = 0; s < m.list_size(f); ++s) {
    if (!m.blocking_edge(slots, v, s)) return s;
  }
  return std::nullopt;
}

template <class Model>
std::vector<std::size_t> event_variables(const PartiteHypergraph& h, const Model& m, const Coloring& slots,
                                         VertexId v, ResamplePolicy policy) {
  std::vector<std::size_t> out;
  if (policy == ResamplePolicy::Neighborhood) return h.neighbors(v);
  for (std::size_t s = 0; s < m.list_size(h.flat(v)); ++s) {
    if (const auto ei = m.blocking_edge(slots, v, s)) {
      const auto others = m.edge_others(*ei, v);
      out.insert(out.end(), others.begin(), others.end());
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

template <class Model>
void draw(const Model& m, Coloring& slots, std::size_t f, Rng& rng) {
  slots.set(f, static_cast<Color>(rng.uniform_below(m.list_size(f))));
}

/// Variable-setting resampling over the events "v in V_j has no color left".
/// The first bad vertex in (part, index) order is resampled each step.
template <class Model>
SolveOutcome resample_loop(const PartiteHypergraph& h, const Model& m, const SolverConfig& cfg, const Plan& plan) {
  SolveOutcome out;
  out.j = plan.j;
  out.guarantee = plan.guarantee;
  out.policy = plan.policy;
  const std::size_t budget = cfg.max_resamples ? *cfg.max_resamples : std::max<std::size_t>(1, 100 * h.num_vertices());
  if (budget == 0) throw InvalidInput("max_resamples must be at least 1");

  for (std::size_t f = 0; f < h.num_vertices(); ++f) {
    if (m.list_size(f) == 0) {
      out.status = SolveStatus::InfeasibleList;
      out.infeasible_vertex = h.vertex(f);
      out.coloring = Coloring(h.num_vertices());
      return out;
    }
  }

  const std::size_t j = plan.j;
  Rng rng(cfg.seed);
  Coloring slots(h.num_vertices());
  for (std::size_t f = 0; f < h.num_vertices(); ++f) {
    if (h.vertex(f).part != j) draw(m, slots, f, rng);
  }

  auto is_bad = [&](std::size_t f) { return !lowest_residual_slot(m, slots, h.vertex(f), f); };
  std::set<std::size_t> bad;
  for (std::size_t f = h.part_begin(j); f < h.part_end(j); ++f) {
    if (is_bad(f)) bad.insert(f);
  }

  while (!bad.empty()) {
    if (out.resample_count >= budget) {
      out.status = SolveStatus::BudgetExhausted;
      out.coloring = m.to_colors(slots);
      return out;
    }
    const std::size_t f = *bad.begin();
    const VertexId v = h.vertex(f);
    const auto vars = event_variables(h, m, slots, v, plan.policy);
    for (std::size_t u : vars) draw(m, slots, u, rng);
    ++out.resample_count;
    if (cfg.record_trace) {
      TraceEvent ev{v, {}};
      for (std::size_t u : vars) ev.resampled.push_back(h.vertex(u));
      out.trace.push_back(std::move(ev));
    }
    std::set<std::size_t> touched{f};
    for (std::size_t u : vars) {
      for (std::size_t ei : h.incident_flat(u)) touched.insert(h.flat(h.edge(ei)[j]));
    }
    for (std::size_t t : touched) {
      if (is_bad(t)) {
        bad.insert(t);
      } else {
        bad.erase(t);
      }
    }
  }

  for (std::size_t f = h.part_begin(j); f < h.part_end(j); ++f) {
    slots.set(f, static_cast<Color>(*lowest_residual_slot(m, slots, h.vertex(f), f)));
  }
  out.coloring = m.to_colors(slots);
  if (!m.verify(out.coloring)) throw std::logic_error("solver produced an improper coloring");
  out.status = SolveStatus::Success;
  return out;
}

inline void require_partial_outside(const PartiteHypergraph& h, const Coloring& phi, std::size_t j) {
  if (j >= h.k()) throw InvalidInput("part j out of range");
  if (phi.size() != h.num_vertices()) throw InvalidInput("coloring size does not match hypergraph");
  for (std::size_t f = 0; f < h.num_vertices(); ++f) {
    if (h.vertex(f).part != j && !phi.assigned(f)) {
      throw InvalidInput("vertex " + to_string(h.vertex(f)) + " outside part j is uncolored");
    }
  }
}

}  // namespace detail

/// Colors every vertex outside part j independently and uniformly from its
/// list; part j stays uncolored. Throws InfeasibleList on an empty list
/// outside part j.
inline Coloring random_partial_coloring(const PartiteHypergraph& h, const ListAssignment& lists, std::size_t j,
                                        Rng& rng) {
  detail::require_lists(h, lists);
  if (j >= h.k()) throw InvalidInput("part j out of range");
  Coloring phi(h.num_vertices());
  for (std::size_t f = 0; f < h.num_vertices(); ++f) {
    if (h.vertex(f).part == j) continue;
    const auto l = lists.list(f);
    if (l.empty()) throw InfeasibleList(h.vertex(f));
    phi.set(f, l[rng.uniform_below(l.size())]);
  }
  return phi;
}

/// Vertices of part j whose residual list under phi is empty, ascending.
inline std::vector<VertexId> find_bad_vertices(const PartiteHypergraph& h, const ListAssignment& lists,
                                               const Coloring& phi, std::size_t j) {
  detail::require_partial_outside(h, phi, j);
  detail::require_respects_lists(h, lists, phi);
  std::vector<VertexId> out;
  for (std::size_t f = h.part_begin(j); f < h.part_end(j); ++f) {
    const VertexId v = h.vertex(f);
    if (residual_list(h, lists, phi, v).empty()) out.push_back(v);
  }
  return out;
}

struct ExtendResult {
  Coloring coloring;
  std::optional<VertexId> failure;

  bool ok() const { return !failure.has_value(); }
};

/// Gives each vertex of part j its lowest residual color. No edge holds two
/// part-j vertices, so these choices never interact and success is always a
/// proper L-coloring.
inline ExtendResult greedy_extend(const PartiteHypergraph& h, const ListAssignment& lists, const Coloring& phi,
                                  std::size_t j) {
  detail::require_partial_outside(h, phi, j);
  detail::require_respects_lists(h, lists, phi);
  ExtendResult r{phi, std::nullopt};
  std::vector<std::pair<std::size_t, Color>> picks;
  for (std::size_t f = h.part_begin(j); f < h.part_end(j); ++f) {
    const VertexId v = h.vertex(f);
    const auto residual = residual_list(h, lists, phi, v);
    if (residual.empty()) {
      r.failure = v;
      return r;
    }
    picks.emplace_back(f, residual.front());
  }
  for (auto [f, c] : picks) r.coloring.set(f, c);
  return r;
}

/// Random partial coloring of V \ V_j, resampling of bad events, then greedy
/// extension into V_j. Success outcomes are verified before returning.
inline SolveOutcome moser_tardos_solve(const PartiteHypergraph& h, const ListAssignment& lists,
                                       const SolverConfig& cfg) {
  detail::require_lists(h, lists);
  const auto profile = color_degree_profile(h, lists);
  const auto plan = detail::plan_run(h.k(), cfg, {Condition::C1, Condition::C2, Condition::C3}, [&](std::size_t j) {
    return detail::params_from(h.k(), j, profile.q, profile.D, profile.Delta);
  });
  return detail::resample_loop(h, detail::ListModel(h, lists), cfg, plan);
}

/// The same loop over a correspondence cover; phi values are slots. Only C1
/// carries a guarantee for covers.
inline SolveOutcome dp_solve(const PartiteHypergraph& h, const CorrespondenceCover& cover, const SolverConfig& cfg) {
  if (cover.num_vertices() != h.num_vertices()) throw InvalidInput("cover does not match hypergraph");
  std::vector<std::size_t> q(h.k(), 1);
  for (std::size_t p = 0; p < h.k(); ++p) {
    if (h.part_size(p) == 0) continue;
    std::size_t m = SIZE_MAX;
    for (std::size_t f = h.part_begin(p); f < h.part_end(p); ++f) m = std::min(m, cover.list_size(f));
    q[p] = m;
  }
  const auto D = cover_max_degrees(h, cover);
  const auto Delta = h.max_degrees();
  const auto plan = detail::plan_run(h.k(), cfg, {Condition::C1},
                                     [&](std::size_t j) { return detail::params_from(h.k(), j, q, D, Delta); });
  return detail::resample_loop(h, detail::CoverModel(h, cover), cfg, plan);
}

}  // namespace hlc
