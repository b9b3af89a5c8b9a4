#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "hlc/conditions.hpp"
#include "hlc/errors.hpp"
#include "hlc/hypergraph.hpp"
#include "hlc/lists.hpp"

namespace hlc {

using Rational = boost::multiprecision::cpp_rational;

/// Floats on the bound side are compared with this slack; exact sides are rationals.
inline constexpr double kBoundSlack = 1e-12;

inline constexpr double kColorableCap = 1e7;
inline constexpr double kEnumerationCap = 1e6;

inline double to_double(const Rational& r) { return static_cast<double>(r); }

namespace detail {

inline double log_search_space(const PartiteHypergraph& h, const ListAssignment& lists, std::optional<std::size_t> skip_part) {
  double s = 0.0;
  for (std::size_t f = 0; f < h.num_vertices(); ++f) {
    if (skip_part && h.vertex(f).part == *skip_part) continue;
    const auto n = lists.list(f).size();
    if (n == 0) return -std::numeric_limits<double>::infinity();
    s += std::log(static_cast<double>(n));
  }
  return s;
}

inline void require_space(double log_size, double cap, const char* what) {
  if (log_size > std::log(cap) + 1e-9) {
    throw CapExceeded(std::string(what) + ": search space " + std::to_string(std::exp(log_size)) +
                      " exceeds cap " + std::to_string(cap));
  }
}

inline bool completes_monochromatic_edge(const PartiteHypergraph& h, const Coloring& phi, std::size_t f) {
  const Color c = *phi[f];
  for (std::size_t ei : h.incident_flat(f)) {
    const Edge& e = h.edge(ei);
    const bool mono = std::all_of(e.begin(), e.end(), [&](const VertexId& u) {
      const auto& cu = phi[h.flat(u)];
      return cu && *cu == c;
    });
    if (mono) return true;
  }
  return false;
}

/// Calls visit(phi) for every coloring of V \ V_j drawn from the lists.
inline void for_each_outcome(const PartiteHypergraph& h, const ListAssignment& lists, std::size_t j,
                             const std::function<void(const Coloring&)>& visit) {
  std::vector<std::size_t> vars;
  for (std::size_t f = 0; f < h.num_vertices(); ++f) {
    if (h.vertex(f).part != j) vars.push_back(f);
  }
  std::vector<std::size_t> digit(vars.size(), 0);
  Coloring phi(h.num_vertices());
  for (std::size_t t = 0; t < vars.size(); ++t) phi.set(vars[t], lists.list(vars[t])[0]);
  while (true) {
    visit(phi);
    std::size_t t = 0;
    while (t < vars.size()) {
      const auto l = lists.list(vars[t]);
      if (++digit[t] < l.size()) {
        phi.set(vars[t], l[digit[t]]);
        break;
      }
      digit[t] = 0;
      phi.set(vars[t], l[0]);
      ++t;
    }
    if (t == vars.size()) return;
  }
}

inline void require_outcome_space(const PartiteHypergraph& h, const ListAssignment& lists, std::size_t j, double cap) {
  require_lists(h, lists);
  if (j >= h.k()) throw InvalidInput("part j out of range");
  for (std::size_t f = 0; f < h.num_vertices(); ++f) {
    if (h.vertex(f).part != j && lists.list(f).empty()) {
      throw InvalidInput("vertex " + to_string(h.vertex(f)) + " outside part j has an empty list");
    }
  }
  require_space(log_search_space(h, lists, j), cap, "outcome enumeration");
}

inline Rational outcome_count(const PartiteHypergraph& h, const ListAssignment& lists, std::size_t j) {
  boost::multiprecision::cpp_int total = 1;
  for (std::size_t f = 0; f < h.num_vertices(); ++f) {
    if (h.vertex(f).part != j) total *= lists.list(f).size();
  }
  return Rational(total);
}

}  // namespace detail

/// Exact decision by backtracking (vertices by descending degree, colors
/// ascending). Returns a proper L-coloring if one exists.
inline std::optional<Coloring> exact_list_colorable(const PartiteHypergraph& h, const ListAssignment& lists,
                                                    double cap = kColorableCap) {
  detail::require_lists(h, lists);
  detail::require_space(detail::log_search_space(h, lists, std::nullopt), cap, "list colorability");
  for (std::size_t f = 0; f < h.num_vertices(); ++f) {
    if (lists.list(f).empty()) return std::nullopt;
  }

  std::vector<std::size_t> order(h.num_vertices());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return h.incident_flat(a).size() > h.incident_flat(b).size();
  });

  Coloring phi(h.num_vertices());
  std::vector<std::size_t> choice(order.size(), 0);
  std::size_t depth = 0;
  while (true) {
    if (depth == order.size()) return phi;
    const std::size_t f = order[depth];
    const auto l = lists.list(f);
    bool placed = false;
    while (choice[depth] < l.size()) {
      phi.set(f, l[choice[depth]++]);
      if (!detail::completes_monochromatic_edge(h, phi, f)) {
        placed = true;
        break;
      }
    }
    if (placed) {
      ++depth;
      continue;
    }
    phi.clear(f);
    choice[depth] = 0;
    if (depth == 0) return std::nullopt;
    --depth;
  }
}

/// Exact P[event] when every vertex outside part j takes a uniform color from
/// its list independently.
inline Rational exact_event_probability(const PartiteHypergraph& h, const ListAssignment& lists, std::size_t j,
                                        const std::function<bool(const Coloring&)>& event,
                                        double cap = kEnumerationCap) {
  detail::require_outcome_space(h, lists, j, cap);
  boost::multiprecision::cpp_int hits = 0;
  detail::for_each_outcome(h, lists, j, [&](const Coloring& phi) {
    if (event(phi)) ++hits;
  });
  return Rational(hits) / detail::outcome_count(h, lists, j);
}

/// Parameters of an instance as seen from v in part j: q_i is the least list
/// size in part i (1 for an empty part), q_j is |L(v)|.
inline ParamVector instance_params(const PartiteHypergraph& h, const ListAssignment& lists, std::size_t j, VertexId v) {
  const auto profile = color_degree_profile(h, lists);
  ParamVector pv;
  pv.k = h.k();
  pv.j = j;
  for (std::size_t i = 0; i < h.k(); ++i) {
    pv.q.push_back(static_cast<double>(profile.q[i]));
    pv.D.push_back(static_cast<double>(profile.D[i]));
    pv.Delta.push_back(static_cast<double>(profile.Delta[i]));
  }
  pv.q[j] = static_cast<double>(lists.list(h.flat(v)).size());
  return pv;
}

struct BoundCheck {
  Rational exact;
  double bound = 0.0;
  bool ok = false;
};

inline BoundCheck compare_to_bound(Rational exact, double bound) {
  const bool ok = to_double(exact) <= bound + kBoundSlack;
  return {std::move(exact), bound, ok};
}

namespace detail {

inline void require_target(const PartiteHypergraph& h, const ListAssignment& lists, std::size_t j, VertexId v) {
  require_lists(h, lists);
  h.require(v);
  if (v.part != j) throw InvalidInput("vertex " + to_string(v) + " is not in part j");
}

}  // namespace detail

/// Exact P[c is lost at v] against 1 - (1 - prod_{i!=j} 1/q_i)^{deg(v,c)}.
inline BoundCheck verify_claim_31(const PartiteHypergraph& h, const ListAssignment& lists, std::size_t j, VertexId v,
                                  Color c) {
  detail::require_target(h, lists, j, v);
  const double d = static_cast<double>(color_degree(h, lists, v, c));
  auto exact = exact_event_probability(h, lists, j, [&](const Coloring& phi) {
    const auto r = residual_list(h, lists, phi, v);
    return !std::binary_search(r.begin(), r.end(), c);
  });
  return compare_to_bound(std::move(exact), claim_31_bound(instance_params(h, lists, j, v), d));
}

/// Exact P[L_phi(v) empty] against the bound with s = sum of color-degrees of v.
inline BoundCheck verify_lemma_41(const PartiteHypergraph& h, const ListAssignment& lists, std::size_t j, VertexId v) {
  detail::require_target(h, lists, j, v);
  if (lists.list(h.flat(v)).empty()) throw InfeasibleList(v);
  const double s = static_cast<double>(sum_color_degrees(h, lists, v));
  auto exact = exact_event_probability(h, lists, j, [&](const Coloring& phi) {
    return residual_list(h, lists, phi, v).empty();
  });
  return compare_to_bound(std::move(exact), lemma_41_bound(instance_params(h, lists, j, v), s));
}

struct NegativeCorrelationRow {
  std::vector<Color> subset;
  Rational joint;    // P[every color of the subset is lost]
  Rational product;  // product of the single-color probabilities
  bool ok = false;
  bool strict = false;
};

/// For every subset I of L(v): P[all of I lost] <= prod_{c in I} P[c lost],
/// both sides exact.
inline std::vector<NegativeCorrelationRow> verify_claim_32(const PartiteHypergraph& h, const ListAssignment& lists,
                                                           std::size_t j, VertexId v, double cap = kEnumerationCap) {
  detail::require_target(h, lists, j, v);
  const auto own = lists.list(h.flat(v));
  if (own.size() > 4) throw CapExceeded("negative correlation check needs |L(v)| <= 4");
  detail::require_outcome_space(h, lists, j, cap);

  const std::size_t subsets = std::size_t{1} << own.size();
  std::vector<boost::multiprecision::cpp_int> by_mask(subsets, 0);
  detail::for_each_outcome(h, lists, j, [&](const Coloring& phi) {
    const auto r = residual_list(h, lists, phi, v);
    std::size_t mask = 0;
    for (std::size_t s = 0; s < own.size(); ++s) {
      if (!std::binary_search(r.begin(), r.end(), own[s])) mask |= std::size_t{1} << s;
    }
    ++by_mask[mask];
  });
  const Rational total = detail::outcome_count(h, lists, j);
  auto all_lost = [&](std::size_t subset) {
    boost::multiprecision::cpp_int n = 0;
    for (std::size_t m = 0; m < subsets; ++m) {
      if ((m & subset) == subset) n += by_mask[m];
    }
    return Rational(n) / total;
  };

  std::vector<NegativeCorrelationRow> rows;
  for (std::size_t subset = 0; subset < subsets; ++subset) {
    NegativeCorrelationRow row;
    row.product = 1;
    for (std::size_t s = 0; s < own.size(); ++s) {
      if (subset >> s & 1U) {
        row.subset.push_back(own[s]);
        row.product *= all_lost(std::size_t{1} << s);
      }
    }
    row.joint = all_lost(subset);
    row.ok = row.joint <= row.product;
    row.strict = row.joint < row.product;
    rows.push_back(std::move(row));
  }
  return rows;
}

/// A family of subsets of a ground set of size n <= 20, given as a predicate
/// on bitmasks.
using SubsetFamily = std::function<bool(std::uint32_t)>;

struct HarrisReport {
  Rational intersection;  // P[S in every family]
  Rational product;       // prod_i P[S in family i]
  std::vector<Rational> marginals;
  bool ok = false;
};

/// Checks that every family is decreasing (closed under removing elements),
/// then evaluates both sides of Harris's inequality exactly over all 2^n
/// subsets, element x being included independently with probability p[x].
inline HarrisReport verify_harris(std::size_t n, const std::vector<SubsetFamily>& families,
                                  const std::vector<Rational>& p) {
  if (n > 20) throw CapExceeded("Harris check needs a ground set of at most 20 elements");
  if (p.size() != n) throw InvalidInput("need one probability per ground element");
  for (const auto& px : p) {
    if (px < 0 || px > 1) throw InvalidInput("probabilities must lie in [0, 1]");
  }
  const std::uint32_t full = n == 0 ? 1U : (std::uint32_t{1} << n);
  for (std::size_t fi = 0; fi < families.size(); ++fi) {
    for (std::uint32_t m = 0; m < full; ++m) {
      if (!families[fi](m)) continue;
      for (std::size_t x = 0; x < n; ++x) {
        if ((m >> x & 1U) && !families[fi](m & ~(std::uint32_t{1} << x))) {
          throw InvalidInput("family " + std::to_string(fi) + " is not decreasing");
        }
      }
    }
  }

  // weight[m] = prod_{x in m} p_x prod_{x not in m} (1 - p_x), built bit by bit.
  std::vector<Rational> weight{Rational(1)};
  weight.reserve(full);
  for (std::size_t x = 0; x < n; ++x) {
    const std::size_t half = weight.size();
    weight.resize(2 * half);
    for (std::size_t m = 0; m < half; ++m) {
      weight[m + half] = weight[m] * p[x];
      weight[m] *= (1 - p[x]);
    }
  }

  HarrisReport r;
  r.marginals.assign(families.size(), Rational(0));
  r.intersection = 0;
  for (std::uint32_t m = 0; m < full; ++m) {
    bool in_all = true;
    for (std::size_t fi = 0; fi < families.size(); ++fi) {
      if (families[fi](m)) {
        r.marginals[fi] += weight[m];
      } else {
        in_all = false;
      }
    }
    if (in_all) r.intersection += weight[m];
  }
  r.product = 1;
  for (const auto& mg : r.marginals) r.product *= mg;
  r.ok = r.intersection >= r.product;
  return r;
}

/// The decreasing families behind the color-loss bound at (v, c): the ground
/// set is the vertices u != v on edges of E_H(v, c), element u is the event
/// phi(u) = c (probability 1/|L(u)|), and family e holds the sets that do not
/// contain all of e - v.
struct HarrisInstance {
  std::vector<std::size_t> ground;  // flat vertex ids
  std::vector<Rational> p;
  std::vector<SubsetFamily> families;
};

inline HarrisInstance color_loss_families(const PartiteHypergraph& h, const ListAssignment& lists, std::size_t j,
                                          VertexId v, Color c) {
  detail::require_target(h, lists, j, v);
  if (!lists.contains(h.flat(v), c)) throw InvalidInput("color is not in the list of v");
  HarrisInstance inst;
  std::vector<std::vector<std::size_t>> edge_members;
  for (std::size_t ei : h.incident(v)) {
    const Edge& e = h.edge(ei);
    if (!std::all_of(e.begin(), e.end(), [&](const VertexId& u) { return lists.contains(h.flat(u), c); })) continue;
    std::vector<std::size_t> members;
    for (const VertexId& u : e) {
      if (u != v) members.push_back(h.flat(u));
    }
    edge_members.push_back(std::move(members));
  }
  for (const auto& m : edge_members) inst.ground.insert(inst.ground.end(), m.begin(), m.end());
  std::sort(inst.ground.begin(), inst.ground.end());
  inst.ground.erase(std::unique(inst.ground.begin(), inst.ground.end()), inst.ground.end());
  if (inst.ground.size() > 20) throw CapExceeded("color-loss ground set exceeds 20 vertices");
  for (std::size_t u : inst.ground) inst.p.emplace_back(1, static_cast<long long>(lists.list(u).size()));
  for (const auto& m : edge_members) {
    std::uint32_t mask = 0;
    for (std::size_t u : m) {
      const auto pos = std::lower_bound(inst.ground.begin(), inst.ground.end(), u) - inst.ground.begin();
      mask |= std::uint32_t{1} << pos;
    }
    inst.families.push_back([mask](std::uint32_t s) { return (s & mask) != mask; });
  }
  return inst;
}

/// Least q admitting a proper q-coloring. At most 12 vertices.
inline std::size_t exact_chromatic_number(const PartiteHypergraph& h) {
  if (h.num_vertices() > 12) throw CapExceeded("chromatic number oracle needs at most 12 vertices");
  if (h.num_vertices() == 0) return 0;
  for (std::size_t q = 1;; ++q) {
    if (exact_list_colorable(h, ListAssignment::uniform(h.num_vertices(), q), 1e18)) return q;
  }
}

}  // namespace hlc
