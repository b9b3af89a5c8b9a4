#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "hlc/errors.hpp"
#include "hlc/hypergraph.hpp"

namespace hlc {

/// Some vertex has an empty list, so no proper coloring exists.
class InfeasibleList : public InvalidInput {
 public:
  explicit InfeasibleList(VertexId v)
      : InvalidInput("vertex " + to_string(v) + " has an empty list"), vertex(v) {}
  VertexId vertex;
};

/// Per-vertex finite color lists, indexed by flat vertex id. Each list is kept
/// sorted and duplicate-free; an empty list is allowed and means the vertex
/// cannot be colored at all.
class ListAssignment {
 public:
  ListAssignment() = default;

  explicit ListAssignment(std::vector<std::vector<Color>> lists) : lists_(std::move(lists)) {
    for (auto& l : lists_) {
      if (std::any_of(l.begin(), l.end(), [](Color c) { return c < 0; })) {
        throw InvalidInput("colors must be non-negative");
      }
      std::sort(l.begin(), l.end());
      l.erase(std::unique(l.begin(), l.end()), l.end());
    }
  }

  /// Every vertex gets {1, ..., q}.
  static ListAssignment uniform(std::size_t num_vertices, std::size_t q) {
    std::vector<Color> base(q);
    for (std::size_t c = 0; c < q; ++c) base[c] = static_cast<Color>(c + 1);
    return ListAssignment(std::vector<std::vector<Color>>(num_vertices, base));
  }

  std::size_t size() const noexcept { return lists_.size(); }
  std::span<const Color> list(std::size_t flat_id) const { return lists_.at(flat_id); }

  bool contains(std::size_t flat_id, Color c) const {
    const auto& l = lists_.at(flat_id);
    return std::binary_search(l.begin(), l.end(), c);
  }

  /// Position of c in the sorted list of the vertex.
  std::optional<std::size_t> slot_of(std::size_t flat_id, Color c) const {
    const auto& l = lists_.at(flat_id);
    const auto it = std::lower_bound(l.begin(), l.end(), c);
    if (it == l.end() || *it != c) return std::nullopt;
    return static_cast<std::size_t>(it - l.begin());
  }

  friend bool operator==(const ListAssignment&, const ListAssignment&) = default;

 private:
  std::vector<std::vector<Color>> lists_;
};

namespace detail {

inline void require_lists(const PartiteHypergraph& h, const ListAssignment& lists) {
  if (lists.size() != h.num_vertices()) {
    throw InvalidInput("list assignment covers " + std::to_string(lists.size()) +
                       " vertices, hypergraph has " + std::to_string(h.num_vertices()));
  }
}

inline void require_respects_lists(const PartiteHypergraph& h, const ListAssignment& lists,
                                   const Coloring& phi) {
  require_lists(h, lists);
  if (phi.size() != h.num_vertices()) throw InvalidInput("coloring size does not match hypergraph");
  for (std::size_t f = 0; f < phi.size(); ++f) {
    if (phi.assigned(f) && !lists.contains(f, *phi[f])) {
      throw InvalidInput("color " + std::to_string(*phi[f]) + " at " + to_string(h.vertex(f)) +
                         " is not in its list");
    }
  }
}

/// The color c if every vertex of e other than v is colored c, else nothing.
inline std::optional<Color> blocking_color(const PartiteHypergraph& h, const Coloring& phi,
                                           const Edge& e, VertexId v) {
  std::optional<Color> common;
  for (const VertexId& u : e) {
    if (u == v) continue;
    const auto& c = phi[h.flat(u)];
    if (!c) return std::nullopt;
    if (common && *common != *c) return std::nullopt;
    common = c;
  }
  return common;
}

}  // namespace detail

/// deg_H(v, c): edges through v on which every list contains c.
inline std::size_t color_degree(const PartiteHypergraph& h, const ListAssignment& lists, VertexId v,
                                Color c) {
  detail::require_lists(h, lists);
  h.require(v);
  if (!lists.contains(h.flat(v), c)) {
    throw InvalidInput("color " + std::to_string(c) + " is not in the list of " + to_string(v));
  }
  std::size_t count = 0;
  for (std::size_t ei : h.incident(v)) {
    const Edge& e = h.edge(ei);
    if (std::all_of(e.begin(), e.end(), [&](const VertexId& u) { return lists.contains(h.flat(u), c); })) {
      ++count;
    }
  }
  return count;
}

/// Sum of deg_H(v, c) over c in L(v).
inline std::size_t sum_color_degrees(const PartiteHypergraph& h, const ListAssignment& lists, VertexId v) {
  std::size_t total = 0;
  for (Color c : lists.list(h.flat(v))) total += color_degree(h, lists, v, c);
  return total;
}

/// L_phi(v) for an uncolored v: colors of L(v) not completed into a
/// monochromatic edge by phi. Only edges whose other k-1 vertices are all
/// colored can block. No validation; callers check phi against the lists.
inline std::vector<Color> residual_list(const PartiteHypergraph& h, const ListAssignment& lists,
                                        const Coloring& phi, VertexId v) {
  const auto own = lists.list(h.flat(v));
  std::vector<bool> blocked(own.size(), false);
  for (std::size_t ei : h.incident(v)) {
    if (const auto c = detail::blocking_color(h, phi, h.edge(ei), v)) {
      if (const auto slot = lists.slot_of(h.flat(v), *c)) blocked[*slot] = true;
    }
  }
  std::vector<Color> out;
  for (std::size_t s = 0; s < own.size(); ++s) {
    if (!blocked[s]) out.push_back(own[s]);
  }
  return out;
}

/// Residual lists of every vertex; colored vertices keep only their color.
inline ListAssignment residual_lists(const PartiteHypergraph& h, const ListAssignment& lists,
                                     const Coloring& phi) {
  detail::require_respects_lists(h, lists, phi);
  std::vector<std::vector<Color>> out(h.num_vertices());
  for (std::size_t f = 0; f < h.num_vertices(); ++f) {
    if (phi.assigned(f)) {
      out[f] = {*phi[f]};
    } else {
      out[f] = residual_list(h, lists, phi, h.vertex(f));
    }
  }
  return ListAssignment(std::move(out));
}

/// Proper coloring drawing every color from the vertex's list. phi must be total.
inline bool is_proper_L_coloring(const PartiteHypergraph& h, const ListAssignment& lists,
                                 const Coloring& phi) {
  detail::require_total(h, phi);
  detail::require_lists(h, lists);
  for (std::size_t f = 0; f < phi.size(); ++f) {
    if (!lists.contains(f, *phi[f])) return false;
  }
  return is_proper_coloring(h, phi);
}

/// Observed per-part extremes of an instance: q_i = min list size,
/// D_i = max color-degree, Delta_i = max degree. An empty part places no
/// constraint, so its q_i is reported as 1 and its maxima as 0.
struct ColorDegreeProfile {
  std::vector<std::size_t> q;
  std::vector<std::size_t> D;
  std::vector<std::size_t> Delta;
};

inline ColorDegreeProfile color_degree_profile(const PartiteHypergraph& h, const ListAssignment& lists) {
  detail::require_lists(h, lists);
  ColorDegreeProfile p{std::vector<std::size_t>(h.k(), 1), std::vector<std::size_t>(h.k(), 0),
                       h.max_degrees()};
  for (std::size_t part = 0; part < h.k(); ++part) {
    if (h.part_size(part) == 0) continue;
    std::size_t qmin = SIZE_MAX;
    for (std::size_t f = h.part_begin(part); f < h.part_end(part); ++f) {
      const VertexId v = h.vertex(f);
      qmin = std::min(qmin, lists.list(f).size());
      for (Color c : lists.list(f)) p.D[part] = std::max(p.D[part], color_degree(h, lists, v, c));
    }
    p.q[part] = qmin;
  }
  return p;
}

}  // namespace hlc
