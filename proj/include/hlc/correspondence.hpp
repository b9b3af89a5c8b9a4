#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "hlc/errors.hpp"
#include "hlc/hypergraph.hpp"
#include "hlc/lists.hpp"

namespace hlc {

/// A vertex of the cover: slot `slot` of the list of `owner`.
struct CoverColor {
  VertexId owner;
  std::uint32_t slot = 0;

  friend constexpr auto operator<=>(const CoverColor&, const CoverColor&) = default;
};

inline std::string to_string(const CoverColor& c) {
  return to_string(c.owner) + "#" + std::to_string(c.slot);
}

using CoverEdge = std::vector<CoverColor>;

namespace detail {

inline std::vector<std::size_t> flat_owners(const PartiteHypergraph& h, const CoverEdge& e) {
  std::vector<std::size_t> out;
  out.reserve(e.size());
  for (const auto& c : e) out.push_back(h.flat(c.owner));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

/// Checks the three cover axioms against host h:
///  (a) a cover edge holds at most one color of any list,
///  (c) the owners of each cover edge form an edge of h,
///  (b) over each host edge the cover edges are pairwise disjoint.
/// list_sizes is indexed by flat vertex id.
inline ValidationReport validate_cover(const PartiteHypergraph& h, std::span<const std::size_t> list_sizes,
                                       std::span<const CoverEdge> cover_edges) {
  if (list_sizes.size() != h.num_vertices()) {
    return ValidationReport::failure("cover lists cover " + std::to_string(list_sizes.size()) +
                                     " vertices, hypergraph has " + std::to_string(h.num_vertices()));
  }
  std::unordered_map<std::vector<std::size_t>, std::size_t, detail::FlatEdgeHash> host;
  for (std::size_t ei = 0; ei < h.num_edges(); ++ei) {
    std::vector<std::size_t> flat;
    for (const auto& v : h.edge(ei)) flat.push_back(h.flat(v));
    host.emplace(std::move(flat), ei);
  }

  std::vector<std::vector<std::size_t>> per_host(h.num_edges());
  for (std::size_t ci = 0; ci < cover_edges.size(); ++ci) {
    const CoverEdge& e = cover_edges[ci];
    const std::string label = "cover edge " + std::to_string(ci);
    for (const auto& c : e) {
      if (!h.contains(c.owner)) return ValidationReport::failure(label + ": unknown owner " + to_string(c.owner));
      if (c.slot >= list_sizes[h.flat(c.owner)]) {
        return ValidationReport::failure(label + ": color " + to_string(c) + " outside its list");
      }
    }
    const auto owners = detail::flat_owners(h, e);
    if (std::adjacent_find(owners.begin(), owners.end()) != owners.end()) {
      return ValidationReport::failure(label + ": contains two colors of one list (axiom 2)");
    }
    const auto it = host.find(owners);
    if (e.size() != h.k() || it == host.end()) {
      return ValidationReport::failure(label + ": owners are not an edge of H, so the hypermatching over them must be empty (axiom 3)");
    }
    per_host[it->second].push_back(ci);
  }

  for (std::size_t ei = 0; ei < per_host.size(); ++ei) {
    std::vector<CoverColor> used;
    for (std::size_t ci : per_host[ei]) used.insert(used.end(), cover_edges[ci].begin(), cover_edges[ci].end());
    std::sort(used.begin(), used.end());
    const auto dup = std::adjacent_find(used.begin(), used.end());
    if (dup != used.end()) {
      return ValidationReport::failure("cover edges over host edge " + std::to_string(ei) +
                                       " are not a hypermatching: color " + to_string(*dup) +
                                       " is shared (axiom 3)");
    }
  }
  return {};
}

/// A correspondence cover of a host hypergraph. Colors are (owner, slot)
/// pairs and additionally carry a dense id. Immutable after construction.
class CorrespondenceCover {
 public:
  /// Throws InvalidInput if the cover axioms fail.
  CorrespondenceCover(const PartiteHypergraph& h, std::vector<std::size_t> list_sizes,
                      std::vector<CoverEdge> cover_edges)
      : list_sizes_(std::move(list_sizes)), edges_(std::move(cover_edges)) {
    for (auto& e : edges_) std::sort(e.begin(), e.end());
    const auto report = validate_cover(h, list_sizes_, edges_);
    if (!report) throw InvalidInput(report.violation);

    for (std::size_t p = 0; p <= h.k(); ++p) part_offsets_.push_back(p < h.k() ? h.part_begin(p) : h.num_vertices());
    color_offsets_.assign(list_sizes_.size() + 1, 0);
    for (std::size_t f = 0; f < list_sizes_.size(); ++f) color_offsets_[f + 1] = color_offsets_[f] + list_sizes_[f];
    incidence_.assign(num_colors(), {});
    for (std::size_t ci = 0; ci < edges_.size(); ++ci) {
      for (const auto& c : edges_[ci]) incidence_[color_id(c)].push_back(ci);
    }
  }

  std::size_t num_vertices() const noexcept { return list_sizes_.size(); }
  std::size_t list_size(std::size_t flat_id) const { return list_sizes_.at(flat_id); }
  std::span<const std::size_t> list_sizes() const noexcept { return list_sizes_; }
  std::span<const CoverEdge> edges() const noexcept { return edges_; }
  const CoverEdge& edge(std::size_t i) const { return edges_.at(i); }
  std::size_t num_colors() const noexcept { return color_offsets_.back(); }

  std::size_t flat(VertexId v) const { return part_offsets_.at(v.part) + v.index; }
  std::size_t color_id(const CoverColor& c) const { return color_offsets_[flat(c.owner)] + c.slot; }

  /// Cover edges containing c, ascending.
  std::span<const std::size_t> incident(const CoverColor& c) const { return incidence_.at(color_id(c)); }
  std::size_t degree(const CoverColor& c) const { return incident(c).size(); }

 private:
  std::vector<std::size_t> list_sizes_;
  std::vector<CoverEdge> edges_;
  std::vector<std::size_t> part_offsets_;
  std::vector<std::size_t> color_offsets_;
  std::vector<std::vector<std::size_t>> incidence_;
};

/// The cover in which colors correspond iff they are equal: slot s of v is
/// the s-th smallest color of L(v). Cover edges come out host-edge-major,
/// then by ascending color.
inline CorrespondenceCover lift_list_assignment(const PartiteHypergraph& h, const ListAssignment& lists) {
  detail::require_lists(h, lists);
  std::vector<std::size_t> sizes(h.num_vertices());
  for (std::size_t f = 0; f < sizes.size(); ++f) sizes[f] = lists.list(f).size();
  std::vector<CoverEdge> edges;
  for (const Edge& e : h.edges()) {
    for (Color c : lists.list(h.flat(e.front()))) {
      CoverEdge ce;
      for (const VertexId& u : e) {
        const auto slot = lists.slot_of(h.flat(u), c);
        if (!slot) break;
        ce.push_back({u, static_cast<std::uint32_t>(*slot)});
      }
      if (ce.size() == e.size()) edges.push_back(std::move(ce));
    }
  }
  return CorrespondenceCover(h, std::move(sizes), std::move(edges));
}

namespace detail {

inline void require_slots(const PartiteHypergraph& h, const CorrespondenceCover& cover, const Coloring& phi) {
  if (cover.num_vertices() != h.num_vertices() || phi.size() != h.num_vertices()) {
    throw InvalidInput("cover, coloring and hypergraph disagree on the vertex count");
  }
  for (std::size_t f = 0; f < phi.size(); ++f) {
    if (!phi.assigned(f)) continue;
    const Color s = *phi[f];
    if (s < 0 || static_cast<std::size_t>(s) >= cover.list_size(f)) {
      throw InvalidInput("slot " + std::to_string(s) + " at " + to_string(h.vertex(f)) + " is outside its list");
    }
  }
}

inline bool chosen(const CorrespondenceCover& cover, const Coloring& phi, const CoverColor& c) {
  const auto& s = phi[cover.flat(c.owner)];
  return s && *s == static_cast<Color>(c.slot);
}

/// Index of the first cover edge through (v, slot) whose other colors are all
/// chosen by phi.
inline std::optional<std::size_t> dp_blocking_edge(const CorrespondenceCover& cover, const Coloring& phi,
                                                   VertexId v, std::uint32_t slot) {
  for (std::size_t ci : cover.incident({v, slot})) {
    const auto& e = cover.edge(ci);
    const bool all = std::all_of(e.begin(), e.end(), [&](const CoverColor& c) {
      return c.owner == v || chosen(cover, phi, c);
    });
    if (all) return ci;
  }
  return std::nullopt;
}

}  // namespace detail

/// Surviving slots of one uncolored vertex.
inline std::vector<std::uint32_t> dp_residual_slots(const CorrespondenceCover& cover, const Coloring& phi,
                                                    VertexId v) {
  std::vector<std::uint32_t> out;
  const std::size_t q = cover.list_size(cover.flat(v));
  for (std::uint32_t s = 0; s < q; ++s) {
    if (!detail::dp_blocking_edge(cover, phi, v, s)) out.push_back(s);
  }
  return out;
}

/// Per-vertex surviving slot sets under a partial slot assignment phi
/// (phi's values are slot indices). Colored vertices keep their own slot.
inline std::vector<std::vector<std::uint32_t>> dp_residual(const PartiteHypergraph& h,
                                                           const CorrespondenceCover& cover,
                                                           const Coloring& phi) {
  detail::require_slots(h, cover, phi);
  std::vector<std::vector<std::uint32_t>> out(h.num_vertices());
  for (std::size_t f = 0; f < h.num_vertices(); ++f) {
    if (phi.assigned(f)) {
      out[f] = {static_cast<std::uint32_t>(*phi[f])};
    } else {
      out[f] = dp_residual_slots(cover, phi, h.vertex(f));
    }
  }
  return out;
}

/// True iff no cover edge lies entirely in the image of phi. phi must be total.
inline bool is_proper_dp_coloring(const PartiteHypergraph& h, const CorrespondenceCover& cover,
                                  const Coloring& phi) {
  detail::require_total(h, phi);
  detail::require_slots(h, cover, phi);
  for (const auto& e : cover.edges()) {
    if (std::all_of(e.begin(), e.end(), [&](const CoverColor& c) { return detail::chosen(cover, phi, c); })) {
      return false;
    }
  }
  return true;
}

/// Max cover degree over the colors of each part.
inline std::vector<std::size_t> cover_max_degrees(const PartiteHypergraph& h, const CorrespondenceCover& cover) {
  std::vector<std::size_t> D(h.k(), 0);
  for (std::size_t f = 0; f < h.num_vertices(); ++f) {
    const VertexId v = h.vertex(f);
    for (std::uint32_t s = 0; s < cover.list_size(f); ++s) D[v.part] = std::max(D[v.part], cover.degree({v, s}));
  }
  return D;
}

struct AuxEdge {
  std::vector<CoverColor> colors;   // sorted
  std::vector<VertexId> witnesses;  // every v in V_j whose list it covers, ascending
};

/// The auxiliary hypergraph on the cover colors outside part j: S is an edge
/// when S together with L(v), for some v in V_j, has a perfect hypermatching
/// in the cover and no two colors of S share a list.
struct AuxHypergraph {
  std::size_t j = 0;
  std::vector<AuxEdge> edges;

  std::size_t degree(const CoverColor& c) const {
    return static_cast<std::size_t>(std::count_if(edges.begin(), edges.end(), [&](const AuxEdge& e) {
      return std::binary_search(e.colors.begin(), e.colors.end(), c);
    }));
  }
};

inline constexpr std::size_t kDefaultAuxCap = 1'000'000;

/// Enumerates the auxiliary hypergraph. Throws CapExceeded ("aux explosion")
/// when some v in V_j has more than `cap` candidate matchings.
inline AuxHypergraph build_aux_hypergraph(const PartiteHypergraph& h, const CorrespondenceCover& cover,
                                          std::size_t j, std::size_t cap = kDefaultAuxCap) {
  if (j >= h.k()) throw InvalidInput("part j out of range");
  std::map<std::vector<CoverColor>, std::size_t> index;
  AuxHypergraph aux{j, {}};

  for (std::size_t f = h.part_begin(j); f < h.part_end(j); ++f) {
    const VertexId v = h.vertex(f);
    const std::size_t q = cover.list_size(f);
    if (q == 0) continue;
    std::vector<std::span<const std::size_t>> options(q);
    double candidates = 1.0;
    for (std::uint32_t s = 0; s < q; ++s) {
      options[s] = cover.incident({v, s});
      candidates *= static_cast<double>(options[s].size());
    }
    if (candidates == 0.0) continue;
    if (candidates > static_cast<double>(cap)) {
      throw CapExceeded("aux explosion: " + std::to_string(static_cast<long double>(candidates)) +
                        " candidate matchings at " + to_string(v));
    }

    std::vector<std::size_t> pick(q, 0);
    while (true) {
      std::vector<CoverColor> s_colors;
      for (std::uint32_t s = 0; s < q; ++s) {
        for (const auto& c : cover.edge(options[s][pick[s]])) {
          if (c.owner != v) s_colors.push_back(c);
        }
      }
      // Disjoint witnesses whose colors all sit in distinct lists.
      std::vector<VertexId> owners;
      for (const auto& c : s_colors) owners.push_back(c.owner);
      std::sort(owners.begin(), owners.end());
      if (std::adjacent_find(owners.begin(), owners.end()) == owners.end()) {
        std::sort(s_colors.begin(), s_colors.end());
        auto [it, fresh] = index.try_emplace(s_colors, aux.edges.size());
        if (fresh) aux.edges.push_back({s_colors, {}});
        auto& w = aux.edges[it->second].witnesses;
        if (w.empty() || w.back() != v) w.push_back(v);
      }

      std::size_t s = 0;
      while (s < q && ++pick[s] == options[s].size()) pick[s++] = 0;
      if (s == q) break;
    }
  }
  return aux;
}

/// Witness vertices of aux edges S contained in im(phi), ascending and unique.
inline std::vector<VertexId> aux_hits(const AuxHypergraph& aux, const CorrespondenceCover& cover,
                                      const Coloring& phi) {
  std::vector<VertexId> out;
  for (const auto& e : aux.edges) {
    const bool hit = std::all_of(e.colors.begin(), e.colors.end(),
                                 [&](const CoverColor& c) { return detail::chosen(cover, phi, c); });
    if (hit) out.insert(out.end(), e.witnesses.begin(), e.witnesses.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Every aux edge holds exactly q_j colors from each part other than j.
inline ValidationReport check_aux_sizes(const PartiteHypergraph& h, const AuxHypergraph& aux, std::size_t q_j) {
  for (std::size_t ai = 0; ai < aux.edges.size(); ++ai) {
    std::vector<std::size_t> per_part(h.k(), 0);
    for (const auto& c : aux.edges[ai].colors) ++per_part[c.owner.part];
    for (std::size_t i = 0; i < h.k(); ++i) {
      const std::size_t want = i == aux.j ? 0 : q_j;
      if (per_part[i] != want) {
        return ValidationReport::failure("aux edge " + std::to_string(ai) + " has " + std::to_string(per_part[i]) +
                                         " colors in part " + std::to_string(i) + ", expected " + std::to_string(want));
      }
    }
  }
  return {};
}

/// Aux degree of a color in part i is at most D_i * D_j^(q_j - 1), with D the
/// cover's per-part max degrees.
inline ValidationReport check_aux_degrees(const PartiteHypergraph& h, const CorrespondenceCover& cover,
                                          const AuxHypergraph& aux, std::size_t q_j) {
  const auto D = cover_max_degrees(h, cover);
  std::map<CoverColor, std::size_t> deg;
  for (const auto& e : aux.edges) {
    for (const auto& c : e.colors) ++deg[c];
  }
  for (const auto& [c, d] : deg) {
    double bound = static_cast<double>(D[c.owner.part]);
    for (std::size_t t = 1; t < q_j; ++t) bound *= static_cast<double>(D[aux.j]);
    if (static_cast<double>(d) > bound) {
      return ValidationReport::failure("aux degree " + std::to_string(d) + " of " + to_string(c) +
                                       " exceeds D_i*D_j^(q_j-1)");
    }
  }
  return {};
}

}  // namespace hlc
