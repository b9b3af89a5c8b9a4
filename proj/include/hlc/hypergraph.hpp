#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "hlc/errors.hpp"
#include "hlc/rng.hpp"

namespace hlc {

using Color = std::int64_t;

struct VertexId {
  std::uint32_t part = 0;
  std::uint32_t index = 0;

  friend constexpr auto operator<=>(const VertexId&, const VertexId&) = default;
};

/// "part:index", the key format used by the JSON files.
inline std::string to_string(VertexId v) {
  return std::to_string(v.part) + ":" + std::to_string(v.index);
}

/// One vertex per part; position i holds the part-i vertex once canonical.
using Edge = std::vector<VertexId>;

struct ValidationReport {
  bool ok = true;
  std::string violation;
  std::vector<std::string> warnings;

  explicit operator bool() const { return ok; }

  static ValidationReport failure(std::string what) {
    ValidationReport r;
    r.ok = false;
    r.violation = std::move(what);
    return r;
  }
};

namespace detail {

inline std::string edge_label(std::size_t i) { return "edge " + std::to_string(i); }

struct FlatEdgeHash {
  std::size_t operator()(const std::vector<std::size_t>& e) const noexcept {
    std::uint64_t h = e.size();
    for (auto x : e) h = hash_combine(h, x);
    return static_cast<std::size_t>(h);
  }
};

}  // namespace detail

/// Structural check of raw hypergraph data: k >= 2, every edge transversal with
/// in-range indices, no duplicate edges. Empty parts are warnings.
inline ValidationReport validate(std::size_t k, std::span<const std::size_t> part_sizes,
                                 std::span<const Edge> edges) {
  if (k < 2) return ValidationReport::failure("k must be at least 2");
  if (part_sizes.size() != k) {
    return ValidationReport::failure("expected " + std::to_string(k) + " part sizes, got " +
                                     std::to_string(part_sizes.size()));
  }
  std::vector<std::size_t> offsets(k + 1, 0);
  for (std::size_t i = 0; i < k; ++i) offsets[i + 1] = offsets[i] + part_sizes[i];

  std::unordered_set<std::vector<std::size_t>, detail::FlatEdgeHash> seen;
  for (std::size_t ei = 0; ei < edges.size(); ++ei) {
    const Edge& e = edges[ei];
    if (e.size() != k) {
      return ValidationReport::failure(detail::edge_label(ei) + " has " + std::to_string(e.size()) +
                                       " vertices, expected " + std::to_string(k));
    }
    std::vector<bool> hit(k, false);
    std::vector<std::size_t> flat(k);
    for (const VertexId& v : e) {
      if (v.part >= k) {
        return ValidationReport::failure(detail::edge_label(ei) + ": vertex " + to_string(v) +
                                         " has part out of range");
      }
      if (v.index >= part_sizes[v.part]) {
        return ValidationReport::failure(detail::edge_label(ei) + ": vertex " + to_string(v) +
                                         " has index out of range");
      }
      if (hit[v.part]) {
        return ValidationReport::failure(detail::edge_label(ei) + ": edge not transversal (part " +
                                         std::to_string(v.part) + " repeated)");
      }
      hit[v.part] = true;
      flat[v.part] = offsets[v.part] + v.index;
    }
    if (!seen.insert(flat).second) {
      return ValidationReport::failure(detail::edge_label(ei) + ": duplicate edge");
    }
  }

  ValidationReport report;
  for (std::size_t i = 0; i < k; ++i) {
    if (part_sizes[i] == 0) report.warnings.push_back("part " + std::to_string(i) + " is empty");
  }
  return report;
}

/// A k-partite k-uniform hypergraph. Immutable after construction.
///
/// Vertices are addressed by (part, index) and also by a flat id in
/// [0, num_vertices()), part-major. Edges are stored with vertex i in part i.
class PartiteHypergraph {
 public:
  PartiteHypergraph() : PartiteHypergraph(std::vector<std::size_t>{0, 0}, {}) {}

  /// Edges may list their vertices in any order; they are stored sorted by part.
  /// Throws InvalidInput on any structural violation, including duplicates.
  PartiteHypergraph(std::vector<std::size_t> part_sizes, std::vector<Edge> edges)
      : part_sizes_(std::move(part_sizes)), edges_(std::move(edges)) {
    for (Edge& e : edges_) std::sort(e.begin(), e.end());
    const auto report = hlc::validate(part_sizes_.size(), part_sizes_, edges_);
    if (!report) throw InvalidInput(report.violation);

    offsets_.assign(k() + 1, 0);
    for (std::size_t i = 0; i < k(); ++i) offsets_[i + 1] = offsets_[i] + part_sizes_[i];
    incidence_.assign(num_vertices(), {});
    for (std::size_t ei = 0; ei < edges_.size(); ++ei) {
      for (const VertexId& v : edges_[ei]) incidence_[flat(v)].push_back(ei);
    }
  }

  std::size_t k() const noexcept { return part_sizes_.size(); }
  std::span<const std::size_t> part_sizes() const noexcept { return part_sizes_; }
  std::size_t part_size(std::size_t part) const { return part_sizes_.at(part); }
  std::size_t num_vertices() const noexcept { return offsets_.back(); }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  std::span<const Edge> edges() const noexcept { return edges_; }
  const Edge& edge(std::size_t i) const { return edges_.at(i); }

  bool contains(VertexId v) const noexcept {
    return v.part < k() && v.index < part_sizes_[v.part];
  }

  void require(VertexId v) const {
    if (!contains(v)) throw InvalidInput("vertex " + to_string(v) + " is not in the hypergraph");
  }

  std::size_t flat(VertexId v) const noexcept { return offsets_[v.part] + v.index; }

  VertexId vertex(std::size_t flat_id) const {
    if (flat_id >= num_vertices()) throw InvalidInput("flat vertex id out of range");
    const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), flat_id);
    const auto part = static_cast<std::size_t>(it - offsets_.begin()) - 1;
    return {static_cast<std::uint32_t>(part), static_cast<std::uint32_t>(flat_id - offsets_[part])};
  }

  /// Flat ids of part i are [part_begin(i), part_end(i)).
  std::size_t part_begin(std::size_t part) const { return offsets_.at(part); }
  std::size_t part_end(std::size_t part) const { return offsets_.at(part + 1); }

  /// Indices of the edges through v, ascending.
  std::span<const std::size_t> incident(VertexId v) const {
    require(v);
    return incidence_[flat(v)];
  }
  std::span<const std::size_t> incident_flat(std::size_t flat_id) const {
    return incidence_.at(flat_id);
  }

  std::size_t degree(VertexId v) const { return incident(v).size(); }

  /// Number of edges containing every vertex of s.
  std::size_t set_degree(std::span<const VertexId> s) const {
    if (s.empty()) throw InvalidInput("set_degree needs a nonempty vertex set");
    for (const VertexId& v : s) require(v);
    // Scan the incidence list of the lowest-degree member.
    const VertexId* pivot = &s.front();
    for (const VertexId& v : s) {
      if (degree(v) < degree(*pivot)) pivot = &v;
    }
    std::size_t count = 0;
    for (std::size_t ei : incident(*pivot)) {
      const Edge& e = edges_[ei];
      const bool all = std::all_of(s.begin(), s.end(),
                                   [&](const VertexId& v) { return e[v.part] == v; });
      if (all) ++count;
    }
    return count;
  }

  /// Delta_i for each part; zero for empty parts.
  std::vector<std::size_t> max_degrees() const {
    std::vector<std::size_t> out(k(), 0);
    for (std::size_t f = 0; f < num_vertices(); ++f) {
      auto& slot = out[vertex(f).part];
      slot = std::max(slot, incidence_[f].size());
    }
    return out;
  }

  /// N_H(v) as sorted flat ids.
  std::vector<std::size_t> neighbors(VertexId v) const {
    std::vector<std::size_t> out;
    for (std::size_t ei : incident(v)) {
      for (const VertexId& u : edges_[ei]) {
        if (u != v) out.push_back(flat(u));
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

 private:
  std::vector<std::size_t> part_sizes_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<std::vector<std::size_t>> incidence_;
};

/// Re-checks every invariant of a constructed hypergraph, including that the
/// incidence lists agree with the edge list.
inline ValidationReport validate(const PartiteHypergraph& h) {
  auto report = validate(h.k(), h.part_sizes(), h.edges());
  if (!report) return report;
  std::vector<std::size_t> counted(h.num_vertices(), 0);
  for (const Edge& e : h.edges()) {
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i].part != i) return ValidationReport::failure("edge not stored in part order");
      ++counted[h.flat(e[i])];
    }
  }
  for (std::size_t f = 0; f < h.num_vertices(); ++f) {
    if (counted[f] != h.incident_flat(f).size()) {
      return ValidationReport::failure("incidence of vertex " + to_string(h.vertex(f)) +
                                       " disagrees with the edge list");
    }
  }
  return report;
}

/// A partial vertex -> color map indexed by flat vertex id.
class Coloring {
 public:
  Coloring() = default;
  explicit Coloring(std::size_t num_vertices) : colors_(num_vertices) {}
  explicit Coloring(const std::vector<Color>& total) : colors_(total.begin(), total.end()) {}

  std::size_t size() const noexcept { return colors_.size(); }
  bool assigned(std::size_t flat_id) const { return colors_.at(flat_id).has_value(); }
  const std::optional<Color>& operator[](std::size_t flat_id) const { return colors_.at(flat_id); }
  Color at(std::size_t flat_id) const {
    const auto& c = colors_.at(flat_id);
    if (!c) throw InvalidInput("vertex " + std::to_string(flat_id) + " is uncolored");
    return *c;
  }

  void set(std::size_t flat_id, Color c) { colors_.at(flat_id) = c; }
  void clear(std::size_t flat_id) { colors_.at(flat_id).reset(); }

  bool is_total() const {
    return std::all_of(colors_.begin(), colors_.end(), [](const auto& c) { return c.has_value(); });
  }
  std::size_t num_assigned() const {
    return static_cast<std::size_t>(
        std::count_if(colors_.begin(), colors_.end(), [](const auto& c) { return c.has_value(); }));
  }

  friend bool operator==(const Coloring&, const Coloring&) = default;

 private:
  std::vector<std::optional<Color>> colors_;
};

namespace detail {

inline void require_total(const PartiteHypergraph& h, const Coloring& phi) {
  if (phi.size() != h.num_vertices()) {
    throw InvalidInput("coloring covers " + std::to_string(phi.size()) + " vertices, hypergraph has " +
                       std::to_string(h.num_vertices()));
  }
  for (std::size_t f = 0; f < phi.size(); ++f) {
    if (!phi.assigned(f)) throw InvalidInput("coloring is partial: " + to_string(h.vertex(f)) + " uncolored");
  }
}

}  // namespace detail

/// True iff no edge is monochromatic. phi must be total.
inline bool is_proper_coloring(const PartiteHypergraph& h, const Coloring& phi) {
  detail::require_total(h, phi);
  for (const Edge& e : h.edges()) {
    const Color first = *phi[h.flat(e.front())];
    const bool mono = std::all_of(e.begin() + 1, e.end(),
                                  [&](const VertexId& u) { return *phi[h.flat(u)] == first; });
    if (mono) return false;
  }
  return true;
}

}  // namespace hlc
