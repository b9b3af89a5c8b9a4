#pragma once

#include <cstdint>
#include <initializer_list>
#include <utility>
#include <vector>

#include "hlc/generators.hpp"
#include "hlc/hypergraph.hpp"
#include "hlc/lists.hpp"
#include "hlc/rng.hpp"

namespace fx {

inline hlc::VertexId V(std::uint32_t p, std::uint32_t i) { return {p, i}; }

inline hlc::Edge E(std::initializer_list<std::pair<std::uint32_t, std::uint32_t>> vs) {
  hlc::Edge e;
  for (auto [p, i] : vs) e.push_back({p, i});
  return e;
}

inline hlc::Coloring total(std::vector<hlc::Color> colors) { return hlc::Coloring(colors); }

/// Random lists: each vertex draws a nonempty subset of {1..palette} with
/// size in [lo, hi].
inline hlc::ListAssignment random_lists(const hlc::PartiteHypergraph& h, std::size_t palette, std::size_t lo,
                                        std::size_t hi, std::uint64_t seed) {
  hlc::Rng rng(seed);
  std::vector<std::vector<hlc::Color>> lists(h.num_vertices());
  for (auto& l : lists) {
    const std::size_t size = lo + rng.uniform_below(hi - lo + 1);
    std::vector<hlc::Color> pool;
    for (std::size_t c = 1; c <= palette; ++c) pool.push_back(static_cast<hlc::Color>(c));
    for (std::size_t t = 0; t < size; ++t) std::swap(pool[t], pool[t + rng.uniform_below(pool.size() - t)]);
    l.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(size));
  }
  return hlc::ListAssignment(std::move(lists));
}

/// A random list-respecting partial coloring that leaves part `skip`
/// uncolored and colors each other vertex with probability `density`.
inline hlc::Coloring random_partial(const hlc::PartiteHypergraph& h, const hlc::ListAssignment& lists,
                                    std::size_t skip, double density, hlc::Rng& rng) {
  hlc::Coloring phi(h.num_vertices());
  for (std::size_t f = 0; f < h.num_vertices(); ++f) {
    if (h.vertex(f).part == skip || rng.uniform01() >= density) continue;
    const auto l = lists.list(f);
    if (!l.empty()) phi.set(f, l[rng.uniform_below(l.size())]);
  }
  return phi;
}

}  // namespace fx
