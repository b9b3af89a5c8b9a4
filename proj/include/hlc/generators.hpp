#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "hlc/correspondence.hpp"
#include "hlc/errors.hpp"
#include "hlc/hypergraph.hpp"
#include "hlc/lists.hpp"
#include "hlc/rng.hpp"

namespace hlc {

inline constexpr double kDefaultInstanceCap = 1e7;

/// Global cap on candidate edges, overridable through HLC_MAX_CAP.
inline double instance_cap() {
  if (const char* env = std::getenv("HLC_MAX_CAP")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0)) throw InvalidInput("HLC_MAX_CAP must be a positive number");
    return v;
  }
  return kDefaultInstanceCap;
}

namespace detail {

inline std::size_t transversal_count(std::size_t k, std::size_t n, double cap) {
  if (k < 2) throw InvalidInput("k must be at least 2");
  const double count = std::pow(static_cast<double>(n), static_cast<double>(k));
  if (count > cap) {
    std::ostringstream msg;
    msg << count << " candidate edges exceed cap " << cap << " (HLC_MAX_CAP)";
    throw CapExceeded(msg.str());
  }
  return static_cast<std::size_t>(std::llround(count));
}

/// Transversal with mixed-radix rank r: part 0 is the most significant digit.
inline Edge edge_of_rank(std::size_t k, std::size_t n, std::size_t rank) {
  Edge e(k);
  for (std::size_t i = k; i-- > 0;) {
    e[i] = {static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(rank % n)};
    rank /= n;
  }
  return e;
}

}  // namespace detail

/// K_{k*n}: all n^k transversal edges.
inline PartiteHypergraph gen_complete(std::size_t k, std::size_t n, double cap = instance_cap()) {
  if (n < 1) throw InvalidInput("n must be at least 1");
  const std::size_t count = detail::transversal_count(k, n, cap);
  std::vector<Edge> edges;
  edges.reserve(count);
  for (std::size_t r = 0; r < count; ++r) edges.push_back(detail::edge_of_rank(k, n, r));
  return PartiteHypergraph(std::vector<std::size_t>(k, n), std::move(edges));
}

/// H(k, n, p): each transversal edge independently with probability p. The
/// decision for the edge of rank r depends only on (seed, r).
inline PartiteHypergraph gen_random(std::size_t k, std::size_t n, double p, std::uint64_t seed,
                                    double cap = instance_cap()) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidInput("p must lie in [0, 1]");
  const std::size_t count = n == 0 ? 0 : detail::transversal_count(k, n, cap);
  std::vector<Edge> edges;
  for (std::size_t r = 0; r < count; ++r) {
    if (counter_uniform01(seed, r) < p) edges.push_back(detail::edge_of_rank(k, n, r));
  }
  return PartiteHypergraph(std::vector<std::size_t>(k, n), std::move(edges));
}

/// A star of n edges through (k-1, 0). With shared_first the part-0 vertex
/// is common to all edges; otherwise the edges are disjoint away from the
/// center.
inline PartiteHypergraph gen_gadget(std::size_t k, std::size_t n, bool shared_first) {
  if (k < 2) throw InvalidInput("k must be at least 2");
  std::vector<std::size_t> sizes(k, n);
  sizes[k - 1] = 1;
  if (shared_first) sizes[0] = n == 0 ? 0 : 1;
  std::vector<Edge> edges;
  for (std::size_t t = 0; t < n; ++t) {
    Edge e(k);
    for (std::size_t i = 0; i + 1 < k; ++i) {
      const std::size_t idx = (i == 0 && shared_first) ? 0 : t;
      e[i] = {static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(idx)};
    }
    e[k - 1] = {static_cast<std::uint32_t>(k - 1), 0};
    edges.push_back(std::move(e));
  }
  if (shared_first && k == 2 && n > 1) throw InvalidInput("a shared star with k = 2 would repeat its edge");
  return PartiteHypergraph(std::move(sizes), std::move(edges));
}

enum class ListModelKind { UniformQ, PerPartQ, PaletteRandom };

inline std::string to_string(ListModelKind m) {
  switch (m) {
    case ListModelKind::UniformQ: return "uniform_q";
    case ListModelKind::PerPartQ: return "per_part_q";
    case ListModelKind::PaletteRandom: return "palette_random";
  }
  return "?";
}

inline ListModelKind parse_list_model(const std::string& s) {
  if (s == "uniform_q") return ListModelKind::UniformQ;
  if (s == "per_part_q") return ListModelKind::PerPartQ;
  if (s == "palette_random") return ListModelKind::PaletteRandom;
  throw InvalidInput("unknown list model '" + s + "'");
}

/// q holds one size for all parts or one per part.
struct ListSpec {
  ListModelKind model = ListModelKind::UniformQ;
  std::vector<std::size_t> q{1};
  std::size_t palette = 0;  // palette_random only

  std::size_t size_for(std::size_t part) const {
    if (q.size() == 1) return q.front();
    return q.at(part);
  }
};

/// uniform_q / per_part_q give {1..q_i}; palette_random draws q_i distinct
/// colors from {1..palette} per vertex, from a stream keyed by (seed, vertex).
inline ListAssignment gen_lists(const PartiteHypergraph& h, const ListSpec& spec, std::uint64_t seed) {
  if (spec.q.empty() || (spec.q.size() != 1 && spec.q.size() != h.k())) {
    throw InvalidInput("q must have one entry or one per part");
  }
  if (spec.model == ListModelKind::UniformQ && spec.q.size() != 1) throw InvalidInput("uniform_q takes a single q");
  std::vector<std::vector<Color>> lists(h.num_vertices());
  for (std::size_t f = 0; f < h.num_vertices(); ++f) {
    const std::size_t q = spec.size_for(h.vertex(f).part);
    if (spec.model != ListModelKind::PaletteRandom) {
      lists[f].resize(q);
      std::iota(lists[f].begin(), lists[f].end(), Color{1});
      continue;
    }
    if (q > spec.palette) throw InvalidInput("list size exceeds palette size");
    std::vector<Color> pool(spec.palette);
    std::iota(pool.begin(), pool.end(), Color{1});
    Rng rng(hash_combine(seed, f));
    for (std::size_t t = 0; t < q; ++t) {
      const auto pick = t + rng.uniform_below(pool.size() - t);
      std::swap(pool[t], pool[pick]);
    }
    lists[f].assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(q));
  }
  return ListAssignment(std::move(lists));
}

/// Random cover with q[part] colors per vertex: over each host edge a
/// uniformly random maximum hypermatching (min_i q_i cover edges, each
/// vertex's slots matched by an independent random permutation).
inline CorrespondenceCover gen_adversarial_cover(const PartiteHypergraph& h, const std::vector<std::size_t>& q,
                                                 std::uint64_t seed) {
  if (q.size() != h.k()) throw InvalidInput("need one list size per part");
  std::vector<std::size_t> sizes(h.num_vertices());
  for (std::size_t f = 0; f < h.num_vertices(); ++f) sizes[f] = q[h.vertex(f).part];
  const std::size_t m = *std::min_element(q.begin(), q.end());

  std::vector<CoverEdge> edges;
  for (std::size_t ei = 0; ei < h.num_edges(); ++ei) {
    Rng rng(hash_combine(seed, ei));
    const Edge& e = h.edge(ei);
    std::vector<std::vector<std::uint32_t>> perm(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
      perm[i].resize(q[i]);
      std::iota(perm[i].begin(), perm[i].end(), 0U);
      for (std::size_t t = 0; t < m; ++t) {
        const auto pick = t + rng.uniform_below(perm[i].size() - t);
        std::swap(perm[i][t], perm[i][pick]);
      }
    }
    for (std::size_t t = 0; t < m; ++t) {
      CoverEdge ce;
      for (std::size_t i = 0; i < e.size(); ++i) ce.push_back({e[i], perm[i][t]});
      edges.push_back(std::move(ce));
    }
  }
  return CorrespondenceCover(h, std::move(sizes), std::move(edges));
}

enum class GraphModel { Complete, Random, Gadget };

inline std::string to_string(GraphModel m) {
  switch (m) {
    case GraphModel::Complete: return "complete";
    case GraphModel::Random: return "random_kpp";
    case GraphModel::Gadget: return "gadget";
  }
  return "?";
}

inline GraphModel parse_graph_model(const std::string& s) {
  if (s == "complete") return GraphModel::Complete;
  if (s == "random_kpp" || s == "random") return GraphModel::Random;
  if (s == "gadget") return GraphModel::Gadget;
  throw InvalidInput("unknown graph model '" + s + "'");
}

/// One instance family. For gadgets n is the number of star edges and
/// p >= 0.5 selects the shared-vertex variant.
struct GenSpec {
  GraphModel model = GraphModel::Complete;
  std::size_t k = 2;
  std::size_t n = 1;
  double p = 1.0;
  ListSpec lists;
  std::uint64_t seed = 0;
};

struct Instance {
  PartiteHypergraph graph;
  ListAssignment lists;
};

inline Instance generate(const GenSpec& spec) {
  PartiteHypergraph h;
  switch (spec.model) {
    case GraphModel::Complete: h = gen_complete(spec.k, spec.n); break;
    case GraphModel::Random: h = gen_random(spec.k, spec.n, spec.p, spec.seed); break;
    case GraphModel::Gadget: h = gen_gadget(spec.k, spec.n, spec.p >= 0.5); break;
  }
  auto lists = gen_lists(h, spec.lists, hash_combine(spec.seed, 0x11575ULL));
  return {std::move(h), std::move(lists)};
}

}  // namespace hlc
