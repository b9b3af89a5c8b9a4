#pragma once

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hlc/conditions.hpp"
#include "hlc/correspondence.hpp"
#include "hlc/errors.hpp"
#include "hlc/hypergraph.hpp"
#include "hlc/lists.hpp"

// JSON file formats:
//   graph     {"k": 3, "parts": [2,2,2], "edges": [[[0,0],[1,0],[2,0]], ...]}
//   lists     {"lists": {"0:0": [1,2], ...}}
//   coloring  {"colors": {"0:0": 1, ...}}            (partial maps allowed)
//   cover     {"list_sizes": {"0:0": 2, ...}, "cover_edges": [[[0,0,1],[1,0,0]], ...]}
//   params    {"k": 2, "j": 1, "q": [...], "D": [...], "Delta": [...], "eps": 0.5}

namespace hlc::io {

using json = nlohmann::json;

inline json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidInput("'" + path + "' is not valid JSON: " + e.what());
  }
}

inline json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("invalid JSON: ") + e.what());
  }
}

namespace detail {

inline const json& require_key(const json& j, const std::string& key) {
  if (!j.is_object()) throw InvalidInput("expected a JSON object holding key '" + key + "'");
  const auto it = j.find(key);
  if (it == j.end()) throw InvalidInput("missing key '" + key + "'");
  return *it;
}

inline std::uint64_t as_count(const json& v, const std::string& where) {
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    throw InvalidInput("key '" + where + "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

inline double as_number(const json& v, const std::string& where) {
  if (!v.is_number()) throw InvalidInput("key '" + where + "' must be a number");
  return v.get<double>();
}

inline std::vector<double> as_numbers(const json& v, const std::string& where) {
  if (!v.is_array()) throw InvalidInput("key '" + where + "' must be an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_number(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

}  // namespace detail

/// Parses "part:index".
inline VertexId parse_vertex_key(const std::string& key) {
  const auto colon = key.find(':');
  auto number = [&](std::size_t begin, std::size_t end, std::uint32_t& out) {
    const auto r = std::from_chars(key.data() + begin, key.data() + end, out);
    return begin < end && r.ec == std::errc() && r.ptr == key.data() + end;
  };
  VertexId v{};
  if (colon == std::string::npos || !number(0, colon, v.part) || !number(colon + 1, key.size(), v.index)) {
    throw InvalidInput("vertex key '" + key + "' is not of the form part:index");
  }
  return v;
}

inline json to_json(const PartiteHypergraph& h) {
  json edges = json::array();
  for (const Edge& e : h.edges()) {
    json je = json::array();
    for (const VertexId& v : e) je.push_back({v.part, v.index});
    edges.push_back(std::move(je));
  }
  return {{"k", h.k()}, {"parts", std::vector<std::size_t>(h.part_sizes().begin(), h.part_sizes().end())},
          {"edges", std::move(edges)}};
}

/// Rejects non-transversal edges and edges not sorted by part.
inline PartiteHypergraph graph_from_json(const json& j) {
  const auto k = detail::as_count(detail::require_key(j, "k"), "k");
  const json& parts = detail::require_key(j, "parts");
  if (!parts.is_array() || parts.size() != k) throw InvalidInput("key 'parts' must be an array of k sizes");
  std::vector<std::size_t> sizes;
  for (std::size_t i = 0; i < parts.size(); ++i) sizes.push_back(detail::as_count(parts[i], "parts[" + std::to_string(i) + "]"));

  const json& jedges = detail::require_key(j, "edges");
  if (!jedges.is_array()) throw InvalidInput("key 'edges' must be an array");
  std::vector<Edge> edges;
  for (std::size_t ei = 0; ei < jedges.size(); ++ei) {
    const std::string where = "edges[" + std::to_string(ei) + "]";
    const json& je = jedges[ei];
    if (!je.is_array() || je.size() != k) throw InvalidInput("key '" + where + "' must list k vertices");
    Edge e;
    for (std::size_t t = 0; t < je.size(); ++t) {
      const json& jv = je[t];
      const std::string vw = where + "[" + std::to_string(t) + "]";
      if (!jv.is_array() || jv.size() != 2) throw InvalidInput("key '" + vw + "' must be [part, index]");
      const VertexId v{static_cast<std::uint32_t>(detail::as_count(jv[0], vw)),
                       static_cast<std::uint32_t>(detail::as_count(jv[1], vw))};
      if (v.part != t) throw InvalidInput("key '" + where + "' is not transversal and sorted by part");
      e.push_back(v);
    }
    edges.push_back(std::move(e));
  }
  return PartiteHypergraph(std::move(sizes), std::move(edges));
}

namespace detail {

/// Reads a {"p:i": value} object covering every vertex of h exactly once.
template <class F>
void read_vertex_map(const PartiteHypergraph& h, const json& obj, const std::string& name, bool total, F&& on_entry) {
  if (!obj.is_object()) throw InvalidInput("key '" + name + "' must be an object keyed by part:index");
  std::vector<bool> seen(h.num_vertices(), false);
  for (const auto& [key, value] : obj.items()) {
    const VertexId v = parse_vertex_key(key);
    if (!h.contains(v)) throw InvalidInput("key '" + name + "." + key + "' names no vertex of the graph");
    seen[h.flat(v)] = true;
    on_entry(h.flat(v), value, name + "." + key);
  }
  if (!total) return;
  for (std::size_t f = 0; f < seen.size(); ++f) {
    if (!seen[f]) throw InvalidInput("key '" + name + "' is missing vertex '" + to_string(h.vertex(f)) + "'");
  }
}

}  // namespace detail

inline json to_json(const PartiteHypergraph& h, const ListAssignment& lists) {
  json obj = json::object();
  for (std::size_t f = 0; f < h.num_vertices(); ++f) {
    const auto l = lists.list(f);
    obj[to_string(h.vertex(f))] = std::vector<Color>(l.begin(), l.end());
  }
  return {{"lists", std::move(obj)}};
}

inline ListAssignment lists_from_json(const PartiteHypergraph& h, const json& j) {
  std::vector<std::vector<Color>> lists(h.num_vertices());
  detail::read_vertex_map(h, detail::require_key(j, "lists"), "lists", true,
                          [&](std::size_t f, const json& v, const std::string& where) {
                            if (!v.is_array()) throw InvalidInput("key '" + where + "' must be an array of colors");
                            for (const auto& c : v) {
                              if (!c.is_number_integer()) throw InvalidInput("key '" + where + "' must hold integer colors");
                              lists[f].push_back(c.get<Color>());
                            }
                          });
  return ListAssignment(std::move(lists));
}

inline json coloring_to_json(const PartiteHypergraph& h, const Coloring& phi) {
  json obj = json::object();
  for (std::size_t f = 0; f < phi.size(); ++f) {
    if (phi.assigned(f)) obj[to_string(h.vertex(f))] = *phi[f];
  }
  return {{"colors", std::move(obj)}};
}

inline Coloring coloring_from_json(const PartiteHypergraph& h, const json& j) {
  Coloring phi(h.num_vertices());
  detail::read_vertex_map(h, detail::require_key(j, "colors"), "colors", false,
                          [&](std::size_t f, const json& v, const std::string& where) {
                            if (!v.is_number_integer()) throw InvalidInput("key '" + where + "' must be an integer color");
                            phi.set(f, v.get<Color>());
                          });
  return phi;
}

inline json to_json(const PartiteHypergraph& h, const CorrespondenceCover& cover) {
  json sizes = json::object();
  for (std::size_t f = 0; f < h.num_vertices(); ++f) sizes[to_string(h.vertex(f))] = cover.list_size(f);
  json edges = json::array();
  for (const auto& e : cover.edges()) {
    json je = json::array();
    for (const auto& c : e) je.push_back({c.owner.part, c.owner.index, c.slot});
    edges.push_back(std::move(je));
  }
  return {{"list_sizes", std::move(sizes)}, {"cover_edges", std::move(edges)}};
}

inline CorrespondenceCover cover_from_json(const PartiteHypergraph& h, const json& j) {
  std::vector<std::size_t> sizes(h.num_vertices(), 0);
  detail::read_vertex_map(h, detail::require_key(j, "list_sizes"), "list_sizes", true,
                          [&](std::size_t f, const json& v, const std::string& where) { sizes[f] = detail::as_count(v, where); });
  const json& jedges = detail::require_key(j, "cover_edges");
  if (!jedges.is_array()) throw InvalidInput("key 'cover_edges' must be an array");
  std::vector<CoverEdge> edges;
  for (std::size_t ci = 0; ci < jedges.size(); ++ci) {
    const std::string where = "cover_edges[" + std::to_string(ci) + "]";
    const json& je = jedges[ci];
    if (!je.is_array()) throw InvalidInput("key '" + where + "' must be an array of [part, index, slot]");
    CoverEdge ce;
    for (const auto& jc : je) {
      if (!jc.is_array() || jc.size() != 3) throw InvalidInput("key '" + where + "' must hold [part, index, slot] triples");
      ce.push_back({{static_cast<std::uint32_t>(detail::as_count(jc[0], where)), static_cast<std::uint32_t>(detail::as_count(jc[1], where))},
                    static_cast<std::uint32_t>(detail::as_count(jc[2], where))});
    }
    edges.push_back(std::move(ce));
  }
  return CorrespondenceCover(h, std::move(sizes), std::move(edges));
}

/// "j" defaults to the last part; "q", "D", "Delta" and "eps" are optional
/// and only required by the evaluators that read them.
inline ParamVector params_from_json(const json& j) {
  ParamVector pv;
  pv.k = detail::as_count(detail::require_key(j, "k"), "k");
  if (pv.k < 2) throw InvalidInput("key 'k' must be at least 2");
  pv.j = j.contains("j") ? detail::as_count(j["j"], "j") : pv.k - 1;
  if (pv.j >= pv.k) throw InvalidInput("key 'j' must be below k");
  if (j.contains("q")) {
    pv.q = detail::as_numbers(j["q"], "q");
    if (pv.q.size() != pv.k) throw InvalidInput("key 'q' must have k entries");
  }
  if (j.contains("D")) {
    pv.D = detail::as_numbers(j["D"], "D");
    if (pv.D.size() != pv.k) throw InvalidInput("key 'D' must have k entries");
  }
  if (j.contains("Delta")) {
    pv.Delta = detail::as_numbers(j["Delta"], "Delta");
    if (pv.Delta.size() != pv.k) throw InvalidInput("key 'Delta' must have k entries");
  }
  if (j.contains("eps")) pv.eps = detail::as_number(j["eps"], "eps");
  return pv;
}

inline json to_json(const ParamVector& pv) {
  json j = {{"k", pv.k}, {"j", pv.j}};
  if (!pv.q.empty()) j["q"] = pv.q;
  if (!pv.D.empty()) j["D"] = pv.D;
  if (!pv.Delta.empty()) j["Delta"] = pv.Delta;
  if (pv.eps > 0) j["eps"] = pv.eps;
  return j;
}

}  // namespace hlc::io
