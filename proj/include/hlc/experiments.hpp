#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "hlc/conditions.hpp"
#include "hlc/errors.hpp"
#include "hlc/generators.hpp"
#include "hlc/lists.hpp"
#include "hlc/rng.hpp"
#include "hlc/solver.hpp"

namespace hlc {

enum class Probe { Lemma41, SolverSuccess };

inline std::string to_string(Probe p) { return p == Probe::Lemma41 ? "lemma41" : "solver_success"; }

inline Probe parse_probe(const std::string& s) {
  if (s == "lemma41") return Probe::Lemma41;
  if (s == "solver_success") return Probe::SolverSuccess;
  throw InvalidInput("unknown probe '" + s + "'");
}

/// Default seed base, from HLC_SEED when set.
inline std::uint64_t default_seed_base() {
  if (const char* env = std::getenv("HLC_SEED")) {
    char* end = nullptr;
    const auto v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0') return v;
  }
  return 0;
}

/// lemma41 fixes one instance per cell and estimates P[L_phi(v) empty] for
/// v = (j, 0) over random partial colorings. solver_success draws a fresh
/// instance per trial and records whether moser_tardos_solve succeeds. The
/// seed field of each GenSpec is ignored; seeds come from seed_base.
struct Campaign {
  std::string name = "campaign";
  std::vector<GenSpec> cells;
  Probe probe = Probe::Lemma41;
  std::size_t trials = 1;
  std::uint64_t seed_base = default_seed_base();
  std::optional<std::size_t> j;
  std::size_t max_resamples = 10000;
  std::size_t threads = 0;  // 0 = hardware concurrency
  std::string output;       // empty = caller decides
  std::optional<std::uint64_t> shuffle_seed;  // run tasks in a seeded random order
};

struct CellResult {
  std::size_t cell = 0;
  GenSpec spec;
  std::size_t j = 0;
  std::size_t trials = 0;
  double estimate = 0.0;
  std::optional<double> bound;
  double stderr_ = 0.0;
  std::string verdict;
  double mean_resamples = 0.0;
};

inline std::uint64_t cell_seed(std::uint64_t base, std::size_t cell) { return hash_combine(base, cell); }

inline std::uint64_t trial_seed(std::uint64_t base, std::size_t cell, std::size_t trial) {
  return hash_combine(cell_seed(base, cell), trial);
}

namespace detail {

/// Runs fn(0..n-1) on a pool of worker threads; the first exception thrown
/// by any task is rethrown after all workers stop.
template <class F>
void parallel_for(std::size_t n, std::size_t threads, F&& fn) {
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(n, 1));
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < n && !failed; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

template <class E>
[[noreturn]] void rethrow_with_cell(const E& e, std::size_t cell) {
  throw E("cell " + std::to_string(cell) + ": " + e.what());
}

template <class F>
void with_cell_context(std::size_t cell, F&& fn) {
  try {
    fn();
  } catch (const InfeasibleList& e) {
    throw InvalidInput("cell " + std::to_string(cell) + ": " + e.what());
  } catch (const InvalidInput& e) {
    rethrow_with_cell(e, cell);
  } catch (const CapExceeded& e) {
    rethrow_with_cell(e, cell);
  }
}

inline GenSpec seeded(GenSpec spec, std::uint64_t seed) {
  spec.seed = seed;
  return spec;
}

struct TrialRecord {
  bool hit = false;
  std::size_t resamples = 0;
};

}  // namespace detail

/// Runs every (cell, trial) pair on a worker pool. Each trial owns an Rng
/// stream derived from (seed_base, cell, trial), so the result does not
/// depend on scheduling. Rows come back in cell order.
inline std::vector<CellResult> run_campaign(const Campaign& c) {
  if (c.trials < 1) throw InvalidInput("trials must be at least 1");
  const std::size_t cells = c.cells.size();

  std::vector<std::optional<Instance>> fixed(cells);
  std::vector<std::size_t> parts(cells);
  for (std::size_t i = 0; i < cells; ++i) {
    parts[i] = c.j.value_or(c.cells[i].k - 1);
    if (parts[i] >= c.cells[i].k) throw InvalidInput("cell " + std::to_string(i) + ": j out of range");
  }
  if (c.probe == Probe::Lemma41) {
    detail::parallel_for(cells, c.threads, [&](std::size_t i) {
      detail::with_cell_context(i, [&] {
        Instance inst = generate(detail::seeded(c.cells[i], cell_seed(c.seed_base, i)));
        if (inst.graph.part_size(parts[i]) == 0) throw InvalidInput("part j is empty");
        fixed[i] = std::move(inst);
      });
    });
  }

  std::vector<detail::TrialRecord> records(cells * c.trials);
  std::vector<std::size_t> order(records.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (c.shuffle_seed) {
    Rng rng(*c.shuffle_seed);
    for (std::size_t t = order.size(); t > 1; --t) std::swap(order[t - 1], order[rng.uniform_below(t)]);
  }
  detail::parallel_for(records.size(), c.threads, [&](std::size_t slot) {
    const std::size_t task = order[slot];
    const std::size_t i = task / c.trials;
    const std::size_t t = task % c.trials;
    const std::uint64_t seed = trial_seed(c.seed_base, i, t);
    detail::with_cell_context(i, [&] {
      auto& rec = records[task];
      if (c.probe == Probe::Lemma41) {
        const Instance& inst = *fixed[i];
        Rng rng(seed);
        const auto phi = random_partial_coloring(inst.graph, inst.lists, parts[i], rng);
        rec.hit = residual_list(inst.graph, inst.lists, phi, VertexId{static_cast<std::uint32_t>(parts[i]), 0}).empty();
        return;
      }
      const Instance inst = generate(detail::seeded(c.cells[i], hash_combine(seed, 0x1257ULL)));
      SolverConfig cfg;
      cfg.j = c.j;
      cfg.seed = seed;
      cfg.max_resamples = c.max_resamples;
      try {
        const auto out = moser_tardos_solve(inst.graph, inst.lists, cfg);
        rec.hit = out.success();
        rec.resamples = out.resample_count;
      } catch (const InfeasibleList&) {
        rec.hit = false;
      }
    });
  });

  std::vector<CellResult> rows(cells);
  for (std::size_t i = 0; i < cells; ++i) {
    CellResult& r = rows[i];
    r.cell = i;
    r.spec = c.cells[i];
    r.j = parts[i];
    r.trials = c.trials;
    std::size_t hits = 0;
    double resamples = 0.0;
    for (std::size_t t = 0; t < c.trials; ++t) {
      hits += records[i * c.trials + t].hit ? 1 : 0;
      resamples += static_cast<double>(records[i * c.trials + t].resamples);
    }
    const double n = static_cast<double>(c.trials);
    r.estimate = static_cast<double>(hits) / n;
    r.stderr_ = std::sqrt(r.estimate * (1.0 - r.estimate) / n);
    r.mean_resamples = resamples / n;
    if (c.probe == Probe::Lemma41) {
      const Instance& inst = *fixed[i];
      const VertexId v{static_cast<std::uint32_t>(r.j), 0};
      const auto profile = color_degree_profile(inst.graph, inst.lists);
      ParamVector pv;
      pv.k = inst.graph.k();
      pv.j = r.j;
      for (std::size_t p = 0; p < pv.k; ++p) pv.q.push_back(static_cast<double>(profile.q[p]));
      pv.q[r.j] = static_cast<double>(inst.lists.list(inst.graph.flat(v)).size());
      r.bound = lemma_41_bound(pv, static_cast<double>(sum_color_degrees(inst.graph, inst.lists, v)));
      r.verdict = r.estimate <= *r.bound + 3.0 * r.stderr_ ? "ok" : "violated";
    } else {
      r.verdict = "n/a";
    }
  }
  return rows;
}

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

inline std::string fmt12(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

inline std::string join_sizes(const std::vector<std::size_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

}  // namespace detail

inline std::string to_csv(const Campaign& c, const std::vector<CellResult>& rows) {
  std::ostringstream out;
  out << "campaign,probe,cell,model,k,n,p,list_model,q,palette,j,trials,estimate,bound,stderr,verdict,mean_resamples\r\n";
  for (const auto& r : rows) {
    const std::vector<std::string> fields{
        c.name,
        to_string(c.probe),
        std::to_string(r.cell),
        to_string(r.spec.model),
        std::to_string(r.spec.k),
        std::to_string(r.spec.n),
        detail::fmt12(r.spec.p),
        to_string(r.spec.lists.model),
        detail::join_sizes(r.spec.lists.q),
        std::to_string(r.spec.lists.palette),
        std::to_string(r.j),
        std::to_string(r.trials),
        detail::fmt12(r.estimate),
        r.bound ? detail::fmt12(*r.bound) : std::string(),
        detail::fmt12(r.stderr_),
        r.verdict,
        detail::fmt12(r.mean_resamples),
    };
    for (std::size_t i = 0; i < fields.size(); ++i) out << (i ? "," : "") << detail::csv_field(fields[i]);
    out << "\r\n";
  }
  return out.str();
}

inline void write_csv(const std::string& path, const std::string& csv) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidInput("cannot open '" + path + "' for writing");
  f << csv;
  if (!f) throw InvalidInput("write to '" + path + "' failed");
}

namespace detail {

using json = nlohmann::json;

template <class T>
std::vector<T> one_or_many(const json& j, const std::string& key, T fallback) {
  if (!j.contains(key)) return {fallback};
  const json& v = j[key];
  try {
    if (v.is_array()) return v.get<std::vector<T>>();
    return {v.get<T>()};
  } catch (const json::exception&) {
    throw InvalidInput("key '" + key + "' has the wrong type");
  }
}

}  // namespace detail

/// Campaign from JSON. "grid" maps model, k, n, p, q, palette to a value or
/// an array of values; cells are the cartesian product in that nesting order
/// (q varies fastest). q entries may be numbers or per-part arrays.
inline Campaign campaign_from_json(const nlohmann::json& j) {
  using detail::json;
  if (!j.is_object()) throw InvalidInput("campaign must be a JSON object");
  Campaign c;
  try {
    c.name = j.value("name", c.name);
    c.probe = parse_probe(j.value("probe", std::string("lemma41")));
    const auto trials = j.value("trials", std::int64_t{1});
    if (trials < 1) throw InvalidInput("key 'trials' must be at least 1");
    c.trials = static_cast<std::size_t>(trials);
    if (j.contains("seed_base")) c.seed_base = j["seed_base"].get<std::uint64_t>();
    if (j.contains("j")) c.j = j["j"].get<std::size_t>();
    c.max_resamples = j.value("max_resamples", c.max_resamples);
    c.threads = j.value("threads", c.threads);
    c.output = j.value("output", c.output);
    if (j.contains("shuffle_seed")) c.shuffle_seed = j["shuffle_seed"].get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("campaign: ") + e.what());
  }
  if (!j.contains("grid")) throw InvalidInput("missing key 'grid'");
  const json& g = j["grid"];
  if (!g.is_object()) throw InvalidInput("key 'grid' must be an object");

  const auto models = detail::one_or_many<std::string>(g, "model", "complete");
  const auto ks = detail::one_or_many<std::size_t>(g, "k", 2);
  const auto ns = detail::one_or_many<std::size_t>(g, "n", 2);
  const auto ps = detail::one_or_many<double>(g, "p", 1.0);
  const auto palettes = detail::one_or_many<std::size_t>(g, "palette", 0);
  const auto list_model = parse_list_model(g.value("lists", std::string("uniform_q")));
  std::vector<std::vector<std::size_t>> qs;
  if (!g.contains("q")) {
    qs.push_back({1});
  } else if (!g["q"].is_array()) {
    qs.push_back({detail::one_or_many<std::size_t>(g, "q", 1).front()});
  } else {
    for (const auto& q : g["q"]) {
      if (q.is_array()) qs.push_back(q.get<std::vector<std::size_t>>());
      else if (q.is_number_unsigned()) qs.push_back({q.get<std::size_t>()});
      else throw InvalidInput("key 'grid.q' entries must be sizes or arrays of sizes");
    }
  }
  for (const auto& m : models)
    for (auto k : ks)
      for (auto n : ns)
        for (auto p : ps)
          for (auto pal : palettes)
            for (const auto& q : qs) {
              GenSpec s;
              s.model = parse_graph_model(m);
              s.k = k;
              s.n = n;
              s.p = p;
              s.lists.model = list_model;
              s.lists.q = q;
              s.lists.palette = pal;
              c.cells.push_back(s);
            }
  return c;
}

}  // namespace hlc
