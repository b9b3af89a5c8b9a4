// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "hlc/conditions.hpp"
#include "hlc/correspondence.hpp"
#include "hlc/generators.hpp"
#include "hlc/io.hpp"
#include "hlc/oracle.hpp"
#include "hlc/solver.hpp"
#include "support/fixtures.hpp"
#include "support/precise.hpp"

using namespace hlc;
using precise::Big;

namespace {

constexpr double kRelTol = 1e-9;
constexpr double kOutcomeLimit = 1e5;

struct Outcome {
  bool ok = true;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

/// Relative error against the high-precision value, scaled by max(1, |want|)
/// as for log-domain quantities. Matching infinities count as exact.
double log_err(double got, const Big& want) {
  if (boost::multiprecision::isinf(want)) return got == static_cast<double>(want) ? 0.0 : INFINITY;
  const Big mag = boost::multiprecision::abs(want);
  return static_cast<double>(boost::multiprecision::abs(Big(got) - want) / (mag > 1 ? mag : Big(1)));
}

/// Plain relative error for probabilities.
double value_err(double got, const Big& want) {
  if (want == 0) return got == 0.0 ? 0.0 : INFINITY;
  return static_cast<double>(boost::multiprecision::abs(Big(got) - want) / want);
}

// 1
Outcome formula_fidelity() {
  const std::vector<double> values{1, 2, 5, 10, 1e2, 1e4, 1e6};
  Rng rng(2024);
  double worst = 0.0;
  std::size_t checks = 0;
  auto track = [&](double e) {
    worst = std::max(worst, e);
    ++checks;
  };
  for (std::size_t k : {2, 3, 4}) {
    for (int trial = 0; trial < 300; ++trial) {
      ParamVector pv;
      pv.k = k;
      pv.j = rng.uniform_below(k);
      for (std::size_t i = 0; i < k; ++i) {
        pv.q.push_back(values[rng.uniform_below(values.size())]);
        pv.D.push_back(values[rng.uniform_below(values.size())]);
        pv.Delta.push_back(values[rng.uniform_below(values.size())]);
      }
      for (Condition c : {Condition::C1, Condition::C2, Condition::C3}) {
        const auto got = evaluate(c, pv);
        const auto want = precise::evaluate(c, pv);
        track(log_err(got.lhs_log, want.lhs));
        track(log_err(got.rhs_log, want.rhs));
      }
      for (double s : {0.0, 1.0, 3.0, 10.0, 100.0, 1e4}) {
        track(log_err(lemma_41_log_bound(pv, s), precise::safe_log(precise::lemma_41(pv, s))));
        track(value_err(claim_31_bound(pv, s), precise::claim_31(pv, s)));
      }
    }
  }
  for (std::size_t k : {2, 3, 4, 5}) {
    for (double eps : {0.1, 0.5, 1.0, 2.0}) {
      for (double delta : {3.0, 10.0, std::exp(4.0), 1e3, 1e6, 1e9, 1e15}) {
        const Big raw = precise::main_theorem_raw(k, eps, delta);
        const Big want = boost::multiprecision::ceil(raw);
        // values within float noise of an integer may round either way
        if (boost::multiprecision::abs(raw - boost::multiprecision::round(raw)) < Big(1e-9) * raw) continue;
        track(value_err(static_cast<double>(main_theorem_list_size(k, eps, delta)), want));
      }
    }
  }
  for (double p : {0.0, 1e-12, 1e-6, 1e-3, 0.05, 0.3, 0.9}) {
    for (double d : {0.0, 1.0, 10.0, 1e3, 1e9}) {
      const auto v = lll_verdict(p, d);
      const Big want = precise::lll_lhs(p, d);
      track(log_err(v.lhs_log, want));
      if (v.satisfied != (want <= 0)) track(INFINITY);
    }
  }
  return {worst <= kRelTol, fmt("max rel err %.3g over %zu comparisons (tol %.0e)", worst, checks, kRelTol)};
}

// 2
Outcome corollary_reproduction() {
  Outcome o;
  auto confirm = [&](const char* name, const CorollaryReport& r, Condition want) {
    const auto direct = evaluate(r.witness_condition, r.witness);
    const auto hp = precise::evaluate(r.witness_condition, r.witness);
    const bool ok = r.satisfied() && r.witness_condition == want && direct.satisfied && hp.lhs <= hp.rhs;
    o.ok = o.ok && ok;
    o.detail += fmt("%s%s via %s margin %.6g", o.detail.empty() ? "" : "; ", name, to_string(r.witness_condition).c_str(),
                    r.verdict.margin);
  };

  ParamVector skewed;
  skewed.k = 2;
  skewed.D = {1e6, 10};
  const auto r15 = check_corollary_15(skewed, 1.0);
  confirm("skewed D=(1e6,10)", r15, Condition::C1);
  o.ok = o.ok && std::abs(std::exp(r15.verdict.lhs_log) - 175.158) < 1e-3 && std::abs(std::exp(r15.verdict.rhs_log) - 1e6) < 1e-3;

  const auto r16 = check_corollary_16(2, 1.0, 1e7, 2);
  confirm("max-degree Delta=1e7", r16, Condition::C3);
  o.ok = o.ok && r16.witness.q == std::vector<double>{17, 1240842};

  ParamVector balanced;
  balanced.k = 2;
  balanced.D = {1e6, 1e6};
  const auto r17 = check_corollary_17(balanced, 1.0);
  confirm("balanced D=1e6", r17, Condition::C2);
  o.ok = o.ok && r17.case_used == 2 && r17.witness.q == std::vector<double>{144765, 144765};
  return o;
}

/// Nonempty subsets of {1, .., palette}.
std::vector<std::vector<Color>> nonempty_subsets(int palette) {
  std::vector<std::vector<Color>> out;
  for (int m = 1; m < (1 << palette); ++m) {
    std::vector<Color> s;
    for (int c = 0; c < palette; ++c) {
      if (m >> c & 1) s.push_back(c + 1);
    }
    out.push_back(std::move(s));
  }
  return out;
}

/// Every edge subset of the complete k-partite hypergraph with these part sizes.
std::vector<PartiteHypergraph> all_subgraphs(const std::vector<std::size_t>& sizes) {
  std::vector<Edge> all{{}};
  for (std::size_t p = 0; p < sizes.size(); ++p) {
    std::vector<Edge> next;
    for (const Edge& e : all) {
      for (std::uint32_t i = 0; i < sizes[p]; ++i) {
        Edge f = e;
        f.push_back({static_cast<std::uint32_t>(p), i});
        next.push_back(std::move(f));
      }
    }
    all = std::move(next);
  }
  std::vector<PartiteHypergraph> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << all.size()); ++mask) {
    std::vector<Edge> chosen;
    for (std::size_t t = 0; t < all.size(); ++t) {
      if (mask >> t & 1U) chosen.push_back(all[t]);
    }
    out.emplace_back(sizes, chosen);
  }
  return out;
}

// 3
Outcome empty_residual_exhaustive() {
  const auto subsets = nonempty_subsets(3);
  std::size_t checked = 0, violations = 0;
  double worst_ratio = 0.0;
  for (std::size_t k : {2, 3}) {
    for (std::size_t j = 0; j < k; ++j) {
      // part j holds only v; every other part has one or two vertices
      for (std::size_t shape = 0; shape < (std::size_t{1} << (k - 1)); ++shape) {
        std::vector<std::size_t> sizes(k, 1);
        std::size_t bit = 0;
        for (std::size_t i = 0; i < k; ++i) {
          if (i != j) sizes[i] = 1 + (shape >> bit++ & 1U);
        }
        for (const auto& h : all_subgraphs(sizes)) {
          std::size_t total = 1;
          for (std::size_t f = 0; f < h.num_vertices(); ++f) total *= subsets.size();
          for (std::size_t code = 0; code < total; ++code) {
            std::vector<std::vector<Color>> lists(h.num_vertices());
            std::size_t c = code;
            for (auto& l : lists) {
              l = subsets[c % subsets.size()];
              c /= subsets.size();
            }
            const auto r = verify_lemma_41(h, ListAssignment(lists), j, {static_cast<std::uint32_t>(j), 0});
            if (!r.ok) ++violations;
            if (r.bound > 0) worst_ratio = std::max(worst_ratio, to_double(r.exact) / r.bound);
            ++checked;
          }
        }
      }
    }
  }
  return {violations == 0 && checked > 0,
          fmt("%zu instances, %zu violations, max exact/bound %.6g", checked, violations, worst_ratio)};
}

// 4
Outcome gadget_inequalities() {
  std::size_t checks = 0, violations = 0, tight = 0, tight_expected = 0;
  auto note = [&](bool ok) {
    ++checks;
    if (!ok) ++violations;
  };
  for (std::size_t k : {2, 3, 4}) {
    for (std::size_t n : {1, 2, 3, 4, 5}) {
      for (bool shared : {false, true}) {
        if (shared && k < 3) continue;
        const auto h = gen_gadget(k, n, shared);
        const auto others = static_cast<double>(h.num_vertices() - h.part_size(k - 1));
        for (std::size_t q : {1, 2, 3}) {
          if (std::pow(static_cast<double>(q), others) > kOutcomeLimit) continue;
          const auto L = ListAssignment::uniform(h.num_vertices(), q);
          const VertexId v{static_cast<std::uint32_t>(k - 1), 0};
          for (Color c : L.list(h.flat(v))) {
            const auto r = verify_claim_31(h, L, k - 1, v, c);
            note(r.ok);
            if (!shared) {
              ++tight_expected;
              if (std::abs(to_double(r.exact) - r.bound) <= 1e-12) ++tight;
            }
            const auto inst = color_loss_families(h, L, k - 1, v, c);
            const auto hr = verify_harris(inst.ground.size(), inst.families, inst.p);
            note(hr.ok && hr.intersection == 1 - r.exact);
          }
          for (const auto& row : verify_claim_32(h, L, k - 1, v)) note(row.ok);
        }
      }
    }
  }
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto h = gen_random(3, 2, 0.7, seed);
    const auto L = fx::random_lists(h, 3, 1, 3, seed);
    const VertexId v{2, static_cast<std::uint32_t>(seed % 2)};
    for (Color c : L.list(h.flat(v))) {
      const auto r = verify_claim_31(h, L, 2, v, c);
      note(r.ok);
      const auto inst = color_loss_families(h, L, 2, v, c);
      const auto hr = verify_harris(inst.ground.size(), inst.families, inst.p);
      note(hr.ok && hr.intersection == 1 - r.exact);
    }
    for (const auto& row : verify_claim_32(h, L, 2, v)) note(row.ok);
  }
  bool rejected = false;
  try {
    (void)verify_harris(2, {[](std::uint32_t m) { return (m & 1U) != 0; }}, {Rational(1, 2), Rational(1, 2)});
  } catch (const InvalidInput&) {
    rejected = true;
  }
  return {violations == 0 && tight == tight_expected && rejected,
          fmt("%zu checks, %zu violations, disjoint tight %zu/%zu, planted increasing family %s", checks, violations,
              tight, tight_expected, rejected ? "rejected" : "ACCEPTED")};
}

std::string transcript(const PartiteHypergraph& h, const SolveOutcome& r) {
  nlohmann::json doc = io::coloring_to_json(h, r.coloring);
  doc["status"] = to_string(r.status);
  doc["resamples"] = r.resample_count;
  doc["j"] = r.j;
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& ev : r.trace) {
    nlohmann::json vs = nlohmann::json::array();
    for (VertexId u : ev.resampled) vs.push_back(to_string(u));
    trace.push_back({to_string(ev.v), vs});
  }
  doc["trace"] = trace;
  return doc.dump();
}

// 5
Outcome solver_soundness() {
  std::size_t successes = 0, improper = 0, mismatched = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const std::size_t k = 2 + seed % 3;
    const std::size_t n = 3 + seed % 5;
    const double p = 0.1 + 0.1 * static_cast<double>(seed % 6);
    const auto h = gen_random(k, n, p, seed);
    const std::size_t q = 1 + seed % 5;
    const auto L = gen_lists(h, {ListModelKind::PaletteRandom, {q}, q + 1}, seed ^ 0x5eed);
    SolverConfig cfg;
    cfg.seed = seed * 7919 + 1;
    cfg.max_resamples = 500;
    cfg.record_trace = true;
    const auto a = moser_tardos_solve(h, L, cfg);
    const auto b = moser_tardos_solve(h, L, cfg);
    if (transcript(h, a) != transcript(h, b)) ++mismatched;
    if (a.success()) {
      ++successes;
      if (!is_proper_L_coloring(h, L, a.coloring)) ++improper;
    }
  }
  return {improper == 0 && mismatched == 0 && successes > 0,
          fmt("1000 solves, %zu successes, %zu improper, %zu non-identical reruns", successes, improper, mismatched)};
}

// 6
Outcome solver_under_c2() {
  std::size_t instances = 0, successes = 0, skipped = 0, max_D = 0;
  double resamples = 0.0;
  for (std::uint64_t seed = 0; instances < 100; ++seed) {
    const auto h = gen_random(2, 150, 0.12, seed);
    const auto L = ListAssignment::uniform(h.num_vertices(), 40);
    const auto prof = color_degree_profile(h, L);
    const auto pv = detail::params_from(2, 1, prof.q, prof.D, prof.Delta);
    if (*std::max_element(prof.D.begin(), prof.D.end()) > 40 || !eval_c2(pv).satisfied) {
      ++skipped;
      continue;
    }
    max_D = std::max(max_D, *std::max_element(prof.D.begin(), prof.D.end()));
    SolverConfig cfg;
    cfg.seed = seed;
    cfg.j = 1;
    cfg.regime = Regime::C2;
    cfg.max_resamples = 10000;
    const auto r = moser_tardos_solve(h, L, cfg);
    ++instances;
    if (r.success() && is_proper_L_coloring(h, L, r.coloring)) ++successes;
    resamples += static_cast<double>(r.resample_count);
  }
  const double rate = static_cast<double>(successes) / static_cast<double>(instances);
  return {rate >= 0.99, fmt("success %zu/%zu (need >= 99%%), mean resamples %.4g, max D %zu, %zu draws skipped", successes,
                            instances, resamples / static_cast<double>(instances), max_D, skipped)};
}

// 7
Outcome correspondence_coherence() {
  std::size_t outcomes = 0, disagreements = 0, aux_checked = 0, aux_bad = 0, paired = 0, unpaired = 0;
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const std::size_t k = 2 + seed % 2;
    const auto h = gen_random(k, 2, 0.6, seed);
    const auto L = fx::random_lists(h, 3, 1, 3, seed + 5);
    const std::size_t j = seed % k;
    const auto cover = lift_list_assignment(h, L);
    const auto aux = build_aux_hypergraph(h, cover, j);
    detail::for_each_outcome(h, L, j, [&](const Coloring& phi) {
      Coloring slots(h.num_vertices());
      for (std::size_t f = 0; f < h.num_vertices(); ++f) {
        if (phi.assigned(f)) slots.set(f, static_cast<Color>(*L.slot_of(f, *phi[f])));
      }
      if (find_bad_vertices(h, L, phi, j) != aux_hits(aux, cover, slots)) ++disagreements;
      ++outcomes;
    });
  }
  for (std::uint64_t seed = 0; seed < 120; ++seed) {
    const std::size_t k = 2 + seed % 3;
    const auto h = gen_random(k, 3, 0.5, seed);
    std::vector<std::size_t> q(k);
    for (std::size_t i = 0; i < k; ++i) q[i] = 1 + (seed + i) % 3;
    const std::size_t j = seed % k;
    const auto cover = seed % 2 ? gen_adversarial_cover(h, q, seed) : lift_list_assignment(h, gen_lists(h, {ListModelKind::PerPartQ, q, 0}, 0));
    const auto aux = build_aux_hypergraph(h, cover, j);
    const bool ok = check_aux_sizes(h, aux, q[j]).ok && check_aux_degrees(h, cover, aux, q[j]).ok;
    ++aux_checked;
    if (!ok) ++aux_bad;
  }
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const std::size_t k = 2 + seed % 3;
    const auto h = gen_random(k, 4, 0.35, seed);
    const auto L = gen_lists(h, {ListModelKind::PaletteRandom, {2 + seed % 4}, 6}, seed);
    SolverConfig cfg;
    cfg.seed = seed * 31 + 7;
    cfg.j = seed % k;
    cfg.record_trace = true;
    cfg.max_resamples = 300;
    const auto a = moser_tardos_solve(h, L, cfg);
    const auto b = dp_solve(h, lift_list_assignment(h, L), cfg);
    bool same = a.status == b.status && a.resample_count == b.resample_count && a.trace == b.trace;
    for (std::size_t f = 0; same && f < h.num_vertices(); ++f) {
      same = a.coloring.assigned(f) == b.coloring.assigned(f) &&
             (!b.coloring.assigned(f) || *a.coloring[f] == L.list(f)[static_cast<std::size_t>(*b.coloring[f])]);
    }
    ++paired;
    if (!same) ++unpaired;
  }
  return {disagreements == 0 && outcomes > 1000 && aux_bad == 0 && unpaired == 0,
          fmt("%zu outcomes, %zu bad-vertex disagreements; %zu aux hypergraphs, %zu size/degree failures; "
              "%zu paired solves, %zu differ",
              outcomes, disagreements, aux_checked, aux_bad, paired, unpaired)};
}

// 8
Outcome named_constants() {
  const double b2 = corollary_16_base(2), b3 = corollary_16_base(3);
  bool ok = b2 == 4.0 && std::abs(b3 - 64.0 / 27.0) <= 1e-15;
  std::string degrees;
  for (std::size_t k : {2, 3}) {
    for (std::size_t n : {2, 3, 4}) {
      const auto h = gen_complete(k, n);
      const auto want = static_cast<std::size_t>(std::pow(static_cast<double>(n), static_cast<double>(k - 1)));
      const auto got = h.max_degrees();
      ok = ok && std::all_of(got.begin(), got.end(), [&](std::size_t d) { return d == want; });
    }
  }
  double worst_z = 0.0;
  for (auto [k, n, p] : {std::tuple{2UL, 20UL, 0.3}, std::tuple{3UL, 6UL, 0.2}, std::tuple{4UL, 4UL, 0.5}}) {
    const int seeds = 400;
    const double nk = std::pow(static_cast<double>(n), static_cast<double>(k));
    double sum = 0.0;
    for (int s = 0; s < seeds; ++s) {
      const auto h = gen_random(k, n, p, static_cast<std::uint64_t>(s) + 1000 * k);
      double deg = 0.0;
      for (std::size_t f = 0; f < h.num_vertices(); ++f) deg += static_cast<double>(h.degree(h.vertex(f)));
      sum += deg / static_cast<double>(h.num_vertices());
    }
    const double mean = sum / seeds;
    // the per-graph mean degree is edges / n with edges ~ Binomial(n^k, p)
    const double sigma = std::sqrt(nk * p * (1 - p)) / static_cast<double>(n) / std::sqrt(static_cast<double>(seeds));
    const double z = std::abs(mean - nk / static_cast<double>(n) * p) / sigma;
    worst_z = std::max(worst_z, z);
  }
  ok = ok && worst_z <= 3.0;
  return {ok, fmt("b(2)=%.17g b(3)=%.17g; complete max degrees n^(k-1) %s; random mean degree max |z| %.3f (tol 3)",
                  b2, b3, ok ? "ok" : "checked", worst_z)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"formula fidelity", 10, formula_fidelity},
      {"reduction reproduction", 5, corollary_reproduction},
      {"empty residual exhaustive", 120, empty_residual_exhaustive},
      {"blocked color / correlation / Harris", 60, gadget_inequalities},
      {"solver soundness and determinism", 120, solver_soundness},
      {"solver success under C2", 300, solver_under_c2},
      {"correspondence coherence", 120, correspondence_coherence},
      {"named constants", 60, named_constants},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& c = criteria[i];
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = o.ok && secs <= c.limit_s;
    if (!pass) ++failed;
    std::printf("%s %zu %s: %s [%.2f s, limit %.0f s]\n", pass ? "PASS" : "FAIL", i + 1, c.name, o.detail.c_str(), secs,
                c.limit_s);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
