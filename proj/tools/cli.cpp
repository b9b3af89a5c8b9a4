#include "cli.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hlc/conditions.hpp"
#include "hlc/correspondence.hpp"
#include "hlc/experiments.hpp"
#include "hlc/generators.hpp"
#include "hlc/io.hpp"
#include "hlc/lists.hpp"
#include "hlc/oracle.hpp"
#include "hlc/solver.hpp"

namespace hlc::cli {
namespace {

using json = nlohmann::json;

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidInput("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw InvalidInput("write to '" + path + "' failed");
}

void emit(const json& j, const std::string& path, std::ostream& out) { emit(j.dump(2) + "\n", path, out); }

std::string num(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string frac(const Rational& r) {
  std::ostringstream s;
  s << r << " (" << num(to_double(r)) << ")";
  return s.str();
}

struct Row {
  std::string name;
  std::optional<ConditionVerdict> verdict;
  std::string note;
};

void print_table(std::ostream& out, const std::vector<Row>& rows) {
  out << std::left << std::setw(14) << "condition" << std::setw(16) << "lhs_log" << std::setw(16) << "rhs_log"
      << std::setw(16) << "margin" << "verdict\n";
  for (const auto& r : rows) {
    out << std::setw(14) << r.name;
    if (r.verdict) {
      out << std::setw(16) << num(r.verdict->lhs_log) << std::setw(16) << num(r.verdict->rhs_log) << std::setw(16)
          << num(r.verdict->margin) << (r.verdict->satisfied ? "satisfied" : "unsatisfied");
    } else {
      out << std::setw(48) << "-" << "n/a";
    }
    if (!r.note.empty()) out << "  (" << r.note << ")";
    out << "\n";
  }
}

std::vector<Condition> requested(const std::string& which) {
  if (which == "all") return {Condition::C1, Condition::C2, Condition::C3};
  if (which == "c1") return {Condition::C1};
  if (which == "c2") return {Condition::C2};
  if (which == "c3") return {Condition::C3};
  throw InvalidInput("unknown condition '" + which + "'");
}

/// Evaluates conditions; with "all", a condition whose inputs are absent is
/// reported as n/a instead of failing the run.
std::vector<Row> evaluate_rows(const ParamVector& pv, const std::string& which, const std::string& prefix) {
  std::vector<Row> rows;
  for (Condition c : requested(which)) {
    Row row{prefix + to_string(c), std::nullopt, ""};
    try {
      row.verdict = evaluate(c, pv);
    } catch (const InvalidInput& e) {
      if (which != "all") throw;
      row.note = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Row reduction_row(const std::string& name, const CorollaryReport& r) {
  std::string note = "witness " + to_string(r.witness_condition);
  if (!r.premises_hold) note += "; premise fails: " + r.premise_note;
  if (!r.large_enough) note += "; large-D flag not met";
  if (r.case_used != 0) note += "; case " + std::to_string(r.case_used);
  ConditionVerdict v = r.verdict;
  v.satisfied = r.satisfied();
  return {name, v, note};
}

struct Files {
  std::string graph, lists, cover, coloring, out;
};

PartiteHypergraph need_graph(const Files& f) {
  if (f.graph.empty()) throw InvalidInput("--graph is required");
  return io::graph_from_json(io::load_file(f.graph));
}

ListAssignment need_lists(const PartiteHypergraph& h, const Files& f) {
  if (f.lists.empty()) throw InvalidInput("--lists is required");
  return io::lists_from_json(h, io::load_file(f.lists));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Partite hypergraph list coloring: generators, condition checks, solver and exact oracles", "hlc"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Print help for every subcommand");
  int code = kOk;

  Files files;
  std::uint64_t seed = default_seed_base();
  std::size_t k = 2, n = 2;
  std::optional<std::size_t> j;
  bool strict = false;

  // gen
  auto* gen = app.add_subcommand("gen", "Generate instances as JSON");
  gen->require_subcommand(1);
  auto* gen_complete_cmd = gen->add_subcommand("complete", "Complete k-partite k-graph K_{k*n}");
  double p = 0.5;
  bool shared = false;
  gen_complete_cmd->add_option("--k", k, "Uniformity")->required();
  gen_complete_cmd->add_option("--n", n, "Vertices per part")->required();
  gen_complete_cmd->add_option("--out", files.out, "Output path (default stdout)");
  gen_complete_cmd->callback([&] { emit(io::to_json(gen_complete(k, n)), files.out, out); });

  auto* gen_random_cmd = gen->add_subcommand("random", "Random k-partite k-graph H(k,n,p)");
  gen_random_cmd->add_option("--k", k, "Uniformity")->required();
  gen_random_cmd->add_option("--n", n, "Vertices per part")->required();
  gen_random_cmd->add_option("--p", p, "Edge probability")->required();
  gen_random_cmd->add_option("--seed", seed, "Seed (default HLC_SEED or 0)");
  gen_random_cmd->add_option("--out", files.out, "Output path (default stdout)");
  gen_random_cmd->callback([&] { emit(io::to_json(gen_random(k, n, p, seed)), files.out, out); });

  auto* gen_gadget_cmd = gen->add_subcommand("gadget", "Star of n edges through one vertex of the last part");
  gen_gadget_cmd->add_option("--k", k, "Uniformity")->required();
  gen_gadget_cmd->add_option("--n", n, "Number of edges")->required();
  gen_gadget_cmd->add_flag("--shared", shared, "Share the part-0 vertex among all edges");
  gen_gadget_cmd->add_option("--out", files.out, "Output path (default stdout)");
  gen_gadget_cmd->callback([&] { emit(io::to_json(gen_gadget(k, n, shared)), files.out, out); });

  std::string list_model = "uniform_q";
  std::vector<std::size_t> qs;
  std::size_t palette = 0;
  auto* gen_lists_cmd = gen->add_subcommand("lists", "List assignment for a graph");
  gen_lists_cmd->add_option("--graph", files.graph, "Graph JSON")->required();
  gen_lists_cmd->add_option("--model", list_model, "uniform_q | per_part_q | palette_random");
  gen_lists_cmd->add_option("--q", qs, "List size, or one per part")->required();
  gen_lists_cmd->add_option("--palette", palette, "Palette size for palette_random");
  gen_lists_cmd->add_option("--seed", seed, "Seed (default HLC_SEED or 0)");
  gen_lists_cmd->add_option("--out", files.out, "Output path (default stdout)");
  gen_lists_cmd->callback([&] {
    const auto h = need_graph(files);
    ListSpec spec{parse_list_model(list_model), qs, palette};
    emit(io::to_json(h, gen_lists(h, spec, seed)), files.out, out);
  });

  auto* gen_cover_cmd = gen->add_subcommand("cover", "Correspondence cover: random (--q per part) or lifted (--lists)");
  gen_cover_cmd->add_option("--graph", files.graph, "Graph JSON")->required();
  auto* cover_q = gen_cover_cmd->add_option("--q", qs, "List size per part");
  auto* cover_lists = gen_cover_cmd->add_option("--lists", files.lists, "Lift this list assignment");
  cover_q->excludes(cover_lists);
  gen_cover_cmd->add_option("--seed", seed, "Seed (default HLC_SEED or 0)");
  gen_cover_cmd->add_option("--out", files.out, "Output path (default stdout)");
  gen_cover_cmd->callback([&] {
    const auto h = need_graph(files);
    if (!files.lists.empty()) {
      emit(io::to_json(h, lift_list_assignment(h, need_lists(h, files))), files.out, out);
    } else {
      if (qs.empty()) throw InvalidInput("gen cover needs --q or --lists");
      emit(io::to_json(h, gen_adversarial_cover(h, qs, seed)), files.out, out);
    }
  });

  // check
  std::string params_path, which = "all";
  std::string reduction;
  int variant = 1;
  std::optional<double> eps;
  double delta = 0.0;
  auto* check = app.add_subcommand("check", "Evaluate sufficient conditions on parameters or an instance");
  check->add_option("--params", params_path, "Parameter JSON {k, j, q, D, Delta, eps}");
  check->add_option("--graph", files.graph, "Graph JSON (with --lists)");
  check->add_option("--lists", files.lists, "Lists JSON (with --graph)");
  check->add_option("--j", j, "Part whose vertices are colored last");
  check->add_option("--condition", which, "c1 | c2 | c3 | all")->check(CLI::IsMember({"c1", "c2", "c3", "all"}));
  check->add_option("--reduction", reduction, "skewed | max-degree | combined: check a list-size reduction instead")
      ->check(CLI::IsMember({"skewed", "max-degree", "combined"}));
  check->add_option("--eps", eps, "Epsilon for --reduction");
  check->add_option("--k", k, "k for --reduction max-degree");
  check->add_option("--delta", delta, "Max degree for --reduction max-degree");
  check->add_option("--variant", variant, "Variant (1 or 2) for --reduction max-degree");
  check->add_flag("--strict", strict, "Exit 1 unless some evaluated condition is satisfied");
  check->callback([&] {
    std::vector<Row> rows;
    if (reduction == "max-degree") {
      if (!eps) throw InvalidInput("--reduction max-degree needs --eps");
      rows.push_back(reduction_row(reduction, check_corollary_16(k, *eps, delta, variant)));
    } else if (!params_path.empty()) {
      ParamVector pv = io::params_from_json(io::load_file(params_path));
      if (j) pv.j = *j;
      if (!reduction.empty()) {
        const double e = eps ? *eps : pv.eps;
        const auto report = reduction == "skewed" ? check_corollary_15(pv, e) : check_corollary_17(pv, e);
        rows.push_back(reduction_row(reduction, report));
        out << "witness q:";
        for (double q : report.witness.q) out << " " << num(q);
        out << "\n";
      } else {
        rows = evaluate_rows(pv, which, "");
      }
    } else if (!files.graph.empty()) {
      const auto h = need_graph(files);
      const auto lists = need_lists(h, files);
      const auto profile = color_degree_profile(h, lists);
      std::vector<std::size_t> parts;
      if (j) {
        parts.push_back(*j);
      } else {
        for (std::size_t i = 0; i < h.k(); ++i) parts.push_back(i);
      }
      for (std::size_t pj : parts) {
        if (pj >= h.k()) throw InvalidInput("--j out of range");
        ParamVector pv;
        pv.k = h.k();
        pv.j = pj;
        for (std::size_t i = 0; i < h.k(); ++i) {
          pv.q.push_back(static_cast<double>(profile.q[i]));
          pv.D.push_back(static_cast<double>(profile.D[i]));
          pv.Delta.push_back(static_cast<double>(profile.Delta[i]));
        }
        for (auto& r : evaluate_rows(pv, which, "j=" + std::to_string(pj) + " ")) rows.push_back(std::move(r));
      }
    } else {
      throw InvalidInput("check needs --params, --graph/--lists or --reduction max-degree");
    }
    print_table(out, rows);
    const bool any = std::any_of(rows.begin(), rows.end(), [](const Row& r) { return r.verdict && r.verdict->satisfied; });
    if (strict && !any) code = kNegative;
  });

  // solve
  std::optional<std::size_t> max_resamples;
  std::string regime = "auto";
  auto* solve = app.add_subcommand("solve", "Find a proper coloring by resampling");
  solve->add_option("--graph", files.graph, "Graph JSON")->required();
  auto* solve_lists = solve->add_option("--lists", files.lists, "Lists JSON");
  auto* solve_cover = solve->add_option("--cover", files.cover, "Cover JSON (correspondence coloring)");
  solve_lists->excludes(solve_cover);
  solve->add_option("--j", j, "Part colored last (default: chosen from the conditions)");
  solve->add_option("--seed", seed, "Seed (default HLC_SEED or 0)");
  solve->add_option("--max-resamples", max_resamples, "Resampling budget (default 100|V|)");
  solve->add_option("--regime", regime, "auto | c1 | c2 | c3")->check(CLI::IsMember({"auto", "c1", "c2", "c3"}));
  solve->add_option("--out", files.out, "Output path for the coloring and run statistics (default stdout)");
  solve->callback([&] {
    const auto h = need_graph(files);
    SolverConfig cfg;
    cfg.j = j;
    cfg.seed = seed;
    cfg.max_resamples = max_resamples;
    cfg.regime = parse_regime(regime);
    SolveOutcome r;
    if (!files.cover.empty()) {
      r = dp_solve(h, io::cover_from_json(h, io::load_file(files.cover)), cfg);
    } else {
      r = moser_tardos_solve(h, need_lists(h, files), cfg);
    }
    json doc = r.success() ? io::coloring_to_json(h, r.coloring) : json::object();
    doc["status"] = to_string(r.status);
    doc["resample_count"] = r.resample_count;
    doc["j"] = r.j;
    doc["guarantee"] = r.guarantee ? to_string(*r.guarantee) : std::string("none");
    emit(doc, files.out, out);
    switch (r.status) {
      case SolveStatus::Success: break;
      case SolveStatus::BudgetExhausted:
        err << "budget exhausted after " << r.resample_count << " resamples\n";
        code = kBudget;
        break;
      case SolveStatus::InfeasibleList:
        err << "vertex " << to_string(*r.infeasible_vertex) << " has an empty list\n";
        code = kInvalid;
        break;
    }
  });

  // verify
  std::string vertex_key;
  Color color = 0;
  auto* verify = app.add_subcommand("verify", "Verify colorings and check inequalities by exact enumeration");
  verify->require_subcommand(1);
  verify->add_flag("--strict", strict, "Exit 1 when a check fails");
  auto common = [&](CLI::App* sub, bool lists_required) {
    sub->add_option("--graph", files.graph, "Graph JSON")->required();
    auto* o = sub->add_option("--lists", files.lists, "Lists JSON");
    if (lists_required) o->required();
    sub->add_flag("--strict", strict, "Exit 1 when a check fails");
  };
  auto targeted = [&](CLI::App* sub, bool with_color) {
    common(sub, true);
    sub->add_option("--j", j, "Part of the target vertex")->required();
    sub->add_option("--vertex", vertex_key, "Target vertex part:index")->required();
    if (with_color) sub->add_option("--color", color, "Target color")->required();
  };
  auto fail_if = [&](bool bad) {
    if (bad && strict) code = kNegative;
  };

  auto* v_coloring = verify->add_subcommand("coloring", "Check that a coloring is proper");
  common(v_coloring, false);
  v_coloring->add_option("--cover", files.cover, "Cover JSON (coloring holds slots)");
  v_coloring->add_option("--coloring", files.coloring, "Coloring JSON")->required();
  v_coloring->callback([&] {
    const auto h = need_graph(files);
    const auto phi = io::coloring_from_json(h, io::load_file(files.coloring));
    bool ok;
    if (!files.cover.empty()) {
      ok = is_proper_dp_coloring(h, io::cover_from_json(h, io::load_file(files.cover)), phi);
    } else if (!files.lists.empty()) {
      ok = is_proper_L_coloring(h, need_lists(h, files), phi);
    } else {
      ok = is_proper_coloring(h, phi);
    }
    out << (ok ? "proper" : "not proper") << "\n";
    fail_if(!ok);
  });

  auto* v_claim31 = verify->add_subcommand("claim31", "Exact P[color lost at v] against its bound");
  targeted(v_claim31, true);
  v_claim31->callback([&] {
    const auto h = need_graph(files);
    const auto lists = need_lists(h, files);
    const auto r = verify_claim_31(h, lists, *j, io::parse_vertex_key(vertex_key), color);
    out << "exact " << frac(r.exact) << "\nbound " << num(r.bound) << "\n" << (r.ok ? "ok" : "VIOLATED") << "\n";
    fail_if(!r.ok);
  });

  auto* v_lemma41 = verify->add_subcommand("lemma41", "Exact P[no color left at v] against its bound");
  targeted(v_lemma41, false);
  v_lemma41->callback([&] {
    const auto h = need_graph(files);
    const auto lists = need_lists(h, files);
    const auto r = verify_lemma_41(h, lists, *j, io::parse_vertex_key(vertex_key));
    out << "exact " << frac(r.exact) << "\nbound " << num(r.bound) << "\n" << (r.ok ? "ok" : "VIOLATED") << "\n";
    fail_if(!r.ok);
  });

  auto* v_claim32 = verify->add_subcommand("claim32", "Negative correlation of color losses at v");
  targeted(v_claim32, false);
  v_claim32->callback([&] {
    const auto h = need_graph(files);
    const auto lists = need_lists(h, files);
    const auto rows = verify_claim_32(h, lists, *j, io::parse_vertex_key(vertex_key));
    bool all_ok = true;
    for (const auto& r : rows) {
      out << "{";
      for (std::size_t i = 0; i < r.subset.size(); ++i) out << (i ? "," : "") << r.subset[i];
      out << "} joint " << frac(r.joint) << " product " << frac(r.product) << " " << (r.ok ? "ok" : "VIOLATED") << "\n";
      all_ok = all_ok && r.ok;
    }
    fail_if(!all_ok);
  });

  auto* v_harris = verify->add_subcommand("harris", "Harris inequality on the color-loss families at (v, c)");
  targeted(v_harris, true);
  v_harris->callback([&] {
    const auto h = need_graph(files);
    const auto lists = need_lists(h, files);
    const auto inst = color_loss_families(h, lists, *j, io::parse_vertex_key(vertex_key), color);
    const auto r = verify_harris(inst.ground.size(), inst.families, inst.p);
    out << "families " << inst.families.size() << "\nintersection " << frac(r.intersection) << "\nproduct "
        << frac(r.product) << "\n" << (r.ok ? "ok" : "VIOLATED") << "\n";
    fail_if(!r.ok);
  });

  std::size_t aux_cap = kDefaultAuxCap;
  auto* v_aux = verify->add_subcommand("aux", "Build the auxiliary hypergraph and check its size and degree bounds");
  v_aux->add_option("--graph", files.graph, "Graph JSON")->required();
  v_aux->add_option("--cover", files.cover, "Cover JSON")->required();
  v_aux->add_option("--j", j, "Part j")->required();
  v_aux->add_option("--cap", aux_cap, "Candidate cap per vertex");
  v_aux->add_flag("--strict", strict, "Exit 1 when a check fails");
  v_aux->callback([&] {
    const auto h = need_graph(files);
    const auto cover = io::cover_from_json(h, io::load_file(files.cover));
    const auto aux = build_aux_hypergraph(h, cover, *j, aux_cap);
    out << "aux edges " << aux.edges.size() << "\n";
    if (h.part_size(*j) == 0) return;
    const std::size_t qj = cover.list_size(h.part_begin(*j));
    for (std::size_t f = h.part_begin(*j); f < h.part_end(*j); ++f) {
      if (cover.list_size(f) != qj) throw InvalidInput("size and degree checks need equal list sizes in part j");
    }
    const auto sizes = check_aux_sizes(h, aux, qj);
    const auto degrees = check_aux_degrees(h, cover, aux, qj);
    out << "sizes " << (sizes.ok ? "ok" : sizes.violation) << "\ndegrees " << (degrees.ok ? "ok" : degrees.violation)
        << "\n";
    fail_if(!sizes.ok || !degrees.ok);
  });

  // experiment
  std::string config_path;
  std::optional<std::uint64_t> seed_base;
  std::optional<std::size_t> threads, trials;
  auto* experiment = app.add_subcommand("experiment", "Run a campaign and write CSV");
  experiment->add_option("--config", config_path, "Campaign JSON")->required();
  experiment->add_option("--out", files.out, "CSV path (default: config 'output', else stdout)");
  experiment->add_option("--seed-base", seed_base, "Seed base (default: config, HLC_SEED, 0)");
  experiment->add_option("--threads", threads, "Worker threads");
  experiment->add_option("--trials", trials, "Override trials per cell");
  experiment->callback([&] {
    Campaign c = campaign_from_json(io::load_file(config_path));
    if (seed_base) c.seed_base = *seed_base;
    if (threads) c.threads = *threads;
    if (trials) c.trials = *trials;
    if (!files.out.empty()) c.output = files.out;
    const auto rows = run_campaign(c);
    emit(to_csv(c, rows), c.output, out);
    err << rows.size() << " cells written\n";
  });

  if (args.size() > 1 && !args[1].empty() && args[1][0] != '-') {
    bool known = false;
    for (const auto* sub : app.get_subcommands({})) known = known || sub->get_name() == args[1];
    if (!known) {
      err << "error: unknown subcommand '" << args[1] << "'\n" << app.help();
      return kInvalid;
    }
  }

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    // Help for the deepest subcommand that was reached.
    CLI::App* node = &app;
    while (true) {
      const auto subs = node->get_subcommands();
      if (subs.empty()) break;
      node = subs.front();
    }
    if (e.get_exit_code() == 0) {
      out << node->help();
      return kOk;
    }
    err << "error: " << e.what() << "\n" << node->help();
    return kInvalid;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kCap;
  }
  return code;
}

}  // namespace hlc::cli
