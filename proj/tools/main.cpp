// wlcanon command-line tool: colour refinement, 2-WL, cores, disparity
// graphs, view diagnostics, canonical labelling, isomorphism testing,
// automorphism checks and the experiment runner.
//
// Exit codes: 0 success / threshold met, 1 threshold failed, 2 usage error,
// 3 cap exceeded.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "wlcanon/aut.hpp"
#include "wlcanon/canon.hpp"
#include "wlcanon/cores.hpp"
#include "wlcanon/disparity.hpp"
#include "wlcanon/emit.hpp"
#include "wlcanon/experiment.hpp"
#include "wlcanon/graph.hpp"
#include "wlcanon/io.hpp"
#include "wlcanon/refine.hpp"
#include "wlcanon/views.hpp"
#include "wlcanon/wl2.hpp"

using nlohmann::json;
using namespace wlcanon;

namespace {

struct CommonOpts {
  std::string input;
  std::string format = "edgelist";
  std::uint64_t seed = 0;
  bool as_json = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool need_input = true) {
  auto* in = cmd->add_option("--input", opts.input, "input graph file");
  if (need_input) in->required();
  cmd->add_option("--format", opts.format, "edgelist|graph6")
      ->check(CLI::IsMember({"edgelist", "graph6"}));
  cmd->add_option("--seed", opts.seed, "random seed");
  cmd->add_flag("--json", opts.as_json, "emit JSON");
}

Graph load(const CommonOpts& opts) {
  return read_graph(opts.input,
                    opts.format == "graph6" ? GraphFormat::graph6 : GraphFormat::edgelist);
}

json colouring_to_json(const Colouring& c) {
  return json{{"k", c.k}, {"colour", c.colour}};
}

int run_cli(int argc, char** argv) {
  CLI::App app{"colour refinement and canonical labelling toolkit"};
  app.require_subcommand(1);

  CommonOpts opts;

  // refine
  auto* refine_cmd = app.add_subcommand("refine", "stable colouring by colour refinement");
  add_common(refine_cmd, opts);
  refine_cmd->callback([&] {
    Graph g = load(opts);
    auto [c, trace] = stable(g, trivial_colouring(g.n()));
    if (opts.as_json) {
      json j = colouring_to_json(c);
      j["rounds"] = trace.rounds;
      j["class_counts"] = trace.class_counts;
      j["discrete"] = c.discrete();
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << "classes " << c.k << " rounds " << trace.rounds
                << (c.discrete() ? " discrete" : "") << "\n";
    }
  });

  // wl2
  auto* wl2_cmd = app.add_subcommand("wl2", "2-dimensional Weisfeiler-Leman vertex colouring");
  add_common(wl2_cmd, opts);
  wl2_cmd->callback([&] {
    Graph g = load(opts);
    Colouring c = wl2_vertex_colouring(g);
    if (opts.as_json)
      std::cout << colouring_to_json(c).dump(2) << "\n";
    else
      std::cout << "classes " << c.k << (c.discrete() ? " discrete" : "") << "\n";
  });

  // cores
  auto* cores_cmd = app.add_subcommand("cores", "k-core decomposition and 2-core structure");
  bool skip_safe = false;
  cores_cmd->add_flag("--skip-safe", skip_safe, "skip the V23-safe deletion test");
  add_common(cores_cmd, opts);
  cores_cmd->callback([&] {
    Graph g = load(opts);
    CoreDecomposition dec = decompose(g, !skip_safe);
    if (opts.as_json) {
      json j{{"coreness", dec.coreness},
             {"v2", dec.v2},
             {"v3", dec.v3},
             {"v23", dec.v23},
             {"cycle_components", dec.cycle_components},
             {"kernel_edges", dec.kernel.edges}};
      if (dec.safe_computed) j["v23_safe"] = dec.v23_safe;
      json paths = json::array();
      for (const auto& p : dec.bare_paths) paths.push_back(p.vertices);
      j["bare_paths"] = paths;
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << "|V2| " << dec.v2.size() << " |V3| " << dec.v3.size() << " |V23| "
                << dec.v23.size();
      if (dec.safe_computed) std::cout << " |V23safe| " << dec.v23_safe.size();
      std::cout << " bare-paths " << dec.bare_paths.size() << " cycles "
                << dec.cycle_components.size() << "\n";
    }
  });

  // disparity
  auto* disp_cmd = app.add_subcommand("disparity", "disparity graph and statistics");
  bool use_wl2 = false;
  disp_cmd->add_flag("--wl2", use_wl2, "colour with 2-WL instead of colour refinement");
  add_common(disp_cmd, opts);
  disp_cmd->callback([&] {
    Graph g = load(opts);
    Colouring c = use_wl2 ? wl2_vertex_colouring(g) : stable_colouring(g);
    Graph d = disparity(g, c);
    DisparityStats st = stats(d, c);
    if (opts.as_json) {
      json j{{"edges", d.edges()},
             {"component_sizes", st.component_sizes},
             {"max_degree", st.max_degree},
             {"s_bound", st.s_bound}};
      std::cout << j.dump(2) << "\n";
    } else {
      std::size_t maxc = 0;
      for (auto s : st.component_sizes) maxc = std::max<std::size_t>(maxc, s);
      std::cout << "edges " << d.m() << " max-component " << maxc << " max-degree "
                << st.max_degree << " s-bound " << st.s_bound << "\n";
    }
  });

  // views
  auto* views_cmd = app.add_subcommand("views", "view hashes and view-difference multisets");
  std::uint32_t depth = 3;
  std::int64_t u_opt = -1, v_opt = -1;
  views_cmd->add_option("--depth", depth, "view depth");
  views_cmd->add_option("--u", u_opt, "first vertex");
  views_cmd->add_option("--v", v_opt, "second vertex (enables L/S output)");
  add_common(views_cmd, opts);
  views_cmd->callback([&] {
    Graph g = load(opts);
    if (u_opt >= 0 && v_opt >= 0) {
      ViewDiff d = view_diff(g, static_cast<Vertex>(u_opt), static_cast<Vertex>(v_opt), depth);
      json j;
      for (std::uint32_t i = 0; i <= depth; ++i) {
        json luv = json::object(), lvu = json::object();
        for (const auto& [w, m] : d.l_uv[i]) luv[std::to_string(w)] = m.get_str();
        for (const auto& [w, m] : d.l_vu[i]) lvu[std::to_string(w)] = m.get_str();
        j["levels"].push_back(json{{"i", i},
                                   {"L_uv", luv},
                                   {"L_vu", lvu},
                                   {"S_new", d.s_new[i]}});
      }
      if (d.first_empty_s) j["first_empty_S"] = *d.first_empty_s;
      auto disc = degree_discrepancy(g, d);
      if (disc) j["degree_discrepancy"] = json{{"i", disc->first}, {"d", disc->second}};
      std::cout << j.dump(2) << "\n";
    } else {
      auto hs = view_hashes(g, depth);
      json arr = json::array();
      for (const auto& h : hs) arr.push_back(h.class_id);
      std::cout << json{{"depth", depth}, {"class_ids", arr}}.dump(2) << "\n";
    }
  });

  // canon
  auto* canon_cmd = app.add_subcommand("canon", "canonical labelling");
  std::string scheme = "auto";
  canon_cmd
      ->add_option("--scheme", scheme,
                   "auto|discrete-cr|ir|tree|small|disparity-cr|disparity-wl2|v23|report")
      ->check(CLI::IsMember({"auto", "discrete-cr", "ir", "tree", "small", "disparity-cr",
                             "disparity-wl2", "v23", "report"}));
  add_common(canon_cmd, opts);
  canon_cmd->callback([&] {
    Graph g = load(opts);
    if (scheme == "report") {
      SchemeReport r = scheme_report(g);
      json j{{"discrete_cr", r.discrete_cr},
             {"tree_unicyclic", r.tree_unicyclic},
             {"v23", r.v23},
             {"disparity_cr", r.disparity_cr},
             {"disparity_wl2", r.disparity_wl2},
             {"small_exhaustive", r.small_exhaustive},
             {"reasons", r.reasons}};
      std::cout << j.dump(2) << "\n";
      return;
    }
    CanonicalLabelling lab;
    if (scheme == "discrete-cr")
      lab = label_discrete_cr(g);
    else if (scheme == "ir")
      lab = label_ir(g);
    else if (scheme == "tree")
      lab = label_tree_unicyclic(g);
    else if (scheme == "small")
      lab = label_small_exhaustive(g);
    else if (scheme == "disparity-cr")
      lab = label_via_disparity(g, DisparityMode::cr);
    else if (scheme == "disparity-wl2")
      lab = label_via_disparity(g, DisparityMode::wl2);
    else if (scheme == "v23")
      lab = label_via_v23(g);
    else {
      // auto: first applicable scheme in the composite order.
      try {
        lab = label_discrete_cr(g);
      } catch (const NotApplicableError&) {
        try {
          lab = label_via_v23(g);
        } catch (const NotApplicableError&) {
          try {
            lab = label_via_disparity(g, DisparityMode::wl2);
          } catch (const NotApplicableError&) {
            lab = label_small_exhaustive(g);
          }
        }
      }
    }
    if (opts.as_json)
      std::cout << json{{"scheme", lab.scheme},
                        {"order", lab.order},
                        {"certificate", certificate_hex(lab.certificate)}}
                       .dump(2)
                << "\n";
    else
      std::cout << lab.scheme << " " << certificate_hex(lab.certificate) << "\n";
  });

  // isotest
  auto* iso_cmd = app.add_subcommand("isotest", "isomorphism test for two graphs");
  std::string input2;
  iso_cmd->add_option("--input2", input2, "second graph file")->required();
  add_common(iso_cmd, opts);
  iso_cmd->callback([&] {
    Graph g = load(opts);
    CommonOpts o2 = opts;
    o2.input = input2;
    Graph h = load(o2);
    IsoResult r = isomorphic(g, h);
    const char* verdict = r.verdict == IsoVerdict::isomorphic       ? "isomorphic"
                          : r.verdict == IsoVerdict::non_isomorphic ? "non-isomorphic"
                                                                    : "inconclusive";
    if (opts.as_json) {
      json j{{"verdict", verdict}, {"detail", r.detail}};
      if (r.verdict == IsoVerdict::isomorphic) j["mapping"] = r.mapping;
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << verdict << " (" << r.detail << ")\n";
    }
  });

  // aut
  auto* aut_cmd = app.add_subcommand("aut", "automorphisms and exception catalogue check");
  bool constructed = false;
  aut_cmd->add_flag("--constructed", constructed,
                    "construct exception automorphisms instead of brute force");
  add_common(aut_cmd, opts);
  aut_cmd->callback([&] {
    Graph g = load(opts);
    if (constructed || g.n() > kBruteAutMaxN) {
      auto auts = exception_automorphisms(g);
      json j{{"constructed", auts.size()}};
      if (opts.as_json) {
        j["automorphisms"] = auts;
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << "constructed " << auts.size() << " exception automorphisms (all verified)\n";
      }
    } else {
      auto rep = brute_aut(g);
      auto res = check_aut_characterisation(g, rep);
      if (opts.as_json) {
        json j{{"automorphisms", rep.automorphisms},
               {"characterisation_ok", res.ok},
               {"violations", res.violations},
               {"classifications", res.classifications}};
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << rep.automorphisms.size() << " automorphisms; characterisation "
                  << (res.ok ? "ok" : "VIOLATED") << "\n";
        for (const auto& v : res.violations) std::cout << "  " << v << "\n";
      }
    }
  });

  // experiment
  auto* exp_cmd = app.add_subcommand("experiment", "seeded experiment runner");
  std::string spec_path, kind_str = "bes", out_path, emit_fmt = "csv", p_list;
  ExperimentSpec spec;
  exp_cmd->add_option("--spec", spec_path, "JSON spec file (overrides inline flags)");
  exp_cmd->add_option("--kind", kind_str, "experiment kind");
  exp_cmd->add_option("--n", spec.n, "vertex count");
  exp_cmd->add_option("--p", p_list, "edge probability expression (comma list sweeps)");
  exp_cmd->add_option("--g0", spec.g0, "adversary: empty|union-k4|union-petersen|file:<path>");
  exp_cmd->add_option("--trials", spec.trials, "number of trials");
  exp_cmd->add_option("--threshold", spec.threshold, "required success fraction");
  exp_cmd->add_option("--cap", spec.cap, "kind-specific cap override");
  exp_cmd->add_option("--workers", spec.workers, "worker threads (0 = hardware)");
  exp_cmd->add_option("--mode", spec.mode, "sprinkle-degree mode: direct|core-mechanism");
  exp_cmd->add_option("--out", out_path, "output file (default stdout)");
  exp_cmd->add_option("--emit", emit_fmt, "csv|json|plot")
      ->check(CLI::IsMember({"csv", "json", "plot"}));
  add_common(exp_cmd, opts, /*need_input=*/false);
  exp_cmd->callback([&] {
    if (!spec_path.empty()) {
      std::ifstream in(spec_path);
      if (!in) throw std::runtime_error("cannot open spec " + spec_path);
      spec = spec_from_json(json::parse(in));
    } else {
      spec.kind = kind_from_name(kind_str);
      spec.master_seed = opts.seed;
      if (p_list.empty()) p_list = "0.5";
    }
    std::ofstream file_out;
    std::ostream* out = &std::cout;
    if (!out_path.empty()) {
      file_out.open(out_path);
      if (!file_out) throw std::runtime_error("cannot open " + out_path);
      out = &file_out;
    }

    // Sweep support: comma-separated p expressions.
    std::vector<std::string> sweeps;
    if (spec_path.empty()) {
      std::size_t pos = 0;
      while (pos <= p_list.size()) {
        std::size_t comma = p_list.find(',', pos);
        sweeps.push_back(p_list.substr(pos, comma == std::string::npos ? std::string::npos
                                                                       : comma - pos));
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
    } else {
      sweeps.push_back(spec.p_expr);
    }

    bool all_met = true;
    std::vector<std::pair<double, double>> plot;
    for (const auto& pexpr : sweeps) {
      spec.p_expr = pexpr;
      auto [records, sum] = run(spec);
      all_met = all_met && sum.threshold_met;
      plot.emplace_back(spec.p(spec.n ? spec.n : 1),
                        static_cast<double>(sum.successes) / sum.trials);
      if (emit_fmt == "csv")
        emit_csv(records, *out);
      else if (emit_fmt == "json")
        *out << records_to_json(spec, records, sum).dump(2) << "\n";
      std::cerr << kind_name(spec.kind) << " n=" << spec.n << " p=" << pexpr << ": "
                << sum.successes << "/" << sum.trials << " success, value range ["
                << sum.min_value << ", " << sum.max_value << "]"
                << (spec.threshold >= 0 ? (sum.threshold_met ? " [met]" : " [FAILED]") : "")
                << "\n";
    }
    if (emit_fmt == "plot") emit_plot(plot, *out);
    if (!all_met) throw std::runtime_error("threshold failed");
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  } catch (const CapExceededError& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    return 3;
  } catch (const std::runtime_error& e) {
    if (std::string(e.what()) == "threshold failed") return 1;
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) { return run_cli(argc, argv); }
