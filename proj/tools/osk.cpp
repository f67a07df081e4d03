// Command-line front end. Exit codes: 0 success, 1 domain error, 2 usage,
// parse or I/O error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "osk/axis.hpp"
#include "osk/io.hpp"
#include "osk/lipschitz.hpp"
#include "osk/random.hpp"
#include "osk/whitehead.hpp"

using namespace osk;
using nlohmann::json;

namespace {

std::string fmt(double v) { return format_double(v); }

std::string path_text(const MetricGraph &g, const Path &p) {
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? " " : "") + g.half_edge_name(p[i]);
  return s.empty() ? "-" : s;
}

// Results go to --out when given, else to standard output.
void emit(const std::string &out, const std::string &text) {
  if (out.empty())
    std::cout << text;
  else
    write_text(out, text);
}

// A self-map file or an automorphism file.
Automorphism read_inverse(const std::string &path, std::optional<TrainTrackMap> &tt) {
  json j = read_json(path);
  if (j.contains("edge_images")) {
    tt = pf_metric(self_map_from_json(j));
    return certify(tt->map.induced_automorphism());
  }
  return certify(automorphism_from_json(j));
}

Axis load_axis(const std::string &map_path, const std::string &inv_path) {
  auto fwd = pf_metric(read_self_map(map_path));
  std::optional<TrainTrackMap> bwd;
  auto inv = read_inverse(inv_path, bwd);
  return bwd ? make_axis(fwd, *bwd) : make_axis(fwd, inv);
}

std::pair<Automorphism, Automorphism> random_translate(int rank, std::uint64_t seed, int moves) {
  Rng rng(seed, 0x7472);
  return random_moves(rank, rng, moves);
}

// Known CSV headers emitted by the tool.
const std::vector<std::string> kCsvHeaders = {
    "seed,sample,r,n_ball_points,proj_diam_m,proj_diam_dist",
    "seed,sample,n_points,max_dist_to_axis,hausdorff",
    "seed,xdesc,ydesc,sep,delta1,delta2,delta3",
    "windows,diam,parallel",
    "seed,sample,R,avoids_ball,length,bound,vacuous,satisfied",
    "candidate,kind,length_x,length_y,ratio",
    "kind,path,word,length",
    "m,length",
};

int validate_csv(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  std::string header, line;
  std::getline(in, header);
  if (std::find(kCsvHeaders.begin(), kCsvHeaders.end(), header) == kCsvHeaders.end())
    throw ParseError(path + ": not a JSON input or a known CSV table");
  const auto cols = std::count(header.begin(), header.end(), ',');
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (std::count(line.begin(), line.end(), ',') != cols) {
      std::cout << "invalid: row " << row << " has the wrong number of fields\n";
      return 1;
    }
  }
  std::cout << "valid: CSV table, " << row - 1 << " rows\n";
  return 0;
}

int cmd_validate(const std::string &path) {
  json j;
  try {
    j = read_json(path);
  } catch (const ParseError &) {
    return validate_csv(path);
  }
  if (j.contains("edge_images")) {
    auto f = self_map_from_json(j);
    auto rep = validate_point(f.point);
    auto tt = verify_train_track(f);
    for (auto &s : rep.issues) std::cout << "issue: " << s << "\n";
    std::cout << (rep.ok ? "valid" : "invalid") << ": self-map on " << f.point.graph.n_edges() << " edges, train track "
              << (tt.is_tt ? "yes" : "no") << ", irreducible " << (tt.irreducible ? "yes" : "no") << "\n";
    return rep.ok ? 0 : 1;
  }
  if (j.contains("edges")) {
    auto p = point_from_json(j);
    auto rep = validate_point(p);
    for (auto &s : rep.issues) std::cout << "issue: " << s << "\n";
    std::cout << (rep.ok ? "valid" : "invalid") << ": rank " << p.rank << ", " << p.graph.n_vertices() << " vertices, "
              << p.graph.n_edges() << " edges\n";
    return rep.ok ? 0 : 1;
  }
  auto a = certify(automorphism_from_json(j));
  std::cout << "valid: automorphism of rank " << a.rank << "\n";
  return 0;
}

Point checked_point(const std::string &path) {
  Point p = read_point(path);
  auto rep = validate_point(p);
  if (!rep.ok) throw DomainError(path + ": " + rep.issues.front());
  return p;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Outer space toolkit: Lipschitz distances, Whitehead algorithms, train tracks and axes"};
  app.require_subcommand(1);
  app.fallthrough();
  std::uint64_t seed = 0;
  std::string out;
  app.add_option("--seed", seed, "Random seed")->capture_default_str();
  app.add_option("--out", out, "Write results to this file");

  std::string f1, f2, f3;
  auto *validate = app.add_subcommand("validate", "Check a graph, self-map, automorphism or emitted CSV file");
  validate->add_option("file", f1)->required();

  int oracle = 0;
  auto *dist = app.add_subcommand("dist", "Lipschitz distance d(x,y)");
  dist->add_option("x", f1)->required();
  dist->add_option("y", f2)->required();
  dist->add_option("--oracle", oracle, "Also maximise over all classes of length <= L")->check(CLI::PositiveNumber);

  auto *cands = app.add_subcommand("candidates", "Candidate loops of a point");
  cands->add_option("x", f1)->required();

  int rank = 0;
  std::vector<std::string> words;
  auto *wh = app.add_subcommand("whitehead", "Whitehead algorithms");
  wh->require_subcommand(1);
  auto *wh_min = wh->add_subcommand("minimize", "Length-reduce a tuple of cyclic words");
  wh_min->add_option("words", words)->required();
  wh_min->add_option("--rank", rank, "Rank")->required()->check(CLI::PositiveNumber);
  auto *wh_prim = wh->add_subcommand("primitive", "Decide whether a word is a basis element");
  wh_prim->add_option("word", f1)->required();
  wh_prim->add_option("--rank", rank, "Rank")->required()->check(CLI::PositiveNumber);

  std::string edge = "e1";
  int k = 4;
  auto *tt = app.add_subcommand("tt", "Train-track maps");
  tt->require_subcommand(1);
  auto *tt_verify = tt->add_subcommand("verify", "Check the train-track property and irreducibility");
  tt_verify->add_option("map", f1)->required();
  auto *tt_pf = tt->add_subcommand("pf", "PF eigenvalue and metric; --out writes the PF point");
  tt_pf->add_option("map", f1)->required();
  auto *tt_leaf = tt->add_subcommand("leaf", "Leaf segment f^k(e)");
  tt_leaf->add_option("map", f1)->required();
  tt_leaf->add_option("--edge", edge, "Edge id")->capture_default_str();
  tt_leaf->add_option("--k", k, "Iterations")->capture_default_str()->check(CLI::NonNegativeNumber);
  auto *tt_wh = tt->add_subcommand("whsearch", "Search for a rose with cut-vertex-free lamination graph");
  tt_wh->add_option("map", f1)->required();
  tt_wh->add_option("inverse", f2, "Train track or automorphism file for the inverse")->required();
  tt_wh->add_option("--start", f3, "Starting rose (default: the PF rose)");

  int lo = -3, hi = 3, samples = 100, window = 4, moves = 6, min_sep = 4;
  double radius = 1.0, r_ball = 3.0, b_prime = 0.0;
  std::string word = "x", mode = "balls", psi_file, third_file;
  auto *ax = app.add_subcommand("axis", "Axis experiments; MAP is a train track, INVERSE its inverse");
  ax->require_subcommand(1);
  auto axis_args = [&](CLI::App *c) {
    c->add_option("map", f1)->required();
    c->add_option("inverse", f2)->required();
  };
  auto *ax_proj = ax->add_subcommand("project", "Project a point to the axis");
  axis_args(ax_proj);
  ax_proj->add_option("point", f3)->required();
  auto *ax_prof = ax->add_subcommand("profile", "Length profile of a class along the axis");
  axis_args(ax_prof);
  ax_prof->add_option("--word", word, "Cyclic word")->capture_default_str();
  ax_prof->add_option("--lo", lo)->capture_default_str();
  ax_prof->add_option("--hi", hi)->capture_default_str();
  auto *ax_contract = ax->add_subcommand("contract", "Contraction experiment");
  axis_args(ax_contract);
  ax_contract->add_option("--samples", samples)->capture_default_str()->check(CLI::PositiveNumber);
  ax_contract->add_option("--radius", radius, "Ball radius budget")->capture_default_str()->check(CLI::PositiveNumber);
  ax_contract->add_option("--mode", mode)->capture_default_str()->check(CLI::IsMember({"balls", "morse"}));
  auto *ax_probe = ax->add_subcommand("probe", "Projection inequalities on sampled pairs");
  axis_args(ax_probe);
  ax_probe->add_option("--samples", samples)->capture_default_str()->check(CLI::PositiveNumber);
  ax_probe->add_option("--min-sep", min_sep, "Least projection separation")->capture_default_str()->check(CLI::PositiveNumber);
  auto *ax_div = ax->add_subcommand("diverge", "Divergence of detours around a ball");
  axis_args(ax_div);
  ax_div->add_option("--R", r_ball, "Ball radius")->capture_default_str()->check(CLI::PositiveNumber);
  ax_div->add_option("--samples", samples)->capture_default_str()->check(CLI::PositiveNumber);
  ax_div->add_option("--bprime", b_prime, "Contraction constant b' (default: measured)")->check(CLI::PositiveNumber);
  auto *ax_pair = ax->add_subcommand("pair", "Projection of a translated axis");
  axis_args(ax_pair);
  ax_pair->add_option("--psi", psi_file, "Automorphism translating the second axis (default: random from --seed)");
  ax_pair->add_option("--third", third_file, "Automorphism translating a third axis");
  ax_pair->add_option("--moves", moves, "Whitehead moves in a random translate")->capture_default_str()->check(CLI::PositiveNumber);
  ax_pair->add_option("--window", window)->capture_default_str()->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }

  // Files written with --out are CSV or JSON; these commands only report text.
  for (auto *c : {validate, wh_min, wh_prim, tt_verify, tt_leaf, ax_proj})
    if (*c && !out.empty()) {
      std::cerr << "usage error: " << c->get_name() << " does not write --out files\n";
      return 2;
    }

  try {
    if (*validate) return cmd_validate(f1);

    if (*dist) {
      Point x = checked_point(f1), y = checked_point(f2);
      auto d = distance(x, y);
      std::ostringstream o;
      std::cout << "value " << fmt(d.value) << "\n";
      std::cout << "witness " << to_string(d.witness.kind) << " " << format_word(d.witness.word, x.rank) << "\n";
      if (oracle > 0) std::cout << "oracle " << fmt(distance_oracle(x, y, oracle)) << "\n";
      o << "candidate,kind,length_x,length_y,ratio\n";
      for (auto &c : d.table)
        o << format_word(c.candidate.word, x.rank) << "," << to_string(c.candidate.kind) << "," << fmt(c.length_x) << ","
          << fmt(c.length_y) << "," << fmt(c.ratio) << "\n";
      emit(out, o.str());
      return 0;
    }

    if (*cands) {
      Point x = checked_point(f1);
      std::ostringstream o;
      o << "kind,path,word,length\n";
      for (auto &c : enumerate_candidates(x))
        o << to_string(c.kind) << "," << path_text(x.graph, c.path) << "," << format_word(c.word, x.rank) << ","
          << fmt(x.graph.path_length(c.path)) << "\n";
      emit(out, o.str());
      return 0;
    }

    if (*wh_min) {
      std::vector<CyclicWord> ws;
      try {
        for (auto &w : words) ws.emplace_back(parse_word(w, rank));
      } catch (const DomainError &e) {
        throw ParseError(e.what());
      }
      auto trace = whitehead_minimize(ws, rank);
      std::ostringstream o;
      for (std::size_t i = 0; i < trace.steps.size(); ++i) {
        auto &s = trace.steps[i];
        o << "step " << i + 1 << ": move " << format_move(s.move, rank) << ", length " << s.before << "→" << s.after
          << "\n";
      }
      o << "final:";
      for (auto &w : trace.final_words) o << " " << format_word(w.letters(), rank);
      o << "\nterminal: " << to_string(trace.terminal) << "\n";
      std::cout << o.str();
      return 0;
    }

    if (*wh_prim) {
      Word w;
      try {
        w = parse_word(f1, rank);
      } catch (const DomainError &e) {
        throw ParseError(e.what());
      }
      CyclicWord c(w);
      bool prim = is_primitive(c, rank);
      auto trace = whitehead_minimize({c}, rank);
      std::ostringstream o;
      o << (prim ? "primitive" : "not primitive") << "\n";
      o << "minimal: " << format_word(trace.final_words.front().letters(), rank) << " (" << to_string(trace.terminal)
        << ")\n";
      o << "graph: " << whitehead_graph(trace.final_words, rank).to_string() << "\n";
      std::cout << o.str();
      return 0;
    }

    if (*tt_verify) {
      auto f = read_self_map(f1);
      auto c = verify_train_track(f);
      std::cout << "train track: " << (c.is_tt ? "yes" : "no") << "\n";
      std::cout << "irreducible: " << (c.irreducible ? "yes" : "no") << "\n";
      if (c.witness)
        std::cout << "illegal turn {" << f.point.graph.half_edge_name(c.witness->first) << ","
                  << f.point.graph.half_edge_name(c.witness->second) << "} in the image of "
                  << f.point.graph.edges[static_cast<std::size_t>(c.witness->edge)].id << "\n";
      std::cout << "gates: " << gates(f).to_string(f.point.graph) << "\n";
      return c.is_tt && c.irreducible ? 0 : 1;
    }

    if (*tt_pf) {
      auto t = pf_metric(read_self_map(f1));
      const auto &g = t.point().graph;
      std::cout << "lambda " << fmt(t.lambda) << "\n";
      for (int e = 0; e < g.n_edges(); ++e)
        std::cout << "length " << g.edges[static_cast<std::size_t>(e)].id << " " << fmt(t.lengths[static_cast<std::size_t>(e)])
                  << "\n";
      std::cout << "gates: " << t.gates.to_string(g) << "\n";
      for (auto &w : t.gates.warnings) std::cerr << "warning: " << w << "\n";
      if (!out.empty()) write_text(out, point_to_json(t.point()).dump(2) + "\n");
      return 0;
    }

    if (*tt_leaf) {
      auto t = pf_metric(read_self_map(f1));
      int e = t.point().graph.edge_index(edge);
      if (e < 0) throw ParseError("unknown edge \"" + edge + "\"");
      auto p = leaf_segment(t, e, k);
      std::ostringstream o;
      o << "word " << format_word(leaf_word(t, e, k), t.point().rank) << "\n";
      o << "path " << path_text(t.point().graph, p) << "\n";
      o << "length " << fmt(t.point().graph.path_length(p)) << "\n";
      std::cout << o.str();
      return 0;
    }

    if (*tt_wh) {
      auto fwd = pf_metric(read_self_map(f1));
      std::optional<TrainTrackMap> bwd;
      read_inverse(f2, bwd);
      if (!bwd) throw ParseError("whsearch needs a train track for the inverse");
      Point start = f3.empty() ? fwd.point() : checked_point(f3);
      auto s = no_cut_vertex_search(fwd, *bwd, start);
      std::ostringstream o;
      for (std::size_t i = 0; i < s.steps.size(); ++i) {
        auto &st = s.steps[i];
        o << "step " << i + 1 << ": move " << format_move(st.move, start.rank) << " on graph " << st.graph_before
          << ", ratios " << fmt(st.ratio_forward) << " " << fmt(st.ratio_backward) << "\n";
      }
      o << "moves " << s.moves.size() << "\n";
      o << "graph " << s.final_graph.graph.to_string() << " (k=" << s.final_graph.k_used << ")\n";
      o << "theta";
      for (int i = 1; i <= start.rank; ++i)
        o << " " << letter_char(i, start.rank) << "->" << format_word(s.theta.image(i), start.rank);
      o << "\n";
      // Whether F lies on the axis through the PF point, for the record.
      Axis axis = make_axis(fwd, *bwd);
      auto pr = project(s.point, axis);
      o << "axis distance " << fmt(pr.value) << " at m=" << pr.first() << (pr.value <= 1e-9 ? " (on axis)" : " (off axis)")
        << "\n";
      std::cout << o.str();
      if (!out.empty()) write_text(out, point_to_json(s.point).dump(2) + "\n");
      return 0;
    }

    if (*ax_proj) {
      Axis a = load_axis(f1, f2);
      Point x = checked_point(f3);
      auto pr = project(x, a);
      std::ostringstream o;
      o << "argmin";
      for (int m : pr.argmin) o << " " << m;
      o << "\nvalue " << fmt(pr.value) << "\ndiam " << fmt(pr.diam) << "\nwindow " << pr.lo << " " << pr.hi
        << "\nunimodal " << (pr.unimodal ? "yes" : "no") << "\n";
      o << "discrete axis: integer powers only\n";
      std::cout << o.str();
      return 0;
    }

    if (*ax_prof) {
      Axis a = load_axis(f1, f2);
      Word w;
      try {
        w = parse_word(word, a.base.rank);
      } catch (const DomainError &e) {
        throw ParseError(e.what());
      }
      auto p = length_profile(CyclicWord(w), a, lo, hi);
      std::ostringstream o;
      o << "m,length\n";
      for (int m = lo; m <= hi; ++m) o << m << "," << fmt(p.at(m)) << "\n";
      emit(out, o.str());
      std::cerr << "min-set";
      for (int m : p.min_set) std::cerr << " " << m;
      std::cerr << (p.window_too_small ? " (window too small)" : "") << "\n";
      std::cerr << "tail slopes " << fmt(p.right_slope) << " " << fmt(p.left_slope) << " (log lambda " << fmt(a.step())
                << ", log mu " << fmt(std::log(a.mu)) << (a.mu_estimated ? " estimated" : "") << ")\n";
      return 0;
    }

    if (*ax_contract) {
      Axis a = load_axis(f1, f2);
      ContractionConfig cfg;
      cfg.n_samples = samples;
      cfg.seed = seed;
      cfg.radius_budget = radius;
      auto run = contraction_experiment(a, cfg, mode == "balls" ? ContractionMode::Balls : ContractionMode::Morse);
      emit(out, mode == "balls" ? balls_csv(run.balls) : morse_csv(run.morse));
      for (auto &b : run.balls)
        if (b.skipped) std::cerr << "sample " << b.sample << " skipped: " << b.reason << "\n";
      std::cerr << "D_emp " << fmt(run.d_emp) << "\n";
      return 0;
    }

    if (*ax_probe) {
      Axis a = load_axis(f1, f2);
      auto run = probe_experiment(a, samples, seed, min_sep);
      emit(out, probe_csv(run.records));
      std::cerr << "c_emp " << fmt(run.c1) << " " << fmt(run.c2) << " " << fmt(run.c3) << "\n";
      return 0;
    }

    if (*ax_div) {
      Axis a = load_axis(f1, f2);
      if (b_prime <= 0.0) {
        ContractionConfig cfg;
        cfg.seed = seed;
        double d_emp = contraction_experiment(a, cfg, ContractionMode::Balls).d_emp;
        double c_emp = probe_experiment(a, 200, seed).c3;
        b_prime = divergence_b_prime(d_emp, c_emp);
      }
      auto rs = divergence_experiment(a, r_ball, b_prime, samples, seed);
      emit(out, divergence_csv(rs));
      std::cerr << "b' " << fmt(b_prime) << ", bound " << fmt(divergence_bound(r_ball, b_prime))
                << (divergence_bound(r_ball, b_prime) <= 0.0 ? " (vacuous)" : "") << "\n";
      return 0;
    }

    if (*ax_pair) {
      Axis a = load_axis(f1, f2);
      auto translate = [&](const std::string &file, std::uint64_t s) {
        if (file.empty()) {
          auto [p, pi] = random_translate(a.base.rank, s, moves);
          return translate_axis(a, p, pi);
        }
        auto p = certify(read_automorphism(file));
        return translate_axis(a, p, invert(p));
      };
      Axis b = translate(psi_file, seed);
      std::optional<Axis> c;
      if (!third_file.empty()) c = translate(third_file, seed + 1);
      auto rep = two_axis_report(a, b, c, window);
      emit(out, two_axis_csv(rep));
      if (rep.triple)
        std::cerr << "d_A(B,C) " << fmt(rep.triple->d_a_bc) << ", d_B(A,C) " << fmt(rep.triple->d_b_ac) << ", d_C(A,B) "
                  << fmt(rep.triple->d_c_ab) << ", M " << fmt(rep.triple->m_emp) << ", exceeding "
                  << rep.triple->exceeding << "\n";
      return 0;
    }
  } catch (const IoError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError &e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
