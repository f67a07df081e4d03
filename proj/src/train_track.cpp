#include "osk/train_track.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace osk {

namespace {

void append_reduced(Path &out, HalfEdge h) {
  if (!out.empty() && out.back() == -h)
    out.pop_back();
  else
    out.push_back(h);
}

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

}  // namespace

Path GraphSelfMap::apply(const Path &p) const {
  Path out;
  for (HalfEdge h : p) {
    const Path &img = edge_image[idx(edge_of(h))];
    if (h > 0)
      for (HalfEdge x : img) append_reduced(out, x);
    else
      for (auto it = img.rbegin(); it != img.rend(); ++it) append_reduced(out, -*it);
  }
  return out;
}

Automorphism GraphSelfMap::induced_automorphism() const {
  Automorphism a;
  a.rank = point.rank;
  Path to = point.tree_path(vertex_image[idx(point.base)]);
  for (auto &loop : point.loops) {
    Path p = to;
    Path img = apply(loop);
    p.insert(p.end(), img.begin(), img.end());
    Path back = inverse(to);
    p.insert(p.end(), back.begin(), back.end());
    a.images.push_back(point.read_path(reduce(p)));
  }
  return a;
}

void check_self_map(const GraphSelfMap &f) {
  const auto &g = f.point.graph;
  if (static_cast<int>(f.vertex_image.size()) != g.n_vertices() || static_cast<int>(f.edge_image.size()) != g.n_edges())
    throw DomainError("self-map size does not match the graph");
  for (int v : f.vertex_image)
    if (v < 0 || v >= g.n_vertices()) throw DomainError("vertex image outside the graph");
  for (int e = 0; e < g.n_edges(); ++e) {
    const Path &img = f.edge_image[idx(e)];
    auto &edge = g.edges[idx(e)];
    int a = f.vertex_image[idx(edge.from)], b = f.vertex_image[idx(edge.to)];
    if (img.empty()) {
      if (a != b) throw DomainError("constant edge " + edge.id + " joins different vertex images");
      continue;
    }
    check_path(g, img);
    if (reduce(img) != img) throw DomainError("image of edge " + edge.id + " is not tight");
    if (g.tail(img.front()) != a || g.head(img.back()) != b)
      throw DomainError("image of edge " + edge.id + " does not fit the vertex images");
  }
}

bool Gates::same_gate(HalfEdge a, HalfEdge b) const {
  int ga = gate_of[idx(direction_index(a))], gb = gate_of[idx(direction_index(b))];
  return ga >= 0 && ga == gb;
}

std::vector<std::vector<HalfEdge>> Gates::at_vertex(const MetricGraph &g, int v) const {
  std::map<int, std::vector<HalfEdge>> by_gate;
  for (HalfEdge h : g.star(v)) {
    int id = gate_of[idx(direction_index(h))];
    if (id >= 0) by_gate[id].push_back(h);
  }
  std::vector<std::vector<HalfEdge>> out;
  for (auto &[id, hs] : by_gate) out.push_back(hs);
  return out;
}

std::string Gates::to_string(const MetricGraph &g) const {
  std::ostringstream os;
  for (int v = 0; v < g.n_vertices(); ++v) {
    if (v) os << "; ";
    os << g.vertices[idx(v)] << ":";
    for (auto &gate : at_vertex(g, v)) {
      os << " {";
      for (std::size_t i = 0; i < gate.size(); ++i) os << (i ? "," : "") << g.half_edge_name(gate[i]);
      os << "}";
    }
  }
  return os.str();
}

std::vector<HalfEdge> direction_map(const GraphSelfMap &f) {
  const int nd = 2 * f.point.graph.n_edges();
  std::vector<HalfEdge> df(idx(nd), 0);
  for (int d = 0; d < nd; ++d) {
    HalfEdge h = direction_half_edge(d);
    const Path &img = f.edge_image[idx(edge_of(h))];
    if (img.empty()) continue;
    df[idx(d)] = h > 0 ? img.front() : -img.back();
  }
  return df;
}

Gates gates(const GraphSelfMap &f) {
  check_self_map(f);
  const auto &g = f.point.graph;
  auto df = direction_map(f);
  const int nd = static_cast<int>(df.size());
  Gates out;
  out.iterations = nd;
  out.gate_of.assign(idx(nd), -1);
  // After nd steps every direction has entered its periodic orbit, on which
  // Df is injective, so two directions are identified iff their nd-th
  // iterates agree.
  std::map<std::pair<int, HalfEdge>, int> ids;
  for (int d = 0; d < nd; ++d) {
    HalfEdge h = direction_half_edge(d);
    HalfEdge cur = h;
    for (int k = 0; k < nd && cur != 0; ++k) cur = df[idx(direction_index(cur))];
    if (cur == 0) {
      out.warnings.push_back("direction " + g.half_edge_name(h) + " is eventually mapped to a point; excluded");
      continue;
    }
    auto key = std::make_pair(g.tail(h), cur);
    auto it = ids.find(key);
    if (it == ids.end()) it = ids.emplace(key, static_cast<int>(ids.size())).first;
    out.gate_of[idx(d)] = it->second;
  }
  return out;
}

Matrix transition_matrix(const GraphSelfMap &f) {
  const int n = f.point.graph.n_edges();
  Matrix m(idx(n), std::vector<double>(idx(n), 0.0));
  for (int i = 0; i < n; ++i)
    for (HalfEdge h : f.edge_image[idx(i)]) m[idx(i)][idx(edge_of(h))] += 1.0;
  return m;
}

bool is_irreducible(const Matrix &m) {
  const std::size_t n = m.size();
  if (n == 0) return false;
  std::vector<std::vector<char>> b(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) b[i][j] = (i == j) || m[i][j] > 0.0;
  // (I+M)^p for p >= n by repeated squaring.
  for (std::size_t p = 1; p < n; p *= 2) {
    std::vector<std::vector<char>> c(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k)
        if (b[i][k])
          for (std::size_t j = 0; j < n; ++j) c[i][j] |= b[k][j];
    b = std::move(c);
  }
  for (auto &row : b)
    for (char x : row)
      if (!x) return false;
  return true;
}

std::optional<std::pair<HalfEdge, HalfEdge>> first_illegal_turn(const Gates &g, const Path &p, bool cyclic) {
  const std::size_t n = p.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (g.same_gate(-p[i], p[i + 1])) return std::make_pair(-p[i], p[i + 1]);
  if (cyclic && n >= 1 && g.same_gate(-p[n - 1], p[0])) return std::make_pair(-p[n - 1], p[0]);
  return std::nullopt;
}

TrainTrackCheck verify_train_track(const GraphSelfMap &f) {
  TrainTrackCheck r;
  Gates gt = gates(f);
  r.is_tt = true;
  for (int e = 0; e < f.point.graph.n_edges() && r.is_tt; ++e) {
    if (auto t = first_illegal_turn(gt, f.edge_image[idx(e)], false)) {
      r.is_tt = false;
      r.witness = IllegalTurn{e, t->first, t->second};
    }
  }
  r.irreducible = is_irreducible(transition_matrix(f));
  return r;
}

PerronFrobenius perron_frobenius(const Matrix &m, double residual, int cap) {
  const std::size_t n = m.size();
  PerronFrobenius r;
  std::vector<double> v(n, 1.0 / static_cast<double>(n)), mv(n);
  for (int it = 1; it <= cap; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += m[i][j] * v[j];
      mv[i] = s;
    }
    double lam = std::accumulate(mv.begin(), mv.end(), 0.0);  // v sums to 1
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) res = std::max(res, std::abs(mv[i] - lam * v[i]));
    r.lambda = lam;
    r.vector = v;
    r.iterations = it;
    r.residual = res;
    if (res < residual) break;
    // Step with M + I, which is primitive whenever M is irreducible.
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += (v[i] = mv[i] + v[i]);
    for (auto &x : v) x /= s;
  }
  return r;
}

TrainTrackMap pf_metric(const GraphSelfMap &f) {
  auto chk = verify_train_track(f);
  const auto &g = f.point.graph;
  if (!chk.is_tt) {
    auto &w = *chk.witness;
    throw DomainError("not a train track: image of " + g.edges[idx(w.edge)].id + " crosses the illegal turn {" +
                      g.half_edge_name(w.first) + "," + g.half_edge_name(w.second) + "}");
  }
  if (!chk.irreducible) throw DomainError("transition matrix is reducible");
  TrainTrackMap tt;
  tt.matrix = transition_matrix(f);
  auto right = perron_frobenius(tt.matrix);
  if (right.residual >= 1e-12) throw DomainError("power iteration did not converge");
  if (right.lambda <= 1.0 + 1e-9) throw DomainError("expansion factor " + std::to_string(right.lambda) + " is not above 1");
  Matrix t(tt.matrix.size(), std::vector<double>(tt.matrix.size()));
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = 0; j < t.size(); ++j) t[i][j] = tt.matrix[j][i];
  auto left = perron_frobenius(t);
  tt.lambda = right.lambda;
  tt.lengths = right.vector;
  tt.frequencies = left.vector;
  tt.iterations = right.iterations;
  tt.map = f;
  tt.map.point = with_lengths(f.point, tt.lengths);
  tt.gates = gates(tt.map);
  return tt;
}

double legality_threshold(double bcc, double lambda) {
  if (lambda <= 1.0) throw DomainError("legality threshold needs lambda > 1");
  return 4.0 * bcc / (lambda - 1.0);
}

double leg_from_pieces(const std::vector<double> &piece_lengths, double kappa) {
  double total = 0.0, big = 0.0;
  for (double l : piece_lengths) {
    total += l;
    if (l > kappa) big += l;
  }
  return total > 0.0 ? big / total : 0.0;
}

LegalityReport legality_report(const Path &p, bool cyclic, const TrainTrackMap &tt) {
  const auto &g = tt.point().graph;
  check_path(g, p);
  LegalityReport r;
  r.bcc = tt.lambda * g.volume();
  r.kappa = legality_threshold(r.bcc, tt.lambda);
  r.total = g.path_length(p);
  const std::size_t n = p.size();
  if (n == 0) return r;
  // cut[i]: the turn in front of p[i] is illegal.
  std::vector<bool> cut(n, false);
  for (std::size_t i = 1; i < n; ++i) cut[i] = tt.gates.same_gate(-p[i - 1], p[i]);
  if (cyclic) cut[0] = tt.gates.same_gate(-p[n - 1], p[0]);
  std::size_t start = 0;
  if (cyclic) {
    auto it = std::find(cut.begin(), cut.end(), true);
    start = it == cut.end() ? 0 : static_cast<std::size_t>(it - cut.begin());
  }
  LegalPiece cur;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t i = (start + k) % n;
    if (k > 0 && cut[i]) {
      r.pieces.push_back(cur);
      cur = {};
    }
    cur.path.push_back(p[i]);
    cur.length += g.length(p[i]);
  }
  r.pieces.push_back(cur);
  std::vector<double> lens;
  for (auto &pc : r.pieces) lens.push_back(pc.length);
  r.leg = leg_from_pieces(lens, r.kappa);
  return r;
}

LegalityReport legality_report(const CyclicWord &a, const TrainTrackMap &tt) {
  const Point &p = tt.point();
  return legality_report(tighten_loop(p.graph, p.realize(a.letters())), true, tt);
}

Path leaf_segment(const TrainTrackMap &tt, int edge, int k) {
  if (k < 0) throw DomainError("leaf segment needs k >= 0");
  if (edge < 0 || edge >= tt.point().graph.n_edges()) throw DomainError("edge outside the graph");
  Path p{forward(edge)};
  for (int i = 0; i < k; ++i) p = tt.map.apply(p);
  return p;
}

Word leaf_word(const TrainTrackMap &tt, int edge, int k) { return tt.point().read_path(leaf_segment(tt, edge, k)); }

double longest_leaf_piece(const Path &a, const Path &leaf, const MetricGraph &g) {
  double best = 0.0;
  const std::size_t n = a.size();
  if (n == 0) return 0.0;
  for (const Path &w : {a, Path(inverse(a))}) {
    Path doubled = w;
    doubled.insert(doubled.end(), w.begin(), w.end());
    for (std::size_t i = 0; i < n; ++i) {
      double len = 0.0;
      // Occurrence is monotone in the length of the subword.
      for (std::size_t m = 1; m <= n; ++m) {
        auto first = doubled.begin() + static_cast<long>(i);
        if (std::search(leaf.begin(), leaf.end(), first, first + static_cast<long>(m)) == leaf.end()) break;
        len += g.length(doubled[i + m - 1]);
        best = std::max(best, len);
      }
    }
  }
  return best;
}

double longest_leaf_piece(const CyclicWord &a, const Path &leaf, const TrainTrackMap &tt) {
  const Point &p = tt.point();
  return longest_leaf_piece(tighten_loop(p.graph, p.realize(a.letters())), leaf, p.graph);
}

LaminationLengthEstimate lamination_length_ratio(const TrainTrackMap &tt, const Point &target, double tol, int k_cap) {
  if (target.rank != tt.point().rank) throw DomainError("rank mismatch in lamination_length_ratio");
  LaminationLengthEstimate est;
  est.frequencies = tt.frequencies;
  const Point &t0 = tt.point();
  const int n = t0.graph.n_edges();
  std::vector<Path> tiles;
  for (int e = 0; e < n; ++e) tiles.push_back({forward(e)});
  constexpr std::size_t kMaxTile = 4000000;
  // Early terms can coincide before the sequence settles, so several
  // consecutive small steps are required.
  constexpr int kSettled = 3;
  int settled = 0;
  for (int k = 1; k <= k_cap; ++k) {
    std::size_t longest = 0;
    for (auto &t : tiles) {
      t = tt.map.apply(t);
      longest = std::max(longest, t.size());
    }
    double num = 0.0, den = 0.0;
    for (int i = 0; i < n; ++i) {
      const Path &t = tiles[idx(i)];
      num += est.frequencies[idx(i)] * target.graph.path_length(target.realize(t0.read_path(t)));
      den += est.frequencies[idx(i)] * t0.graph.path_length(t);
    }
    est.a.push_back(num / den);
    est.k_used = k;
    est.value = est.a.back();
    if (k >= 2) settled = std::abs(est.a[idx(k - 1)] - est.a[idx(k - 2)]) < tol ? settled + 1 : 0;
    if (settled >= kSettled) {
      est.converged = true;
      break;
    }
    if (longest > kMaxTile) break;
  }
  return est;
}

namespace {

struct LeafPaths {
  LaminationGraph graph;
  std::vector<Path> paths;  ///< trimmed leaf paths in x
};

std::set<std::pair<int, int>> edge_set(const WhiteheadGraph &g) {
  auto e = g.simple_edges();
  return {e.begin(), e.end()};
}

LeafPaths lamination_paths(const TrainTrackMap &fwd, const TrainTrackMap &bwd, const Point &x, int k_cap) {
  if (fwd.point().rank != x.rank || bwd.point().rank != x.rank) throw DomainError("rank mismatch in lamination graph");
  std::size_t longest_loop = 0;
  for (auto &l : x.loops) longest_loop = std::max(longest_loop, l.size());
  const std::size_t trim = static_cast<std::size_t>(x.rank) * longest_loop;
  std::vector<std::pair<const TrainTrackMap *, Path>> leaves;
  for (const TrainTrackMap *tt : {&fwd, &bwd})
    for (int e = 0; e < tt->point().graph.n_edges(); ++e) leaves.emplace_back(tt, Path{forward(e)});
  std::vector<std::set<std::pair<int, int>>> history;
  LeafPaths out;
  for (int k = 1; k <= k_cap; ++k) {
    WhiteheadGraph g;
    g.rank = x.graph.n_edges();
    std::vector<Path> trimmed;
    bool long_enough = true;
    for (auto &[tt, p] : leaves) {
      p = tt->map.apply(p);
      Path q = x.realize(tt->point().read_path(p));
      if (q.size() <= 2 * trim + 2) {
        long_enough = false;
        continue;
      }
      Path inner(q.begin() + static_cast<long>(trim), q.end() - static_cast<long>(trim));
      for (std::size_t i = 0; i + 1 < inner.size(); ++i) g.add_edge(-inner[i], inner[i + 1]);
      trimmed.push_back(std::move(inner));
    }
    if (!long_enough) continue;
    history.push_back(edge_set(g));
    out.graph = {g, k};
    out.paths = std::move(trimmed);
    std::size_t h = history.size();
    if (h >= 3 && history[h - 1] == history[h - 2] && history[h - 2] == history[h - 3]) return out;
  }
  throw DomainError("lamination Whitehead graph did not stabilise within the iteration cap");
}

}  // namespace

LaminationGraph lamination_whitehead_graph(const TrainTrackMap &forward, const TrainTrackMap &backward, const Point &x,
                                           int k_cap) {
  return lamination_paths(forward, backward, x, k_cap).graph;
}

CutVertexFreeSearch no_cut_vertex_search(const TrainTrackMap &fwd, const TrainTrackMap &bwd, const Point &start,
                                         int max_moves, double ratio_tol) {
  if (start.graph.n_vertices() != 1) throw DomainError("search must start at a rose");
  if (!verify_inverse(fwd.map.induced_automorphism(), bwd.map.induced_automorphism()))
    throw DomainError("the two train tracks do not represent inverse automorphisms");
  const int rank = start.rank;
  // Marking of the start rose as an automorphism on edge letters.
  Automorphism sigma{rank, start.loops, false};
  sigma = certify(sigma);
  Automorphism sigma_inv = invert(sigma);

  CutVertexFreeSearch r;
  r.point = start;
  r.theta = certify(Automorphism::identity(rank));
  r.ratios_forward.push_back(lamination_length_ratio(fwd, start, ratio_tol).value);
  r.ratios_backward.push_back(lamination_length_ratio(bwd, start, ratio_tol).value);
  for (int step = 0;; ++step) {
    auto lp = lamination_paths(fwd, bwd, r.point, 30);
    const auto &g = lp.graph.graph;
    auto cut = cut_analysis(g);
    if (!cut.connected) throw DomainError("combined lamination graph is disconnected: " + g.to_string());
    if (!cut.cut_vertex) {
      r.final_graph = lp.graph;
      return r;
    }
    if (step >= max_moves) throw DomainError("no cut-vertex-free point within the move budget");
    std::optional<WhiteheadMove> best;
    std::size_t best_len = 0;
    for (auto &m : cut_vertex_moves(g)) {
      auto phi = whitehead_move(rank, m);
      std::size_t len = 0;
      for (auto &p : lp.paths) len += apply_endomorphism(phi, p).size();
      if (!best || len < best_len) {
        best = m;
        best_len = len;
      }
    }
    auto phi = whitehead_move(rank, *best);
    std::vector<Path> loops;
    for (auto &l : r.point.loops) loops.push_back(apply_endomorphism(phi, l));
    Point next = make_point(r.point.graph, rank, r.point.base, loops);
    r.theta = compose(sigma_inv, compose(phi, compose(sigma, r.theta)));
    double rf = lamination_length_ratio(fwd, next, ratio_tol).value;
    double rb = lamination_length_ratio(bwd, next, ratio_tol).value;
    if (!(rf < r.ratios_forward.back() && rb < r.ratios_backward.back()))
      throw DomainError("lamination lengths did not decrease under " + format_move(*best, rank));
    r.steps.push_back({*best, g.to_string(), rf, rb});
    r.moves.push_back(*best);
    r.ratios_forward.push_back(rf);
    r.ratios_backward.push_back(rb);
    r.point = std::move(next);
  }
}

}  // namespace osk
