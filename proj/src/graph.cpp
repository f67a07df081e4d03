#include "osk/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "osk/random.hpp"
#include "osk/whitehead.hpp"

namespace osk {

int MetricGraph::tail(HalfEdge h) const {
  auto &e = edges[static_cast<std::size_t>(edge_of(h))];
  return h > 0 ? e.from : e.to;
}

int MetricGraph::head(HalfEdge h) const {
  auto &e = edges[static_cast<std::size_t>(edge_of(h))];
  return h > 0 ? e.to : e.from;
}

double MetricGraph::path_length(const Path &p) const {
  double s = 0.0;
  for (HalfEdge h : p) s += length(h);
  return s;
}

int MetricGraph::valence(int v) const {
  int k = 0;
  for (auto &e : edges) k += (e.from == v) + (e.to == v);
  return k;
}

bool MetricGraph::connected() const {
  if (vertices.empty()) return false;
  std::vector<int> parent(vertices.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    return x;
  };
  int comps = n_vertices();
  for (auto &e : edges) {
    int a = find(e.from), b = find(e.to);
    if (a != b) {
      parent[static_cast<std::size_t>(a)] = b;
      --comps;
    }
  }
  return comps == 1;
}

std::vector<HalfEdge> MetricGraph::star(int v) const {
  std::vector<HalfEdge> out;
  for (int e = 0; e < n_edges(); ++e) {
    if (edges[static_cast<std::size_t>(e)].from == v) out.push_back(e + 1);
    if (edges[static_cast<std::size_t>(e)].to == v) out.push_back(-(e + 1));
  }
  return out;
}

int MetricGraph::edge_index(const std::string &id) const {
  for (int e = 0; e < n_edges(); ++e)
    if (edges[static_cast<std::size_t>(e)].id == id) return e;
  return -1;
}

double MetricGraph::volume() const {
  double s = 0.0;
  for (auto &e : edges) s += e.length;
  return s;
}

std::string MetricGraph::half_edge_name(HalfEdge h) const {
  auto &id = edges[static_cast<std::size_t>(edge_of(h))].id;
  return h > 0 ? id : "~" + id;
}

void check_path(const MetricGraph &g, const Path &p) {
  for (HalfEdge h : p)
    if (h == 0 || edge_of(h) >= g.n_edges()) throw DomainError("path uses an unknown edge");
  for (std::size_t i = 0; i + 1 < p.size(); ++i)
    if (g.head(p[i]) != g.tail(p[i + 1]))
      throw DomainError("broken incidence between " + g.half_edge_name(p[i]) + " and " + g.half_edge_name(p[i + 1]));
}

Path tighten_path(const MetricGraph &g, const Path &p) {
  check_path(g, p);
  return reduce(p);
}

Path tighten_loop(const MetricGraph &g, const Path &p) {
  Path r = tighten_path(g, p);
  if (!r.empty() && g.tail(r.front()) != g.head(r.back())) throw DomainError("loop is not closed");
  std::size_t i = 0, j = r.size();
  while (j - i >= 2 && r[i] == -r[j - 1]) {
    ++i;
    --j;
  }
  return Path(r.begin() + static_cast<long>(i), r.begin() + static_cast<long>(j));
}

namespace {

std::vector<HalfEdge> shortest_path_tree(const MetricGraph &g, int base) {
  const int nv = g.n_vertices();
  std::vector<double> dist(static_cast<std::size_t>(nv), std::numeric_limits<double>::infinity());
  std::vector<bool> done(static_cast<std::size_t>(nv), false);
  std::vector<HalfEdge> parent(static_cast<std::size_t>(nv), 0);
  dist[static_cast<std::size_t>(base)] = 0.0;
  for (int it = 0; it < nv; ++it) {
    int v = -1;
    for (int u = 0; u < nv; ++u)
      if (!done[static_cast<std::size_t>(u)] && std::isfinite(dist[static_cast<std::size_t>(u)]) &&
          (v < 0 || dist[static_cast<std::size_t>(u)] < dist[static_cast<std::size_t>(v)] - 1e-15))
        v = u;
    if (v < 0) throw DomainError("graph is not connected");
    done[static_cast<std::size_t>(v)] = true;
    for (HalfEdge h : g.star(v)) {
      int w = g.head(h);
      if (done[static_cast<std::size_t>(w)]) continue;
      double d = dist[static_cast<std::size_t>(v)] + g.length(h);
      if (d < dist[static_cast<std::size_t>(w)] - 1e-15) {
        dist[static_cast<std::size_t>(w)] = d;
        parent[static_cast<std::size_t>(w)] = h;
      }
    }
  }
  return parent;
}

}  // namespace

void Point::finalize() {
  const auto &g = graph;
  const int nv = g.n_vertices();
  if (base < 0 || base >= nv) throw DomainError("basepoint outside the vertex set");
  if (static_cast<int>(loops.size()) != rank) throw DomainError("marking needs one loop per generator");
  auto parent = shortest_path_tree(g, base);
  if (marked && parent == tree_parent) return;
  marked = false;
  tree_parent = std::move(parent);
  in_tree.assign(static_cast<std::size_t>(g.n_edges()), false);
  for (int v = 0; v < nv; ++v)
    if (v != base) in_tree[static_cast<std::size_t>(edge_of(tree_parent[static_cast<std::size_t>(v)]))] = true;
  std::vector<int> slot(static_cast<std::size_t>(g.n_edges()), 0);
  int m = 0;
  for (int e = 0; e < g.n_edges(); ++e)
    if (!in_tree[static_cast<std::size_t>(e)]) slot[static_cast<std::size_t>(e)] = ++m;
  if (m != rank)
    throw DomainError("first Betti number " + std::to_string(m) + " differs from rank " + std::to_string(rank));
  Automorphism sigma;
  sigma.rank = rank;
  for (auto &l : loops) {
    check_path(g, l);
    if (l.empty() || g.tail(l.front()) != base || g.head(l.back()) != base)
      throw DomainError("generator loop is not closed at the basepoint");
    Word w;
    for (HalfEdge h : l) {
      int k = slot[static_cast<std::size_t>(edge_of(h))];
      if (k) w.push_back(h > 0 ? k : -k);
    }
    sigma.images.push_back(reduce(w));
  }
  Automorphism inv = invert(sigma);
  labels.assign(static_cast<std::size_t>(g.n_edges()), Word{});
  for (int e = 0; e < g.n_edges(); ++e)
    if (int k = slot[static_cast<std::size_t>(e)]) labels[static_cast<std::size_t>(e)] = inv.image(k);
  marked = true;
}

Word Point::read_path(const Path &p) const {
  Word out;
  auto push = [&](Letter l) {
    if (!out.empty() && out.back() == -l)
      out.pop_back();
    else
      out.push_back(l);
  };
  for (HalfEdge h : p) {
    const Word &l = labels[static_cast<std::size_t>(edge_of(h))];
    if (h > 0)
      for (Letter x : l) push(x);
    else
      for (auto it = l.rbegin(); it != l.rend(); ++it) push(-*it);
  }
  return out;
}

Path Point::realize(std::span<const Letter> w) const {
  Path out;
  auto push = [&](HalfEdge h) {
    if (!out.empty() && out.back() == -h)
      out.pop_back();
    else
      out.push_back(h);
  };
  for (Letter l : w) {
    if (l == 0 || std::abs(l) > rank) throw DomainError("rank mismatch: letter outside rank");
    const Path &loop = loops[static_cast<std::size_t>(std::abs(l) - 1)];
    if (l > 0)
      for (HalfEdge h : loop) push(h);
    else
      for (auto it = loop.rbegin(); it != loop.rend(); ++it) push(-*it);
  }
  return out;
}

Path Point::tree_path(int v) const {
  Path rev;
  while (v != base) {
    HalfEdge h = tree_parent[static_cast<std::size_t>(v)];
    rev.push_back(h);
    v = graph.tail(h);
  }
  return Path(rev.rbegin(), rev.rend());
}

Point make_point(MetricGraph g, int rank, int base, std::vector<Path> loops) {
  Point p;
  p.graph = std::move(g);
  p.rank = rank;
  p.base = base;
  p.loops.clear();
  for (auto &l : loops) p.loops.push_back(reduce(l));
  p.finalize();
  return p;
}

ValidationReport validate_point(const Point &p, double tol) {
  ValidationReport r;
  auto issue = [&](std::string s) {
    r.ok = false;
    r.issues.push_back(std::move(s));
  };
  const auto &g = p.graph;
  if (g.n_vertices() == 0) {
    issue("graph has no vertices");
    return r;
  }
  for (int v = 0; v < g.n_vertices(); ++v)
    if (g.valence(v) < 3)
      issue("vertex " + g.vertices[static_cast<std::size_t>(v)] + " has valence " + std::to_string(g.valence(v)));
  for (auto &e : g.edges)
    if (!(e.length >= 0.0 && e.length <= 1.0)) issue("edge " + e.id + " has length outside [0,1]");
  if (std::abs(g.volume() - 1.0) > tol) issue("volume " + std::to_string(g.volume()) + " differs from 1");
  if (!g.connected()) issue("graph is not connected");
  {
    std::vector<int> parent(static_cast<std::size_t>(g.n_vertices()));
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
      return parent[static_cast<std::size_t>(x)] == x ? x : parent[static_cast<std::size_t>(x)] = find(parent[static_cast<std::size_t>(x)]);
    };
    for (auto &e : g.edges) {
      if (e.length > tol) continue;
      int a = find(e.from), b = find(e.to);
      if (a == b) {
        issue("zero-length subgraph contains a cycle through edge " + e.id);
        break;
      }
      parent[static_cast<std::size_t>(a)] = b;
    }
  }
  if (g.connected() && g.betti() != p.rank)
    issue("first Betti number " + std::to_string(g.betti()) + " differs from rank " + std::to_string(p.rank));
  if (static_cast<int>(p.loops.size()) != p.rank) issue("marking needs one loop per generator");
  for (std::size_t i = 0; i < p.loops.size(); ++i) {
    try {
      check_path(g, p.loops[i]);
      if (p.loops[i].empty() || g.tail(p.loops[i].front()) != p.base || g.head(p.loops[i].back()) != p.base)
        issue("loop of generator " + std::to_string(i + 1) + " is not closed at the basepoint");
    } catch (const DomainError &e) {
      issue("loop of generator " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  if (!r.ok) return r;
  Point q = p;
  q.marked = false;
  try {
    q.finalize();
  } catch (const DomainError &e) {
    issue(std::string("marking is not a homotopy equivalence: ") + e.what());
    return r;
  }
  std::vector<CyclicWord> lab;
  for (int e = 0; e < g.n_edges(); ++e)
    if (!q.in_tree[static_cast<std::size_t>(e)]) lab.emplace_back(q.labels[static_cast<std::size_t>(e)]);
  auto t = whitehead_minimize(lab, p.rank);
  if (t.terminal != TerminalState::BasisReached) issue("edge labels do not minimise to a basis");
  return r;
}

double loop_length(const CyclicWord &w, const Point &p) { return loop_length(w.letters(), p); }

double loop_length(std::span<const Letter> w, const Point &p) {
  Path r = p.realize(w);
  std::size_t i = 0, j = r.size();
  while (j - i >= 2 && r[i] == -r[j - 1]) {
    ++i;
    --j;
  }
  double s = 0.0;
  for (std::size_t k = i; k < j; ++k) s += p.graph.length(r[k]);
  return s;
}

double path_length_of_word(std::span<const Letter> w, const Point &p) { return p.graph.path_length(p.realize(w)); }

std::string to_string(CandidateKind k) {
  switch (k) {
  case CandidateKind::Embedded: return "embedded";
  case CandidateKind::FigureEight: return "figure-eight";
  case CandidateKind::Barbell: return "barbell";
  }
  return "?";
}

namespace {

struct Cycle {
  Path path;
  std::vector<int> verts;  // sorted
  std::vector<int> edges;  // sorted
};

std::vector<Cycle> simple_cycles(const MetricGraph &g) {
  std::vector<Cycle> out;
  std::set<std::vector<int>> seen;
  const int nv = g.n_vertices();
  for (int s = 0; s < nv; ++s) {
    Path path;
    std::vector<bool> on(static_cast<std::size_t>(nv), false);
    std::vector<bool> used(static_cast<std::size_t>(g.n_edges()), false);
    on[static_cast<std::size_t>(s)] = true;
    std::function<void(int)> dfs = [&](int v) {
      for (HalfEdge h : g.star(v)) {
        int e = edge_of(h);
        if (used[static_cast<std::size_t>(e)]) continue;
        int w = g.head(h);
        if (w == s) {
          path.push_back(h);
          Cycle c;
          c.path = path;
          for (HalfEdge k : path) {
            c.edges.push_back(edge_of(k));
            c.verts.push_back(g.tail(k));
          }
          std::sort(c.edges.begin(), c.edges.end());
          std::sort(c.verts.begin(), c.verts.end());
          if (seen.insert(c.edges).second) out.push_back(std::move(c));
          path.pop_back();
        } else if (w > s && !on[static_cast<std::size_t>(w)]) {
          on[static_cast<std::size_t>(w)] = true;
          used[static_cast<std::size_t>(e)] = true;
          path.push_back(h);
          dfs(w);
          path.pop_back();
          used[static_cast<std::size_t>(e)] = false;
          on[static_cast<std::size_t>(w)] = false;
        }
      }
    };
    dfs(s);
  }
  return out;
}

Path rotate_to(const MetricGraph &g, const Path &c, int v) {
  for (std::size_t k = 0; k < c.size(); ++k)
    if (g.tail(c[k]) == v) {
      Path r(c.begin() + static_cast<long>(k), c.end());
      r.insert(r.end(), c.begin(), c.begin() + static_cast<long>(k));
      return r;
    }
  throw DomainError("vertex not on cycle");
}

Path reversed(const Path &p) { return inverse(p); }

std::vector<int> intersect(const std::vector<int> &a, const std::vector<int> &b) {
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// Embedded arcs from a vertex of c1 to a vertex of c2 with interior avoiding both.
std::vector<Path> arcs_between(const MetricGraph &g, const Cycle &c1, const Cycle &c2) {
  std::vector<Path> out;
  std::vector<bool> blocked(static_cast<std::size_t>(g.n_vertices()), false), target(blocked);
  for (int v : c1.verts) blocked[static_cast<std::size_t>(v)] = true;
  for (int v : c2.verts) target[static_cast<std::size_t>(v)] = true;
  for (int u : c1.verts) {
    Path path;
    std::vector<bool> on(blocked);
    std::function<void(int)> dfs = [&](int v) {
      for (HalfEdge h : g.star(v)) {
        int w = g.head(h);
        if (target[static_cast<std::size_t>(w)]) {
          path.push_back(h);
          out.push_back(path);
          path.pop_back();
        } else if (!on[static_cast<std::size_t>(w)]) {
          on[static_cast<std::size_t>(w)] = true;
          path.push_back(h);
          dfs(w);
          path.pop_back();
          on[static_cast<std::size_t>(w)] = false;
        }
      }
    };
    dfs(u);
  }
  return out;
}

}  // namespace

std::vector<CandidateLoop> enumerate_candidates(const Point &p) {
  const auto &g = p.graph;
  auto cycles = simple_cycles(g);
  std::vector<CandidateLoop> out;
  std::set<Word> seen;
  auto emit = [&](CandidateKind k, Path path) {
    CandidateLoop c;
    c.kind = k;
    c.path = std::move(path);
    auto cr = cyclic_reduce(p.read_path(c.path));
    c.word = cr.core;
    c.cls = cr.cls;
    if (seen.insert(c.cls.letters()).second) out.push_back(std::move(c));
  };
  for (auto &c : cycles) emit(CandidateKind::Embedded, c.path);
  for (std::size_t i = 0; i < cycles.size(); ++i) {
    for (std::size_t j = i + 1; j < cycles.size(); ++j) {
      auto common = intersect(cycles[i].verts, cycles[j].verts);
      if (common.size() == 1) {
        Path a = rotate_to(g, cycles[i].path, common[0]);
        Path b = rotate_to(g, cycles[j].path, common[0]);
        Path ab = a, abr = a;
        ab.insert(ab.end(), b.begin(), b.end());
        Path br = reversed(b);
        abr.insert(abr.end(), br.begin(), br.end());
        emit(CandidateKind::FigureEight, ab);
        emit(CandidateKind::FigureEight, abr);
      } else if (common.empty()) {
        for (auto &arc : arcs_between(g, cycles[i], cycles[j])) {
          Path a = rotate_to(g, cycles[i].path, g.tail(arc.front()));
          Path b = rotate_to(g, cycles[j].path, g.head(arc.back()));
          for (int orient = 0; orient < 2; ++orient) {
            Path loop = a;
            loop.insert(loop.end(), arc.begin(), arc.end());
            Path bb = orient ? reversed(b) : b;
            loop.insert(loop.end(), bb.begin(), bb.end());
            Path back = reversed(arc);
            loop.insert(loop.end(), back.begin(), back.end());
            emit(CandidateKind::Barbell, loop);
          }
        }
      }
    }
  }
  return out;
}

bool check_candidate_shape(const MetricGraph &g, const CandidateLoop &c) {
  const Path &p = c.path;
  if (p.empty()) return false;
  try {
    check_path(g, p);
  } catch (const DomainError &) {
    return false;
  }
  if (g.head(p.back()) != g.tail(p.front())) return false;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] == -p[(i + 1) % p.size()]) return false;  // not immersed
  std::vector<int> edge_count(static_cast<std::size_t>(g.n_edges()), 0);
  std::vector<int> vert_count(static_cast<std::size_t>(g.n_vertices()), 0);
  for (HalfEdge h : p) {
    ++edge_count[static_cast<std::size_t>(edge_of(h))];
    ++vert_count[static_cast<std::size_t>(g.tail(h))];
  }
  int max_v = *std::max_element(vert_count.begin(), vert_count.end());
  int twice_edges = 0, twice_verts = 0, thrice_verts = 0;
  for (int k : edge_count) {
    if (k > 2) return false;
    twice_edges += k == 2;
  }
  for (int k : vert_count) {
    twice_verts += k == 2;
    thrice_verts += k == 3;
  }
  switch (c.kind) {
  case CandidateKind::Embedded: return max_v == 1;
  case CandidateKind::FigureEight: return twice_edges == 0 && max_v == 2 && twice_verts == 1;
  case CandidateKind::Barbell:
    // The bar is crossed twice and every vertex on it is left twice.
    return twice_edges > 0 && max_v == 2 && thrice_verts == 0 && twice_verts == twice_edges + 1;
  }
  return false;
}

Point act(const Point &p, const Automorphism &phi) {
  if (!phi.verified) throw DomainError("automorphism is not verified");
  return act(p, phi, invert(phi));
}

Point act(const Point &p, const Automorphism &phi, const Automorphism &phi_inv) {
  if (!phi.verified) throw DomainError("automorphism is not verified");
  if (phi.rank != p.rank || phi_inv.rank != p.rank) throw DomainError("rank mismatch in act");
  Point q = p;
  for (int i = 1; i <= p.rank; ++i) q.loops[static_cast<std::size_t>(i - 1)] = p.realize(phi.image(i));
  for (auto &l : q.labels) l = apply_endomorphism(phi_inv, l);
  return q;
}

Point minimal_model(const Point &p) {
  const auto &g = p.graph;
  if (g.n_vertices() == 1) return p;
  int longest = 0;
  for (int e = 1; e < g.n_edges(); ++e)
    if (g.edges[static_cast<std::size_t>(e)].length > g.edges[static_cast<std::size_t>(longest)].length) longest = e;
  // Forest J: greedy spanning forest of all edges but the longest. It is a
  // maximal tree when the longest edge is non-separating and otherwise that
  // tree minus the longest edge.
  std::vector<int> parent(static_cast<std::size_t>(g.n_vertices()));
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    return parent[static_cast<std::size_t>(x)] == x ? x : parent[static_cast<std::size_t>(x)] = find(parent[static_cast<std::size_t>(x)]);
  };
  std::vector<bool> in_j(static_cast<std::size_t>(g.n_edges()), false);
  for (int e = 0; e < g.n_edges(); ++e) {
    if (e == longest) continue;
    int a = find(g.edges[static_cast<std::size_t>(e)].from), b = find(g.edges[static_cast<std::size_t>(e)].to);
    if (a != b) {
      parent[static_cast<std::size_t>(a)] = b;
      in_j[static_cast<std::size_t>(e)] = true;
    }
  }
  std::vector<int> comp_id(static_cast<std::size_t>(g.n_vertices()), -1);
  MetricGraph k;
  for (int v = 0; v < g.n_vertices(); ++v) {
    int r = find(v);
    if (comp_id[static_cast<std::size_t>(r)] < 0) {
      comp_id[static_cast<std::size_t>(r)] = k.n_vertices();
      k.vertices.push_back(g.vertices[static_cast<std::size_t>(v)]);
    }
  }
  std::vector<int> new_index(static_cast<std::size_t>(g.n_edges()), -1);
  double vol = 0.0;
  for (int e = 0; e < g.n_edges(); ++e) {
    if (in_j[static_cast<std::size_t>(e)]) continue;
    auto &old = g.edges[static_cast<std::size_t>(e)];
    new_index[static_cast<std::size_t>(e)] = k.n_edges();
    k.edges.push_back({old.id, comp_id[static_cast<std::size_t>(find(old.from))], comp_id[static_cast<std::size_t>(find(old.to))], old.length});
    vol += old.length;
  }
  for (auto &e : k.edges) e.length /= vol;
  std::vector<Path> loops;
  for (auto &l : p.loops) {
    Path q;
    for (HalfEdge h : l) {
      int ne = new_index[static_cast<std::size_t>(edge_of(h))];
      if (ne >= 0) q.push_back(h > 0 ? ne + 1 : -(ne + 1));
    }
    loops.push_back(reduce(q));
  }
  return make_point(std::move(k), p.rank, comp_id[static_cast<std::size_t>(find(p.base))], std::move(loops));
}

Point rose(const std::vector<double> &lengths) {
  MetricGraph g;
  g.vertices = {"v"};
  std::vector<Path> loops;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    g.edges.push_back({"e" + std::to_string(i + 1), 0, 0, lengths[i]});
    loops.push_back({static_cast<int>(i) + 1});
  }
  return make_point(std::move(g), static_cast<int>(lengths.size()), 0, std::move(loops));
}

Point standard_rose(int rank) { return rose(std::vector<double>(static_cast<std::size_t>(rank), 1.0 / rank)); }

Point standard_marking(MetricGraph g, int rank, int base) {
  Point p;
  p.graph = std::move(g);
  p.rank = rank;
  p.base = base;
  p.loops.assign(static_cast<std::size_t>(rank), Path{});
  Point probe = p;
  auto parent = shortest_path_tree(p.graph, base);
  probe.tree_parent = parent;
  std::vector<bool> in_tree(static_cast<std::size_t>(p.graph.n_edges()), false);
  for (int v = 0; v < p.graph.n_vertices(); ++v)
    if (v != base) in_tree[static_cast<std::size_t>(edge_of(parent[static_cast<std::size_t>(v)]))] = true;
  std::size_t gen = 0;
  for (int e = 0; e < p.graph.n_edges(); ++e) {
    if (in_tree[static_cast<std::size_t>(e)]) continue;
    if (gen >= p.loops.size()) throw DomainError("first Betti number exceeds rank");
    auto &edge = p.graph.edges[static_cast<std::size_t>(e)];
    Path loop = probe.tree_path(edge.from);
    loop.push_back(e + 1);
    Path back = inverse(probe.tree_path(edge.to));
    loop.insert(loop.end(), back.begin(), back.end());
    p.loops[gen++] = reduce(loop);
  }
  if (gen != p.loops.size()) throw DomainError("first Betti number below rank");
  p.finalize();
  return p;
}

namespace {

MetricGraph build(std::vector<std::string> verts, std::vector<std::pair<int, int>> ends) {
  MetricGraph g;
  g.vertices = std::move(verts);
  for (std::size_t i = 0; i < ends.size(); ++i)
    g.edges.push_back({"e" + std::to_string(i + 1), ends[i].first, ends[i].second, 1.0 / static_cast<double>(ends.size())});
  return g;
}

}  // namespace

std::vector<MetricGraph> graph_catalog(int rank) {
  std::vector<MetricGraph> out;
  std::vector<std::pair<int, int>> petals(static_cast<std::size_t>(rank), {0, 0});
  out.push_back(build({"v"}, petals));
  std::vector<std::pair<int, int>> theta(static_cast<std::size_t>(rank + 1), {0, 1});
  out.push_back(build({"p", "q"}, theta));
  if (rank == 2) {
    out.push_back(build({"u", "v"}, {{0, 0}, {0, 1}, {1, 1}}));
  } else if (rank == 3) {
    out.push_back(build({"a", "b", "c", "d"}, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}));
    out.push_back(build({"u", "v"}, {{0, 0}, {0, 1}, {0, 1}, {1, 1}}));
    out.push_back(build({"u", "v", "w"}, {{0, 0}, {0, 1}, {1, 1}, {1, 2}, {2, 2}}));
    out.push_back(build({"u", "v"}, {{0, 0}, {0, 0}, {0, 1}, {1, 1}}));
  }
  return out;
}

Point with_lengths(const Point &p, const std::vector<double> &lengths) {
  Point q = p;
  double vol = std::accumulate(lengths.begin(), lengths.end(), 0.0);
  for (std::size_t e = 0; e < lengths.size(); ++e) q.graph.edges[e].length = lengths[e] / vol;
  // The spanning tree depends on lengths.
  q.finalize();
  return q;
}

Point jitter_lengths(const Point &p, std::uint64_t seed, double jitter) {
  Rng rng(seed, 0x6a);
  std::vector<double> l;
  for (auto &e : p.graph.edges) l.push_back(e.length * (1.0 + jitter * rng.uniform(-1.0, 1.0)));
  return with_lengths(p, l);
}

namespace {

Point random_from(Point start, std::uint64_t seed, int n_moves, double jitter) {
  if (jitter < 0.0 || jitter >= 1.0) throw DomainError("jitter must lie in [0,1)");
  Rng rng(seed, 0x77);
  static thread_local std::vector<std::vector<WhiteheadMove>> cache(32);
  auto &moves = cache.at(static_cast<std::size_t>(start.rank));
  if (moves.empty()) moves = all_whitehead_moves(start.rank);
  Automorphism theta = Automorphism::identity(start.rank), theta_inv = theta;
  for (int i = 0; i < n_moves; ++i) {
    auto &m = moves[static_cast<std::size_t>(rng.below(static_cast<int>(moves.size())))];
    theta = compose(theta, whitehead_move(start.rank, m));
    theta_inv = compose(whitehead_move(start.rank, inverse_move(m)), theta_inv);
  }
  Point p = n_moves > 0 ? act(start, theta, theta_inv) : start;
  if (jitter > 0.0) {
    std::vector<double> l;
    for (auto &e : p.graph.edges) l.push_back(e.length * (1.0 + jitter * rng.uniform(-1.0, 1.0)));
    p = with_lengths(p, l);
  }
  return p;
}

}  // namespace

Point random_point(int rank, std::uint64_t seed, int n_moves, double jitter) {
  return random_from(standard_rose(rank), seed, n_moves, jitter);
}

Point random_point_any_graph(int rank, std::uint64_t seed, int n_moves, double jitter) {
  auto cat = graph_catalog(rank);
  Rng pick(seed, 0x63);
  auto g = cat[static_cast<std::size_t>(pick.below(static_cast<int>(cat.size())))];
  return random_from(standard_marking(std::move(g), rank), seed, n_moves, jitter);
}

}  // namespace osk
