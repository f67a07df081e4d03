#include "osk/lipschitz.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace osk {

double stretch_factor(const CyclicWord &a, const Point &x, const Point &y) {
  if (a.empty()) throw DomainError("stretch factor of the empty word");
  return loop_length(a, y) / loop_length(a, x);
}

DistanceResult distance(const std::vector<CandidateLoop> &cands, const Point &x, const Point &y) {
  if (x.rank != y.rank) throw DomainError("rank mismatch in distance");
  DistanceResult r;
  if (cands.empty()) throw DomainError("point has no candidate loops");
  double best = 0.0;
  for (auto &c : cands) {
    CandidateStretch s;
    s.candidate = c;
    s.length_x = x.graph.path_length(c.path);
    s.length_y = loop_length(c.cls, y);
    s.ratio = s.length_y / s.length_x;
    best = std::max(best, s.ratio);
    r.table.push_back(std::move(s));
  }
  // Ratios equal up to rounding count as ties; the least class wins.
  std::size_t arg = r.table.size();
  for (std::size_t i = 0; i < r.table.size(); ++i)
    if (r.table[i].ratio >= best * (1.0 - 1e-12) && (arg == r.table.size() || cands[i].cls < cands[arg].cls)) arg = i;
  r.value = std::log(best);
  r.witness = cands[arg];
  return r;
}

DistanceResult distance(const Point &x, const Point &y) { return distance(enumerate_candidates(x), x, y); }

namespace {

const std::vector<CyclicWord> &words_up_to(int rank, int L) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::vector<CyclicWord>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(rank, L);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<CyclicWord> all;
  for (int len = 1; len <= L; ++len) {
    auto w = canonical_cyclic_words(rank, len);
    all.insert(all.end(), w.begin(), w.end());
  }
  return cache.emplace(key, std::move(all)).first->second;
}

}  // namespace

double distance_oracle(const Point &x, const Point &y, int L) {
  if (L < 1) throw DomainError("oracle bound must be at least 1");
  if (x.rank != y.rank) throw DomainError("rank mismatch in distance_oracle");
  double best = 0.0;
  for (auto &w : words_up_to(x.rank, L)) best = std::max(best, loop_length(w, y) / loop_length(w, x));
  return std::log(best);
}

LipschitzReport linear_map_lipschitz(const LinearMap &f, const MetricGraph &src, const MetricGraph &dst) {
  if (static_cast<int>(f.vertex_image.size()) != src.n_vertices() || static_cast<int>(f.edge_image.size()) != src.n_edges())
    throw DomainError("inconsistent map: map size does not match the source graph");
  for (int v : f.vertex_image)
    if (v < 0 || v >= dst.n_vertices()) throw DomainError("inconsistent map: vertex image outside target");
  LipschitzReport r;
  for (int e = 0; e < src.n_edges(); ++e) {
    auto &edge = src.edges[static_cast<std::size_t>(e)];
    const Path &img = f.edge_image[static_cast<std::size_t>(e)];
    int a = f.vertex_image[static_cast<std::size_t>(edge.from)], b = f.vertex_image[static_cast<std::size_t>(edge.to)];
    if (img.empty()) {
      if (a != b) throw DomainError("inconsistent map: constant edge " + edge.id + " joins different vertices");
    } else {
      check_path(dst, img);
      if (dst.tail(img.front()) != a || dst.head(img.back()) != b)
        throw DomainError("inconsistent map: image of " + edge.id + " does not fit the vertex images");
    }
    double len = dst.path_length(reduce(img));
    if (edge.length <= 0.0) throw DomainError("slope undefined on zero-length edge " + edge.id);
    r.slopes.push_back(len / edge.length);
  }
  r.lip = r.slopes.empty() ? 0.0 : *std::max_element(r.slopes.begin(), r.slopes.end());
  for (int e = 0; e < src.n_edges(); ++e)
    if (std::abs(r.slopes[static_cast<std::size_t>(e)] - r.lip) <= 1e-12 * std::max(1.0, r.lip)) r.green.push_back(e);
  return r;
}

LipschitzReport linear_map_lipschitz(const LinearMap &f, const Point &x, const Point &y) {
  if (x.rank != y.rank) throw DomainError("rank mismatch in linear_map_lipschitz");
  auto r = linear_map_lipschitz(f, x.graph, y.graph);
  // f o marking_x must be freely homotopic to marking_y, i.e. the induced
  // map on labels is conjugation by one word w.
  int hb = f.vertex_image[static_cast<std::size_t>(x.base)];
  Path to_hb = y.tree_path(hb);
  std::vector<Word> u;
  for (int i = 1; i <= x.rank; ++i) {
    Path img = to_hb;
    for (HalfEdge h : x.loops[static_cast<std::size_t>(i - 1)]) {
      const Path &e = f.edge_image[static_cast<std::size_t>(edge_of(h))];
      if (h > 0)
        img.insert(img.end(), e.begin(), e.end());
      else {
        Path re = inverse(e);
        img.insert(img.end(), re.begin(), re.end());
      }
    }
    Path back = inverse(to_hb);
    img.insert(img.end(), back.begin(), back.end());
    u.push_back(y.read_path(reduce(img)));
  }
  auto fail = [] { throw DomainError("inconsistent map: map does not carry one marking to the other"); };
  auto cr = cyclic_reduce(u[0]);
  if (cr.core.size() != 1 || std::abs(cr.core[0]) != 1) fail();
  // w = c * x1^k. Recover k from generator 2 when present.
  Word c = cr.conjugator;
  if (cr.core[0] == -1) fail();
  Word w = c;
  if (x.rank >= 2) {
    Word v = concat(concat(inverse(c), u[1]), c);
    int k = 0;
    std::size_t i = 0;
    while (i < v.size() && std::abs(v[i]) == 1) {
      k += v[i] > 0 ? 1 : -1;
      ++i;
    }
    w = concat(c, power(Word{1}, k));
  }
  for (int i = 1; i <= x.rank; ++i)
    if (u[static_cast<std::size_t>(i - 1)] != concat(concat(w, Word{i}), inverse(w))) fail();
  return r;
}

}  // namespace osk
