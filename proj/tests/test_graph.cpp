#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <set>

#include "oracles.hpp"
#include "osk/graph.hpp"
#include "osk/lipschitz.hpp"
#include "osk/random.hpp"
#include "osk/whitehead.hpp"

using namespace osk;

namespace {

Point theta_point() {
  MetricGraph g;
  g.vertices = {"p", "q"};
  for (int i = 1; i <= 3; ++i) g.edges.push_back({"e" + std::to_string(i), 0, 1, 1.0 / 3});
  return make_point(g, 2, 0, {{1, -2}, {2, -3}});
}

// x -> x, y -> x^m y.
Automorphism psi_m(int m) {
  Word y(static_cast<std::size_t>(m), 1);
  y.push_back(2);
  Automorphism a{2, {Word{1}, y}, false};
  return certify(a);
}

// Brute force: every immersed closed edge path of at most 2E half-edges,
// classified by how often it visits each edge and vertex.
std::set<Word> brute_candidates(const Point &p) {
  const auto &g = p.graph;
  std::set<Word> out;
  int E = g.n_edges();
  Path cur;
  std::function<void(int, int)> dfs = [&](int start, int v) {
    if (!cur.empty() && v == start && cur.front() != -cur.back()) {
      std::vector<int> ec(static_cast<std::size_t>(E), 0), vc(static_cast<std::size_t>(g.n_vertices()), 0);
      std::vector<int> net(static_cast<std::size_t>(E), 0);
      for (HalfEdge h : cur) {
        ++ec[static_cast<std::size_t>(edge_of(h))];
        net[static_cast<std::size_t>(edge_of(h))] += h > 0 ? 1 : -1;
        ++vc[static_cast<std::size_t>(g.tail(h))];
      }
      int once = 0, twice = 0, more = 0;
      for (int c : ec) {
        once += c == 1;
        twice += c == 2;
        more += c > 2;
      }
      int v1 = 0, v2 = 0, vmore = 0;
      for (int c : vc) {
        v1 += c == 1;
        v2 += c == 2;
        vmore += c > 2;
      }
      bool embedded = twice == 0 && more == 0 && v2 == 0 && vmore == 0;
      bool eight = twice == 0 && more == 0 && v2 == 1 && vmore == 0;
      // Barbell: the doubly used edges form an arc whose vertices are each
      // visited twice and crossed once in each direction.
      bool barbell = twice > 0 && more == 0 && vmore == 0 && v2 == twice + 1;
      if (barbell) {
        for (int e = 0; e < E; ++e) {
          if (ec[static_cast<std::size_t>(e)] != 2) continue;
          auto &ed = g.edges[static_cast<std::size_t>(e)];
          if (vc[static_cast<std::size_t>(ed.from)] != 2 || vc[static_cast<std::size_t>(ed.to)] != 2 || ed.from == ed.to ||
              net[static_cast<std::size_t>(e)] != 0)
            barbell = false;
        }
      }
      if (embedded || eight || barbell) out.insert(oracle::slow_canonical(p.read_path(cur)));
    }
    if (static_cast<int>(cur.size()) >= 2 * E) return;
    for (HalfEdge h : g.star(v)) {
      if (!cur.empty() && h == -cur.back()) continue;
      cur.push_back(h);
      dfs(start, g.head(h));
      cur.pop_back();
    }
  };
  for (int v = 0; v < g.n_vertices(); ++v) dfs(v, v);
  return out;
}

}  // namespace

TEST_CASE("validate_point examples") {
  CHECK(validate_point(rose({0.5, 0.5})).ok);
  auto bad = validate_point(rose({0.5, 0.25}));
  CHECK_FALSE(bad.ok);
  REQUIRE_FALSE(bad.issues.empty());
  CHECK(bad.issues.front().find("volume") != std::string::npos);
  CHECK(validate_point(theta_point()).ok);
}

TEST_CASE("validate_point reports each violated invariant") {
  MetricGraph g;
  g.vertices = {"p", "q", "r"};
  g.edges = {{"a", 0, 1, 0.5}, {"b", 1, 2, 0.5}, {"c", 0, 0, 0.0}};
  Point p;
  p.graph = g;
  p.rank = 2;
  p.loops = {{3}, {3}};
  auto r = validate_point(p);
  CHECK_FALSE(r.ok);
  bool valence = false, betti = false, forest = false;
  for (auto &s : r.issues) {
    valence |= s.find("valence") != std::string::npos;
    betti |= s.find("Betti") != std::string::npos;
    forest |= s.find("zero-length") != std::string::npos;
  }
  CHECK(valence);
  CHECK(betti);
  CHECK(forest);
}

TEST_CASE("a non-basis marking is rejected") {
  Point p = rose({0.5, 0.5});
  p.loops = {{1, 1}, {2}};
  p.marked = false;
  CHECK_FALSE(validate_point(p).ok);
}

TEST_CASE("tighten_path examples") {
  auto t = theta_point();
  CHECK(tighten_path(t.graph, {1, -1}).empty());
  CHECK(tighten_path(t.graph, {1, -2, 2, -3}) == Path{1, -3});
  CHECK(tighten_path(t.graph, {1, -2}) == Path{1, -2});
  CHECK_THROWS_AS(tighten_path(t.graph, {1, 2}), DomainError);
}

TEST_CASE("loop_length examples") {
  auto r = rose({0.5, 0.5});
  CHECK(loop_length(CyclicWord(Word{1, 2}), r) == doctest::Approx(1.0));
  CHECK(loop_length(CyclicWord(Word{1, 2, -2, 1}), r) == doctest::Approx(1.0));
  for (int m = 1; m <= 6; ++m)
    CHECK(loop_length(CyclicWord(Word{2}), act(r, psi_m(m))) == doctest::Approx((m + 1) / 2.0).epsilon(1e-12));
}

TEST_CASE("loop_length is positive, conjugation and inversion invariant") {
  Rng rng(17);
  for (int t = 0; t < 200; ++t) {
    int rank = 2 + rng.below(2);
    Point p = random_point_any_graph(rank, rng.next(), rng.below(6), 0.3);
    Word w;
    int len = 1 + rng.below(8);
    for (int i = 0; i < len; ++i) w.push_back((1 + rng.below(rank)) * (rng.below(2) ? 1 : -1));
    w = reduce(w);
    if (w.empty()) continue;
    Word c{(1 + rng.below(rank)) * (rng.below(2) ? 1 : -1)};
    double l = loop_length(w, p);
    CHECK(l > 0.0);
    CHECK(loop_length(concat(concat(c, w), inverse(c)), p) == doctest::Approx(l).epsilon(1e-12));
    CHECK(loop_length(inverse(w), p) == doctest::Approx(l).epsilon(1e-12));
  }
}

TEST_CASE("loop_length on a rose counts letters of the cyclic core") {
  Rng rng(2);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> l{rng.uniform(0.1, 1), rng.uniform(0.1, 1), rng.uniform(0.1, 1)};
    Point p = rose(l);
    Word w;
    for (int i = 0; i < 10; ++i) w.push_back((1 + rng.below(3)) * (rng.below(2) ? 1 : -1));
    double expect = 0.0;
    for (Letter x : oracle::slow_cyclic_core(w)) expect += l[static_cast<std::size_t>(std::abs(x) - 1)];
    CHECK(loop_length(w, p) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("enumerate_candidates examples") {
  auto r2 = enumerate_candidates(rose({0.5, 0.5}));
  std::set<Word> got;
  for (auto &c : r2) got.insert(c.cls.letters());
  std::set<Word> expect{CyclicWord(Word{1}).letters(), CyclicWord(Word{2}).letters(), CyclicWord(Word{1, 2}).letters(),
                        CyclicWord(Word{1, -2}).letters()};
  CHECK(got == expect);

  auto th = enumerate_candidates(theta_point());
  CHECK(th.size() == 3);
  for (auto &c : th) CHECK(c.kind == CandidateKind::Embedded);

  auto r3 = enumerate_candidates(standard_rose(3));
  CHECK(r3.size() == 9);
  int emb = 0, eight = 0, bar = 0;
  for (auto &c : r3) {
    emb += c.kind == CandidateKind::Embedded;
    eight += c.kind == CandidateKind::FigureEight;
    bar += c.kind == CandidateKind::Barbell;
  }
  CHECK(emb == 3);
  CHECK(eight == 6);
  CHECK(bar == 0);
}

TEST_CASE("candidates match brute force on every catalogue graph") {
  for (int rank = 2; rank <= 3; ++rank) {
    auto cat = graph_catalog(rank);
    for (std::size_t idx = 0; idx < cat.size(); ++idx) {
      const auto &g = cat[idx];
      CAPTURE(rank);
      CAPTURE(idx);
      Point p = standard_marking(g, rank);
      std::set<Word> got;
      for (auto &c : enumerate_candidates(p)) got.insert(c.cls.letters());
      CHECK(got == brute_candidates(p));
    }
  }
}

TEST_CASE("candidate properties on random points") {
  Rng rng(44);
  for (int t = 0; t < 60; ++t) {
    int rank = 2 + rng.below(2);
    Point p = random_point_any_graph(rank, rng.next(), rng.below(5), 0.4);
    for (auto &c : enumerate_candidates(p)) {
      CHECK(check_candidate_shape(p.graph, c));
      CHECK(tighten_loop(p.graph, c.path) == c.path);
      CHECK(loop_length(c.cls, p) == doctest::Approx(p.graph.path_length(c.path)).epsilon(1e-12));
      CHECK(is_primitive(c.cls, rank));
    }
  }
}

TEST_CASE("act examples and right action") {
  auto r = rose({0.5, 0.5});
  auto id = act(r, certify(Automorphism::identity(2)));
  CHECK(distance(r, id).value == doctest::Approx(0.0));
  CHECK(distance(id, r).value == doctest::Approx(0.0));
  CHECK_THROWS_AS(act(r, Automorphism::from_strings(2, {"x", "y"})), DomainError);

  Rng rng(12);
  auto moves = all_whitehead_moves(3);
  auto rnd = [&]() {
    Automorphism a = Automorphism::identity(3);
    for (int i = 0; i < 3; ++i) a = compose(a, whitehead_move(3, moves[static_cast<std::size_t>(rng.below(static_cast<int>(moves.size())))]));
    return a;
  };
  for (int t = 0; t < 40; ++t) {
    Point p = random_point_any_graph(3, rng.next(), 3, 0.3);
    auto phi = rnd(), psi = rnd();
    Point a = act(act(p, phi), psi);
    Point b = act(p, compose(phi, psi));
    CHECK(distance(a, b).value == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(distance(b, a).value == doctest::Approx(0.0).epsilon(1e-9));
    Word w{1, 2, -3, 2};
    CHECK(loop_length(w, act(p, phi)) == doctest::Approx(loop_length(apply_endomorphism(phi, w), p)).epsilon(1e-12));
    CHECK(validate_point(a).ok);
  }
}

TEST_CASE("minimal_model examples") {
  auto r = rose({0.3, 0.7});
  auto m = minimal_model(r);
  CHECK(m.graph.n_vertices() == 1);
  CHECK(m.graph.edges[0].length == doctest::Approx(0.3));
  auto t = minimal_model(theta_point());
  CHECK(t.graph.n_vertices() == 1);
  CHECK(t.graph.n_edges() == 2);
  for (auto &e : t.graph.edges) CHECK(e.length == doctest::Approx(0.5));
  CHECK(validate_point(t).ok);
}

TEST_CASE("minimal_model stays within log(3n-3)") {
  Rng rng(91);
  for (int t = 0; t < 80; ++t) {
    int rank = 2 + rng.below(2);
    Point p = random_point_any_graph(rank, rng.next(), rng.below(4), 0.8);
    Point k = minimal_model(p);
    CHECK(validate_point(k).ok);
    CHECK(distance(p, k).value <= std::log(3.0 * rank - 3.0) + 1e-9);
  }
}

TEST_CASE("random_point examples") {
  auto p = random_point(2, 7, 0, 0.0);
  CHECK(distance(p, rose({0.5, 0.5})).value == doctest::Approx(0.0));
  auto a = random_point(3, 99, 6, 0.5), b = random_point(3, 99, 6, 0.5);
  CHECK(a.loops == b.loops);
  for (int e = 0; e < a.graph.n_edges(); ++e) CHECK(a.graph.edges[static_cast<std::size_t>(e)].length == b.graph.edges[static_cast<std::size_t>(e)].length);
  for (std::uint64_t s = 0; s < 50; ++s) {
    CHECK(validate_point(random_point(2 + static_cast<int>(s % 2), s, static_cast<int>(s % 7), 0.5)).ok);
    CHECK(validate_point(random_point_any_graph(2 + static_cast<int>(s % 2), s, static_cast<int>(s % 7), 0.5)).ok);
  }
  CHECK_THROWS_AS(random_point(2, 1, 1, 1.0), DomainError);
}

TEST_CASE("standard_marking on the theta graph gives a basis") {
  auto cat = graph_catalog(2);
  for (auto &g : cat) {
    Point p = standard_marking(g, 2);
    CHECK(validate_point(p).ok);
  }
}
