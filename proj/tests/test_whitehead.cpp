#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "osk/random.hpp"
#include "osk/whitehead.hpp"

using namespace osk;

namespace {

CyclicWord c2(const char *s) { return CyclicWord(parse_word(s, 2)); }

std::set<std::pair<Letter, Letter>> simple_letter_edges(const WhiteheadGraph &g) {
  std::set<std::pair<Letter, Letter>> out;
  for (auto &[a, b] : g.simple_edges()) {
    Letter u = WhiteheadGraph::vertex_letter(a), v = WhiteheadGraph::vertex_letter(b);
    out.insert({std::min(u, v), std::max(u, v)});
  }
  return out;
}

}  // namespace

TEST_CASE("whitehead_graph examples") {
  auto g = whitehead_graph({c2("xy")}, 2);
  CHECK(g.edges.size() == 2);
  CHECK(g.multiplicity(-1, 2) == 1);
  CHECK(g.multiplicity(-2, 1) == 1);

  g = whitehead_graph({c2("xyXY")}, 2);
  CHECK(g.edges.size() == 4);
  CHECK(g.multiplicity(1, 2) == 1);
  CHECK(g.multiplicity(2, -1) == 1);
  CHECK(g.multiplicity(-1, -2) == 1);
  CHECK(g.multiplicity(-2, 1) == 1);

  g = whitehead_graph({c2("x")}, 2);
  CHECK(g.edges.size() == 1);
  CHECK(g.multiplicity(-1, 1) == 1);

  CHECK_THROWS_AS(whitehead_graph({CyclicWord()}, 2), DomainError);
}

TEST_CASE("whitehead_graph matches the oracle and is inversion invariant") {
  Rng rng(21);
  auto words = canonical_cyclic_words(3, 5);
  for (int t = 0; t < 500; ++t) {
    int rank = 2 + rng.below(2);
    Word raw;
    int len = 1 + rng.below(9);
    for (int i = 0; i < len; ++i) raw.push_back((1 + rng.below(rank)) * (rng.below(2) ? 1 : -1));
    CyclicWord w(raw);
    if (w.empty()) continue;
    auto g = whitehead_graph({w}, rank);
    auto gi = whitehead_graph({CyclicWord(inverse(w.letters()))}, rank);
    CHECK(g.edges == gi.edges);
    CHECK(simple_letter_edges(g) == oracle::wh_edges(w.letters()));
  }
}

TEST_CASE("cut_analysis examples") {
  auto cyc = whitehead_graph({c2("xyXY")}, 2);
  auto r = cut_analysis(cyc);
  CHECK(r.connected);
  CHECK_FALSE(r.cut_vertex.has_value());

  r = cut_analysis(whitehead_graph({c2("xy")}, 2));
  CHECK_FALSE(r.connected);
  CHECK_FALSE(r.cut_vertex.has_value());

  WhiteheadGraph path;
  path.rank = 2;
  path.add_edge(1, 2);
  path.add_edge(2, -1);
  path.add_edge(-2, 2);  // keeps every vertex in one component
  // Vertices: x - y - X and Y - y; removing y separates everything.
  r = cut_analysis(path);
  CHECK(r.connected);
  REQUIRE(r.cut_vertex.has_value());
  CHECK(*r.cut_vertex == 2);
}

TEST_CASE("isolated letters count as components") {
  WhiteheadGraph g;
  g.rank = 2;
  g.add_edge(1, 2);
  g.add_edge(2, -1);
  CHECK_FALSE(cut_analysis(g).connected);
}

TEST_CASE("whitehead_minimize examples") {
  auto t = whitehead_minimize({c2("xyXY")}, 2);
  CHECK(t.steps.empty());
  CHECK(t.final_length() == 4);
  CHECK(t.terminal == TerminalState::NoCutVertex);

  t = whitehead_minimize({c2("xy")}, 2);
  REQUIRE(t.steps.size() == 1);
  CHECK(t.steps[0].move.a == -1);
  CHECK(t.steps[0].move.A == Word{-1, -2});
  CHECK(format_move(t.steps[0].move, 2) == "({X,Y},X)");
  CHECK(t.final_words.front() == c2("y"));
  CHECK(t.terminal == TerminalState::BasisReached);

  t = whitehead_minimize({c2("xx")}, 2);
  CHECK(t.steps.empty());
  CHECK(t.final_length() == 2);
  CHECK(t.terminal == TerminalState::DisconnectedMin);
}

TEST_CASE("the composite of a trace maps initial words to final words") {
  Rng rng(4);
  for (int t = 0; t < 100; ++t) {
    Word raw;
    for (int i = 0; i < 8; ++i) raw.push_back((1 + rng.below(3)) * (rng.below(2) ? 1 : -1));
    CyclicWord w(raw);
    if (w.empty()) continue;
    auto tr = whitehead_minimize({w}, 3);
    CHECK(apply_endomorphism(tr.composite, w) == tr.final_words.front());
  }
}

TEST_CASE("is_primitive examples") {
  CHECK(is_primitive(c2("x"), 2));
  CHECK_FALSE(is_primitive(c2("xyxy"), 2));
  CHECK_FALSE(is_primitive(c2("xyXY"), 2));
  CHECK(is_primitive(c2("xxy"), 2));
  CHECK_THROWS_AS(is_primitive(CyclicWord(), 2), DomainError);
}

TEST_CASE("steps strictly decrease and cut-vertex moves always decrease") {
  Rng rng(8);
  for (int t = 0; t < 300; ++t) {
    int rank = 2 + rng.below(2);
    Word raw;
    int len = 2 + rng.below(12);
    for (int i = 0; i < len; ++i) raw.push_back((1 + rng.below(rank)) * (rng.below(2) ? 1 : -1));
    CyclicWord w(raw);
    if (w.empty()) continue;
    std::vector<CyclicWord> cur{w};
    auto tr = whitehead_minimize(cur, rank);
    CHECK(static_cast<long>(tr.steps.size()) <= static_cast<long>(w.size()));
    for (auto &s : tr.steps) {
      CHECK(s.after < s.before);
      auto g = whitehead_graph(cur, rank);
      if (cut_analysis(g).cut_vertex) {
        CHECK(s.from_cut_vertex);
        for (auto &m : cut_vertex_moves(g)) CHECK(total_length({apply_endomorphism(whitehead_move(rank, m), cur[0])}) < total_length(cur));
      }
      cur = {apply_endomorphism(whitehead_move(rank, s.move), cur[0])};
      CHECK(total_length(cur) == s.after);
    }
  }
}

TEST_CASE("is_primitive agrees with breadth-first search on short words") {
  for (int len = 1; len <= 5; ++len)
    for (auto &w : canonical_cyclic_words(2, len)) CHECK(is_primitive(w, 2) == oracle::bfs_primitive(w.letters(), 2));
  for (int len = 1; len <= 3; ++len)
    for (auto &w : canonical_cyclic_words(3, len)) CHECK(is_primitive(w, 3) == oracle::bfs_primitive(w.letters(), 3));
}
