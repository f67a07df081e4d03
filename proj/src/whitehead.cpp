#include "osk/whitehead.hpp"

#include <algorithm>
#include <sstream>

namespace osk {

void WhiteheadGraph::add_edge(Letter u, Letter v, int mult) {
  int a = vertex_index(u), b = vertex_index(v);
  if (u == 0 || v == 0 || std::abs(u) > rank || std::abs(v) > rank)
    throw DomainError("whitehead graph vertex outside rank");
  if (a > b) std::swap(a, b);
  edges[{a, b}] += mult;
}

int WhiteheadGraph::multiplicity(Letter u, Letter v) const {
  int a = vertex_index(u), b = vertex_index(v);
  if (a > b) std::swap(a, b);
  auto it = edges.find({a, b});
  return it == edges.end() ? 0 : it->second;
}

std::vector<std::vector<int>> WhiteheadGraph::adjacency() const {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(2 * rank));
  for (auto &[e, m] : edges) {
    if (e.first == e.second) continue;
    adj[static_cast<std::size_t>(e.first)].push_back(e.second);
    adj[static_cast<std::size_t>(e.second)].push_back(e.first);
  }
  return adj;
}

std::vector<std::pair<int, int>> WhiteheadGraph::simple_edges() const {
  std::vector<std::pair<int, int>> out;
  for (auto &[e, m] : edges) out.push_back(e);
  return out;
}

std::string WhiteheadGraph::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (auto &[e, m] : edges) {
    if (!first) os << " ";
    first = false;
    os << letter_char(vertex_letter(e.first), rank) << "-" << letter_char(vertex_letter(e.second), rank);
    if (m > 1) os << "x" << m;
  }
  return os.str();
}

WhiteheadGraph whitehead_graph(const std::vector<CyclicWord> &words, int rank) {
  WhiteheadGraph g;
  g.rank = rank;
  for (auto &w : words) {
    if (w.empty()) throw DomainError("whitehead graph of an empty word");
    const Word &l = w.letters();
    for (std::size_t i = 0; i < l.size(); ++i) g.add_edge(-l[i], l[(i + 1) % l.size()]);
  }
  return g;
}

WhiteheadGraph whitehead_graph_linear(const std::vector<Word> &words, int rank) {
  WhiteheadGraph g;
  g.rank = rank;
  for (auto &w : words)
    for (std::size_t i = 0; i + 1 < w.size(); ++i) g.add_edge(-w[i], w[i + 1]);
  return g;
}

namespace {

std::vector<int> component_labels(const std::vector<std::vector<int>> &adj, int removed) {
  std::vector<int> comp(adj.size(), -1);
  int c = 0;
  for (std::size_t s = 0; s < adj.size(); ++s) {
    if (static_cast<int>(s) == removed || comp[s] >= 0) continue;
    std::vector<int> stack{static_cast<int>(s)};
    comp[s] = c;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int u : adj[static_cast<std::size_t>(v)]) {
        if (u == removed || comp[static_cast<std::size_t>(u)] >= 0) continue;
        comp[static_cast<std::size_t>(u)] = c;
        stack.push_back(u);
      }
    }
    ++c;
  }
  return comp;
}

int count_components(const std::vector<int> &comp) {
  int m = -1;
  for (int c : comp) m = std::max(m, c);
  return m + 1;
}

std::vector<Letter> sorted_letters(std::vector<Letter> v) {
  std::sort(v.begin(), v.end(), [](Letter x, Letter y) { return letter_key(x) < letter_key(y); });
  return v;
}

}  // namespace

std::vector<Letter> cut_vertices(const WhiteheadGraph &g) {
  auto adj = g.adjacency();
  std::vector<Letter> out;
  if (count_components(component_labels(adj, -1)) != 1) return out;
  for (int v = 0; v < 2 * g.rank; ++v)
    if (count_components(component_labels(adj, v)) > 1) out.push_back(WhiteheadGraph::vertex_letter(v));
  return sorted_letters(out);
}

CutAnalysis cut_analysis(const WhiteheadGraph &g) {
  CutAnalysis r;
  r.connected = count_components(component_labels(g.adjacency(), -1)) == 1;
  if (r.connected) {
    auto cv = cut_vertices(g);
    if (!cv.empty()) r.cut_vertex = cv.front();
  }
  return r;
}

std::vector<std::vector<Letter>> components_without(const WhiteheadGraph &g, Letter l) {
  auto comp = component_labels(g.adjacency(), WhiteheadGraph::vertex_index(l));
  std::vector<std::vector<Letter>> out(static_cast<std::size_t>(count_components(comp)));
  for (std::size_t v = 0; v < comp.size(); ++v)
    if (comp[v] >= 0) out[static_cast<std::size_t>(comp[v])].push_back(WhiteheadGraph::vertex_letter(static_cast<int>(v)));
  for (auto &c : out) c = sorted_letters(c);
  return out;
}

std::vector<WhiteheadMove> cut_vertex_moves(const WhiteheadGraph &g) {
  std::vector<WhiteheadMove> out;
  for (Letter a : cut_vertices(g)) {
    for (auto &c : components_without(g, a)) {
      if (std::find(c.begin(), c.end(), -a) != c.end()) continue;
      // An edge u^-1 -- v records the turn uv, while phi_(A,a) inserts
      // letters at that turn according to u and v^-1, so the component
      // enters the set inverted.
      WhiteheadMove m;
      m.a = a;
      for (Letter l : c) m.A.push_back(-l);
      m.A.push_back(a);
      m.A = sorted_letters(m.A);
      out.push_back(std::move(m));
    }
  }
  std::sort(out.begin(), out.end(), move_less);
  return out;
}

std::string to_string(TerminalState s) {
  switch (s) {
  case TerminalState::NoCutVertex: return "no-cut-vertex";
  case TerminalState::DisconnectedMin: return "disconnected-min";
  case TerminalState::BasisReached: return "basis-reached";
  }
  return "?";
}

long total_length(const std::vector<CyclicWord> &words) {
  long s = 0;
  for (auto &w : words) s += static_cast<long>(w.size());
  return s;
}

long ReductionTrace::final_length() const { return total_length(final_words); }

namespace {

std::vector<CyclicWord> apply_all(const Automorphism &phi, const std::vector<CyclicWord> &ws) {
  std::vector<CyclicWord> out;
  out.reserve(ws.size());
  for (auto &w : ws) out.push_back(apply_endomorphism(phi, w));
  return out;
}

struct Best {
  std::optional<WhiteheadMove> move;
  long after = 0;
  std::vector<CyclicWord> words;
};

void consider(Best &best, const WhiteheadMove &m, const std::vector<CyclicWord> &cur, long len, int rank) {
  auto next = apply_all(whitehead_move(rank, m), cur);
  long l = total_length(next);
  if (l >= len) return;
  if (!best.move || l < best.after || (l == best.after && move_less(m, *best.move))) {
    best.move = m;
    best.after = l;
    best.words = std::move(next);
  }
}

}  // namespace

ReductionTrace whitehead_minimize(const std::vector<CyclicWord> &words, int rank) {
  if (words.empty()) throw DomainError("whitehead_minimize needs at least one word");
  ReductionTrace t;
  t.rank = rank;
  t.initial = words;
  t.composite = Automorphism::identity(rank);
  std::vector<CyclicWord> cur = words;
  for (auto &w : cur)
    for (Letter l : w.letters())
      if (std::abs(l) > rank) throw DomainError("word outside rank");
  std::vector<WhiteheadMove> everything;
  while (true) {
    long len = total_length(cur);
    if (std::all_of(cur.begin(), cur.end(), [](const CyclicWord &w) { return w.size() == 1; })) break;
    WhiteheadGraph g = whitehead_graph(cur, rank);
    Best best;
    bool from_cut = false;
    for (auto &m : cut_vertex_moves(g)) consider(best, m, cur, len, rank);
    if (best.move) {
      from_cut = true;
    } else {
      if (everything.empty()) everything = all_whitehead_moves(rank);
      for (auto &m : everything) consider(best, m, cur, len, rank);
    }
    if (!best.move) break;
    t.steps.push_back({*best.move, len, best.after, from_cut});
    t.composite = compose(whitehead_move(rank, *best.move), t.composite);
    cur = std::move(best.words);
  }
  t.final_words = cur;
  if (std::all_of(cur.begin(), cur.end(), [](const CyclicWord &w) { return w.size() == 1; }))
    t.terminal = TerminalState::BasisReached;
  else if (cut_analysis(whitehead_graph(cur, rank)).connected)
    t.terminal = TerminalState::NoCutVertex;
  else
    t.terminal = TerminalState::DisconnectedMin;
  return t;
}

bool is_primitive(const CyclicWord &w, int rank) {
  if (w.empty()) throw DomainError("is_primitive of the empty word");
  auto t = whitehead_minimize({w}, rank);
  return t.final_words.front().size() == 1;
}

}  // namespace osk
