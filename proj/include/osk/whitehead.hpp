/** @file whitehead.hpp
 *  Whitehead graphs, cut vertices and length minimisation.
 */
#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "osk/word.hpp"

namespace osk {

/// Graph on the 2n signed letters. Vertex of letter l is vertex_index(l).
struct WhiteheadGraph {
  int rank = 0;
  /// Unordered pairs (u,v) with u <= v by vertex index, mapped to multiplicity.
  std::map<std::pair<int, int>, int> edges;

  static int vertex_index(Letter l) { return l > 0 ? 2 * (l - 1) : 2 * (-l - 1) + 1; }
  static Letter vertex_letter(int v) { return v % 2 == 0 ? v / 2 + 1 : -(v / 2 + 1); }

  void add_edge(Letter u, Letter v, int mult = 1);
  int multiplicity(Letter u, Letter v) const;
  /// Simple-graph adjacency over all 2n vertices.
  std::vector<std::vector<int>> adjacency() const;
  /// Edge set with multiplicities dropped.
  std::vector<std::pair<int, int>> simple_edges() const;
  std::string to_string() const;
};

/// Whitehead graph of cyclic words: one edge u^-1 -- v per cyclic subword uv.
WhiteheadGraph whitehead_graph(const std::vector<CyclicWord> &words, int rank);
/// Variant for linear words: only the non-wrapping subwords contribute.
WhiteheadGraph whitehead_graph_linear(const std::vector<Word> &words, int rank);

struct CutAnalysis {
  bool connected = false;
  std::optional<Letter> cut_vertex;
};

/// Isolated letters count as components. A cut vertex is reported only for
/// connected graphs; the least one under letter_key is returned.
CutAnalysis cut_analysis(const WhiteheadGraph &g);
/// Every cut vertex of a connected graph.
std::vector<Letter> cut_vertices(const WhiteheadGraph &g);
/// Components of the graph with vertex l removed, as letter sets.
std::vector<std::vector<Letter>> components_without(const WhiteheadGraph &g, Letter l);

/// For each cut vertex a and each component W'' of the graph minus a that
/// avoids a^-1, the move ((W'')^-1 + {a}, a). It shortens the words.
std::vector<WhiteheadMove> cut_vertex_moves(const WhiteheadGraph &g);

enum class TerminalState { NoCutVertex, DisconnectedMin, BasisReached };
std::string to_string(TerminalState s);

struct ReductionStep {
  WhiteheadMove move;
  long before = 0;
  long after = 0;
  bool from_cut_vertex = false;
};

struct ReductionTrace {
  int rank = 0;
  std::vector<CyclicWord> initial;
  std::vector<ReductionStep> steps;
  std::vector<CyclicWord> final_words;
  /// Composite of the applied moves: final = composite(initial).
  Automorphism composite;
  TerminalState terminal = TerminalState::NoCutVertex;
  long final_length() const;
};

long total_length(const std::vector<CyclicWord> &words);

ReductionTrace whitehead_minimize(const std::vector<CyclicWord> &words, int rank);
bool is_primitive(const CyclicWord &w, int rank);

}  // namespace osk
