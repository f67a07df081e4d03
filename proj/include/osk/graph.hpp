/** @file graph.hpp
 *  Marked metric graphs (points of Outer Space), loop lengths, candidates and
 *  the right action of automorphisms.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "osk/word.hpp"

namespace osk {

/// Half-edge of edge e (0-based) is +(e+1) forward and -(e+1) backward, so
/// edge paths share the word machinery and tightening is free reduction.
using HalfEdge = int;
using Path = std::vector<HalfEdge>;

inline int edge_of(HalfEdge h) { return (h > 0 ? h : -h) - 1; }
inline HalfEdge forward(int e) { return e + 1; }

struct Edge {
  std::string id;
  int from = 0;
  int to = 0;
  double length = 0.0;
};

struct MetricGraph {
  std::vector<std::string> vertices;
  std::vector<Edge> edges;

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_edges() const { return static_cast<int>(edges.size()); }
  int tail(HalfEdge h) const;
  int head(HalfEdge h) const;
  double length(HalfEdge h) const { return edges[static_cast<std::size_t>(edge_of(h))].length; }
  double path_length(const Path &p) const;
  int valence(int v) const;
  /// First Betti number, assuming the graph is connected.
  int betti() const { return n_edges() - n_vertices() + 1; }
  bool connected() const;
  /// Outgoing half-edges at v in increasing order.
  std::vector<HalfEdge> star(int v) const;
  int edge_index(const std::string &id) const;
  double volume() const;
  std::string half_edge_name(HalfEdge h) const;
};

/// Throws DomainError on a broken incidence.
void check_path(const MetricGraph &g, const Path &p);
/// Removes backtracking. Throws DomainError on a broken incidence.
Path tighten_path(const MetricGraph &g, const Path &p);
/// Tightens and then removes matching ends of a closed path.
Path tighten_loop(const MetricGraph &g, const Path &p);

struct Point {
  MetricGraph graph;
  int rank = 0;
  int base = 0;
  /// Tight closed edge paths at base, one per generator.
  std::vector<Path> loops;

  /// Parent half-edge (pointing toward the vertex) in the spanning tree; 0 at base.
  std::vector<HalfEdge> tree_parent;
  std::vector<bool> in_tree;
  /// Word of each forward edge; tree edges carry the empty word.
  std::vector<Word> labels;
  /// True once labels are known to form a basis.
  bool marked = false;

  /// Builds the spanning tree and the label words. Throws DomainError when
  /// the marking is not a homotopy equivalence.
  void finalize();

  Word read_path(const Path &p) const;
  /// Edge path in this graph representing a word through the marking.
  Path realize(std::span<const Letter> w) const;
  /// Tree path from base to v.
  Path tree_path(int v) const;
};

/// Convenience constructor that finalises the point.
Point make_point(MetricGraph g, int rank, int base, std::vector<Path> loops);

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> issues;
};

ValidationReport validate_point(const Point &p, double tol = 1e-9);

/// Length of the immersed loop freely homotopic to w.
double loop_length(const CyclicWord &w, const Point &p);
double loop_length(std::span<const Letter> w, const Point &p);
/// Length of the tightened path of w, rel endpoints.
double path_length_of_word(std::span<const Letter> w, const Point &p);

enum class CandidateKind { Embedded, FigureEight, Barbell };
std::string to_string(CandidateKind k);

struct CandidateLoop {
  CandidateKind kind = CandidateKind::Embedded;
  Path path;
  CyclicWord cls;
  /// Cyclic reduction of the word read along path, in traversal order.
  Word word;
};

std::vector<CandidateLoop> enumerate_candidates(const Point &p);
/// Checks the combinatorial shape of a candidate of the given kind.
bool check_candidate_shape(const MetricGraph &g, const CandidateLoop &c);

/// Marking precomposed with phi: loop_length(a, act(p,phi)) = loop_length(phi(a), p).
/// Throws DomainError for an unverified phi.
Point act(const Point &p, const Automorphism &phi);
/// Same, with a known inverse used to relabel edges instead of folding.
Point act(const Point &p, const Automorphism &phi, const Automorphism &phi_inv);
Point minimal_model(const Point &p);

/// Standard rose with equal petals.
Point standard_rose(int rank);
Point rose(const std::vector<double> &lengths);
/// Marking built from the spanning tree: generator i crosses the i-th non-tree edge.
Point standard_marking(MetricGraph g, int rank, int base = 0);

/// Catalogue of small graphs of the given rank with all valences >= 3.
std::vector<MetricGraph> graph_catalog(int rank);

Point random_point(int rank, std::uint64_t seed, int n_moves, double jitter);
/// Same as random_point but starting from a graph picked from graph_catalog.
Point random_point_any_graph(int rank, std::uint64_t seed, int n_moves, double jitter);
/// Lengths multiplied by (1 + jitter*u), u uniform in [-1,1], then renormalised.
Point jitter_lengths(const Point &p, std::uint64_t seed, double jitter);
Point with_lengths(const Point &p, const std::vector<double> &lengths);

}  // namespace osk
