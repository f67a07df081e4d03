/** @file train_track.hpp
 *  Graph self-maps, gates and legality, Perron-Frobenius metrics, leaf
 *  segments of the attracting lamination and the search for a point whose
 *  lamination Whitehead graph has no cut vertex.
 */
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "osk/graph.hpp"
#include "osk/whitehead.hpp"

namespace osk {

/// Self-map of a marked graph that is linear on edges.
struct GraphSelfMap {
  Point point;
  std::vector<int> vertex_image;
  /// Tight edge path per edge; an empty path is a constant edge.
  std::vector<Path> edge_image;

  /// Image of a path, concatenated and tightened.
  Path apply(const Path &p) const;
  /// The automorphism f induces on pi_1 through the marking.
  Automorphism induced_automorphism() const;
};

/// Throws DomainError if images are not tight or do not fit vertex images.
void check_self_map(const GraphSelfMap &f);

/// Direction index of a half-edge: 2e for the forward half-edge, 2e+1 for the reverse.
inline int direction_index(HalfEdge h) { return h > 0 ? 2 * (h - 1) : 2 * (-h - 1) + 1; }
inline HalfEdge direction_half_edge(int d) { return d % 2 == 0 ? d / 2 + 1 : -(d / 2 + 1); }

struct Gates {
  /// Gate id per direction; -1 for directions excluded because their edge is
  /// constant. Gate ids are unique across the graph.
  std::vector<int> gate_of;
  std::vector<std::string> warnings;
  /// Iterations of the direction map used (the number of directions).
  int iterations = 0;

  bool same_gate(HalfEdge a, HalfEdge b) const;
  /// A turn is the pair of directions {a, b} at a common vertex.
  bool legal_turn(HalfEdge a, HalfEdge b) const { return !same_gate(a, b); }
  /// Gates at vertex v as lists of half-edges.
  std::vector<std::vector<HalfEdge>> at_vertex(const MetricGraph &g, int v) const;
  std::string to_string(const MetricGraph &g) const;
};

/// Direction map Df: initial half-edge of the image of each direction, 0 if constant.
std::vector<HalfEdge> direction_map(const GraphSelfMap &f);
Gates gates(const GraphSelfMap &f);

/// Transition matrix with rows indexed by images: M[i][j] counts the
/// crossings of edge j by f(e_i), in either direction.
using Matrix = std::vector<std::vector<double>>;
Matrix transition_matrix(const GraphSelfMap &f);
bool is_irreducible(const Matrix &m);

struct IllegalTurn {
  int edge = -1;          ///< edge whose image crosses the turn
  HalfEdge first = 0;     ///< the turn {first, second}
  HalfEdge second = 0;
};

struct TrainTrackCheck {
  bool is_tt = false;
  bool irreducible = false;
  std::optional<IllegalTurn> witness;
};

/// First illegal turn of a path, by position. In a path ...a b... the turn is
/// {a^-1, b}; a closed path also has the turn from its end to its start.
std::optional<std::pair<HalfEdge, HalfEdge>> first_illegal_turn(const Gates &g, const Path &p, bool cyclic);

TrainTrackCheck verify_train_track(const GraphSelfMap &f);

struct TrainTrackMap {
  GraphSelfMap map;
  Gates gates;
  Matrix matrix;
  double lambda = 0.0;
  /// PF lengths, volume 1: the right eigenvector of the transition matrix.
  std::vector<double> lengths;
  /// Occurrence frequencies of edges in long leaf segments (left eigenvector), summing to 1.
  std::vector<double> frequencies;
  int iterations = 0;

  /// The marked graph with its PF metric.
  const Point &point() const { return map.point; }
};

struct PerronFrobenius {
  double lambda = 0.0;
  std::vector<double> vector;
  int iterations = 0;
  double residual = 0.0;
};

/// Power iteration on M + I from the all-ones vector, to the given residual.
/// Pass the transpose for the left eigenvector.
PerronFrobenius perron_frobenius(const Matrix &m, double residual = 1e-12, int cap = 100000);

/// Verifies f and equips it with its PF metric. Throws DomainError when f is
/// not a train track, is reducible or has lambda <= 1 + 1e-9.
TrainTrackMap pf_metric(const GraphSelfMap &f);

struct LegalPiece {
  Path path;
  double length = 0.0;
};

struct LegalityReport {
  double bcc = 0.0;
  double kappa = 0.0;
  double total = 0.0;
  std::vector<LegalPiece> pieces;
  double leg = 0.0;
};

/// kappa = 4 * bcc / (lambda - 1).
double legality_threshold(double bcc, double lambda);
/// Share of the total length made of pieces longer than kappa.
double leg_from_pieces(const std::vector<double> &piece_lengths, double kappa);

/// Splits a tight path (closed when cyclic) at its illegal turns. The bound
/// for the cancellation constant is lambda times the volume.
LegalityReport legality_report(const Path &p, bool cyclic, const TrainTrackMap &tt);
LegalityReport legality_report(const CyclicWord &a, const TrainTrackMap &tt);

/// f^k(e) as a tight edge path.
Path leaf_segment(const TrainTrackMap &tt, int edge, int k);
/// Word read along f^k(e) through the marking.
Word leaf_word(const TrainTrackMap &tt, int edge, int k);

/// Longest metric length of a subpath of the loop a (or of its inverse),
/// taken cyclically and no longer than a, that occurs in leaf.
double longest_leaf_piece(const Path &a, const Path &leaf, const MetricGraph &g);
double longest_leaf_piece(const CyclicWord &a, const Path &leaf, const TrainTrackMap &tt);

struct LaminationLengthEstimate {
  std::vector<double> frequencies;
  std::vector<double> a;  ///< a[k-1] = a_k
  double value = 0.0;
  int k_used = 0;
  bool converged = false;
};

/// a_k = sum_i r_i l_target(f^k(e_i)) / sum_i r_i l_T0(f^k(e_i)), iterated
/// until three consecutive steps are below tol or k reaches k_cap.
LaminationLengthEstimate lamination_length_ratio(const TrainTrackMap &tt, const Point &target, double tol = 1e-6,
                                                 int k_cap = 40);

struct LaminationGraph {
  WhiteheadGraph graph;
  int k_used = 0;
};

/// Linear Whitehead graph of the leaves of both laminations in the rose x:
/// the turns of the edge paths of f^k(e) for every edge e of either map,
/// with rank * (longest marking loop of x) letters trimmed from both ends to
/// discard bounded cancellation. k grows until the graph is unchanged over
/// two increments.
LaminationGraph lamination_whitehead_graph(const TrainTrackMap &forward, const TrainTrackMap &backward, const Point &x,
                                           int k_cap = 30);

struct SearchStep {
  WhiteheadMove move;
  std::string graph_before;
  double ratio_forward = 0.0;
  double ratio_backward = 0.0;
};

struct CutVertexFreeSearch {
  Point point;
  Automorphism theta;
  std::vector<WhiteheadMove> moves;
  std::vector<SearchStep> steps;
  LaminationGraph final_graph;
  /// Lamination length estimates at the start and after each move.
  std::vector<double> ratios_forward;
  std::vector<double> ratios_backward;
};

/// Starting at a rose, applies Whitehead moves to its edge letters, chosen
/// from cut vertices of the combined lamination graph, until that graph is
/// connected with no cut vertex. theta satisfies point = act(start, theta).
/// Throws DomainError when the graph is disconnected, when a move fails to
/// shrink both lamination lengths or when max_moves is exceeded. The
/// lamination lengths are estimated to ratio_tol.
CutVertexFreeSearch no_cut_vertex_search(const TrainTrackMap &forward, const TrainTrackMap &backward,
                                         const Point &start, int max_moves = 200, double ratio_tol = 1e-5);

}  // namespace osk
