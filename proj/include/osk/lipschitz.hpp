/** @file lipschitz.hpp
 *  Asymmetric Lipschitz distance between points via candidate loops.
 */
#pragma once

#include <vector>

#include "osk/graph.hpp"

namespace osk {

struct CandidateStretch {
  CandidateLoop candidate;
  double length_x = 0.0;
  double length_y = 0.0;
  double ratio = 0.0;
};

struct DistanceResult {
  double value = 0.0;
  CandidateLoop witness;
  std::vector<CandidateStretch> table;
};

double stretch_factor(const CyclicWord &a, const Point &x, const Point &y);

/// log of the largest stretch over the candidates of x. Ties between maximal
/// candidates go to the least conjugacy class.
DistanceResult distance(const Point &x, const Point &y);
/// Same with the candidates of x supplied by the caller.
DistanceResult distance(const std::vector<CandidateLoop> &candidates_of_x, const Point &x, const Point &y);

/// log of the largest stretch over every conjugacy class of length <= L.
double distance_oracle(const Point &x, const Point &y, int L);

/// A map between graphs that is linear on edges.
struct LinearMap {
  std::vector<int> vertex_image;
  std::vector<Path> edge_image;
};

struct LipschitzReport {
  std::vector<double> slopes;
  double lip = 0.0;
  /// Edges whose slope equals lip within 1e-12.
  std::vector<int> green;
};

/// Slopes of f: src -> dst. Throws DomainError when the edge images do not
/// fit the vertex images.
LipschitzReport linear_map_lipschitz(const LinearMap &f, const MetricGraph &src, const MetricGraph &dst);
/// Also checks that f carries the marking of x to that of y up to homotopy.
LipschitzReport linear_map_lipschitz(const LinearMap &f, const Point &x, const Point &y);

}  // namespace osk
