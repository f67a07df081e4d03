/** @file axis.hpp
 *  Discrete axes G_m = base . phi^m, length profiles, projection to an axis
 *  and the Monte Carlo experiments built on it.
 */
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "osk/graph.hpp"
#include "osk/lipschitz.hpp"
#include "osk/random.hpp"
#include "osk/train_track.hpp"

namespace osk {

struct AxisCache;

struct Axis {
  Point base;
  Automorphism phi;
  Automorphism phi_inv;
  double lambda = 0.0;
  /// Expansion factor of phi^-1: from its train track when given, else
  /// estimated from left-tail length profiles.
  double mu = 0.0;
  bool mu_estimated = false;
  /// Train tracks whose PF points are G_0; dropped by translate_axis.
  std::optional<TrainTrackMap> forward;
  std::optional<TrainTrackMap> backward;
  /// Largest |m| for which G_m may be built.
  int budget = 30;
  std::shared_ptr<AxisCache> cache;

  /// One fundamental domain, log lambda.
  double step() const;
};

/// Axis through the PF point of fwd. phi_inv must invert the automorphism fwd induces.
Axis make_axis(const TrainTrackMap &fwd, const Automorphism &phi_inv, int budget = 30);
Axis make_axis(const TrainTrackMap &fwd, const TrainTrackMap &bwd, int budget = 30);
/// The axis of psi^-1 phi psi through base . psi; its points are G_m . psi.
Axis translate_axis(const Axis &ax, const Automorphism &psi, const Automorphism &psi_inv);

/// A product of k random Whitehead automorphisms and its inverse.
std::pair<Automorphism, Automorphism> random_moves(int rank, Rng &rng, int k);

/// G_m, cached. Throws DomainError beyond the budget.
Point axis_point(const Axis &ax, int m);
/// phi^m as an automorphism (phi_inv^-m for negative m), cached.
Automorphism axis_power(const Axis &ax, int m);

struct LengthProfile {
  CyclicWord alpha;
  int lo = 0;
  int hi = 0;
  std::vector<double> values;  ///< values[i] = l(alpha, G_{lo+i})
  std::vector<int> min_set;
  /// The minimum touches the window boundary.
  bool window_too_small = false;
  /// Least-squares log-slopes over the outer half of each tail, per step
  /// away from the min-set. NaN when a tail has fewer than two points.
  double right_slope = 0.0;
  double left_slope = 0.0;

  double at(int m) const { return values.at(static_cast<std::size_t>(m - lo)); }
};

LengthProfile length_profile(const CyclicWord &alpha, const Axis &ax, int lo, int hi);

struct ProjectionResult {
  std::vector<int> argmin;
  double value = 0.0;       ///< d(X, G_m) at the argmin
  int diam_m = 0;           ///< spread of the argmin in fundamental domains
  double diam = 0.0;        ///< diam_m * log lambda
  int lo = 0;               ///< scanned window
  int hi = 0;
  std::vector<double> scanned;  ///< d(X, G_m) for m in [lo, hi]
  bool unimodal = true;

  int first() const { return argmin.front(); }
  int last() const { return argmin.back(); }
};

/// Scans m -> d(X, G_m) from [center-3, center+3], widening until every
/// minimiser is at least 2 from the window ends. Ties within 1e-9.
ProjectionResult project(const Point &x, const Axis &ax, int center = 0);

struct ProbeResult {
  int mx = 0;  ///< first element of the argmin of X
  int my = 0;
  int separation = 0;
  double delta1 = 0.0;  ///< d(Y,X) - d(Y,pi Y) - d(pi Y, pi X)
  double delta2 = 0.0;  ///< d(Y,X) - d(Y,pi X)
  double delta3 = 0.0;  ///< d(X,Y) - d(pi X, pi Y)
};

ProbeResult tree_inequality_probe(const Point &x, const Point &y, const Axis &ax);

/// Experiment outputs. Every experiment is a pure function of its seed:
/// sample i draws from the stream (seed, i).
struct BallRecord {
  std::uint64_t seed = 0;
  int sample = 0;
  bool skipped = false;
  std::string reason;
  double r = 0.0;  ///< ball radius used, min(d(Y, pi Y), radius budget)
  int n_ball_points = 0;
  int proj_diam_m = 0;
  double proj_diam_dist = 0.0;
};

struct MorseRecord {
  std::uint64_t seed = 0;
  int sample = 0;
  int n_points = 0;
  double max_dist_to_axis = 0.0;
  double hausdorff = 0.0;
};

enum class ContractionMode { Balls, Morse };

struct ContractionConfig {
  int n_samples = 100;
  std::uint64_t seed = 0;
  double radius_budget = 1.0;
  int ball_attempts = 12;
  /// Whitehead moves used to push sample centres off the axis.
  int max_moves = 4;
  double jitter = 0.3;
};

struct ContractionRun {
  std::vector<BallRecord> balls;
  std::vector<MorseRecord> morse;
  /// Largest projection diameter (balls) or Hausdorff defect (morse).
  double d_emp = 0.0;
};

ContractionRun contraction_experiment(const Axis &ax, const ContractionConfig &cfg, ContractionMode mode);
/// One balls-mode sample around a given centre.
BallRecord ball_sample(const Axis &ax, const Point &y, std::uint64_t seed, int sample, const ContractionConfig &cfg);

struct ProbeRecord {
  std::uint64_t seed = 0;
  std::string xdesc;
  std::string ydesc;
  ProbeResult probe;
};

struct ProbeRun {
  std::vector<ProbeRecord> records;
  /// c_emp = max(0, -min delta) per inequality.
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
};

/// Pairs X = G_0 . w1 . phi^a, Y = G_0 . w2 . phi^b with w1, w2 products of
/// at most max_moves Whitehead automorphisms and projections at least
/// min_separation fundamental domains apart.
ProbeRun probe_experiment(const Axis &ax, int n_pairs, std::uint64_t seed, int min_separation = 4, int max_moves = 1);

struct DivergenceResult {
  bool avoids_ball = false;
  double length = 0.0;
  double bound = 0.0;
  bool vacuous = false;  ///< bound <= 0
  bool satisfied = false;
  int mid = 0;           ///< centre G_mid of the ball
  double b_prime = 0.0;
};

/// b' = D + 4c + 3.
double divergence_b_prime(double d_emp, double c_emp);
/// R^2 / (2b') - R/2.
double divergence_bound(double r, double b_prime);

/// Checks a path whose endpoints project at least 2R apart against the ball
/// {P : d(P, G_mid) < R}. mid defaults to the midpoint of the endpoint
/// projections. The length check is skipped when the path meets the ball.
DivergenceResult divergence_check(const std::vector<Point> &path, const Axis &ax, double r, double b_prime,
                                  std::optional<int> mid = std::nullopt);

struct DivergenceRecord {
  std::uint64_t seed = 0;
  int sample = 0;
  double r = 0.0;
  DivergenceResult result;
};

/// Detours G_a, Z.phi^a, ..., Z.phi^b, G_b around the ball, with Z sampled
/// off the axis until the detour avoids it.
std::vector<DivergenceRecord> divergence_experiment(const Axis &ax, double r, double b_prime, int n_samples,
                                                    std::uint64_t seed);

struct TwoAxisReport {
  std::vector<int> windows;
  std::vector<double> diams;  ///< diam p_A(B) per window, in distance units
  bool parallel = false;
  /// Three-axis table, present when C is given.
  struct Triple {
    double d_a_bc = 0.0;
    double d_b_ac = 0.0;
    double d_c_ab = 0.0;
    double m_emp = 0.0;
    int exceeding = 0;
  };
  std::optional<Triple> triple;
};

/// Projects B's points G^B_m, |m| <= w, onto A for w = window and 2 * window.
/// The parallel flag is raised when the diameter grows by at least
/// window * log lambda_A / 2 between the two.
TwoAxisReport two_axis_report(const Axis &a, const Axis &b, const std::optional<Axis> &c, int window);

/// diam of the projections onto `onto` of the points of the other axes, |m| <= window.
double projection_diameter(const Axis &onto, const std::vector<const Axis *> &others, int window);

std::string format_double(double v);
std::string balls_csv(const std::vector<BallRecord> &rs);
std::string morse_csv(const std::vector<MorseRecord> &rs);
std::string probe_csv(const std::vector<ProbeRecord> &rs);
std::string two_axis_csv(const TwoAxisReport &r);
std::string divergence_csv(const std::vector<DivergenceRecord> &rs);

}  // namespace osk
