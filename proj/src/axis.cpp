#include "osk/axis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

#include "osk/parallel.hpp"
#include "osk/random.hpp"

namespace osk {

struct AxisCache {
  std::mutex mu;
  std::map<int, Automorphism> powers;
  std::map<int, std::shared_ptr<const Point>> points;
};

namespace {

constexpr double kTie = 1e-9;

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

// Random product of k Whitehead automorphisms with its inverse.
Point shift(const Point &p, const Axis &ax, int m) {
  return m == 0 ? p : act(p, axis_power(ax, m), axis_power(ax, -m));
}

// Least-squares slope of log v against t.
double log_slope(const std::vector<double> &t, const std::vector<double> &v) {
  if (t.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  const double n = static_cast<double>(t.size());
  double st = 0, sv = 0, stt = 0, stv = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    double lv = std::log(v[i]);
    st += t[i];
    sv += lv;
    stt += t[i] * t[i];
    stv += t[i] * lv;
  }
  return (n * stv - st * sv) / (n * stt - st * st);
}

std::vector<int> argmin_of(const std::vector<double> &v, int lo) {
  double best = *std::min_element(v.begin(), v.end());
  std::vector<int> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] <= best + kTie) out.push_back(lo + static_cast<int>(i));
  return out;
}

bool is_unimodal(const std::vector<double> &v) {
  std::size_t i = 0;
  while (i + 1 < v.size() && v[i + 1] <= v[i] + kTie) ++i;
  while (i + 1 < v.size() && v[i + 1] >= v[i] - kTie) ++i;
  return i + 1 >= v.size();
}

double estimate_mu(const Axis &ax) {
  double sum = 0.0;
  int n = 0;
  for (Letter g = 1; g <= ax.base.rank; ++g) {
    auto p = length_profile(CyclicWord(Word{g}), ax, -12, 0);
    if (std::isfinite(p.left_slope)) {
      sum += p.left_slope;
      ++n;
    }
  }
  if (n == 0) throw DomainError("cannot estimate the backward expansion factor");
  return std::exp(sum / n);
}

}  // namespace

std::pair<Automorphism, Automorphism> random_moves(int rank, Rng &rng, int k) {
  static thread_local std::map<int, std::vector<WhiteheadMove>> cache;
  auto &moves = cache[rank];
  if (moves.empty()) moves = all_whitehead_moves(rank);
  Automorphism a = Automorphism::identity(rank), b = a;
  for (int i = 0; i < k; ++i) {
    const auto &m = moves[idx(rng.below(static_cast<int>(moves.size())))];
    a = compose(a, whitehead_move(rank, m));
    b = compose(whitehead_move(rank, inverse_move(m)), b);
  }
  return {a, b};
}

double Axis::step() const { return std::log(lambda); }

Axis make_axis(const TrainTrackMap &fwd, const Automorphism &phi_inv, int budget) {
  Axis ax;
  ax.phi = certify(fwd.map.induced_automorphism());
  if (!verify_inverse(ax.phi, phi_inv)) throw DomainError("the inverse does not invert the train track's automorphism");
  ax.phi_inv = phi_inv;
  ax.phi_inv.verified = true;
  ax.base = fwd.point();
  ax.lambda = fwd.lambda;
  ax.forward = fwd;
  ax.budget = budget;
  ax.cache = std::make_shared<AxisCache>();
  ax.mu = estimate_mu(ax);
  ax.mu_estimated = true;
  return ax;
}

Axis make_axis(const TrainTrackMap &fwd, const TrainTrackMap &bwd, int budget) {
  Axis ax = make_axis(fwd, certify(bwd.map.induced_automorphism()), budget);
  ax.backward = bwd;
  ax.mu = bwd.lambda;
  ax.mu_estimated = false;
  return ax;
}

Axis translate_axis(const Axis &ax, const Automorphism &psi, const Automorphism &psi_inv) {
  if (!verify_inverse(psi, psi_inv)) throw DomainError("translate_axis needs psi and its inverse");
  Axis out;
  out.base = act(ax.base, psi, psi_inv);
  out.phi = compose(psi_inv, compose(ax.phi, psi));
  out.phi_inv = compose(psi_inv, compose(ax.phi_inv, psi));
  out.phi.verified = out.phi_inv.verified = true;
  out.lambda = ax.lambda;
  out.mu = ax.mu;
  out.mu_estimated = ax.mu_estimated;
  out.budget = ax.budget;
  out.cache = std::make_shared<AxisCache>();
  return out;
}

Automorphism axis_power(const Axis &ax, int m) {
  if (std::abs(m) > ax.budget) throw DomainError("axis index " + std::to_string(m) + " exceeds the budget");
  if (m == 0) return Automorphism::identity(ax.base.rank);
  std::lock_guard lock(ax.cache->mu);
  auto &powers = ax.cache->powers;
  if (auto it = powers.find(m); it != powers.end()) return it->second;
  const int s = m > 0 ? 1 : -1;
  const Automorphism &g = m > 0 ? ax.phi : ax.phi_inv;
  Automorphism cur = Automorphism::identity(ax.base.rank);
  int k = 0;
  for (int j = m - s; j != 0; j -= s)
    if (auto it = powers.find(j); it != powers.end()) {
      cur = it->second;
      k = j;
      break;
    }
  while (k != m) {
    cur = compose(cur, g);
    k += s;
    powers.emplace(k, cur);
  }
  return cur;
}

Point axis_point(const Axis &ax, int m) {
  if (std::abs(m) > ax.budget) throw DomainError("axis index " + std::to_string(m) + " exceeds the budget");
  if (m == 0) return ax.base;
  {
    std::lock_guard lock(ax.cache->mu);
    if (auto it = ax.cache->points.find(m); it != ax.cache->points.end()) return *it->second;
  }
  auto p = std::make_shared<const Point>(act(ax.base, axis_power(ax, m), axis_power(ax, -m)));
  std::lock_guard lock(ax.cache->mu);
  ax.cache->points.emplace(m, p);
  return *p;
}

LengthProfile length_profile(const CyclicWord &alpha, const Axis &ax, int lo, int hi) {
  if (alpha.empty()) throw DomainError("length_profile needs a nontrivial class");
  if (lo > hi) throw DomainError("empty window");
  LengthProfile p;
  p.alpha = alpha;
  p.lo = lo;
  p.hi = hi;
  p.values.assign(idx(hi - lo + 1), 0.0);
  auto put = [&](int m, const CyclicWord &w) {
    if (m >= lo && m <= hi) p.values[idx(m - lo)] = loop_length(w, ax.base);
  };
  CyclicWord w = alpha;
  put(0, w);
  for (int m = 1; m <= hi; ++m) put(m, w = apply_endomorphism(ax.phi, w));
  w = alpha;
  for (int m = -1; m >= lo; --m) put(m, w = apply_endomorphism(ax.phi_inv, w));

  p.min_set = argmin_of(p.values, lo);
  p.window_too_small = p.min_set.front() == lo || p.min_set.back() == hi;
  // Outer half of each tail.
  auto fit = [&](int from, int to, int sign) {
    std::vector<double> t, v;
    int start = from + (to - from) / 2;
    for (int m = start; sign * (to - m) >= 0 && m != to + sign; m += sign) {
      t.push_back(sign * m);
      v.push_back(p.at(m));
    }
    return log_slope(t, v);
  };
  const int right_from = p.min_set.back() + 1, left_from = p.min_set.front() - 1;
  p.right_slope = right_from <= hi ? fit(right_from, hi, 1) : std::numeric_limits<double>::quiet_NaN();
  p.left_slope = left_from >= lo ? fit(left_from, lo, -1) : std::numeric_limits<double>::quiet_NaN();
  return p;
}

ProjectionResult project(const Point &x, const Axis &ax, int center) {
  auto cands = enumerate_candidates(x);
  ProjectionResult r;
  r.lo = center - 3;
  r.hi = center + 3;
  std::map<int, double> seen;
  auto d = [&](int m) {
    auto it = seen.find(m);
    if (it != seen.end()) return it->second;
    double v = distance(cands, x, axis_point(ax, m)).value;
    seen.emplace(m, v);
    return v;
  };
  for (;;) {
    if (std::abs(r.lo) > ax.budget || std::abs(r.hi) > ax.budget)
      throw DomainError("projection minimum is not interior within the axis budget");
    r.scanned.clear();
    for (int m = r.lo; m <= r.hi; ++m) r.scanned.push_back(d(m));
    r.argmin = argmin_of(r.scanned, r.lo);
    bool grow_lo = r.argmin.front() < r.lo + 2, grow_hi = r.argmin.back() > r.hi - 2;
    if (!grow_lo && !grow_hi) break;
    if (grow_lo) r.lo -= 3;
    if (grow_hi) r.hi += 3;
  }
  r.value = r.scanned[idx(r.argmin.front() - r.lo)];
  r.diam_m = r.argmin.back() - r.argmin.front();
  r.diam = r.diam_m * ax.step();
  r.unimodal = is_unimodal(r.scanned);
  return r;
}

ProbeResult tree_inequality_probe(const Point &x, const Point &y, const Axis &ax) {
  auto px = project(x, ax), py = project(y, ax, px.first());
  ProbeResult r;
  r.mx = px.first();
  r.my = py.first();
  r.separation = std::abs(r.mx - r.my);
  const Point gx = axis_point(ax, r.mx), gy = axis_point(ax, r.my);
  const double d_yx = distance(y, x).value, d_xy = distance(x, y).value;
  r.delta1 = d_yx - (py.value + distance(gy, gx).value);
  r.delta2 = d_yx - distance(y, gx).value;
  r.delta3 = d_xy - distance(gx, gy).value;
  return r;
}

BallRecord ball_sample(const Axis &ax, const Point &y, std::uint64_t seed, int sample, const ContractionConfig &cfg) {
  BallRecord rec;
  rec.seed = seed;
  rec.sample = sample;
  auto py = project(y, ax);
  if (py.value <= kTie) {
    rec.skipped = true;
    rec.reason = "r=0";
    return rec;
  }
  rec.r = std::min(py.value, cfg.radius_budget);
  Rng rng(seed, (static_cast<std::uint64_t>(sample) << 8) | 0xb1);
  int lo = py.first(), hi = py.last();
  const int reach = 1 + static_cast<int>(std::lround(2.0 * rec.r));
  for (int t = 0; t < cfg.ball_attempts; ++t) {
    auto [w, w_inv] = random_moves(y.rank, rng, rng.below(reach + 1));
    Point xp = act(jitter_lengths(y, rng.next(), 0.5 * rng.uniform()), w, w_inv);
    if (distance(y, xp).value >= rec.r) continue;
    auto px = project(xp, ax, py.first());
    lo = std::min(lo, px.first());
    hi = std::max(hi, px.last());
    ++rec.n_ball_points;
  }
  rec.proj_diam_m = hi - lo;
  rec.proj_diam_dist = rec.proj_diam_m * ax.step();
  return rec;
}

ContractionRun contraction_experiment(const Axis &ax, const ContractionConfig &cfg, ContractionMode mode) {
  if (cfg.n_samples < 1) throw DomainError("n_samples must be positive");
  const int rank = ax.base.rank;
  ContractionRun run;
  if (mode == ContractionMode::Balls) {
    run.balls.resize(idx(cfg.n_samples));
    parallel_for(cfg.n_samples, [&](int s) {
      Rng rng(cfg.seed, static_cast<std::uint64_t>(s));
      int a = rng.below(5) - 2;
      auto [w, w_inv] = random_moves(rank, rng, 1 + rng.below(cfg.max_moves));
      Point y = jitter_lengths(act(axis_point(ax, a), w, w_inv), rng.next(), cfg.jitter * rng.uniform());
      run.balls[idx(s)] = ball_sample(ax, y, cfg.seed, s, cfg);
    });
    for (auto &b : run.balls)
      if (!b.skipped) run.d_emp = std::max(run.d_emp, b.proj_diam_dist);
    return run;
  }
  run.morse.resize(idx(cfg.n_samples));
  parallel_for(cfg.n_samples, [&](int s) {
    Rng rng(cfg.seed, static_cast<std::uint64_t>(s));
    const int len = 3 + rng.below(4);
    std::vector<Point> path;
    for (int m = 0; m <= len; ++m) {
      Point p = axis_point(ax, m);
      if (m > 0 && m < len && rng.below(2) == 1) {
        auto [w, w_inv] = random_moves(rank, rng, 1);
        p = jitter_lengths(act(p, w, w_inv), rng.next(), cfg.jitter * rng.uniform());
      }
      path.push_back(std::move(p));
    }
    MorseRecord rec;
    rec.seed = cfg.seed;
    rec.sample = s;
    rec.n_points = static_cast<int>(path.size());
    double to_axis = 0.0;
    for (auto &p : path) {
      double best = std::numeric_limits<double>::infinity();
      for (int m = 0; m <= len; ++m) best = std::min(best, distance(p, axis_point(ax, m)).value);
      to_axis = std::max(to_axis, best);
      rec.max_dist_to_axis = std::max(rec.max_dist_to_axis, project(p, ax).value);
    }
    double from_axis = 0.0;
    for (int m = 0; m <= len; ++m) {
      double best = std::numeric_limits<double>::infinity();
      for (auto &p : path) best = std::min(best, distance(axis_point(ax, m), p).value);
      from_axis = std::max(from_axis, best);
    }
    rec.hausdorff = std::max(to_axis, from_axis);
    run.morse[idx(s)] = rec;
  });
  for (auto &m : run.morse) run.d_emp = std::max(run.d_emp, m.hausdorff);
  return run;
}

ProbeRun probe_experiment(const Axis &ax, int n_pairs, std::uint64_t seed, int min_separation, int max_moves) {
  if (n_pairs < 1) throw DomainError("n_pairs must be positive");
  if (max_moves < 1) throw DomainError("max_moves must be positive");
  const int rank = ax.base.rank;
  ProbeRun run;
  run.records.resize(idx(n_pairs));
  parallel_for(n_pairs, [&](int s) {
    Rng rng(seed, static_cast<std::uint64_t>(s));
    for (int attempt = 0;; ++attempt) {
      if (attempt > 50) throw DomainError("could not sample a separated pair");
      int kx = 1 + rng.below(max_moves), ky = 1 + rng.below(max_moves);
      int a = rng.below(3) - 1;
      int b = a + (rng.below(2) ? 1 : -1) * (min_separation + 1 + rng.below(3));
      auto [wx, wx_inv] = random_moves(rank, rng, kx);
      auto [wy, wy_inv] = random_moves(rank, rng, ky);
      Point x = shift(act(ax.base, wx, wx_inv), ax, a), y = shift(act(ax.base, wy, wy_inv), ax, b);
      auto pr = tree_inequality_probe(x, y, ax);
      if (pr.separation <= min_separation - 1) continue;
      std::ostringstream xd, yd;
      xd << "moves=" << kx << ";shift=" << a;
      yd << "moves=" << ky << ";shift=" << b;
      run.records[idx(s)] = {seed, xd.str(), yd.str(), pr};
      return;
    }
  });
  double m1 = 0, m2 = 0, m3 = 0;
  for (auto &r : run.records) {
    m1 = std::min(m1, r.probe.delta1);
    m2 = std::min(m2, r.probe.delta2);
    m3 = std::min(m3, r.probe.delta3);
  }
  run.c1 = -m1;
  run.c2 = -m2;
  run.c3 = -m3;
  return run;
}

double divergence_b_prime(double d_emp, double c_emp) { return d_emp + 4.0 * c_emp + 3.0; }

double divergence_bound(double r, double b_prime) { return r * r / (2.0 * b_prime) - r / 2.0; }

DivergenceResult divergence_check(const std::vector<Point> &path, const Axis &ax, double r, double b_prime,
                                  std::optional<int> mid) {
  if (path.size() < 2) throw DomainError("a path needs two points");
  auto p0 = project(path.front(), ax), p1 = project(path.back(), ax, p0.first());
  const int a = std::min(p0.first(), p1.first()), b = std::max(p0.first(), p1.first());
  if ((b - a) * ax.step() < 2.0 * r - kTie) throw DomainError("path endpoints project closer than 2R");
  DivergenceResult res;
  res.mid = mid.value_or((a + b) / 2);
  if (res.mid < a || res.mid > b) throw DomainError("ball centre outside the projected span");
  res.b_prime = b_prime;
  const Point c = axis_point(ax, res.mid);
  res.avoids_ball = true;
  for (auto &p : path)
    if (distance(p, c).value < r) {
      res.avoids_ball = false;
      break;
    }
  for (std::size_t i = 0; i + 1 < path.size(); ++i) res.length += distance(path[i], path[i + 1]).value;
  res.bound = divergence_bound(r, b_prime);
  res.vacuous = res.bound <= 0.0;
  res.satisfied = res.avoids_ball && res.length >= res.bound;
  return res;
}

std::vector<DivergenceRecord> divergence_experiment(const Axis &ax, double r, double b_prime, int n_samples,
                                                    std::uint64_t seed) {
  if (n_samples < 1) throw DomainError("n_samples must be positive");
  const int rank = ax.base.rank;
  // Nearest axis points on either side of G_0 outside the ball.
  const Point centre = axis_point(ax, 0);
  int a0 = -1, b0 = 1;
  while (distance(axis_point(ax, a0), centre).value < r) --a0;
  while (distance(axis_point(ax, b0), centre).value < r) ++b0;
  std::vector<DivergenceRecord> out(idx(n_samples));
  parallel_for(n_samples, [&](int s) {
    Rng rng(seed, static_cast<std::uint64_t>(s));
    const int extra = rng.below(2), a = a0 - extra, b = b0 + extra;
    for (int attempt = 0;; ++attempt) {
      if (attempt > 200) throw DomainError("no avoiding detour found");
      // A short edge keeps Z . phi^m far from every thick axis point.
      auto [w, w_inv] = random_moves(rank, rng, 1 + rng.below(4));
      Point z = act(ax.base, w, w_inv);
      const int n = z.graph.n_edges(), e = rng.below(n);
      const double eps = std::exp(-(r + 1.0 + rng.uniform()));
      std::vector<double> lengths(idx(n), (1.0 - eps) / (n - 1));
      lengths[idx(e)] = eps;
      z = with_lengths(z, lengths);
      std::vector<Point> path{axis_point(ax, a)};
      for (int m = a; m <= b; ++m) path.push_back(shift(z, ax, m));
      path.push_back(axis_point(ax, b));
      auto res = divergence_check(path, ax, r, b_prime, 0);
      if (!res.avoids_ball) continue;
      out[idx(s)] = {seed, s, r, res};
      return;
    }
  });
  return out;
}

double projection_diameter(const Axis &onto, const std::vector<const Axis *> &others, int window) {
  std::vector<std::pair<const Axis *, int>> jobs;
  for (auto *o : others)
    for (int m = -window; m <= window; ++m) jobs.emplace_back(o, m);
  std::vector<std::pair<int, int>> ranges(jobs.size());
  parallel_for(static_cast<int>(jobs.size()), [&](int i) {
    auto pr = project(axis_point(*jobs[idx(i)].first, jobs[idx(i)].second), onto);
    ranges[idx(i)] = {pr.first(), pr.last()};
  });
  int lo = std::numeric_limits<int>::max(), hi = std::numeric_limits<int>::min();
  for (auto [l, h] : ranges) {
    lo = std::min(lo, l);
    hi = std::max(hi, h);
  }
  return (hi - lo) * onto.step();
}

TwoAxisReport two_axis_report(const Axis &a, const Axis &b, const std::optional<Axis> &c, int window) {
  if (window < 1) throw DomainError("window must be positive");
  TwoAxisReport rep;
  for (int w : {window, 2 * window}) {
    rep.windows.push_back(w);
    rep.diams.push_back(projection_diameter(a, {&b}, w));
  }
  rep.parallel = rep.diams[1] - rep.diams[0] >= 0.5 * window * a.step() - kTie;
  if (c) {
    const Axis *ax[3] = {&a, &b, &*c};
    double pair_max = 0.0, step_max = 0.0;
    for (int i = 0; i < 3; ++i) {
      step_max = std::max(step_max, ax[i]->step());
      for (int j = 0; j < 3; ++j)
        if (i != j) pair_max = std::max(pair_max, projection_diameter(*ax[i], {ax[j]}, window));
    }
    TwoAxisReport::Triple t;
    t.d_a_bc = projection_diameter(a, {&b, &*c}, window);
    t.d_b_ac = projection_diameter(b, {&a, &*c}, window);
    t.d_c_ab = projection_diameter(*c, {&a, &b}, window);
    t.m_emp = 2.0 * pair_max + step_max;
    t.exceeding = (t.d_a_bc > t.m_emp) + (t.d_b_ac > t.m_emp) + (t.d_c_ab > t.m_emp);
    rep.triple = t;
  }
  return rep;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string balls_csv(const std::vector<BallRecord> &rs) {
  std::ostringstream o;
  o << "seed,sample,r,n_ball_points,proj_diam_m,proj_diam_dist\n";
  for (auto &r : rs)
    o << r.seed << ',' << r.sample << ',' << format_double(r.r) << ',' << r.n_ball_points << ',' << r.proj_diam_m << ','
      << format_double(r.proj_diam_dist) << '\n';
  return o.str();
}

std::string morse_csv(const std::vector<MorseRecord> &rs) {
  std::ostringstream o;
  o << "seed,sample,n_points,max_dist_to_axis,hausdorff\n";
  for (auto &r : rs)
    o << r.seed << ',' << r.sample << ',' << r.n_points << ',' << format_double(r.max_dist_to_axis) << ','
      << format_double(r.hausdorff) << '\n';
  return o.str();
}

std::string probe_csv(const std::vector<ProbeRecord> &rs) {
  std::ostringstream o;
  o << "seed,xdesc,ydesc,sep,delta1,delta2,delta3\n";
  for (auto &r : rs)
    o << r.seed << ',' << r.xdesc << ',' << r.ydesc << ',' << r.probe.separation << ',' << format_double(r.probe.delta1)
      << ',' << format_double(r.probe.delta2) << ',' << format_double(r.probe.delta3) << '\n';
  return o.str();
}

std::string two_axis_csv(const TwoAxisReport &r) {
  std::ostringstream o;
  o << "windows,diam,parallel\n";
  for (std::size_t i = 0; i < r.windows.size(); ++i)
    o << r.windows[i] << ',' << format_double(r.diams[i]) << ',' << (r.parallel ? "true" : "false") << '\n';
  return o.str();
}

std::string divergence_csv(const std::vector<DivergenceRecord> &rs) {
  std::ostringstream o;
  o << "seed,sample,R,avoids_ball,length,bound,vacuous,satisfied\n";
  for (auto &r : rs)
    o << r.seed << ',' << r.sample << ',' << format_double(r.r) << ',' << r.result.avoids_ball << ','
      << format_double(r.result.length) << ',' << format_double(r.result.bound) << ',' << r.result.vacuous << ','
      << r.result.satisfied << '\n';
  return o.str();
}

}  // namespace osk
