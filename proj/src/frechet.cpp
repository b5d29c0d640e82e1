#include "cct/frechet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace cct {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Interval empty_interval() { return Interval{1, 0}; }

// Parameter interval of segment a-b within distance eps of point p.
Interval ball_segment(Point p, Point a, Point b, double eps) {
  double uu = 0, wu = 0, ww = 0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    double u = b[k] - a[k];
    double w = a[k] - p[k];
    uu += u * u;
    wu += w * u;
    ww += w * w;
  }
  double e2 = eps * eps;
  if (uu == 0) return ww <= e2 ? Interval{0, 1} : empty_interval();
  double disc = wu * wu - uu * (ww - e2);
  if (disc < 0) {
    // tangent clamp: tiny negative discriminants at critical values
    double scale = std::max(1.0, uu * (ww + e2));
    if (disc > -1e-12 * scale)
      disc = 0;
    else
      return empty_interval();
  }
  double root = std::sqrt(disc);
  double lo = (-wu - root) / uu;
  double hi = (-wu + root) / uu;
  lo = std::max(lo, 0.0);
  hi = std::min(hi, 1.0);
  if (lo > hi) return empty_interval();
  return Interval{lo, hi};
}

double point_segment_dist(Point p, Point a, Point b) {
  double uu = 0, wu = 0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    double u = b[k] - a[k];
    double w = p[k] - a[k];
    uu += u * u;
    wu += w * u;
  }
  double t = uu > 0 ? std::clamp(wu / uu, 0.0, 1.0) : 0.0;
  double s = 0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    double d = a[k] + t * (b[k] - a[k]) - p[k];
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace

bool decide(const Trajectory& p, const Trajectory& q, double eps) {
  if (p.dim() != q.dim()) throw DimensionMismatch();
  // tiny relative slack so the predicate holds at the exact distance despite
  // floating-point jitter at critical values
  eps += 1e-12 * (1.0 + std::abs(eps));
  const std::size_t n = p.size(), m = q.size();
  if (dist(p.front(), q.front()) > eps) return false;
  if (dist(p.back(), q.back()) > eps) return false;
  if (n == 1 || m == 1) {
    const Trajectory& pt = n == 1 ? p : q;
    const Trajectory& tr = n == 1 ? q : p;
    for (std::size_t i = 0; i < tr.size(); ++i)
      if (dist(pt.front(), tr.vertex(i)) > eps) return false;
    return true;
  }

  const std::size_t np = n - 1, mq = m - 1;
  // lr[j]: reachable interval on the boundary `P-vertex i` x `Q-edge j`.
  std::vector<Interval> lr(mq);
  lr[0] = ball_segment(p.front(), q.vertex(0), q.vertex(1), eps);
  lr[0].lo = 0;  // start corner is free
  for (std::size_t j = 1; j < mq; ++j) {
    if (!lr[j - 1].empty() && lr[j - 1].hi >= 1) {
      Interval f = ball_segment(p.front(), q.vertex(j), q.vertex(j + 1), eps);
      if (!f.empty() && f.lo <= 0)
        lr[j] = Interval{0, f.hi};
      else
        lr[j] = empty_interval();
    } else {
      lr[j] = empty_interval();
    }
  }

  // bottom_row: reachable interval on boundary `P-edge i` x `Q-vertex 0`.
  Interval bottom_row = ball_segment(q.front(), p.vertex(0), p.vertex(1), eps);
  bottom_row.lo = 0;

  Interval last_top = empty_interval();
  for (std::size_t i = 0; i < np; ++i) {
    if (i > 0) {
      if (!bottom_row.empty() && bottom_row.hi >= 1) {
        Interval f = ball_segment(q.front(), p.vertex(i), p.vertex(i + 1), eps);
        bottom_row = (!f.empty() && f.lo <= 0) ? Interval{0, f.hi} : empty_interval();
      } else {
        bottom_row = empty_interval();
      }
    }
    Interval bott = bottom_row;
    for (std::size_t j = 0; j < mq; ++j) {
      Interval cur_l = lr[j];
      Interval cur_b = bott;
      Interval f_right = ball_segment(p.vertex(i + 1), q.vertex(j), q.vertex(j + 1), eps);
      Interval f_top = ball_segment(q.vertex(j + 1), p.vertex(i), p.vertex(i + 1), eps);

      Interval right = empty_interval();
      if (!cur_b.empty())
        right = f_right;
      else if (!cur_l.empty() && !f_right.empty())
        right = Interval{std::max(f_right.lo, cur_l.lo), f_right.hi};

      Interval top = empty_interval();
      if (!cur_l.empty())
        top = f_top;
      else if (!cur_b.empty() && !f_top.empty())
        top = Interval{std::max(f_top.lo, cur_b.lo), f_top.hi};

      lr[j] = right;
      bott = top;
    }
    last_top = bott;
  }
  return (!lr[mq - 1].empty() && lr[mq - 1].hi >= 1) ||
         (!last_top.empty() && last_top.hi >= 1);
}

double discrete_frechet(const Trajectory& p, const Trajectory& q) {
  if (p.dim() != q.dim()) throw DimensionMismatch();
  const std::size_t n = p.size(), m = q.size();
  std::vector<double> row(m), prev(m);
  for (std::size_t j = 0; j < m; ++j) {
    double d = dist(p.vertex(0), q.vertex(j));
    row[j] = j == 0 ? d : std::max(row[j - 1], d);
  }
  for (std::size_t i = 1; i < n; ++i) {
    std::swap(prev, row);
    for (std::size_t j = 0; j < m; ++j) {
      double d = dist(p.vertex(i), q.vertex(j));
      double best = prev[j];
      if (j > 0) best = std::min(best, std::min(prev[j - 1], row[j - 1]));
      row[j] = std::max(best, d);
    }
  }
  return row[m - 1];
}

namespace {

void add_bisector_candidates(const Trajectory& verts, const Trajectory& edges,
                             std::vector<double>& out) {
  const int d = verts.dim();
  for (std::size_t a = 0; a + 1 < verts.size(); ++a) {
    Point u = verts.vertex(a);
    for (std::size_t b = a + 1; b < verts.size(); ++b) {
      Point v = verts.vertex(b);
      double nu = 0, nv = 0;
      for (int k = 0; k < d; ++k) {
        nu += u[k] * u[k];
        nv += v[k] * v[k];
      }
      for (std::size_t j = 0; j + 1 < edges.size(); ++j) {
        Point qa = edges.vertex(j);
        Point qb = edges.vertex(j + 1);
        double dq = 0, dw = 0;
        for (int k = 0; k < d; ++k) {
          double diff = v[k] - u[k];
          dq += diff * qa[k];
          dw += diff * (qb[k] - qa[k]);
        }
        if (dw == 0) continue;
        double t = (0.5 * (nv - nu) - dq) / dw;
        if (t < 0 || t > 1) continue;
        double s = 0;
        for (int k = 0; k < d; ++k) {
          double e = qa[k] + t * (qb[k] - qa[k]) - u[k];
          s += e * e;
        }
        out.push_back(std::sqrt(s));
      }
    }
  }
}

double exact_critical(const Trajectory& p, const Trajectory& q) {
  std::vector<double> cand;
  cand.push_back(dist(p.front(), q.front()));
  cand.push_back(dist(p.back(), q.back()));
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j + 1 < q.size(); ++j)
      cand.push_back(point_segment_dist(p.vertex(i), q.vertex(j), q.vertex(j + 1)));
  for (std::size_t j = 0; j < q.size(); ++j)
    for (std::size_t i = 0; i + 1 < p.size(); ++i)
      cand.push_back(point_segment_dist(q.vertex(j), p.vertex(i), p.vertex(i + 1)));
  add_bisector_candidates(p, q, cand);
  add_bisector_candidates(q, p, cand);
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

  // smallest candidate at which the decision holds
  std::size_t lo = 0, hi = cand.size() - 1;
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (decide(p, q, cand[mid]))
      hi = mid;
    else
      lo = mid + 1;
  }
  return cand[lo];
}

double exact_bisection(const Trajectory& p, const Trajectory& q, double tol) {
  double lo = std::max(dist(p.front(), q.front()), dist(p.back(), q.back()));
  double hi = discrete_frechet(p, q);
  if (decide(p, q, lo)) return lo;
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // ulp exhaustion
    if (decide(p, q, mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

}  // namespace

double distance_exact(const Trajectory& p, const Trajectory& q, ExactMode mode) {
  if (p.dim() != q.dim()) throw DimensionMismatch();
  switch (mode.kind) {
    case ExactMode::CriticalValues:
      return exact_critical(p, q);
    case ExactMode::Bisection:
      return exact_bisection(p, q, mode.tol);
    case ExactMode::Auto:
    default:
      if (p.size() * q.size() <= 10000) return exact_critical(p, q);
      return exact_bisection(p, q, mode.tol * std::max(1.0, discrete_frechet(p, q)));
  }
}

Interval segment_distance(const Trajectory& p, Point a, Point b, double tol) {
  bool degenerate = true;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a[k] != b[k]) {
      degenerate = false;
      break;
    }
  if (degenerate) {
    double best = 0;
    for (std::size_t i = 0; i < p.size(); ++i) best = std::max(best, dist(p.vertex(i), a));
    return Interval{best, best};
  }
  Trajectory seg = make_segment(a, b);
  double lo = std::max(dist(p.front(), a), dist(p.back(), b));
  if (decide(p, seg, lo)) return Interval{lo, lo};
  double hi = discrete_frechet(p, seg);
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (decide(p, seg, mid))
      hi = mid;
    else
      lo = mid;
  }
  return Interval{lo, hi};
}

Trajectory simplify(const Trajectory& p, double eps_hat) {
  const std::size_t m = p.size();
  std::vector<double> out(p.vertex(0).begin(), p.vertex(0).end());
  std::size_t anchor = 0;
  auto ok = [&](std::size_t j) {
    if (j == anchor + 1) return true;
    Trajectory chain = p.slice(anchor, j);
    Trajectory seg = make_segment(p.vertex(anchor), p.vertex(j));
    return decide(chain, seg, eps_hat);
  };
  while (anchor + 1 < m) {
    // exponential probe, then binary search for the farthest shortcut
    std::size_t lo = anchor + 1, step = 1;
    while (anchor + step < m && ok(anchor + step)) {
      lo = anchor + step;
      step *= 2;
    }
    std::size_t hi = std::min(anchor + step, m - 1);  // first candidate that may fail
    while (lo + 1 <= hi && lo < hi) {
      std::size_t mid = (lo + hi + 1) / 2;
      if (ok(mid))
        lo = mid;
      else
        hi = mid - 1;
    }
    out.insert(out.end(), p.vertex(lo).begin(), p.vertex(lo).end());
    anchor = lo;
  }
  return Trajectory(p.id(), p.dim(), std::move(out));
}

}  // namespace cct
