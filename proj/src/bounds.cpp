#include "cct/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cct {
namespace {

constexpr double kPi = 3.14159265358979323846;

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

Bbox box_of(const std::vector<double>& coords, int dim) {
  Bbox b;
  b.min.assign(coords.begin(), coords.begin() + dim);
  b.max = b.min;
  for (std::size_t i = dim; i < coords.size(); i += dim)
    for (int k = 0; k < dim; ++k) {
      b.min[k] = std::min(b.min[k], coords[i + k]);
      b.max[k] = std::max(b.max[k], coords[i + k]);
    }
  return b;
}

Bbox rotated_box_2d(const Trajectory& p, double deg) {
  double c = std::cos(deg * kPi / 180.0), s = std::sin(deg * kPi / 180.0);
  std::vector<double> rot;
  rot.reserve(p.coords().size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    Point v = p.vertex(i);
    rot.push_back(v[0] * c - v[1] * s);
    rot.push_back(v[0] * s + v[1] * c);
  }
  return box_of(rot, 2);
}

// Max over corresponding facets of the min distance from the farther facet
// to the other box: the extreme-value gap in the facet's dimension plus the
// range separations in all other dimensions. Each curve must touch every
// facet of its own box while its partner stays inside the other box.
double edge_face_lb(const Bbox& p, const Bbox& q) {
  const int d = static_cast<int>(p.min.size());
  double best = 0;
  for (int k = 0; k < d; ++k) {
    for (int side = 0; side < 2; ++side) {
      double diff = side ? p.max[k] - q.max[k] : p.min[k] - q.min[k];
      double s = diff * diff;
      for (int j = 0; j < d; ++j) {
        if (j == k) continue;
        double gap = std::max({0.0, q.min[j] - p.max[j], p.min[j] - q.max[j]});
        s += gap * gap;
      }
      best = std::max(best, std::sqrt(s));
    }
  }
  return best;
}

double corner_ub(const Bbox& p, const Bbox& q) {
  const int d = static_cast<int>(p.min.size());
  double best = 0;
  for (int a = 0; a < (1 << d); ++a)
    for (int b = 0; b < (1 << d); ++b) {
      double s = 0;
      for (int k = 0; k < d; ++k) {
        double pc = (a >> k) & 1 ? p.max[k] : p.min[k];
        double qc = (b >> k) & 1 ? q.max[k] : q.min[k];
        s += (pc - qc) * (pc - qc);
      }
      best = std::max(best, s);
    }
  return std::sqrt(best);
}

}  // namespace

TrajectoryFeatures precompute(const Trajectory& p, Instrumentation* instr) {
  TrajectoryFeatures f;
  f.bbox = box_of(p.coords(), p.dim());
  if (p.dim() == 2) {
    f.rotated_bboxes.push_back(rotated_box_2d(p, 22.5));
    f.rotated_bboxes.push_back(rotated_box_2d(p, 45.0));
  }
  f.reach = reach(p);
  double tol = std::max(1e-9 * f.reach, 1e-12);
  f.st_dist = segment_distance(p, p.front(), p.back(), tol);
  if (instr) ++instr->seg_calls;
  f.start.assign(p.front().begin(), p.front().end());
  f.end.assign(p.back().begin(), p.back().end());
  return f;
}

double lb_sev(const TrajectoryFeatures& p, const TrajectoryFeatures& q) {
  return std::max(dist(Point(p.start), Point(q.start)), dist(Point(p.end), Point(q.end)));
}

double lb_bb(const TrajectoryFeatures& p, const TrajectoryFeatures& q) {
  const int d = static_cast<int>(p.bbox.min.size());
  if (d > 3) {
    double best = 0;
    for (int k = 0; k < d; ++k) {
      best = std::max(best, std::abs(p.bbox.max[k] - q.bbox.max[k]));
      best = std::max(best, std::abs(p.bbox.min[k] - q.bbox.min[k]));
    }
    return best;
  }
  double best = edge_face_lb(p.bbox, q.bbox);
  if (d == 2 && !p.rotated_bboxes.empty() && !q.rotated_bboxes.empty())
    for (std::size_t r = 0; r < 2; ++r)
      best = std::max(best, edge_face_lb(p.rotated_bboxes[r], q.rotated_bboxes[r]));
  return best;
}

double lb_st(const TrajectoryFeatures& p, const TrajectoryFeatures& q) {
  double diff = std::max(p.st_dist.lo - q.st_dist.hi, q.st_dist.lo - p.st_dist.hi);
  return std::max(0.0, diff / 2.0);
}

double ub_bb(const TrajectoryFeatures& p, const TrajectoryFeatures& q) {
  const int d = static_cast<int>(p.bbox.min.size());
  if (d > 2) {
    double s = 0;
    for (int k = 0; k < d; ++k) {
      double span = std::max(p.bbox.max[k], q.bbox.max[k]) - std::min(p.bbox.min[k], q.bbox.min[k]);
      s += span * span;
    }
    return std::sqrt(s);
  }
  double best = corner_ub(p.bbox, q.bbox);
  if (d == 2 && !p.rotated_bboxes.empty() && !q.rotated_bboxes.empty())
    for (std::size_t r = 0; r < 2; ++r)
      best = std::min(best, corner_ub(p.rotated_bboxes[r], q.rotated_bboxes[r]));
  return best;
}

double ub_adf(const Trajectory& p, const Trajectory& q, AdfVariant variant) {
  if (p.dim() != q.dim()) throw DimensionMismatch();
  const std::size_t n = p.size(), m = q.size();
  if (variant == AdfVariant::Diagonal) {
    double best = dist(p.front(), q.front());
    if (n >= m) {
      for (std::size_t i = 1; i <= n; ++i) {
        std::size_t j = (m * i + n - 1) / n;  // ceil(m/n * i)
        best = std::max(best, dist(p.vertex(i - 1), q.vertex(std::max<std::size_t>(j, 1) - 1)));
      }
    } else {
      for (std::size_t j = 1; j <= m; ++j) {
        std::size_t i = (n * j + m - 1) / m;
        best = std::max(best, dist(p.vertex(std::max<std::size_t>(i, 1) - 1), q.vertex(j - 1)));
      }
    }
    return std::max(best, dist(p.back(), q.back()));
  }

  const bool fwd = variant == AdfVariant::Forward;
  auto pv = [&](std::size_t i) { return fwd ? p.vertex(i) : p.vertex(n - 1 - i); };
  auto qv = [&](std::size_t j) { return fwd ? q.vertex(j) : q.vertex(m - 1 - j); };
  std::size_t i = 0, j = 0;
  double best = dist(pv(0), qv(0));
  while (i + 1 < n || j + 1 < m) {
    double d_diag = (i + 1 < n && j + 1 < m) ? dist(pv(i + 1), qv(j + 1)) : -1;
    double d_p = i + 1 < n ? dist(pv(i + 1), qv(j)) : -1;
    double d_q = j + 1 < m ? dist(pv(i), qv(j + 1)) : -1;
    double mind = std::numeric_limits<double>::infinity();
    for (double c : {d_diag, d_p, d_q})
      if (c >= 0) mind = std::min(mind, c);
    // tie preference: diagonal first, then the longer-remaining trajectory
    if (d_diag == mind) {
      ++i;
      ++j;
    } else if (d_p == mind && d_q == mind) {
      if (n - i >= m - j)
        ++i;
      else
        ++j;
    } else if (d_p == mind) {
      ++i;
    } else {
      ++j;
    }
    best = std::max(best, mind);
  }
  return best;
}

namespace {

// One orientation of the race: P's vertices against Q's edges (with the
// degenerate first and last edges). True iff Q's edges run out first.
bool tr_one(const Trajectory& p, const Trajectory& q, double alpha) {
  const std::size_t n = p.size(), m = q.size();
  std::size_t i = 0, j = 0;  // j indexes edges 0..m (0 and m are degenerate)
  while (i < n) {
    if (j > m) return true;
    Point a, b;
    if (j == 0) {
      a = q.vertex(0);
      b = q.vertex(0);
    } else if (j == m) {
      a = q.vertex(m - 1);
      b = q.vertex(m - 1);
    } else {
      a = q.vertex(j - 1);
      b = q.vertex(j);
    }
    if (point_segment_dist(p.vertex(i), a, b) <= alpha)
      ++i;
    else
      ++j;
  }
  return false;
}

}  // namespace

bool lb_tr(const Trajectory& p, const Trajectory& q, double alpha) {
  if (p.dim() != q.dim()) throw DimensionMismatch();
  return tr_one(p, q, alpha) || tr_one(q, p, alpha);
}

double lb_group(const TrajectoryFeatures& p, const TrajectoryFeatures& q) {
  return std::max({lb_sev(p, q), lb_bb(p, q), lb_st(p, q)});
}

double ub_group(const Trajectory& p, const TrajectoryFeatures& fp, const Trajectory& q,
                const TrajectoryFeatures& fq) {
  return std::min({ub_bb(fp, fq), ub_adf(p, q, AdfVariant::Forward),
                   ub_adf(p, q, AdfVariant::Reverse), ub_adf(p, q, AdfVariant::Diagonal)});
}

BoundSession::BoundSession(const TrajectorySet& store,
                           const std::vector<TrajectoryFeatures>& features, Trajectory probe,
                           Instrumentation& instr)
    : store_(store),
      features_(features),
      probe_(std::move(probe)),
      probe_features_(precompute(probe_, &instr)),
      instr_(instr),
      cache_(store.size()) {}

double BoundSession::lb(std::size_t id) {
  Entry& e = cache_[id];
  if (e.exact) return *e.exact;
  if (!e.lb) {
    ++instr_.lb_calls;
    e.lb = lb_group(features_[id], probe_features_);
  }
  return *e.lb;
}

double BoundSession::ub(std::size_t id) {
  Entry& e = cache_[id];
  if (e.exact) return *e.exact;
  if (!e.ub) {
    ++instr_.ub_calls;
    e.ub = ub_group(store_[id], features_[id], probe_, probe_features_);
  }
  return *e.ub;
}

bool BoundSession::lbfd(std::size_t id, double alpha) {
  Entry& e = cache_[id];
  if (e.exact) return *e.exact > alpha;
  ++instr_.lbfd_calls;
  return lb_tr(store_[id], probe_, alpha);
}

bool BoundSession::dfd(std::size_t id, double eps) {
  Entry& e = cache_[id];
  if (e.exact) return *e.exact <= eps;
  instr_.count_dfd();
  return decide(store_[id], probe_, eps);
}

double BoundSession::df(std::size_t id) {
  Entry& e = cache_[id];
  if (!e.exact) {
    instr_.count_df();
    e.exact = distance_exact(store_[id], probe_);
  }
  return *e.exact;
}

BoundInterval BoundSession::interval(std::size_t id) {
  return BoundInterval{lb(id), ub(id)};
}

}  // namespace cct
