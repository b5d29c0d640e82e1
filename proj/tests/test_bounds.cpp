#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "cct/bounds.hpp"
#include "helpers.hpp"

using namespace cct;

namespace {

Trajectory translated(const Trajectory& t, const std::vector<double>& off) {
  std::vector<double> c = t.coords();
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += off[i % off.size()];
  return Trajectory(t.id() + "_t", t.dim(), std::move(c));
}

}  // namespace

TEST_CASE("all bounds bracket the exact distance on random pairs") {
  for (int d : {2, 3, 8}) {
    cct::Rng rng(100 + d);
    for (int it = 0; it < 120; ++it) {
      Trajectory p = th::random_walk("p", d, 2 + rng.uniform_int(9), rng);
      Trajectory q = th::random_walk("q", d, 2 + rng.uniform_int(9), rng);
      TrajectoryFeatures fp = precompute(p), fq = precompute(q);
      double truth = th::oracle_dist(p, q);
      CHECK(lb_sev(fp, fq) <= truth + 1e-8);
      CHECK(lb_bb(fp, fq) <= truth + 1e-8);
      CHECK(lb_st(fp, fq) <= truth + 1e-8);
      CHECK(lb_group(fp, fq) <= truth + 1e-8);
      CHECK(ub_bb(fp, fq) >= truth - 1e-8);
      for (auto v : {AdfVariant::Forward, AdfVariant::Reverse, AdfVariant::Diagonal})
        CHECK(ub_adf(p, q, v) >= truth - 1e-8);
      CHECK(ub_group(p, fp, q, fq) >= truth - 1e-8);
    }
  }
}

TEST_CASE("traversal race true implies the decision is false") {
  cct::Rng rng(211);
  int fired = 0;
  for (int it = 0; it < 300; ++it) {
    Trajectory p = th::random_walk("p", 2, 2 + rng.uniform_int(8), rng);
    Trajectory q = th::random_walk("q", 2, 2 + rng.uniform_int(8), rng);
    double alpha = rng.uniform(0.0, 3.0);
    if (lb_tr(p, q, alpha)) {
      ++fired;
      CHECK(!decide(p, q, alpha));
    }
  }
  CHECK(fired > 10);  // the predicate actually fires on this distribution
}

TEST_CASE("translated copies have computable distance and tight sev bound") {
  cct::Rng rng(223);
  for (int it = 0; it < 30; ++it) {
    Trajectory p = th::random_walk("p", 2, 3 + rng.uniform_int(6), rng);
    std::vector<double> off{rng.uniform(-2, 2), rng.uniform(-2, 2)};
    Trajectory q = translated(p, off);
    double t = std::sqrt(off[0] * off[0] + off[1] * off[1]);
    TrajectoryFeatures fp = precompute(p), fq = precompute(q);
    CHECK(lb_sev(fp, fq) == doctest::Approx(t));
    CHECK(lb_group(fp, fq) <= t + 1e-9);
    CHECK(ub_group(p, fp, q, fq) >= t - 1e-9);
  }
}

TEST_CASE("identical trajectories collapse the bound interval") {
  Trajectory p("p", 2, {0, 0, 1, 0.5, 2, 0});
  TrajectoryFeatures f = precompute(p);
  CHECK(lb_group(f, f) == 0);
  CHECK(ub_adf(p, p, AdfVariant::Diagonal) == 0);
  CHECK(ub_group(p, f, p, f) == 0);
}

TEST_CASE("precomputed segment interval is certified and narrow") {
  cct::Rng rng(227);
  for (int it = 0; it < 40; ++it) {
    Trajectory p = th::random_walk("p", 2, 3 + rng.uniform_int(10), rng);
    TrajectoryFeatures f = precompute(p);
    Trajectory seg = make_segment(p.front(), p.back());
    double truth = th::oracle_dist(p, seg, 1e-11);
    CHECK(f.st_dist.lo <= truth + 1e-9);
    CHECK(f.st_dist.hi >= truth - 1e-9);
    double tol = std::max(1e-9 * f.reach, 1e-12);
    CHECK(f.st_dist.width() <= tol + 1e-12);
  }
}

TEST_CASE("rotated boxes exist only in two dimensions") {
  cct::Rng rng(229);
  Trajectory p2 = th::random_walk("p", 2, 5, rng);
  Trajectory p3 = th::random_walk("p", 3, 5, rng);
  CHECK(precompute(p2).rotated_bboxes.size() == 2);
  CHECK(precompute(p3).rotated_bboxes.empty());
}

TEST_CASE("rotation never loosens the box upper bound") {
  // diagonal segments: the rotated boxes hug the segments, so taking the min
  // over orientations can only help
  Trajectory a("a", 2, {0, 0, 5, 5});
  Trajectory b("b", 2, {0.5, 0.5, 5.5, 5.5});
  TrajectoryFeatures fa = precompute(a), fb = precompute(b);
  double truth = th::oracle_dist(a, b);
  double ub = ub_bb(fa, fb);
  CHECK(ub >= truth - 1e-9);
  Bbox ja = fa.bbox, jb = fb.bbox;  // axis-only corner bound for comparison
  double axis_only = 0;
  for (int ca = 0; ca < 4; ++ca)
    for (int cb = 0; cb < 4; ++cb) {
      double x = ((ca & 1) ? ja.max[0] : ja.min[0]) - ((cb & 1) ? jb.max[0] : jb.min[0]);
      double y = ((ca & 2) ? ja.max[1] : ja.min[1]) - ((cb & 2) ? jb.max[1] : jb.min[1]);
      axis_only = std::max(axis_only, std::hypot(x, y));
    }
  CHECK(ub <= axis_only);
}

TEST_CASE("bound session memoizes per trajectory") {
  cct::Rng rng(233);
  TrajectorySet s = th::random_set(6, 2, rng);
  std::vector<TrajectoryFeatures> feats;
  for (const Trajectory& t : s.items()) feats.push_back(precompute(t));
  Instrumentation instr;
  BoundSession session(s, feats, th::random_walk("q", 2, 6, rng), instr);
  session.lb(0);
  session.lb(0);
  session.ub(0);
  session.ub(0);
  CHECK(instr.lb_calls == 1);
  CHECK(instr.ub_calls == 1);
  CHECK(instr.seg_calls == 1);  // probe feature precompute
  session.df(0);
  CHECK(instr.df_calls == 1);
  // exact value answers subsequent predicate calls without new dispatches
  std::int64_t dfd_before = instr.dfd_calls, lbfd_before = instr.lbfd_calls;
  session.dfd(0, 1.0);
  session.lbfd(0, 1.0);
  CHECK(instr.dfd_calls == dfd_before);
  CHECK(instr.lbfd_calls == lbfd_before);
}

TEST_CASE("high-dimensional fallbacks stay sound") {
  cct::Rng rng(239);
  for (int it = 0; it < 40; ++it) {
    Trajectory p = th::random_walk("p", 8, 2 + rng.uniform_int(5), rng);
    Trajectory q = th::random_walk("q", 8, 2 + rng.uniform_int(5), rng);
    TrajectoryFeatures fp = precompute(p), fq = precompute(q);
    double truth = th::oracle_dist(p, q);
    CHECK(lb_bb(fp, fq) <= truth + 1e-8);
    CHECK(ub_bb(fp, fq) >= truth - 1e-8);
  }
}
