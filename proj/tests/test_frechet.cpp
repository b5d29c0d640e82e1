#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "helpers.hpp"

using namespace cct;

TEST_CASE("decide handles hand-computable cases") {
  Trajectory a("a", 2, {0, 0, 10, 0});
  Trajectory b("b", 2, {0, 1, 10, 1});
  CHECK(decide(a, b, 1.0));        // exact distance, non-strict
  CHECK(!decide(a, b, 0.999999));
  CHECK(decide(a, a, 0.0));

  Trajectory v0 = th::vertical("v0", 0), v4 = th::vertical("v4", 4);
  CHECK(decide(v0, v4, 4.0));
  CHECK(!decide(v0, v4, 3.999));
}

TEST_CASE("decide requires matching endpoints") {
  // zigzag against its own spine: the leash must pay half the dip
  Trajectory zig("z", 1, {0, 1, 0, 1});
  Trajectory seg("s", 1, {0, 1});
  CHECK(decide(zig, seg, 0.5));
  CHECK(!decide(zig, seg, 0.49));
}

TEST_CASE("decide is monotone in eps") {
  cct::Rng rng(11);
  for (int it = 0; it < 50; ++it) {
    Trajectory p = th::random_walk("p", 2, 2 + rng.uniform_int(8), rng);
    Trajectory q = th::random_walk("q", 2, 2 + rng.uniform_int(8), rng);
    double d = distance_exact(p, q);
    CHECK(decide(p, q, d));
    CHECK(decide(p, q, d * 1.1 + 0.01));
    if (d > 1e-9) CHECK(!decide(p, q, d * 0.9));
  }
}

TEST_CASE("discrete frechet upper-bounds the continuous distance") {
  cct::Rng rng(13);
  for (int it = 0; it < 100; ++it) {
    Trajectory p = th::random_walk("p", 3, 2 + rng.uniform_int(8), rng);
    Trajectory q = th::random_walk("q", 3, 2 + rng.uniform_int(8), rng);
    double cont = th::oracle_dist(p, q);
    double disc = discrete_frechet(p, q);
    CHECK(disc >= cont - 1e-9);
    double endpoints = std::max(dist(p.front(), q.front()), dist(p.back(), q.back()));
    CHECK(endpoints <= cont + 1e-9);
  }
}

TEST_CASE("critical values agree with bisection") {
  cct::Rng rng(17);
  for (int it = 0; it < 200; ++it) {
    Trajectory p = th::random_walk("p", 2, 2 + rng.uniform_int(10), rng);
    Trajectory q = th::random_walk("q", 2, 2 + rng.uniform_int(10), rng);
    double c = distance_exact(p, q, ExactMode::critical());
    double b = distance_exact(p, q, ExactMode::bisection(1e-10));
    CHECK(std::abs(c - b) <= 1e-8);
    CHECK(decide(p, q, c));
  }
}

TEST_CASE("triangle inequality holds with tolerance slack") {
  cct::Rng rng(19);
  for (int it = 0; it < 100; ++it) {
    Trajectory a = th::random_walk("a", 2, 2 + rng.uniform_int(6), rng);
    Trajectory b = th::random_walk("b", 2, 2 + rng.uniform_int(6), rng);
    Trajectory c = th::random_walk("c", 2, 2 + rng.uniform_int(6), rng);
    double ab = distance_exact(a, b), bc = distance_exact(b, c), ac = distance_exact(a, c);
    CHECK(ac <= ab + bc + 3e-9);
  }
}

TEST_CASE("segment distance between two segments is the endpoint maximum") {
  cct::Rng rng(23);
  for (int it = 0; it < 1000; ++it) {
    int d = 2 + static_cast<int>(rng.uniform_int(2));
    std::vector<double> c1, c2;
    for (int k = 0; k < 2 * d; ++k) c1.push_back(rng.uniform(-5, 5));
    for (int k = 0; k < 2 * d; ++k) c2.push_back(rng.uniform(-5, 5));
    Trajectory s1 = ingest("s1", d, c1);
    Trajectory s2 = ingest("s2", d, c2);
    double expect = std::max(dist(s1.front(), s2.front()), dist(s1.back(), s2.back()));
    Interval got = segment_distance(s1, s2.front(), s2.back(), 1e-10);
    CHECK(got.lo <= expect + 1e-9);
    CHECK(got.hi >= expect - 1e-9);
    CHECK(got.width() <= 1e-10 + 1e-12);
  }
}

TEST_CASE("segment distance degenerate target is the max vertex distance") {
  Trajectory p("p", 2, {0, 0, 3, 4, 1, 1});
  std::vector<double> pt{0.0, 0.0};
  Interval got = segment_distance(p, Point(pt), Point(pt), 1e-9);
  CHECK(got.lo == got.hi);
  CHECK(got.lo == doctest::Approx(5.0));
}

TEST_CASE("segment distance interval brackets the oracle") {
  cct::Rng rng(29);
  for (int it = 0; it < 100; ++it) {
    Trajectory p = th::random_walk("p", 2, 3 + rng.uniform_int(8), rng);
    std::vector<double> a{rng.uniform(-2, 2), rng.uniform(-2, 2)};
    std::vector<double> b{rng.uniform(-2, 2), rng.uniform(-2, 2)};
    Trajectory seg = make_segment(Point(a), Point(b));
    double truth = th::oracle_dist(p, seg, 1e-11);
    Interval got = segment_distance(p, Point(a), Point(b), 1e-6);
    CHECK(got.lo <= truth + 1e-9);
    CHECK(got.hi >= truth - 1e-9);
    CHECK(got.width() <= 1e-6 + 1e-12);
  }
}

TEST_CASE("simplify respects the error budget and keeps endpoints") {
  cct::Rng rng(31);
  for (int it = 0; it < 40; ++it) {
    Trajectory p = th::random_walk("p", 2, 5 + rng.uniform_int(25), rng);
    double eps = 0.02 * reach(p);
    Trajectory s = simplify(p, eps);
    CHECK(s.size() <= p.size());
    CHECK(dist(s.front(), p.front()) == 0);
    CHECK(dist(s.back(), p.back()) == 0);
    CHECK(th::oracle_dist(p, s) <= eps + 1e-9);
  }
}

TEST_CASE("simplify flattens a near-straight chain") {
  Trajectory p("p", 2, {0, 0, 1, 0.001, 2, -0.001, 3, 0.0005, 4, 0});
  Trajectory s = simplify(p, 0.1);
  CHECK(s.size() == 2);
}

TEST_CASE("auto mode switches kernels consistently") {
  cct::Rng rng(37);
  Trajectory p = th::random_walk("p", 2, 120, rng);
  Trajectory q = th::random_walk("q", 2, 120, rng);  // n*m > 10^4: bisection path
  double d_auto = distance_exact(p, q);
  double d_bis = distance_exact(p, q, ExactMode::bisection(1e-9));
  CHECK(std::abs(d_auto - d_bis) <= 1e-5 * std::max(1.0, d_bis));
  CHECK(decide(p, q, d_auto));
}
