#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "cct/datagen.hpp"
#include "cct/frechet.hpp"
#include "helpers.hpp"

using namespace cct;

namespace {

SyntheticConfig small_config() {
  SyntheticConfig cfg;
  cfg.total = 540;  // 40 clustered + 500 noise
  cfg.cluster_size = 4;
  cfg.avg_size = 15;
  cfg.seed = 77;
  return cfg;
}

}  // namespace

TEST_CASE("synthetic sets have the configured size and composition") {
  SyntheticConfig cfg = small_config();
  SyntheticOutput out = gen_synthetic(cfg);
  CHECK(out.set.size() == 540);

  std::size_t clustered = 0, noise = 0;
  for (const Trajectory& t : out.set.items()) {
    if (t.id().front() == 'c')
      ++clustered;
    else if (t.id().front() == 'z')
      ++noise;
  }
  CHECK(clustered == 40);
  CHECK(noise == 500);

  // pool drawn from the clustered part only, sorted and unique
  CHECK(out.query_pool.size() == 40);
  CHECK(std::is_sorted(out.query_pool.begin(), out.query_pool.end()));
  std::set<std::string> uniq(out.query_pool.begin(), out.query_pool.end());
  CHECK(uniq.size() == out.query_pool.size());
  for (const std::string& id : out.query_pool) {
    CHECK(id.front() == 'c');
    CHECK_NOTHROW(out.set.index_of(id));
  }
}

TEST_CASE("vertex counts stay within half to one-and-a-half of the average") {
  SyntheticOutput out = gen_synthetic(small_config());
  for (const Trajectory& t : out.set.items()) {
    CHECK(t.size() >= 8);   // ceil(15/2)
    CHECK(t.size() <= 22);  // floor(3*15/2)
  }
}

TEST_CASE("cluster size one produces only unique trajectories") {
  SyntheticConfig cfg = small_config();
  cfg.cluster_size = 1;
  SyntheticOutput out = gen_synthetic(cfg);
  CHECK(out.set.size() == 540);
  for (const Trajectory& t : out.set.items())
    if (t.id().front() == 'c') CHECK(t.id().substr(t.id().size() - 3) == "_00");
}

TEST_CASE("cluster members stay close to their originals") {
  SyntheticConfig cfg = small_config();
  SyntheticOutput out = gen_synthetic(cfg);
  // per-coordinate vertex jitter plus translation, each up to max_edge
  double bound = 2 * cfg.max_edge * std::sqrt(static_cast<double>(cfg.d));
  for (std::size_t u = 0; u < 10; ++u) {
    char orig_id[32];
    std::snprintf(orig_id, sizeof orig_id, "c%06zu_00", u);
    const Trajectory& orig = out.set[out.set.index_of(orig_id)];
    for (int c = 1; c < cfg.cluster_size; ++c) {
      char copy_id[32];
      std::snprintf(copy_id, sizeof copy_id, "c%06zu_%02d", u, c);
      const Trajectory& copy = out.set[out.set.index_of(copy_id)];
      CHECK(th::oracle_dist(orig, copy) <= bound + 1e-9);
    }
  }
}

TEST_CASE("perturbation queries stay within the documented radius of a member") {
  cct::Rng rng(503);
  TrajectorySet s = th::random_set(5, 2, rng);
  std::vector<Trajectory> qs = gen_queries_perturb(s, 12, 9);
  CHECK(qs.size() == 12);
  for (const Trajectory& q : qs) {
    double best = std::numeric_limits<double>::infinity();
    for (const Trajectory& m : s.items()) {
      double limit = 0.08 * reach(m) * std::sqrt(2.0);
      best = std::min(best, th::oracle_dist(q, m) - limit);
    }
    CHECK(best <= 1e-9);
  }
}

TEST_CASE("an explicit pool restricts the query sources") {
  cct::Rng rng(509);
  TrajectorySet s = th::random_set(6, 2, rng);
  std::vector<std::string> pool{"t0002"};
  std::vector<Trajectory> qs = gen_queries_perturb(s, 8, 9, &pool);
  const Trajectory& src = s[s.index_of("t0002")];
  double limit = 0.08 * reach(src) * std::sqrt(2.0) + 1e-9;
  for (const Trajectory& q : qs) CHECK(th::oracle_dist(q, src) <= limit);
}

TEST_CASE("fixed-result queries return exactly the requested count") {
  cct::Rng rng(521);
  TrajectorySet s = th::random_set(12, 2, rng);
  std::vector<FixedResultQuery> qs = gen_queries_fixed_result(s, 5, 4, 9);
  REQUIRE(qs.size() == 5);
  for (const FixedResultQuery& fq : qs) {
    std::size_t within = 0;
    for (const Trajectory& m : s.items())
      if (th::oracle_dist(fq.q, m) <= fq.tau) ++within;
    CHECK(within == 4);
  }
  CHECK_THROWS_AS(gen_queries_fixed_result(s, 1, 12, 9), ConfigInvalid);
}

TEST_CASE("generation is deterministic for a fixed seed") {
  SyntheticConfig cfg = small_config();
  SyntheticOutput a = gen_synthetic(cfg);
  SyntheticOutput b = gen_synthetic(cfg);
  REQUIRE(a.set.size() == b.set.size());
  for (std::size_t i = 0; i < a.set.size(); ++i) {
    CHECK(a.set[i].id() == b.set[i].id());
    CHECK(a.set[i].coords() == b.set[i].coords());
  }
  CHECK(a.query_pool == b.query_pool);

  cct::Rng rng(523);
  TrajectorySet s = th::random_set(5, 2, rng);
  std::vector<Trajectory> q1 = gen_queries_perturb(s, 6, 31);
  std::vector<Trajectory> q2 = gen_queries_perturb(s, 6, 31);
  for (std::size_t i = 0; i < q1.size(); ++i) CHECK(q1[i].coords() == q2[i].coords());
}

TEST_CASE("invalid configurations are rejected") {
  SyntheticConfig cfg = small_config();
  cfg.cluster_size = 0;
  CHECK_THROWS_AS(gen_synthetic(cfg), ConfigInvalid);
  cfg = small_config();
  cfg.straightness = 1.0;
  CHECK_THROWS_AS(gen_synthetic(cfg), ConfigInvalid);
  cfg = small_config();
  cfg.max_edge = 0;
  CHECK_THROWS_AS(gen_synthetic(cfg), ConfigInvalid);
  cfg = small_config();
  cfg.avg_size = 1;
  CHECK_THROWS_AS(gen_synthetic(cfg), ConfigInvalid);
  cfg = small_config();
  cfg.total = 500;
  CHECK_THROWS_AS(gen_synthetic(cfg), ConfigInvalid);
  cfg = small_config();
  cfg.d = 0;
  CHECK_THROWS_AS(gen_synthetic(cfg), ConfigInvalid);

  CHECK_THROWS_AS(gen_queries_perturb(TrajectorySet{}, 1, 0), EmptyInput);
}
