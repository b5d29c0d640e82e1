#include "cct/datagen.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>

#include "cct/frechet.hpp"
#include "cct/rng.hpp"

namespace cct {
namespace {

std::string padded(const char* prefix, std::size_t i, const char* suffix = "") {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%06zu%s", prefix, i, suffix);
  return buf;
}

Trajectory walk(const std::string& id, const SyntheticConfig& cfg, Rng& rng) {
  std::size_t lo = std::max<std::size_t>(2, (cfg.avg_size + 1) / 2);
  std::size_t hi = std::max<std::size_t>(lo, 3 * static_cast<std::size_t>(cfg.avg_size) / 2);
  std::size_t z = rng.uniform_int(lo, hi);
  const int d = cfg.d;
  std::vector<double> coords;
  coords.reserve(z * d);
  for (int k = 0; k < d; ++k) coords.push_back(rng.uniform());
  for (std::size_t i = 1; i < z; ++i) {
    for (int k = 0; k < d; ++k) {
      double prev = coords[(i - 1) * d + k];
      double prev2 = i >= 2 ? coords[(i - 2) * d + k] : prev;  // no momentum yet
      double sigma = rng.uniform();
      coords.push_back(cfg.max_edge * sigma + prev + cfg.straightness * (prev - prev2));
    }
  }
  return ingest(id, d, coords);
}

Trajectory perturbed_copy(const Trajectory& p, const std::string& id, double vertex_mag,
                          double translate_mag, Rng& rng) {
  const int d = p.dim();
  std::vector<double> t(d);
  for (int k = 0; k < d; ++k) t[k] = rng.uniform(-translate_mag, translate_mag);
  std::vector<double> coords;
  coords.reserve(p.coords().size());
  for (std::size_t i = 0; i < p.size(); ++i)
    for (int k = 0; k < d; ++k)
      coords.push_back(p.vertex(i)[k] + rng.uniform(-vertex_mag, vertex_mag) + t[k]);
  return ingest(id, d, coords);
}

}  // namespace

void SyntheticConfig::validate() const {
  if (cluster_size < 1) throw ConfigInvalid("cluster_size must be >= 1");
  if (!(straightness >= 0 && straightness < 1))
    throw ConfigInvalid("straightness must be in [0,1)");
  if (!(max_edge > 0)) throw ConfigInvalid("max_edge must be > 0");
  if (avg_size < 2) throw ConfigInvalid("avg_size must be >= 2");
  if (total <= 500) throw ConfigInvalid("total must exceed the 500 noise trajectories");
  if (d < 1) throw ConfigInvalid("d must be >= 1");
}

SyntheticOutput gen_synthetic(const SyntheticConfig& cfg) {
  cfg.validate();
  SyntheticOutput out;
  const std::size_t clustered_budget = cfg.total - 500;
  const std::size_t uniques = clustered_budget / cfg.cluster_size;
  const std::size_t remainder = clustered_budget % cfg.cluster_size;

  std::uint64_t counter = 0;
  std::vector<std::string> clustered_ids;
  for (std::size_t u = 0; u < uniques + remainder; ++u) {
    Rng rng(Rng::derive(cfg.seed, counter++));
    Trajectory orig = walk(padded("c", u, "_00"), cfg, rng);
    clustered_ids.push_back(orig.id());
    const std::size_t copies = u < uniques ? cfg.cluster_size - 1 : 0;
    for (std::size_t c = 1; c <= copies; ++c) {
      char suffix[8];
      std::snprintf(suffix, sizeof(suffix), "_%02zu", c);
      Rng crng(Rng::derive(cfg.seed, counter++));
      Trajectory copy =
          perturbed_copy(orig, padded("c", u, suffix), cfg.max_edge, cfg.max_edge, crng);
      clustered_ids.push_back(copy.id());
      out.set.add(std::move(copy));
    }
    out.set.add(std::move(orig));
  }

  // query pool: sampled from the clustered part, before noise is added
  {
    Rng rng(Rng::derive(cfg.seed, 0x706f6f6cull));
    std::vector<std::string> ids = clustered_ids;
    std::sort(ids.begin(), ids.end());
    std::size_t want = std::min<std::size_t>(1000, ids.size());
    for (std::size_t i = 0; i < want; ++i)
      std::swap(ids[i], ids[i + rng.uniform_int(ids.size() - i)]);
    ids.resize(want);
    std::sort(ids.begin(), ids.end());
    out.query_pool = std::move(ids);
  }

  for (std::size_t i = 0; i < 500; ++i) {
    Rng rng(Rng::derive(cfg.seed, counter++));
    out.set.add(walk(padded("z", i), cfg, rng));
  }
  return out;
}

std::vector<Trajectory> gen_queries_perturb(const TrajectorySet& s, std::size_t count,
                                            std::uint64_t seed,
                                            const std::vector<std::string>* pool_ids) {
  if (s.empty()) throw EmptyInput();
  std::vector<Trajectory> out;
  Rng rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    const Trajectory& src =
        pool_ids ? s[s.index_of((*pool_ids)[rng.uniform_int(pool_ids->size())])]
                 : s[rng.uniform_int(s.size())];
    double r = reach(src);
    out.push_back(perturbed_copy(src, padded("q", i), 0.03 * r, 0.05 * r, rng));
  }
  return out;
}

std::vector<FixedResultQuery> gen_queries_fixed_result(const TrajectorySet& s, std::size_t count,
                                                       std::size_t result_size, std::uint64_t seed,
                                                       std::size_t oracle_cap) {
  if (s.empty()) throw EmptyInput();
  if (const char* env = std::getenv("CCT_ORACLE_CAP")) oracle_cap = std::strtoull(env, nullptr, 10);
  if (s.size() > oracle_cap) throw OracleCapExceeded();
  if (result_size >= s.size()) throw ConfigInvalid("result_size must be smaller than |S|");

  std::vector<FixedResultQuery> out;
  Rng rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    bool done = false;
    for (int attempt = 0; attempt < 100 && !done; ++attempt) {
      const Trajectory& src = s[rng.uniform_int(s.size())];
      double r = reach(src);
      Trajectory q = perturbed_copy(src, padded("q", i), 0.03 * r, 0.05 * r, rng);
      std::vector<double> dists;
      dists.reserve(s.size());
      for (std::size_t j = 0; j < s.size(); ++j) dists.push_back(distance_exact(s[j], q));
      std::nth_element(dists.begin(), dists.begin() + result_size, dists.end());
      double next = dists[result_size];
      double at = *std::max_element(dists.begin(), dists.begin() + result_size);
      if (next > at) {
        out.push_back({std::move(q), (at + next) / 2});
        done = true;
      }
    }
    if (!done) throw TieExhaustion();
  }
  return out;
}

}  // namespace cct
