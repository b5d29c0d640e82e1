#ifndef CCT_DATAGEN_HPP
#define CCT_DATAGEN_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "cct/geometry.hpp"

namespace cct {

struct ConfigInvalid : Error {
  using Error::Error;
};
struct TieExhaustion : Error {
  TieExhaustion() : Error("could not find a tie-free tau after 100 redraws") {}
};

/// Random-walk generator configuration. The walk is
/// p_i = max_edge * sigma + p_{i-1} + straightness * (p_{i-1} - p_{i-2}),
/// sigma uniform in [0,1]^d, and each unique trajectory is expanded into
/// `cluster_size` perturbed members.
struct SyntheticConfig {
  int cluster_size = 10;    // alpha_CS
  double straightness = 0.95;  // alpha_SF
  double max_edge = 0.6;    // alpha_ED
  int avg_size = 15;        // n; vertex counts drawn from [n/2, 3n/2]
  int total = 5000;         // |S|, including the 500 noise trajectories
  int d = 2;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SyntheticOutput {
  TrajectorySet set;
  std::vector<std::string> query_pool;  // sampled from the clustered part
};

SyntheticOutput gen_synthetic(const SyntheticConfig& cfg);

/// Method-one queries: a member is drawn uniformly (from pool_ids when given,
/// otherwise from all of S), its vertices perturbed per coordinate up to
/// 0.03*reach and the whole curve translated up to 0.05*reach.
std::vector<Trajectory> gen_queries_perturb(const TrajectorySet& s, std::size_t count,
                                            std::uint64_t seed,
                                            const std::vector<std::string>* pool_ids = nullptr);

struct FixedResultQuery {
  Trajectory q;
  double tau;
};

/// Method-two queries: tau is placed strictly between the result_size-th and
/// the next smallest exact distance, so a range query returns exactly
/// result_size trajectories.
std::vector<FixedResultQuery> gen_queries_fixed_result(const TrajectorySet& s, std::size_t count,
                                                       std::size_t result_size, std::uint64_t seed,
                                                       std::size_t oracle_cap = 100000);

}  // namespace cct

#endif
