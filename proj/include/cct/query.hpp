#ifndef CCT_QUERY_HPP
#define CCT_QUERY_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "cct/index.hpp"

namespace cct {

struct EmptyIndex : Error {
  EmptyIndex() : Error("query on empty index") {}
};
struct KTooLarge : Error {
  KTooLarge() : Error("k exceeds the number of stored trajectories") {}
};

struct QuerySpec {
  enum Kind { Knn, Nn, Rnn } kind = Nn;
  int k = 1;
  double tau = 0;
  enum ErrorModel { Additive, Relative, Implicit } error_model = Additive;
  double e_add = 0;
  double e_rel = 0;
  double kappa = 1.25;
  std::uint64_t seed = 0;
};

struct QueryResult {
  std::vector<std::size_t> ids;  // store indices
  std::optional<double> reported_eadd, reported_erel;  // implicit queries
  bool zero_denominator = false;
  Instrumentation instr;
};

QueryResult query_knn(const CCTIndex& idx, const Trajectory& q, const QuerySpec& spec);
QueryResult query_nn(const CCTIndex& idx, const Trajectory& q, const QuerySpec& spec);
QueryResult query_rnn(const CCTIndex& idx, const Trajectory& q, const QuerySpec& spec);

/// Implicit-approximate variant (no distance or decision calls); dispatches
/// on spec.kind and reports the achieved error.
QueryResult query_implicit(const CCTIndex& idx, const Trajectory& q, const QuerySpec& spec);

/// Dispatch on spec.kind/error_model.
QueryResult run_query(const CCTIndex& idx, const Trajectory& q, const QuerySpec& spec);

/// Improved linear scan: exact NN without the tree.
QueryResult linear_scan_nn(const TrajectorySet& s, const std::vector<TrajectoryFeatures>& features,
                           const Trajectory& q);

struct BruteResult {
  std::vector<std::size_t> ids;
  std::vector<double> dists;  // ascending, aligned with ids for knn/nn
};

/// Test oracle: exact distances to every member, no bounds.
BruteResult brute_force(const TrajectorySet& s, const Trajectory& q, const QuerySpec& spec,
                        std::size_t cap = 100000);

}  // namespace cct

#endif
