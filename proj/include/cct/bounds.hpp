#ifndef CCT_BOUNDS_HPP
#define CCT_BOUNDS_HPP

#include <optional>
#include <vector>

#include "cct/frechet.hpp"
#include "cct/geometry.hpp"
#include "cct/instrumentation.hpp"

namespace cct {

struct Bbox {
  std::vector<double> min, max;
};

/// Per-trajectory inputs for the bound suite. Rotated boxes are kept only
/// for d=2 (rotation plane is unique there); angles are 22.5 and 45 degrees
/// counter-clockwise about the origin.
struct TrajectoryFeatures {
  Bbox bbox;
  std::vector<Bbox> rotated_bboxes;  // d=2 only: 22.5deg, 45deg
  Interval st_dist;                  // delta_F(P, segment p1 pm)
  double reach = 0;
  std::vector<double> start, end;
};

TrajectoryFeatures precompute(const Trajectory& p, Instrumentation* instr = nullptr);

double lb_sev(const TrajectoryFeatures& p, const TrajectoryFeatures& q);
double lb_bb(const TrajectoryFeatures& p, const TrajectoryFeatures& q);
double lb_st(const TrajectoryFeatures& p, const TrajectoryFeatures& q);
double ub_bb(const TrajectoryFeatures& p, const TrajectoryFeatures& q);

enum class AdfVariant { Forward, Reverse, Diagonal };
double ub_adf(const Trajectory& p, const Trajectory& q, AdfVariant variant);

/// Traversal-race decision: true implies delta_F(P,Q) > alpha.
/// Runs both orientations and ORs the results.
bool lb_tr(const Trajectory& p, const Trajectory& q, double alpha);

double lb_group(const TrajectoryFeatures& p, const TrajectoryFeatures& q);
double ub_group(const Trajectory& p, const TrajectoryFeatures& fp, const Trajectory& q,
                const TrajectoryFeatures& fq);

struct BoundInterval {
  double lo = 0, hi = 0;
};

/// Memoized bound/distance evaluation of stored trajectories against one
/// fixed probe trajectory. Confined to a single query session or build;
/// every expensive call is tallied exactly once in the instrumentation.
class BoundSession {
 public:
  BoundSession(const TrajectorySet& store, const std::vector<TrajectoryFeatures>& features,
               Trajectory probe, Instrumentation& instr);

  const Trajectory& probe() const { return probe_; }
  const TrajectoryFeatures& probe_features() const { return probe_features_; }
  Instrumentation& instr() { return instr_; }

  double lb(std::size_t id);
  double ub(std::size_t id);
  bool lbfd(std::size_t id, double alpha);
  bool dfd(std::size_t id, double eps);
  double df(std::size_t id);
  bool df_known(std::size_t id) const { return cache_[id].exact.has_value(); }
  BoundInterval interval(std::size_t id);

 private:
  struct Entry {
    std::optional<double> lb, ub, exact;
  };
  const TrajectorySet& store_;
  const std::vector<TrajectoryFeatures>& features_;
  Trajectory probe_;
  TrajectoryFeatures probe_features_;
  Instrumentation& instr_;
  std::vector<Entry> cache_;
};

}  // namespace cct

#endif
