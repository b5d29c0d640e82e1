#ifndef CCT_INDEX_HPP
#define CCT_INDEX_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cct/bounds.hpp"
#include "cct/geometry.hpp"
#include "cct/instrumentation.hpp"

namespace cct {

struct EmptySet : Error {
  EmptySet() : Error("empty trajectory set") {}
};

struct CCTNode {
  int center = -1;  // index into the stored trajectory set
  double radius = 0;
  bool radius_is_ub = false;
  int parent = -1;
  std::vector<int> children;
  bool leaf() const { return children.empty(); }
};

/// Cluster Center Tree. Nesting: every internal node has >= 2 children and
/// one child shares its center. Bounding: delta_F(C(u), C(v)) <= rad(v) for
/// every descendant u of v.
class CCTIndex {
 public:
  const TrajectorySet& store() const { return store_; }
  const std::vector<TrajectoryFeatures>& features() const { return features_; }
  const std::vector<CCTNode>& nodes() const { return nodes_; }
  int root() const { return root_; }
  bool empty() const { return root_ < 0; }
  int leaf_of(std::size_t traj) const { return leaf_of_[traj]; }
  const Instrumentation& build_stats() const { return build_stats_; }
  const std::string& variant() const { return variant_; }
  std::uint64_t seed() const { return seed_; }
  const std::vector<double>& pick_dists() const { return pick_dists_; }

  std::size_t leaf_count() const;
  int depth_of(int node) const;

  /// Structural verification: Nesting, parent/child consistency, one leaf
  /// per stored trajectory. Throws Error on violation.
  void check_structure() const;

  friend class IndexBuilder;
  friend CCTIndex load_index(const std::string&);

 private:
  TrajectorySet store_;
  std::vector<TrajectoryFeatures> features_;
  std::vector<CCTNode> nodes_;
  int root_ = -1;
  std::vector<int> leaf_of_;
  Instrumentation build_stats_;
  std::string variant_ = "empty";
  std::uint64_t seed_ = 0;
  std::vector<double> pick_dists_;
};

CCTIndex build_exact(TrajectorySet s, std::uint64_t seed);
CCTIndex build_relaxed(TrajectorySet s, std::uint64_t seed);
CCTIndex build_approx(TrajectorySet s, std::uint64_t seed);

/// Dynamic inserts. Exact locates the leaf by an exact NN query and fixes
/// ancestor radii with distance calls as needed; approx uses the implicit
/// approximate NN query and UB-only radius fixes; standard descends to the
/// child with the smallest LB_F and then proceeds like approx.
void insert_exact(CCTIndex& idx, Trajectory p);
void insert_approx(CCTIndex& idx, Trajectory p);
void insert_standard(CCTIndex& idx, Trajectory p);

/// Pairwise bound/distance evaluation over one stored set with memoization,
/// used by constructions and the bisector predicate.
class PairCache {
 public:
  PairCache(const TrajectorySet& store, const std::vector<TrajectoryFeatures>& features,
            Instrumentation& instr)
      : store_(store), features_(features), instr_(instr) {}

  double lb(std::size_t a, std::size_t b);
  double ub(std::size_t a, std::size_t b);
  bool lbfd(std::size_t a, std::size_t b, double alpha);
  bool dfd(std::size_t a, std::size_t b, double eps);
  double df(std::size_t a, std::size_t b);
  bool df_known(std::size_t a, std::size_t b) const;
  Instrumentation& instr() { return instr_; }

 private:
  struct Entry {
    std::optional<double> lb, ub, exact;
  };
  Entry& at(std::size_t a, std::size_t b);
  const Entry* find(std::size_t a, std::size_t b) const;
  const TrajectorySet& store_;
  const std::vector<TrajectoryFeatures>& features_;
  Instrumentation& instr_;
  std::map<std::pair<std::size_t, std::size_t>, Entry> cache_;
};

/// Ten-test bisector localization: is trajectory p closer to c1 or c2?
/// Returns 1 or 2. Test 5 (the rad(C1)/2 shortcut) runs only in the relaxed
/// context, where c2 is the furthest member of c1's cluster and rad_c1 its
/// distance.
int bisector_localize(PairCache& cache, std::size_t p, std::size_t c1, std::size_t c2,
                      bool relaxed, double rad_c1);

enum class RadiusMode { Exact, UbOnly };
void fix_ancestor_radius(CCTIndex& idx, int leaf, RadiusMode mode, PairCache& cache);

struct QualityReport {
  double avg_leaf_depth_normalized = 0;
  double compactness = 1;
  double overlap = 1;  // covering nodes / leaf depth; 1.0 is minimal
  std::size_t overlap_undecided = 0;
  double ub_radius_fraction = 0;
  std::map<double, std::size_t> radius_histogram;
};

QualityReport quality(const CCTIndex& idx, bool use_oracle, std::size_t oracle_cap = 5000);

/// CSV (node_id,parent_id,center_id,radius,depth,leaf_count) plus DOT.
void export_dendrogram(const CCTIndex& idx, const std::string& csv_path,
                       const std::string& dot_path);

void save_index(const CCTIndex& idx, const std::string& path, const std::string& trajectory_file);
CCTIndex load_index(const std::string& path);

}  // namespace cct

#endif
