#ifndef CCT_GEOMETRY_HPP
#define CCT_GEOMETRY_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace cct {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EmptyInput : Error {
  EmptyInput() : Error("empty input") {}
};
struct DegenerateTrajectory : Error {
  DegenerateTrajectory() : Error("trajectory has fewer than 2 distinct vertices") {}
};
struct DimensionMismatch : Error {
  DimensionMismatch() : Error("dimension mismatch") {}
};
struct DuplicateId : Error {
  explicit DuplicateId(const std::string& id) : Error("duplicate trajectory id: " + id) {}
};
struct IoError : Error {
  using Error::Error;
};
struct OracleCapExceeded : Error {
  OracleCapExceeded() : Error("oracle size cap exceeded") {}
};

using Point = std::span<const double>;

inline double sq_dist(Point a, Point b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

inline double dist(Point a, Point b) { return std::sqrt(sq_dist(a, b)); }

/// A polygonal curve: at least 2 vertices, no repeated consecutive vertices.
class Trajectory {
 public:
  Trajectory() = default;
  Trajectory(std::string id, int dim, std::vector<double> coords)
      : id_(std::move(id)), dim_(dim), coords_(std::move(coords)) {}

  const std::string& id() const { return id_; }
  int dim() const { return dim_; }
  std::size_t size() const { return dim_ ? coords_.size() / dim_ : 0; }
  Point vertex(std::size_t i) const { return Point(coords_.data() + i * dim_, dim_); }
  Point front() const { return vertex(0); }
  Point back() const { return vertex(size() - 1); }
  const std::vector<double>& coords() const { return coords_; }

  /// Sub-chain over vertices [first, last], inclusive.
  Trajectory slice(std::size_t first, std::size_t last, std::string id = "slice") const;

 private:
  std::string id_;
  int dim_ = 0;
  std::vector<double> coords_;
};

/// Collapse consecutive duplicate vertices and validate.
Trajectory ingest(std::string id, int dim, const std::vector<double>& coords);

/// Max distance from the first vertex to any other vertex.
double reach(const Trajectory& t);

/// Two-vertex trajectory for a single segment.
Trajectory make_segment(Point a, Point b, std::string id = "seg");

class TrajectorySet {
 public:
  int dim() const { return dim_; }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const Trajectory& operator[](std::size_t i) const { return items_[i]; }
  const std::vector<Trajectory>& items() const { return items_; }

  void add(Trajectory t);
  bool contains(const std::string& id) const { return by_id_.count(id) != 0; }
  std::size_t index_of(const std::string& id) const;

 private:
  int dim_ = 0;
  std::vector<Trajectory> items_;
  std::unordered_map<std::string, std::size_t> by_id_;
};

// CSV format shared repo-wide: header `traj_id,seq,c1,...,cd`,
// rows sorted by (traj_id, seq).
TrajectorySet read_trajectory_csv(const std::string& path);
void write_trajectory_csv(const TrajectorySet& set, const std::string& path);

std::string format_double(double v);

}  // namespace cct

#endif
