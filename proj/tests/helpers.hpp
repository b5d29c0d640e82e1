#ifndef CCT_TESTS_HELPERS_HPP
#define CCT_TESTS_HELPERS_HPP

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cct/frechet.hpp"
#include "cct/geometry.hpp"
#include "cct/rng.hpp"

namespace th {

// Random-walk trajectory, independent of the datagen module.
inline cct::Trajectory random_walk(const std::string& id, int d, std::size_t len, cct::Rng& rng,
                                   double step = 0.5, double origin_span = 4.0) {
  std::vector<double> coords;
  for (int k = 0; k < d; ++k) coords.push_back(rng.uniform(0.0, origin_span));
  for (std::size_t i = 1; i < len; ++i)
    for (int k = 0; k < d; ++k)
      coords.push_back(coords[(i - 1) * d + k] + rng.uniform(-step, step));
  return cct::ingest(id, d, coords);
}

inline cct::TrajectorySet random_set(std::size_t n, int d, cct::Rng& rng,
                                     std::size_t max_len = 10) {
  cct::TrajectorySet s;
  for (std::size_t i = 0; i < n; ++i) {
    char id[16];
    std::snprintf(id, sizeof id, "t%04zu", i);
    s.add(random_walk(id, d, 2 + rng.uniform_int(max_len - 1), rng));
  }
  return s;
}

// Vertical unit segment at the given x (2-D).
inline cct::Trajectory vertical(const std::string& id, double x) {
  return cct::Trajectory(id, 2, {x, 0.0, x, 1.0});
}

// Independent distance oracle: bisection at a tight tolerance.
inline double oracle_dist(const cct::Trajectory& p, const cct::Trajectory& q,
                          double tol = 1e-9) {
  return cct::distance_exact(p, q, cct::ExactMode::bisection(tol));
}

// 1-D trajectories sharing endpoints and bounding box, so every cheap bound
// is vacuous; the middle wiggle controls the actual distance.
inline cct::Trajectory wiggle1d(const std::string& id, double depth) {
  return cct::Trajectory(id, 1, {0.0, 1.0, 1.0 - depth, 1.0, 0.0, 1.0});
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& tag) {
    path = std::filesystem::temp_directory_path() / ("cct_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace th

#endif
