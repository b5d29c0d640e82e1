#include "cct/geometry.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace cct {

Trajectory Trajectory::slice(std::size_t first, std::size_t last, std::string id) const {
  std::vector<double> c(coords_.begin() + first * dim_, coords_.begin() + (last + 1) * dim_);
  return Trajectory(std::move(id), dim_, std::move(c));
}

Trajectory ingest(std::string id, int dim, const std::vector<double>& coords) {
  if (dim < 1) throw DimensionMismatch();
  if (coords.empty()) throw EmptyInput();
  if (coords.size() % dim != 0) throw DimensionMismatch();
  std::size_t rows = coords.size() / dim;
  std::vector<double> out;
  out.reserve(coords.size());
  for (std::size_t r = 0; r < rows; ++r) {
    const double* v = coords.data() + r * dim;
    if (!out.empty()) {
      const double* prev = out.data() + out.size() - dim;
      bool same = true;
      for (int k = 0; k < dim; ++k)
        if (prev[k] != v[k]) {
          same = false;
          break;
        }
      if (same) continue;
    }
    out.insert(out.end(), v, v + dim);
  }
  if (out.size() / dim < 2) throw DegenerateTrajectory();
  return Trajectory(std::move(id), dim, std::move(out));
}

double reach(const Trajectory& t) {
  double best = 0;
  for (std::size_t i = 1; i < t.size(); ++i) best = std::max(best, dist(t.front(), t.vertex(i)));
  return best;
}

Trajectory make_segment(Point a, Point b, std::string id) {
  std::vector<double> c(a.begin(), a.end());
  c.insert(c.end(), b.begin(), b.end());
  return Trajectory(std::move(id), static_cast<int>(a.size()), std::move(c));
}

void TrajectorySet::add(Trajectory t) {
  if (items_.empty())
    dim_ = t.dim();
  else if (t.dim() != dim_)
    throw DimensionMismatch();
  if (by_id_.count(t.id())) throw DuplicateId(t.id());
  by_id_.emplace(t.id(), items_.size());
  items_.push_back(std::move(t));
}

std::size_t TrajectorySet::index_of(const std::string& id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) throw Error("unknown trajectory id: " + id);
  return it->second;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

TrajectorySet read_trajectory_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty trajectory file: " + path);
  // header: traj_id,seq,c1,...,cd
  int dim = -1;  // header commas: traj_id,seq plus one per coordinate
  for (char ch : line)
    if (ch == ',') ++dim;
  if (dim < 1) throw IoError("bad trajectory header in " + path);

  TrajectorySet set;
  std::string cur_id;
  std::vector<double> coords;
  auto flush = [&]() {
    if (!cur_id.empty()) set.add(ingest(cur_id, dim, coords));
    coords.clear();
  };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::getline(ss, field, ',');
    if (field != cur_id) {
      flush();
      cur_id = field;
    }
    std::getline(ss, field, ',');  // seq, rows are already ordered
    for (int k = 0; k < dim; ++k) {
      std::getline(ss, field, ',');
      coords.push_back(std::stod(field));
    }
  }
  flush();
  return set;
}

void write_trajectory_csv(const TrajectorySet& set, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "traj_id,seq";
  for (int k = 1; k <= set.dim(); ++k) out << ",c" << k;
  out << "\n";
  std::vector<std::size_t> order(set.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return set[a].id() < set[b].id(); });
  for (std::size_t i : order) {
    const Trajectory& t = set[i];
    for (std::size_t r = 0; r < t.size(); ++r) {
      out << t.id() << ',' << r;
      for (int k = 0; k < t.dim(); ++k) out << ',' << format_double(t.vertex(r)[k]);
      out << "\n";
    }
  }
}

}  // namespace cct
