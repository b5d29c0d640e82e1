#include "cct/index.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <json.hpp>

#include "cct/query.hpp"
#include "cct/rng.hpp"

namespace cct {

// ---------------------------------------------------------------- PairCache

PairCache::Entry& PairCache::at(std::size_t a, std::size_t b) {
  if (a > b) std::swap(a, b);
  return cache_[{a, b}];
}

const PairCache::Entry* PairCache::find(std::size_t a, std::size_t b) const {
  if (a > b) std::swap(a, b);
  auto it = cache_.find({a, b});
  return it == cache_.end() ? nullptr : &it->second;
}

double PairCache::lb(std::size_t a, std::size_t b) {
  if (a == b) return 0;
  Entry& e = at(a, b);
  if (e.exact) return *e.exact;
  if (!e.lb) {
    ++instr_.lb_calls;
    e.lb = lb_group(features_[a], features_[b]);
  }
  return *e.lb;
}

double PairCache::ub(std::size_t a, std::size_t b) {
  if (a == b) return 0;
  Entry& e = at(a, b);
  if (e.exact) return *e.exact;
  if (!e.ub) {
    ++instr_.ub_calls;
    e.ub = ub_group(store_[a], features_[a], store_[b], features_[b]);
  }
  return *e.ub;
}

bool PairCache::lbfd(std::size_t a, std::size_t b, double alpha) {
  if (a == b) return false;
  Entry& e = at(a, b);
  if (e.exact) return *e.exact > alpha;
  ++instr_.lbfd_calls;
  return lb_tr(store_[a], store_[b], alpha);
}

bool PairCache::dfd(std::size_t a, std::size_t b, double eps) {
  if (a == b) return true;
  Entry& e = at(a, b);
  if (e.exact) return *e.exact <= eps;
  instr_.count_dfd();
  return decide(store_[a], store_[b], eps);
}

double PairCache::df(std::size_t a, std::size_t b) {
  if (a == b) return 0;
  Entry& e = at(a, b);
  if (!e.exact) {
    instr_.count_df();
    e.exact = distance_exact(store_[a], store_[b]);
  }
  return *e.exact;
}

bool PairCache::df_known(std::size_t a, std::size_t b) const {
  if (a == b) return true;
  const Entry* e = find(a, b);
  return e && e->exact.has_value();
}

// ---------------------------------------------------------------- bisector

int bisector_localize(PairCache& cache, std::size_t p, std::size_t c1, std::size_t c2,
                      bool relaxed, double rad_c1) {
  if (cache.ub(p, c2) <= cache.lb(p, c1)) return 2;   // 1
  if (cache.ub(p, c1) <= cache.lb(p, c2)) return 1;   // 2
  if (cache.lbfd(p, c1, cache.ub(p, c2))) return 2;   // 3
  if (cache.lbfd(p, c2, cache.ub(p, c1))) return 1;   // 4
  if (relaxed && cache.df(p, c1) < rad_c1 / 2) return 1;  // 5
  double d1 = cache.df(p, c1);
  if (d1 < cache.lb(p, c2)) return 1;                 // 6
  if (d1 > cache.ub(p, c2)) return 2;                 // 7
  if (cache.lbfd(p, c2, d1)) return 1;                // 8
  if (cache.dfd(p, c2, d1)) return 2;                 // 9
  return 1;                                           // 10
}

// ---------------------------------------------------------------- builder

class IndexBuilder {
 public:
  static CCTIndex init(TrajectorySet s, std::uint64_t seed, std::string variant) {
    CCTIndex idx;
    idx.store_ = std::move(s);
    idx.seed_ = seed;
    idx.variant_ = std::move(variant);
    idx.features_.reserve(idx.store_.size());
    for (const Trajectory& t : idx.store_.items())
      idx.features_.push_back(precompute(t, &idx.build_stats_));
    idx.leaf_of_.assign(idx.store_.size(), -1);
    return idx;
  }

  static int add_node(CCTIndex& idx, int center, int parent) {
    CCTNode node;
    node.center = center;
    node.parent = parent;
    idx.nodes_.push_back(node);
    int id = static_cast<int>(idx.nodes_.size()) - 1;
    if (parent >= 0) idx.nodes_[parent].children.push_back(id);
    return id;
  }

  static int add_leaf(CCTIndex& idx, int center, int parent) {
    int id = add_node(idx, center, parent);
    idx.leaf_of_[center] = id;
    return id;
  }

  // Turn the leaf of `old_center` into an internal node with two child
  // leaves (old center, new center).
  static void split_leaf(CCTIndex& idx, int old_center, int new_center) {
    int v = idx.leaf_of_[old_center];
    add_leaf(idx, old_center, v);
    add_leaf(idx, new_center, v);
  }

  static void add_trajectory(CCTIndex& idx, Trajectory t) {
    idx.store_.add(std::move(t));
    idx.features_.push_back(precompute(idx.store_[idx.store_.size() - 1], &idx.build_stats_));
    idx.leaf_of_.push_back(-1);
  }

  static CCTNode& node(CCTIndex& idx, int i) { return idx.nodes_[i]; }
  static Instrumentation& stats(CCTIndex& idx) { return idx.build_stats_; }
  static int& root(CCTIndex& idx) { return idx.root_; }
  static std::vector<double>& picks(CCTIndex& idx) { return idx.pick_dists_; }
  static std::string& variant(CCTIndex& idx) { return idx.variant_; }
  static std::uint64_t& seed(CCTIndex& idx) { return idx.seed_; }
  static std::vector<CCTNode>& nodes(CCTIndex& idx) { return idx.nodes_; }
  static std::vector<int>& leaf_of(CCTIndex& idx) { return idx.leaf_of_; }
};

namespace {

bool id_less(const TrajectorySet& s, std::size_t a, std::size_t b) {
  return s[a].id() < s[b].id();
}

std::size_t seeded_pick(const TrajectorySet& s, const std::vector<std::size_t>& members,
                        Rng& rng) {
  std::vector<std::size_t> sorted = members;
  std::sort(sorted.begin(), sorted.end(),
            [&](std::size_t a, std::size_t b) { return id_less(s, a, b); });
  return sorted[rng.uniform_int(sorted.size())];
}

}  // namespace

void fix_ancestor_radius(CCTIndex& idx, int leaf, RadiusMode mode, PairCache& cache) {
  const std::size_t p = IndexBuilder::node(idx, leaf).center;
  for (int a = IndexBuilder::node(idx, leaf).parent; a >= 0;
       a = IndexBuilder::node(idx, a).parent) {
    CCTNode& nd = IndexBuilder::node(idx, a);
    if (static_cast<std::size_t>(nd.center) == p) continue;
    double ub = cache.ub(nd.center, p);
    if (ub <= nd.radius) continue;
    if (mode == RadiusMode::UbOnly) {
      nd.radius = ub;
      nd.radius_is_ub = true;
      continue;
    }
    if (!cache.lbfd(nd.center, p, nd.radius) && cache.dfd(nd.center, p, nd.radius)) continue;
    double d = cache.df(nd.center, p);
    if (d > nd.radius) {
      nd.radius = d;
      nd.radius_is_ub = false;
    }
  }
}

CCTIndex build_exact(TrajectorySet s, std::uint64_t seed) {
  if (s.empty()) throw EmptySet();
  CCTIndex idx = IndexBuilder::init(std::move(s), seed, "exact");
  const TrajectorySet& st = idx.store();
  const std::size_t n = st.size();
  PairCache cache(st, idx.features(), IndexBuilder::stats(idx));
  Rng rng(seed);

  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  std::size_t first = seeded_pick(st, all, rng);
  IndexBuilder::root(idx) = IndexBuilder::add_leaf(idx, static_cast<int>(first), -1);
  if (n == 1) return idx;

  std::vector<std::size_t> remaining;
  for (std::size_t i = 0; i < n; ++i)
    if (i != first) remaining.push_back(i);
  std::vector<std::size_t> assign(n, first);

  while (!remaining.empty()) {
    // farthest-first pick: tighten intervals until the arg-max is exact
    std::size_t e = remaining.front();
    for (;;) {
      auto key = [&](std::size_t x) {
        return cache.df_known(x, assign[x]) ? cache.df(x, assign[x]) : cache.ub(x, assign[x]);
      };
      e = remaining.front();
      double best = key(e);
      for (std::size_t x : remaining) {
        double kx = key(x);
        if (kx > best || (kx == best && id_less(st, x, e))) {
          best = kx;
          e = x;
        }
      }
      if (cache.df_known(e, assign[e])) break;
      cache.df(e, assign[e]);
    }
    IndexBuilder::picks(idx).push_back(cache.df(e, assign[e]));
    IndexBuilder::split_leaf(idx, static_cast<int>(assign[e]), static_cast<int>(e));
    remaining.erase(std::find(remaining.begin(), remaining.end(), e));
    for (std::size_t x : remaining)
      if (bisector_localize(cache, x, assign[x], e, false, 0) == 2) assign[x] = e;
  }

  std::vector<std::size_t> order = all;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return id_less(st, a, b); });
  for (std::size_t p : order)
    fix_ancestor_radius(idx, idx.leaf_of(p), RadiusMode::Exact, cache);
  return idx;
}

namespace {

CCTIndex build_recursive(TrajectorySet s, std::uint64_t seed, bool approx) {
  if (s.empty()) throw EmptySet();
  CCTIndex idx = IndexBuilder::init(std::move(s), seed, approx ? "approx" : "relaxed");
  const TrajectorySet& st = idx.store();
  PairCache cache(st, idx.features(), IndexBuilder::stats(idx));
  Rng rng(seed);

  std::vector<std::size_t> all(st.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  std::size_t first = seeded_pick(st, all, rng);
  IndexBuilder::root(idx) = IndexBuilder::add_node(idx, static_cast<int>(first), -1);

  struct Task {
    int node;
    std::vector<std::size_t> members;  // includes the node's center
  };
  std::vector<Task> work;
  work.push_back({IndexBuilder::root(idx), std::move(all)});

  while (!work.empty()) {
    Task t = std::move(work.back());
    work.pop_back();
    const std::size_t c = IndexBuilder::node(idx, t.node).center;
    if (t.members.size() == 1) {
      IndexBuilder::leaf_of(idx)[c] = t.node;
      continue;
    }

    // furthest member from the center
    std::size_t far = c;
    double rad = 0;
    bool rad_is_ub = approx;
    if (approx) {
      for (std::size_t x : t.members) {
        if (x == c) continue;
        double u = cache.ub(x, c);
        if (far == c || u > rad || (u == rad && id_less(st, x, far))) {
          rad = u;
          far = x;
        }
      }
    } else {
      double alpha = 0;
      for (std::size_t x : t.members)
        if (x != c) alpha = std::max(alpha, cache.lb(x, c));
      for (std::size_t x : t.members) {
        if (x == c) continue;
        if (cache.ub(x, c) < alpha) continue;
        double d = cache.df(x, c);
        if (far == c || d > rad || (d == rad && id_less(st, x, far))) {
          rad = d;
          far = x;
        }
      }
      // loose bounds can leave the arg-max lower bound uncomputed
      if (far == c) {
        for (std::size_t x : t.members) {
          if (x == c) continue;
          double d = cache.df(x, c);
          if (far == c || d > rad || (d == rad && id_less(st, x, far))) {
            rad = d;
            far = x;
          }
        }
      }
    }
    IndexBuilder::node(idx, t.node).radius = rad;
    IndexBuilder::node(idx, t.node).radius_is_ub = rad_is_ub;

    std::vector<std::size_t> m1{c}, m2{far};
    for (std::size_t x : t.members) {
      if (x == c || x == far) continue;
      int choice;
      if (approx)
        choice = cache.ub(x, c) <= cache.ub(x, far) ? 1 : 2;
      else
        choice = bisector_localize(cache, x, c, far, true, rad);
      (choice == 1 ? m1 : m2).push_back(x);
    }
    int v1 = IndexBuilder::add_node(idx, static_cast<int>(c), t.node);
    int v2 = IndexBuilder::add_node(idx, static_cast<int>(far), t.node);
    work.push_back({v1, std::move(m1)});
    work.push_back({v2, std::move(m2)});
  }
  return idx;
}

}  // namespace

CCTIndex build_relaxed(TrajectorySet s, std::uint64_t seed) {
  return build_recursive(std::move(s), seed, false);
}

CCTIndex build_approx(TrajectorySet s, std::uint64_t seed) {
  return build_recursive(std::move(s), seed, true);
}

// ---------------------------------------------------------------- inserts

namespace {

void insert_at_leaf(CCTIndex& idx, int leaf, std::size_t new_traj, RadiusMode mode) {
  int old_center = IndexBuilder::node(idx, leaf).center;
  IndexBuilder::split_leaf(idx, old_center, static_cast<int>(new_traj));
  PairCache cache(idx.store(), idx.features(), IndexBuilder::stats(idx));
  fix_ancestor_radius(idx, idx.leaf_of(new_traj), mode, cache);
}

}  // namespace

void insert_exact(CCTIndex& idx, Trajectory p) {
  if (idx.empty()) {
    IndexBuilder::add_trajectory(idx, std::move(p));
    IndexBuilder::root(idx) = IndexBuilder::add_leaf(idx, 0, -1);
    return;
  }
  QuerySpec spec;
  spec.kind = QuerySpec::Nn;
  spec.seed = Rng::derive(idx.seed(), idx.store().size());
  QueryResult r = query_nn(idx, p, spec);
  IndexBuilder::stats(idx) += r.instr;
  int leaf = idx.leaf_of(r.ids.front());
  IndexBuilder::add_trajectory(idx, std::move(p));
  insert_at_leaf(idx, leaf, idx.store().size() - 1, RadiusMode::Exact);
}

void insert_approx(CCTIndex& idx, Trajectory p) {
  if (idx.empty()) {
    IndexBuilder::add_trajectory(idx, std::move(p));
    IndexBuilder::root(idx) = IndexBuilder::add_leaf(idx, 0, -1);
    return;
  }
  QuerySpec spec;
  spec.kind = QuerySpec::Nn;
  spec.error_model = QuerySpec::Implicit;
  spec.seed = Rng::derive(idx.seed(), idx.store().size());
  QueryResult r = query_implicit(idx, p, spec);
  IndexBuilder::stats(idx) += r.instr;
  int leaf = idx.leaf_of(r.ids.front());
  IndexBuilder::add_trajectory(idx, std::move(p));
  insert_at_leaf(idx, leaf, idx.store().size() - 1, RadiusMode::UbOnly);
}

void insert_standard(CCTIndex& idx, Trajectory p) {
  if (idx.empty()) {
    IndexBuilder::add_trajectory(idx, std::move(p));
    IndexBuilder::root(idx) = IndexBuilder::add_leaf(idx, 0, -1);
    return;
  }
  Instrumentation& instr = IndexBuilder::stats(idx);
  BoundSession session(idx.store(), idx.features(), p, instr);
  int v = idx.root();
  while (!idx.nodes()[v].leaf()) {
    const std::vector<int>& ch = idx.nodes()[v].children;
    int best = ch.front();
    for (int u : ch) {
      double lu = session.lb(idx.nodes()[u].center);
      double lb_best = session.lb(idx.nodes()[best].center);
      if (lu < lb_best ||
          (lu == lb_best && id_less(idx.store(), idx.nodes()[u].center,
                                    idx.nodes()[best].center)))
        best = u;
    }
    v = best;
  }
  IndexBuilder::add_trajectory(idx, std::move(p));
  insert_at_leaf(idx, v, idx.store().size() - 1, RadiusMode::UbOnly);
}

// ---------------------------------------------------------------- structure

std::size_t CCTIndex::leaf_count() const {
  std::size_t c = 0;
  for (const CCTNode& n : nodes_)
    if (n.leaf()) ++c;
  return c;
}

int CCTIndex::depth_of(int node) const {
  int d = 0;
  for (int a = nodes_[node].parent; a >= 0; a = nodes_[a].parent) ++d;
  return d;
}

void CCTIndex::check_structure() const {
  if (root_ < 0) {
    if (!store_.empty()) throw Error("non-empty store without a root");
    return;
  }
  if (nodes_.size() > 2 * store_.size() - 1) throw Error("node count exceeds 2|S|-1");
  std::vector<int> seen(store_.size(), 0);
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const CCTNode& n = nodes_[i];
    if (n.center < 0 || static_cast<std::size_t>(n.center) >= store_.size())
      throw Error("node center out of range");
    if (n.leaf()) {
      if (n.radius != 0) throw Error("leaf with nonzero radius");
      if (seen[n.center]++) throw Error("trajectory appears in more than one leaf");
      if (leaf_of_[n.center] != static_cast<int>(i)) throw Error("leaf_of mismatch");
    } else {
      if (n.children.size() < 2) throw Error("internal node with fewer than 2 children");
      bool nested = false;
      for (int c : n.children) {
        if (nodes_[c].parent != static_cast<int>(i)) throw Error("parent pointer mismatch");
        if (nodes_[c].center == n.center) nested = true;
      }
      if (!nested) throw Error("Nesting violated: no child shares the center");
    }
  }
  for (std::size_t t = 0; t < store_.size(); ++t)
    if (!seen[t]) throw Error("trajectory missing from leaves: " + store_[t].id());
}

// ---------------------------------------------------------------- quality

QualityReport quality(const CCTIndex& idx, bool use_oracle, std::size_t oracle_cap) {
  const char* env = std::getenv("CCT_ORACLE_CAP");
  if (env) oracle_cap = std::strtoull(env, nullptr, 10);
  if (use_oracle && idx.store().size() > oracle_cap) throw OracleCapExceeded();

  QualityReport rep;
  const auto& nodes = idx.nodes();
  if (idx.empty()) return rep;
  const std::size_t n = idx.store().size();

  double depth_sum = 0;
  std::size_t leaves = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].leaf()) {
      depth_sum += idx.depth_of(static_cast<int>(i));
      ++leaves;
    }
  double denom = std::max(1.0, std::ceil(std::log2(static_cast<double>(std::max<std::size_t>(n, 1)))));
  rep.avg_leaf_depth_normalized = (depth_sum / std::max<std::size_t>(leaves, 1)) / denom;

  double comp_sum = 0;
  std::size_t comp_n = 0;
  std::size_t ub_nodes = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const CCTNode& v = nodes[i];
    if (v.radius_is_ub) ++ub_nodes;
    double key = v.radius > 0 ? std::exp2(std::floor(std::log2(v.radius))) : 0.0;
    ++rep.radius_histogram[key];
    if (v.leaf() || v.parent < 0 || v.radius == 0) continue;
    double pr = nodes[v.parent].radius;
    comp_sum += pr == 0 ? 1.0 : std::min(1.0, v.radius / pr);
    ++comp_n;
  }
  rep.compactness = comp_n ? comp_sum / comp_n : 1.0;
  rep.ub_radius_fraction = nodes.empty() ? 0 : static_cast<double>(ub_nodes) / nodes.size();

  // overlap: covering node clusters per leaf, relative to its depth
  Instrumentation scratch;
  PairCache cache(idx.store(), idx.features(), scratch);
  double overlap_sum = 0;
  std::size_t overlap_n = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!nodes[i].leaf()) continue;
    int depth = idx.depth_of(static_cast<int>(i));
    if (depth == 0) {  // singleton tree
      overlap_sum += 1.0;
      ++overlap_n;
      continue;
    }
    std::size_t p = nodes[i].center;
    std::vector<bool> is_anc(nodes.size(), false);
    for (int a = nodes[i].parent; a >= 0; a = nodes[a].parent) is_anc[a] = true;
    std::size_t covering = 0;
    for (std::size_t v = 0; v < nodes.size(); ++v) {
      if (nodes[v].leaf()) continue;
      if (is_anc[v]) {
        ++covering;  // Bounding guarantees ancestors cover
        continue;
      }
      if (use_oracle) {
        if (cache.df(nodes[v].center, p) <= nodes[v].radius) ++covering;
      } else {
        if (cache.ub(nodes[v].center, p) <= nodes[v].radius)
          ++covering;
        else if (cache.lb(nodes[v].center, p) <= nodes[v].radius)
          ++rep.overlap_undecided;  // certificate inconclusive
      }
    }
    overlap_sum += static_cast<double>(covering) / depth;
    ++overlap_n;
  }
  rep.overlap = overlap_n ? overlap_sum / overlap_n : 1.0;
  return rep;
}

// ---------------------------------------------------------------- export/io

void export_dendrogram(const CCTIndex& idx, const std::string& csv_path,
                       const std::string& dot_path) {
  std::ofstream csv(csv_path);
  if (!csv) throw IoError("cannot write " + csv_path);
  std::vector<std::size_t> leafc(idx.nodes().size(), 0);
  for (std::size_t i = idx.nodes().size(); i-- > 0;) {
    const CCTNode& n = idx.nodes()[i];
    if (n.leaf()) leafc[i] = 1;
    if (n.parent >= 0) leafc[n.parent] += leafc[i];
  }
  csv << "node_id,parent_id,center_id,radius,depth,leaf_count\n";
  for (std::size_t i = 0; i < idx.nodes().size(); ++i) {
    const CCTNode& n = idx.nodes()[i];
    csv << i << ',';
    if (n.parent >= 0) csv << n.parent;
    csv << ',' << idx.store()[n.center].id() << ',' << format_double(n.radius) << ','
        << idx.depth_of(static_cast<int>(i)) << ',' << leafc[i] << "\n";
  }

  std::ofstream dot(dot_path);
  if (!dot) throw IoError("cannot write " + dot_path);
  dot << "digraph cct {\n";
  for (std::size_t i = 0; i < idx.nodes().size(); ++i) {
    const CCTNode& n = idx.nodes()[i];
    dot << "  n" << i << " [label=\"" << idx.store()[n.center].id() << "\\nr="
        << format_double(n.radius) << "\"];\n";
    if (n.parent >= 0) dot << "  n" << n.parent << " -> n" << i << ";\n";
  }
  dot << "}\n";
}

void save_index(const CCTIndex& idx, const std::string& path,
                const std::string& trajectory_file) {
  nlohmann::json j;
  j["version"] = 1;
  j["d"] = idx.store().dim();
  j["seed"] = idx.seed();
  j["build_variant"] = idx.variant();
  j["trajectory_file"] = trajectory_file;
  j["root"] = idx.root();
  nlohmann::json nodes = nlohmann::json::array();
  for (std::size_t i = 0; i < idx.nodes().size(); ++i) {
    const CCTNode& n = idx.nodes()[i];
    nodes.push_back({{"id", i},
                     {"parent", n.parent},
                     {"center", idx.store()[n.center].id()},
                     {"radius", n.radius},
                     {"radius_kind", n.radius_is_ub ? "upper-bound" : "exact"}});
  }
  j["nodes"] = std::move(nodes);
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << j.dump(2) << "\n";
}

CCTIndex load_index(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  nlohmann::json j;
  in >> j;

  std::string traj_file = j.at("trajectory_file").get<std::string>();
  if (!std::filesystem::exists(traj_file)) {
    auto alt = std::filesystem::path(path).parent_path() / traj_file;
    if (std::filesystem::exists(alt)) traj_file = alt.string();
  }
  CCTIndex idx = IndexBuilder::init(read_trajectory_csv(traj_file), j.at("seed").get<std::uint64_t>(),
                                    j.at("build_variant").get<std::string>());
  IndexBuilder::root(idx) = j.at("root").get<int>();
  auto& nodes = IndexBuilder::nodes(idx);
  nodes.resize(j.at("nodes").size());
  for (const auto& nj : j.at("nodes")) {
    CCTNode n;
    n.parent = nj.at("parent").get<int>();
    n.center = static_cast<int>(idx.store().index_of(nj.at("center").get<std::string>()));
    n.radius = nj.at("radius").get<double>();
    n.radius_is_ub = nj.at("radius_kind").get<std::string>() == "upper-bound";
    nodes[nj.at("id").get<std::size_t>()] = std::move(n);
  }
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].parent >= 0) nodes[nodes[i].parent].children.push_back(static_cast<int>(i));
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].leaf()) IndexBuilder::leaf_of(idx)[nodes[i].center] = static_cast<int>(i);
  idx.check_structure();
  return idx;
}

}  // namespace cct
