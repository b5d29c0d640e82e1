#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "cct/datagen.hpp"
#include "cct/frechet.hpp"
#include "cct/index.hpp"
#include "cct/query.hpp"

namespace {

constexpr const char* kVersion = "1.0.0";

cct::CCTIndex build_variant(const std::string& variant, cct::TrajectorySet set,
                            std::uint64_t seed) {
  if (variant == "exact") return cct::build_exact(std::move(set), seed);
  if (variant == "relaxed") return cct::build_relaxed(std::move(set), seed);
  if (variant == "approx") return cct::build_approx(std::move(set), seed);
  throw CLI::ValidationError("unknown variant: " + variant);
}

int cmd_build(const std::string& input, const std::string& variant, std::uint64_t seed,
              const std::string& out, double simplify_frac) {
  cct::TrajectorySet raw = cct::read_trajectory_csv(input);
  cct::TrajectorySet set;
  if (simplify_frac > 0) {
    for (const cct::Trajectory& t : raw.items())
      set.add(cct::simplify(t, simplify_frac * cct::reach(t)));
  } else {
    set = std::move(raw);
  }
  cct::CCTIndex idx = build_variant(variant, std::move(set), seed);
  idx.check_structure();
  std::string traj_file = out + ".traj.csv";
  cct::write_trajectory_csv(idx.store(), traj_file);
  cct::save_index(idx, out, std::filesystem::path(traj_file).filename().string());
  const cct::Instrumentation& b = idx.build_stats();
  std::cout << "built variant=" << variant << " n=" << idx.store().size()
            << " nodes=" << idx.nodes().size() << " df=" << b.df_calls << " dfd=" << b.dfd_calls
            << " bounds=" << b.bound_calls() << "\n";
  return 0;
}

int cmd_insert(const std::string& index_file, const std::string& input,
               const std::string& variant, const std::string& out) {
  cct::CCTIndex idx = cct::load_index(index_file);
  cct::TrajectorySet add = cct::read_trajectory_csv(input);
  for (const cct::Trajectory& t : add.items()) {
    if (variant == "exact")
      cct::insert_exact(idx, t);
    else if (variant == "approx")
      cct::insert_approx(idx, t);
    else if (variant == "standard")
      cct::insert_standard(idx, t);
    else
      throw CLI::ValidationError("unknown insert variant: " + variant);
  }
  idx.check_structure();
  std::string traj_file = out + ".traj.csv";
  cct::write_trajectory_csv(idx.store(), traj_file);
  cct::save_index(idx, out, std::filesystem::path(traj_file).filename().string());
  std::cout << "inserted " << add.size() << " n=" << idx.store().size()
            << " nodes=" << idx.nodes().size() << "\n";
  return 0;
}

int cmd_query(const std::string& index_file, const std::string& queries_file,
              const std::string& kind, int k, double tau, const std::string& taus_file,
              bool has_eadd, double eadd, bool has_erel, double erel, bool implicit,
              double kappa, std::uint64_t seed, const std::string& report, bool timing) {
  cct::CCTIndex idx = cct::load_index(index_file);
  cct::TrajectorySet queries = cct::read_trajectory_csv(queries_file);

  cct::QuerySpec spec;
  if (kind == "knn")
    spec.kind = cct::QuerySpec::Knn;
  else if (kind == "nn")
    spec.kind = cct::QuerySpec::Nn;
  else if (kind == "rnn")
    spec.kind = cct::QuerySpec::Rnn;
  else
    throw CLI::ValidationError("unknown kind: " + kind);
  spec.k = k;
  spec.tau = tau;
  spec.kappa = kappa;
  if (implicit)
    spec.error_model = cct::QuerySpec::Implicit;
  else if (has_erel) {
    spec.error_model = cct::QuerySpec::Relative;
    spec.e_rel = erel;
  } else {
    spec.error_model = cct::QuerySpec::Additive;
    spec.e_add = has_eadd ? eadd : 0.0;
  }

  std::vector<double> taus;
  if (!taus_file.empty()) {
    std::ifstream in(taus_file);
    if (!in) throw cct::IoError("cannot open " + taus_file);
    double v;
    while (in >> v) taus.push_back(v);
    if (taus.size() != queries.size())
      throw CLI::ValidationError("taus count does not match query count");
  }

  std::vector<std::size_t> order(queries.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return queries[a].id() < queries[b].id();
  });

  std::ofstream rep;
  if (!report.empty()) {
    rep.open(report);
    if (!rep) throw cct::IoError("cannot write " + report);
    rep << "# seed=" << seed << " variant=" << idx.variant() << " kappa="
        << cct::format_double(kappa) << " version=" << kVersion << "\n";
    rep << "query_id,kind,df_calls,dfd_calls,lb_calls,ub_calls,lbfd_calls,seg_calls,"
           "node_visits,result_size,reported_eadd,reported_erel,wall_ms\n";
  }

  double sum_df = 0, sum_dfd = 0, sum_visits = 0;
  std::size_t zero_df = 0, qn = 0;
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    std::size_t i = order[pos];
    cct::QuerySpec qs = spec;
    qs.seed = seed + pos;
    if (!taus.empty()) qs.tau = taus[pos];
    auto t0 = std::chrono::steady_clock::now();
    cct::QueryResult r = cct::run_query(idx, queries[i], qs);
    auto t1 = std::chrono::steady_clock::now();
    double wall_ms =
        timing ? std::chrono::duration<double, std::milli>(t1 - t0).count() : 0.0;

    std::cout << queries[i].id() << ":";
    for (std::size_t id : r.ids) std::cout << " " << idx.store()[id].id();
    std::cout << "\n";

    if (rep.is_open()) {
      rep << queries[i].id() << ',' << kind << ',' << r.instr.df_calls << ','
          << r.instr.dfd_calls << ',' << r.instr.lb_calls << ',' << r.instr.ub_calls << ','
          << r.instr.lbfd_calls << ',' << r.instr.seg_calls << ',' << r.instr.node_visits << ','
          << r.ids.size() << ',';
      if (r.reported_eadd) rep << cct::format_double(*r.reported_eadd);
      rep << ',';
      if (r.reported_erel) rep << cct::format_double(*r.reported_erel);
      rep << ',' << cct::format_double(wall_ms) << "\n";
    }

    sum_df += r.instr.df_calls;
    sum_dfd += r.instr.dfd_calls;
    sum_visits += r.instr.node_visits;
    if (r.instr.df_calls == 0) ++zero_df;
    ++qn;
  }

  std::string agg = "queries=" + std::to_string(qn) +
                    " mean_df=" + cct::format_double(qn ? sum_df / qn : 0) +
                    " mean_dfd=" + cct::format_double(qn ? sum_dfd / qn : 0) +
                    " mean_visits=" + cct::format_double(qn ? sum_visits / qn : 0) +
                    " zero_df_frac=" +
                    cct::format_double(qn ? static_cast<double>(zero_df) / qn : 0);
  if (rep.is_open()) rep << "# " << agg << "\n";
  std::cout << agg << "\n";
  return 0;
}

int cmd_gen(const cct::SyntheticConfig& cfg, const std::string& out, const std::string& manifest,
            const std::string& queries_out, std::size_t query_count, const std::string& method,
            std::size_t result_size, std::uint64_t query_seed) {
  cct::SyntheticOutput gen = cct::gen_synthetic(cfg);
  cct::write_trajectory_csv(gen.set, out);

  nlohmann::json taus = nlohmann::json::array();
  if (!queries_out.empty()) {
    if (method == "perturb") {
      std::vector<cct::Trajectory> qs =
          cct::gen_queries_perturb(gen.set, query_count, query_seed, &gen.query_pool);
      cct::TrajectorySet qset;
      for (cct::Trajectory& q : qs) qset.add(std::move(q));
      cct::write_trajectory_csv(qset, queries_out);
    } else if (method == "fixed") {
      std::vector<cct::FixedResultQuery> qs =
          cct::gen_queries_fixed_result(gen.set, query_count, result_size, query_seed);
      cct::TrajectorySet qset;
      for (cct::FixedResultQuery& q : qs) {
        taus.push_back({{"id", q.q.id()}, {"tau", q.tau}});
        qset.add(std::move(q.q));
      }
      cct::write_trajectory_csv(qset, queries_out);
    } else {
      throw CLI::ValidationError("unknown query method: " + method);
    }
  }

  if (!manifest.empty()) {
    nlohmann::json j;
    j["config"] = {{"cluster_size", cfg.cluster_size}, {"straightness", cfg.straightness},
                   {"max_edge", cfg.max_edge},         {"avg_size", cfg.avg_size},
                   {"total", cfg.total},               {"d", cfg.d},
                   {"seed", cfg.seed}};
    j["query_pool"] = gen.query_pool;
    if (!taus.empty()) j["taus"] = taus;
    std::ofstream m(manifest);
    if (!m) throw cct::IoError("cannot write " + manifest);
    m << j.dump(2) << "\n";
  }
  std::cout << "generated " << gen.set.size() << " trajectories\n";
  return 0;
}

int cmd_stats(const std::string& index_file, bool oracle, const std::string& dend_csv,
              const std::string& dend_dot) {
  cct::CCTIndex idx = cct::load_index(index_file);
  idx.check_structure();
  std::cout << "structure=OK\n";
  if (oracle) {
    cct::Instrumentation scratch;
    cct::PairCache cache(idx.store(), idx.features(), scratch);
    for (std::size_t v = 0; v < idx.nodes().size(); ++v) {
      const cct::CCTNode& nd = idx.nodes()[v];
      for (int c : nd.children) {
        std::vector<int> stack{c};
        while (!stack.empty()) {
          int u = stack.back();
          stack.pop_back();
          if (cache.df(nd.center, idx.nodes()[u].center) > nd.radius)
            throw cct::Error("Bounding violated at node " + std::to_string(v));
          for (int w : idx.nodes()[u].children) stack.push_back(w);
        }
      }
    }
    std::cout << "bounding=OK\n";
  }
  cct::QualityReport q = cct::quality(idx, oracle);
  std::cout << "n=" << idx.store().size() << " nodes=" << idx.nodes().size()
            << " leaves=" << idx.leaf_count() << "\n";
  std::cout << "avg_leaf_depth_normalized=" << cct::format_double(q.avg_leaf_depth_normalized)
            << "\n";
  std::cout << "compactness=" << cct::format_double(q.compactness) << "\n";
  std::cout << "overlap=" << cct::format_double(q.overlap)
            << " overlap_undecided=" << q.overlap_undecided << "\n";
  std::cout << "ub_radius_fraction=" << cct::format_double(q.ub_radius_fraction) << "\n";
  if (!dend_csv.empty() || !dend_dot.empty())
    cct::export_dendrogram(idx, dend_csv.empty() ? "dendrogram.csv" : dend_csv,
                           dend_dot.empty() ? "dendrogram.dot" : dend_dot);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cluster Center Tree trajectory index"};
  app.require_subcommand(1);

  // build
  auto* build = app.add_subcommand("build", "Build an index from a trajectory CSV");
  std::string b_input, b_variant = "relaxed", b_out;
  std::uint64_t b_seed = 0;
  double b_simplify = 0;
  build->add_option("--input", b_input, "trajectory CSV")->required();
  build->add_option("--variant", b_variant, "exact|relaxed|approx");
  build->add_option("--seed", b_seed, "build seed");
  build->add_option("--out", b_out, "index file")->required();
  build->add_option("--simplify-frac", b_simplify, "simplify at frac*reach before building");

  // insert
  auto* ins = app.add_subcommand("insert", "Insert trajectories into an index");
  std::string i_index, i_input, i_variant = "exact", i_out;
  ins->add_option("--index", i_index, "index file")->required();
  ins->add_option("--input", i_input, "trajectory CSV to insert")->required();
  ins->add_option("--variant", i_variant, "exact|approx|standard");
  ins->add_option("--out", i_out, "output index file")->required();

  // query
  auto* qry = app.add_subcommand("query", "Run queries against an index");
  std::string q_index, q_queries, q_kind = "nn", q_taus, q_report;
  int q_k = 1;
  double q_tau = 0, q_eadd = 0, q_erel = 0, q_kappa = 1.25;
  bool q_implicit = false, q_timing = false;
  std::uint64_t q_seed = 0;
  qry->add_option("--index", q_index, "index file")->required();
  qry->add_option("--queries", q_queries, "query trajectory CSV")->required();
  qry->add_option("--kind", q_kind, "knn|nn|rnn");
  qry->add_option("--k", q_k, "k for knn");
  qry->add_option("--tau", q_tau, "range for rnn");
  qry->add_option("--taus", q_taus, "file with one tau per query (id order)");
  auto* opt_eadd = qry->add_option("--eadd", q_eadd, "additive error budget");
  auto* opt_erel = qry->add_option("--erel", q_erel, "relative error budget");
  auto* opt_impl = qry->add_flag("--implicit", q_implicit, "implicit approximate query");
  opt_eadd->excludes(opt_erel)->excludes(opt_impl);
  opt_erel->excludes(opt_impl);
  qry->add_option("--kappa", q_kappa, "RNN subtree admission gate");
  qry->add_option("--seed", q_seed, "decide-stage pivot seed");
  qry->add_option("--report", q_report, "per-query CSV report");
  qry->add_flag("--timing", q_timing, "record wall-clock times in the report");

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a synthetic trajectory set");
  cct::SyntheticConfig cfg;
  std::string g_out, g_manifest, g_queries_out, g_method = "perturb";
  std::size_t g_query_count = 1000, g_result_size = 10;
  std::uint64_t g_query_seed = 1;
  gen->add_option("--out", g_out, "output trajectory CSV")->required();
  gen->add_option("--seed", cfg.seed, "generator seed");
  gen->add_option("--total", cfg.total, "|S| including 500 noise trajectories");
  gen->add_option("--cluster-size", cfg.cluster_size, "alpha_CS");
  gen->add_option("--straightness", cfg.straightness, "alpha_SF");
  gen->add_option("--max-edge", cfg.max_edge, "alpha_ED");
  gen->add_option("--avg-size", cfg.avg_size, "n (vertex counts in [n/2, 3n/2])");
  gen->add_option("--d", cfg.d, "dimension");
  gen->add_option("--manifest", g_manifest, "sidecar manifest JSON");
  gen->add_option("--queries-out", g_queries_out, "also emit a query CSV");
  gen->add_option("--query-count", g_query_count, "number of queries");
  gen->add_option("--method", g_method, "perturb|fixed");
  gen->add_option("--result-size", g_result_size, "fixed-result target size");
  gen->add_option("--query-seed", g_query_seed, "query generator seed");

  // stats
  auto* st = app.add_subcommand("stats", "Index quality report and dendrogram export");
  std::string s_index, s_dcsv, s_ddot;
  bool s_oracle = false;
  st->add_option("--index", s_index, "index file")->required();
  st->add_flag("--oracle", s_oracle, "verify Bounding and compute overlap with exact distances");
  st->add_option("--dendrogram-csv", s_dcsv, "dendrogram CSV path");
  st->add_option("--dendrogram-dot", s_ddot, "dendrogram DOT path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  }

  try {
    if (*build) return cmd_build(b_input, b_variant, b_seed, b_out, b_simplify);
    if (*ins) return cmd_insert(i_index, i_input, i_variant, i_out);
    if (*qry)
      return cmd_query(q_index, q_queries, q_kind, q_k, q_tau, q_taus, opt_eadd->count() > 0,
                       q_eadd, opt_erel->count() > 0, q_erel, q_implicit, q_kappa, q_seed,
                       q_report, q_timing);
    if (*gen)
      return cmd_gen(cfg, g_out, g_manifest, g_queries_out, g_query_count, g_method,
                     g_result_size, g_query_seed);
    if (*st) return cmd_stats(s_index, s_oracle, s_dcsv, s_ddot);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const cct::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const cct::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
