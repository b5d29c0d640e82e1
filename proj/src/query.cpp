#include "cct/query.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <limits>
#include <queue>

#include "cct/rng.hpp"

namespace cct {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct StageGuard {
  Instrumentation& instr;
  Stage prev;
  StageGuard(Instrumentation& i, Stage s) : instr(i), prev(i.stage) { i.stage = s; }
  ~StageGuard() { instr.stage = prev; }
};

bool id_less(const TrajectorySet& s, std::size_t a, std::size_t b) {
  return s[a].id() < s[b].id();
}

void sort_by_id(const TrajectorySet& s, std::vector<std::size_t>& v) {
  std::sort(v.begin(), v.end(), [&](std::size_t a, std::size_t b) { return id_less(s, a, b); });
}

// Prune stage of the guided kNN descent. Fills `candidates` (leaf store
// indices, DFS order) and returns true if a leaf with UB <= nn_shortcut was
// found (NN early termination), leaving it as the last candidate.
bool knn_prune(const CCTIndex& idx, BoundSession& session, std::size_t k, double e_add,
               std::vector<std::size_t>& candidates, double nn_shortcut) {
  StageGuard guard(session.instr(), Stage::Prune);
  // k smallest candidate upper bounds; top is beta_k once full
  std::priority_queue<double> heap;
  auto beta_k = [&] { return heap.size() == k ? heap.top() : kInf; };

  struct Frame {
    int node;
    std::vector<int> order;  // children, ascending LB
    std::size_t next = 0;
  };
  std::vector<Frame> stack;
  auto open = [&](int v) -> bool {  // returns true to stop the whole search
    ++session.instr().node_visits;
    const CCTNode& nd = idx.nodes()[v];
    if (nd.leaf()) {
      std::size_t p = nd.center;
      if (heap.size() < k) {
        candidates.push_back(p);
        heap.push(session.ub(p));
      } else if (session.lb(p) < beta_k() &&
                 (session.ub(p) < beta_k() || !session.lbfd(p, beta_k()))) {
        candidates.push_back(p);
        heap.push(session.ub(p));
        heap.pop();
      }
      return !candidates.empty() && session.ub(candidates.back()) <= nn_shortcut &&
             candidates.back() == p;
    }
    Frame f;
    f.node = v;
    f.order = nd.children;
    std::sort(f.order.begin(), f.order.end(), [&](int a, int b) {
      double la = session.lb(idx.nodes()[a].center), lb = session.lb(idx.nodes()[b].center);
      if (la != lb) return la < lb;
      return id_less(idx.store(), idx.nodes()[a].center, idx.nodes()[b].center);
    });
    stack.push_back(std::move(f));
    return false;
  };

  if (open(idx.root())) return true;
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.next >= f.order.size()) {
      stack.pop_back();
      continue;
    }
    int u = f.order[f.next++];
    const CCTNode& cu = idx.nodes()[u];
    if (heap.size() == k &&
        session.lb(cu.center) > beta_k() + cu.radius - e_add)
      continue;
    if (open(u)) return true;
  }
  return false;
}

// Reduce stage: survivors that can still matter against beta_k, plus the
// sound early admissions (UB certified below the k-th smallest lower bound).
struct ReduceOut {
  std::vector<std::size_t> admitted;   // final, no Decide work needed
  std::vector<std::size_t> survivors;  // go to Decide
  double e_add = 0;
};

ReduceOut knn_reduce(const CCTIndex& idx, BoundSession& session,
                     std::vector<std::size_t> candidates, std::size_t k,
                     const QuerySpec& spec) {
  StageGuard guard(session.instr(), Stage::Reduce);
  ReduceOut out;
  sort_by_id(idx.store(), candidates);

  std::vector<double> ubs, lbs;
  for (std::size_t p : candidates) {
    ubs.push_back(session.ub(p));
    lbs.push_back(session.lb(p));
  }
  std::vector<double> s = ubs;
  std::nth_element(s.begin(), s.begin() + (k - 1), s.end());
  double beta_k = s[k - 1];
  s = lbs;
  std::nth_element(s.begin(), s.begin() + (k - 1), s.end());
  double alpha_k_cand = s[k - 1];

  out.e_add = spec.error_model == QuerySpec::Additive ? spec.e_add
              : spec.error_model == QuerySpec::Relative ? spec.e_rel * alpha_k_cand
                                                        : 0.0;

  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    std::size_t p = candidates[i];
    if (ubs[i] <= beta_k)
      kept.push_back(p);
    else if (lbs[i] <= beta_k && !session.lbfd(p, beta_k))
      kept.push_back(p);
  }

  // alpha_k over the survivors: the k-th smallest lower bound
  std::vector<double> klbs;
  for (std::size_t p : kept) klbs.push_back(session.lb(p));
  std::nth_element(klbs.begin(), klbs.begin() + (k - 1), klbs.end());
  double alpha_k = klbs[k - 1];

  std::vector<std::size_t> early = kept;
  std::sort(early.begin(), early.end(), [&](std::size_t a, std::size_t b) {
    if (session.ub(a) != session.ub(b)) return session.ub(a) < session.ub(b);
    return id_less(idx.store(), a, b);
  });
  for (std::size_t p : early) {
    if (out.admitted.size() == k) break;
    if (session.ub(p) <= beta_k && session.ub(p) - out.e_add < alpha_k)
      out.admitted.push_back(p);
  }
  for (std::size_t p : kept)
    if (std::find(out.admitted.begin(), out.admitted.end(), p) == out.admitted.end())
      out.survivors.push_back(p);
  return out;
}

// QuickSelect over the survivor pool: the `need` smallest by exact distance.
std::vector<std::size_t> knn_decide(const CCTIndex& idx, BoundSession& session,
                                    std::vector<std::size_t> pool, std::size_t need, Rng& rng) {
  StageGuard guard(session.instr(), Stage::Decide);
  std::vector<std::size_t> result;
  while (need > 0) {
    if (pool.size() <= need) {
      result.insert(result.end(), pool.begin(), pool.end());
      break;
    }
    std::size_t pivot = pool[rng.uniform_int(pool.size())];
    double dp = session.df(pivot);
    std::vector<std::size_t> closer, farther;
    for (std::size_t x : pool) {
      if (x == pivot) continue;
      bool is_closer;
      if (session.ub(x) <= dp)
        is_closer = true;
      else if (session.lb(x) > dp)
        is_closer = false;
      else if (session.lbfd(x, dp))
        is_closer = false;
      else
        is_closer = session.dfd(x, dp);
      (is_closer ? closer : farther).push_back(x);
    }
    if (closer.size() + 1 <= need) {
      result.push_back(pivot);
      result.insert(result.end(), closer.begin(), closer.end());
      need -= closer.size() + 1;
      pool = std::move(farther);
    } else {
      pool = std::move(closer);
    }
  }
  return result;
}

QueryResult finalize(const CCTIndex& idx, BoundSession& session, std::vector<std::size_t> ids) {
  QueryResult r;
  sort_by_id(idx.store(), ids);
  r.ids = std::move(ids);
  r.instr = session.instr();
  return r;
}

}  // namespace

QueryResult query_knn(const CCTIndex& idx, const Trajectory& q, const QuerySpec& spec) {
  if (idx.empty()) throw EmptyIndex();
  const std::size_t k = static_cast<std::size_t>(spec.k);
  if (k < 1 || k > idx.store().size()) throw KTooLarge();
  Instrumentation instr;
  BoundSession session(idx.store(), idx.features(), q, instr);
  Rng rng(spec.seed);

  double prune_e = spec.error_model == QuerySpec::Additive ? spec.e_add : 0.0;
  std::vector<std::size_t> candidates;
  knn_prune(idx, session, k, prune_e, candidates, -kInf);
  ReduceOut red = knn_reduce(idx, session, std::move(candidates), k, spec);
  std::vector<std::size_t> ids = red.admitted;
  std::vector<std::size_t> rest =
      knn_decide(idx, session, std::move(red.survivors), k - ids.size(), rng);
  ids.insert(ids.end(), rest.begin(), rest.end());
  return finalize(idx, session, std::move(ids));
}

namespace {

// Shared NN Decide: alpha_2 shortcut, then a UB-ordered scan tracking the
// best exact distance.
std::size_t nn_decide(const TrajectorySet& store, BoundSession& session,
                      std::vector<std::size_t> survivors, double e_add) {
  StageGuard guard(session.instr(), Stage::Decide);
  if (survivors.size() == 1) return survivors.front();

  std::size_t p1 = survivors.front();
  for (std::size_t x : survivors)
    if (session.lb(x) < session.lb(p1) ||
        (session.lb(x) == session.lb(p1) && id_less(store, x, p1)))
      p1 = x;
  double alpha2 = kInf;
  for (std::size_t x : survivors)
    if (x != p1) alpha2 = std::min(alpha2, session.lb(x));
  if (session.ub(p1) <= alpha2 || session.dfd(p1, alpha2)) return p1;

  // interval tournament: bisect contenders' certified [LB, UB] intervals with
  // decision calls until the best upper bound clears every rival lower bound;
  // decisions are far cheaper than exact distances
  struct Contender {
    std::size_t id;
    double lo, hi;
  };
  std::vector<Contender> cs;
  cs.reserve(survivors.size());
  for (std::size_t x : survivors) cs.push_back({x, session.lb(x), session.ub(x)});
  for (int budget = 24; budget > 0; --budget) {
    std::size_t bi = 0;
    for (std::size_t i = 1; i < cs.size(); ++i)
      if (cs[i].hi < cs[bi].hi || (cs[i].hi == cs[bi].hi && id_less(store, cs[i].id, cs[bi].id)))
        bi = i;
    // rivals with a lower bound beyond the best upper bound are out
    for (std::size_t i = cs.size(); i-- > 0;)
      if (i != bi && cs[i].lo > cs[bi].hi) {
        if (i < bi) --bi;
        cs.erase(cs.begin() + i);
      }
    if (cs.size() == 1) return cs.front().id;
    std::size_t ri = bi == 0 ? 1 : 0;
    for (std::size_t i = 0; i < cs.size(); ++i)
      if (i != bi && cs[i].lo < cs[ri].lo) ri = i;
    if (cs[bi].hi <= cs[ri].lo + e_add) return cs[bi].id;
    Contender& t = cs[bi].hi - cs[bi].lo >= cs[ri].hi - cs[ri].lo ? cs[bi] : cs[ri];
    if (t.hi - t.lo < 1e-12) break;  // converged without separating: exact ties
    double mid = 0.5 * (t.lo + t.hi);
    if (session.dfd(t.id, mid))
      t.hi = mid;
    else
      t.lo = mid;
  }
  survivors.clear();
  for (const Contender& c : cs) survivors.push_back(c.id);

  std::sort(survivors.begin(), survivors.end(), [&](std::size_t a, std::size_t b) {
    if (session.ub(a) != session.ub(b)) return session.ub(a) < session.ub(b);
    return id_less(store, a, b);
  });
  std::size_t best = survivors.front();
  double d_best = session.df(best);
  for (std::size_t i = 1; i < survivors.size(); ++i) {
    std::size_t x = survivors[i];
    if (d_best <= session.lb(x) + e_add) continue;
    if (session.lbfd(x, d_best)) continue;
    if (!session.dfd(x, d_best)) continue;
    double dx = session.df(x);
    if (dx < d_best || (dx == d_best && id_less(store, x, best))) {
      best = x;
      d_best = dx;
    }
  }
  return best;
}

}  // namespace

QueryResult query_nn(const CCTIndex& idx, const Trajectory& q, const QuerySpec& spec) {
  if (idx.empty()) throw EmptyIndex();
  Instrumentation instr;
  BoundSession session(idx.store(), idx.features(), q, instr);

  double e_add = spec.error_model == QuerySpec::Additive ? spec.e_add : 0.0;
  std::vector<std::size_t> candidates;
  bool shortcut = knn_prune(idx, session, 1, e_add, candidates, e_add);
  if (shortcut) return finalize(idx, session, {candidates.back()});

  QuerySpec s1 = spec;
  s1.k = 1;
  ReduceOut red = knn_reduce(idx, session, std::move(candidates), 1, s1);
  if (!red.admitted.empty()) return finalize(idx, session, {red.admitted.front()});
  return finalize(idx, session,
                  {nn_decide(idx.store(), session, std::move(red.survivors), red.e_add)});
}

QueryResult query_rnn(const CCTIndex& idx, const Trajectory& q, const QuerySpec& spec) {
  if (idx.empty()) throw EmptyIndex();
  Instrumentation instr;
  BoundSession session(idx.store(), idx.features(), q, instr);
  const double tau = spec.tau;
  const double e_add = spec.error_model == QuerySpec::Additive ? spec.e_add
                       : spec.error_model == QuerySpec::Relative ? spec.e_rel * tau
                                                                 : 0.0;

  std::vector<std::size_t> admitted, candidates;
  {
    StageGuard guard(instr, Stage::Prune);
    std::function<void(int, bool)> visit = [&](int v, bool admit_all) {
      ++instr.node_visits;
      const CCTNode& nd = idx.nodes()[v];
      if (nd.leaf()) {
        if (admit_all)
          admitted.push_back(nd.center);
        else if (session.lb(nd.center) <= tau)
          candidates.push_back(nd.center);
        return;
      }
      for (int u : nd.children) {
        if (admit_all) {
          visit(u, true);
          continue;
        }
        const CCTNode& cu = idx.nodes()[u];
        double lbu = session.lb(cu.center);
        if (spec.kappa * lbu + cu.radius < tau &&
            session.ub(cu.center) + cu.radius <= tau) {
          visit(u, true);
          continue;
        }
        if (lbu <= tau + cu.radius) visit(u, false);
      }
    };
    visit(idx.root(), false);
  }

  std::vector<std::size_t> survivors;
  {
    StageGuard guard(instr, Stage::Reduce);
    for (std::size_t p : candidates) {
      if (session.ub(p) < tau + e_add)
        admitted.push_back(p);
      else if (!session.lbfd(p, tau))
        survivors.push_back(p);
    }
  }
  {
    StageGuard guard(instr, Stage::Decide);
    for (std::size_t p : survivors)
      if (session.dfd(p, tau)) admitted.push_back(p);
  }
  return finalize(idx, session, std::move(admitted));
}

QueryResult query_implicit(const CCTIndex& idx, const Trajectory& q, const QuerySpec& spec) {
  if (idx.empty()) throw EmptyIndex();
  Instrumentation instr;
  BoundSession session(idx.store(), idx.features(), q, instr);

  if (spec.kind == QuerySpec::Rnn) {
    const double tau = spec.tau;
    std::vector<std::size_t> admitted, candidates;
    {
      StageGuard guard(instr, Stage::Prune);
      std::function<void(int, bool)> visit = [&](int v, bool admit_all) {
        ++instr.node_visits;
        const CCTNode& nd = idx.nodes()[v];
        if (nd.leaf()) {
          if (admit_all)
            admitted.push_back(nd.center);
          else if (session.lb(nd.center) <= tau)
            candidates.push_back(nd.center);
          return;
        }
        for (int u : nd.children) {
          if (admit_all) {
            visit(u, true);
            continue;
          }
          const CCTNode& cu = idx.nodes()[u];
          double lbu = session.lb(cu.center);
          if (spec.kappa * lbu + cu.radius < tau &&
              session.ub(cu.center) + cu.radius <= tau) {
            visit(u, true);
            continue;
          }
          if (lbu <= tau + cu.radius) visit(u, false);
        }
      };
      visit(idx.root(), false);
    }
    {
      StageGuard guard(instr, Stage::Reduce);
      for (std::size_t p : candidates) {
        if (session.ub(p) < tau)
          admitted.push_back(p);
        else if (!session.lbfd(p, tau))
          admitted.push_back(p);  // survivor, kept without Decide
      }
    }
    QueryResult r = finalize(idx, session, std::move(admitted));
    double beta_max = 0;
    for (std::size_t p : r.ids) beta_max = std::max(beta_max, session.ub(p));
    r.reported_eadd = std::max(0.0, beta_max - tau);
    if (tau == 0) {
      r.zero_denominator = true;
      r.reported_erel = *r.reported_eadd > 0 ? kInf : 0.0;
    } else {
      r.reported_erel = *r.reported_eadd / tau;
    }
    r.instr = instr;
    return r;
  }

  const std::size_t k = spec.kind == QuerySpec::Nn ? 1 : static_cast<std::size_t>(spec.k);
  if (k < 1 || k > idx.store().size()) throw KTooLarge();
  std::vector<std::size_t> candidates;
  knn_prune(idx, session, k, 0.0, candidates, -kInf);

  StageGuard guard(instr, Stage::Reduce);
  double beta_k;
  {
    std::vector<double> ubs;
    for (std::size_t p : candidates) ubs.push_back(session.ub(p));
    std::nth_element(ubs.begin(), ubs.begin() + (k - 1), ubs.end());
    beta_k = ubs[k - 1];
  }
  std::vector<std::size_t> kept;
  for (std::size_t p : candidates) {
    if (session.ub(p) <= beta_k)
      kept.push_back(p);
    else if (session.lb(p) <= beta_k && !session.lbfd(p, beta_k))
      kept.push_back(p);
  }
  std::vector<double> lbs;
  for (std::size_t p : kept) lbs.push_back(session.lb(p));
  std::nth_element(lbs.begin(), lbs.begin() + (k - 1), lbs.end());
  double alpha_k = lbs[k - 1];

  std::sort(kept.begin(), kept.end(), [&](std::size_t a, std::size_t b) {
    if (session.ub(a) != session.ub(b)) return session.ub(a) < session.ub(b);
    return id_less(idx.store(), a, b);
  });
  kept.resize(k);
  QueryResult r = finalize(idx, session, std::move(kept));
  r.reported_eadd = std::max(0.0, beta_k - alpha_k);
  if (alpha_k == 0) {
    r.zero_denominator = true;
    r.reported_erel = *r.reported_eadd > 0 ? kInf : 0.0;
  } else {
    r.reported_erel = *r.reported_eadd / alpha_k;
  }
  r.instr = instr;
  return r;
}

QueryResult run_query(const CCTIndex& idx, const Trajectory& q, const QuerySpec& spec) {
  if (spec.error_model == QuerySpec::Implicit) return query_implicit(idx, q, spec);
  switch (spec.kind) {
    case QuerySpec::Knn:
      return query_knn(idx, q, spec);
    case QuerySpec::Nn:
      return query_nn(idx, q, spec);
    case QuerySpec::Rnn:
      return query_rnn(idx, q, spec);
  }
  throw Error("unknown query kind");
}

QueryResult linear_scan_nn(const TrajectorySet& s, const std::vector<TrajectoryFeatures>& features,
                           const Trajectory& q) {
  if (s.empty()) throw EmptySet();
  Instrumentation instr;
  BoundSession session(s, features, q, instr);

  double beta = kInf;
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (session.lb(i) >= beta) continue;
    if (beta < kInf && session.lbfd(i, beta)) continue;
    candidates.push_back(i);
    beta = std::min(beta, session.ub(i));
  }
  std::vector<std::size_t> survivors;
  for (std::size_t p : candidates)
    if (session.lb(p) <= beta) survivors.push_back(p);

  QueryResult r;
  r.ids = {nn_decide(s, session, survivors, 0.0)};
  r.instr = instr;
  return r;
}

BruteResult brute_force(const TrajectorySet& s, const Trajectory& q, const QuerySpec& spec,
                        std::size_t cap) {
  if (const char* env = std::getenv("CCT_ORACLE_CAP")) cap = std::strtoull(env, nullptr, 10);
  if (s.size() > cap) throw OracleCapExceeded();
  if (s.empty()) throw EmptySet();

  std::vector<std::pair<double, std::size_t>> all;
  for (std::size_t i = 0; i < s.size(); ++i)
    all.emplace_back(distance_exact(s[i], q), i);
  std::sort(all.begin(), all.end(), [&](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return s[a.second].id() < s[b.second].id();
  });

  BruteResult r;
  std::size_t take = all.size();
  if (spec.kind == QuerySpec::Nn)
    take = 1;
  else if (spec.kind == QuerySpec::Knn)
    take = std::min<std::size_t>(spec.k, all.size());
  for (std::size_t i = 0; i < take; ++i) {
    if (spec.kind == QuerySpec::Rnn && all[i].first > spec.tau) break;
    r.ids.push_back(all[i].second);
    r.dists.push_back(all[i].first);
  }
  return r;
}

}  // namespace cct
