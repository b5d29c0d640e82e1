#ifndef CCT_INSTRUMENTATION_HPP
#define CCT_INSTRUMENTATION_HPP

#include <cstdint>

namespace cct {

/// Query/build stage a counter event is attributed to.
enum class Stage { Other = 0, Prune = 1, Reduce = 2, Decide = 3 };

struct StageCounters {
  std::int64_t df = 0;   // continuous Fréchet distance computations
  std::int64_t dfd = 0;  // free-space decision procedure calls
};

/// Cost model: expensive trajectory-pair calls are the primary
/// metric, bound invocations and node visits are secondary.
struct Instrumentation {
  std::int64_t df_calls = 0;
  std::int64_t dfd_calls = 0;
  std::int64_t lb_calls = 0;    // LB_F group evaluations
  std::int64_t ub_calls = 0;    // UB_F group evaluations
  std::int64_t lbfd_calls = 0;  // LB_FD (traversal race) evaluations
  std::int64_t seg_calls = 0;   // segment-distance precomputations
  std::int64_t node_visits = 0;
  StageCounters stages[4];
  Stage stage = Stage::Other;

  void count_df() {
    ++df_calls;
    ++stages[static_cast<int>(stage)].df;
  }
  void count_dfd() {
    ++dfd_calls;
    ++stages[static_cast<int>(stage)].dfd;
  }
  std::int64_t bound_calls() const { return lb_calls + ub_calls + lbfd_calls + seg_calls; }

  Instrumentation& operator+=(const Instrumentation& o) {
    df_calls += o.df_calls;
    dfd_calls += o.dfd_calls;
    lb_calls += o.lb_calls;
    ub_calls += o.ub_calls;
    lbfd_calls += o.lbfd_calls;
    seg_calls += o.seg_calls;
    node_visits += o.node_visits;
    for (int i = 0; i < 4; ++i) {
      stages[i].df += o.stages[i].df;
      stages[i].dfd += o.stages[i].dfd;
    }
    return *this;
  }
};

}  // namespace cct

#endif
