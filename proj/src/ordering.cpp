#include "qtnsim/ordering.hpp"

#include <algorithm>
#include <limits>

#include "qtnsim/errors.hpp"

namespace qtnsim {

int EliminationOrder::predicted_max_width() const {
  int m = 0;
  for (int w : predicted_widths) m = std::max(m, w);
  return m;
}

EliminationOrder greedy_order(const LineGraph& lg) {
  std::map<VarId, std::set<VarId>> adj = lg.adj;
  EliminationOrder ord;
  ord.order.reserve(adj.size());

  while (!adj.empty()) {
    VarId best = -1;
    std::size_t best_deg = std::numeric_limits<std::size_t>::max();
    for (const auto& [v, nbrs] : adj)  // map iteration is id-ascending
      if (nbrs.size() < best_deg) {
        best_deg = nbrs.size();
        best = v;
      }

    const std::set<VarId> nbrs = adj[best];
    ord.order.push_back(best);
    ord.predicted_widths.push_back(static_cast<int>(nbrs.size()) + 1);

    for (VarId a : nbrs) {
      adj[a].erase(best);
      for (VarId b : nbrs)
        if (a != b) adj[a].insert(b);
    }
    adj.erase(best);
  }
  return ord;
}

ContractionSchedule assign_buckets(const TensorNetwork& net,
                                   const EliminationOrder& ord) {
  std::map<VarId, int> pos;
  for (std::size_t i = 0; i < ord.order.size(); ++i)
    pos[ord.order[i]] = static_cast<int>(i);

  ContractionSchedule sched;
  sched.buckets.resize(ord.order.size());
  for (std::size_t i = 0; i < ord.order.size(); ++i)
    sched.buckets[i].sum_vars = {ord.order[i]};

  for (const Tensor& t : net.tensors) {
    if (t.vars.empty()) continue;
    int earliest = std::numeric_limits<int>::max();
    for (VarId v : t.vars) {
      auto it = pos.find(v);
      if (it == pos.end())
        throw InvalidInputError("assign_buckets: variable " + std::to_string(v) +
                                " missing from elimination order");
      earliest = std::min(earliest, it->second);
    }
    sched.buckets[earliest].tensors.push_back(t);
  }
  return sched;
}

}  // namespace qtnsim
