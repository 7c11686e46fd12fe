#pragma once

#include <vector>

#include "qtnsim/network.hpp"

namespace qtnsim {

struct EliminationOrder {
  std::vector<VarId> order;          // permutation of the variables
  std::vector<int> predicted_widths; // closed-neighborhood size per step

  int predicted_max_width() const;
};

// Greedy minimum-degree elimination on the line graph. Ties break toward the
// smallest variable id; eliminated nodes clique their neighborhood.
EliminationOrder greedy_order(const LineGraph& lg);

// One elimination step: the variables summed here plus the tensors currently
// scheduled for it. sum_vars has one entry before merging.
struct Bucket {
  std::vector<VarId> sum_vars;
  std::vector<Tensor> tensors;
};

struct ContractionSchedule {
  std::vector<Bucket> buckets;  // elimination order
  int merges_applied = 0;
  int merges_skipped = 0;
};

// Places each tensor in the bucket of its earliest variable in the order.
// Empty buckets are kept so bucket index tracks the order.
ContractionSchedule assign_buckets(const TensorNetwork& net,
                                   const EliminationOrder& ord);

}  // namespace qtnsim
