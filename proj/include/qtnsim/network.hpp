#pragma once

#include <map>
#include <set>
#include <vector>

#include "qtnsim/circuit.hpp"
#include "qtnsim/tensor.hpp"

namespace qtnsim {

struct TensorNetwork {
  std::vector<Tensor> tensors;
  std::vector<VarId> free_vars;  // empty for expectation-value networks
  VarId next_var_id = 0;
};

// Maps a circuit to a tensor network with one live variable per qubit wire.
// Diagonal gates attach to the current wire variables without creating new
// ones; non-diagonal gates advance the wire with a fresh output variable.
TensorNetwork circuit_to_network(const Circuit& c);

// Variable co-occurrence graph: nodes are variables, adjacent iff they share
// a tensor. Isolated variables keep an (empty) adjacency entry.
struct LineGraph {
  std::map<VarId, std::set<VarId>> adj;
};

LineGraph line_graph(const TensorNetwork& net);

}  // namespace qtnsim
