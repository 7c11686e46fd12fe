#include "qtnsim/network.hpp"

#include <algorithm>

#include "qtnsim/errors.hpp"

namespace qtnsim {

std::vector<VarId> unique_vars(const std::vector<Tensor>& tensors) {
  std::vector<VarId> vars;
  for (const Tensor& t : tensors)
    vars.insert(vars.end(), t.vars.begin(), t.vars.end());
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  return vars;
}

TensorNetwork circuit_to_network(const Circuit& c) {
  TensorNetwork net;
  std::vector<VarId> wire(c.n_qubits, -1);  // current variable per qubit

  auto fresh = [&net]() { return net.next_var_id++; };

  for (const Gate& g : c.gates) {
    const GateData gd = gate_matrix(g);
    const int q0 = g.qubits[0];
    switch (gd.form) {
      case GateData::Form::Ket2: {
        if (g.kind == GateKind::PlusState) {
          wire[q0] = fresh();
          net.tensors.push_back(Tensor{"plus", {wire[q0]}, gd.values});
        } else {  // BraPlus closes the wire
          if (wire[q0] < 0) throw InvalidInputError("BraPlus on unopened wire");
          net.tensors.push_back(Tensor{"bra_plus", {wire[q0]}, gd.values});
        }
        break;
      }
      case GateData::Form::Diag4: {
        const int q1 = g.qubits[1];
        if (q0 == q1) throw InvalidInputError("two-qubit gate on equal qubits");
        if (wire[q0] < 0 || wire[q1] < 0)
          throw InvalidInputError("gate on unopened wire");
        // The diagonal of the 4x4 matrix reshaped over the two wire
        // variables; no new variables.
        const char* label = g.kind == GateKind::ObservableZZ ? "zz_obs" : "zz_phase";
        net.tensors.push_back(Tensor{label, {wire[q0], wire[q1]}, gd.values});
        break;
      }
      case GateData::Form::Mat2: {
        if (wire[q0] < 0) throw InvalidInputError("gate on unopened wire");
        const VarId out = fresh();
        // Axis order (out, in): data[out*2 + in] = M[out][in].
        net.tensors.push_back(Tensor{"mixer_x", {out, wire[q0]}, gd.values});
        wire[q0] = out;
        break;
      }
    }
  }
  return net;
}

LineGraph line_graph(const TensorNetwork& net) {
  LineGraph lg;
  for (VarId v = 0; v < net.next_var_id; ++v) lg.adj[v];
  for (const Tensor& t : net.tensors)
    for (std::size_t i = 0; i < t.vars.size(); ++i) {
      lg.adj[t.vars[i]];
      for (std::size_t j = i + 1; j < t.vars.size(); ++j) {
        lg.adj[t.vars[i]].insert(t.vars[j]);
        lg.adj[t.vars[j]].insert(t.vars[i]);
      }
    }
  return lg;
}

}  // namespace qtnsim
