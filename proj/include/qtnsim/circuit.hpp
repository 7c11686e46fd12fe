#pragma once

#include <array>
#include <complex>
#include <vector>

#include "qtnsim/graph.hpp"

namespace qtnsim {

using cd = std::complex<double>;

// QAOA parameters: p cost angles and p mixer angles.
struct Angles {
  std::vector<double> gammas;
  std::vector<double> betas;

  int depth() const { return static_cast<int>(gammas.size()); }
  void validate() const;  // equal lengths, p >= 1, finite entries
};

enum class GateKind {
  PlusState,     // |+> preparation, 1 qubit
  PhaseZZ,       // exp(-i gamma (1 - Z Z) / 2), 2 qubits, diagonal
  MixerX,        // exp(-i beta X), 1 qubit
  ObservableZZ,  // Z x Z, 2 qubits, diagonal
  ConjPhaseZZ,
  ConjMixerX,
  BraPlus,       // <+| closure, 1 qubit
};

bool is_diagonal(GateKind k);
int gate_arity(GateKind k);

struct Gate {
  GateKind kind;
  double angle = 0.0;              // gamma or beta; unused for fixed gates
  std::array<int, 2> qubits{};     // qubits[1] unused for 1-qubit gates
};

// Dense numeric content of a gate.
struct GateData {
  enum class Form { Ket2, Mat2, Diag4 } form;
  std::vector<cd> values;  // 2 entries (Ket2), 4 row-major (Mat2), 4 diagonal (Diag4)
};

GateData gate_matrix(const Gate& g);

struct Circuit {
  int n_qubits = 0;
  std::vector<Gate> gates;  // execution order
};

// |+>^n, then p layers of PhaseZZ over edges (lexicographic) and MixerX over
// qubits (ascending).
Circuit build_ansatz(const Graph& g, const Angles& a);

struct EdgeExpectationCircuit {
  Circuit circuit;       // on the lightcone qubits; contracts to the scalar e_jk
  Lightcone cone;
};

// <ansatz| Z_j Z_k |ansatz> restricted to the lightcone of edge e:
// forward ansatz, ObservableZZ on the relabeled edge, then the ansatz
// conjugated in reverse order with PlusState replaced by BraPlus.
EdgeExpectationCircuit build_edge_expectation_circuit(const Graph& g, Edge e,
                                                      const Angles& a);

}  // namespace qtnsim
