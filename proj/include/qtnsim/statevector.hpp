#pragma once

#include <complex>
#include <vector>

#include "qtnsim/circuit.hpp"
#include "qtnsim/graph.hpp"

namespace qtnsim {

// Brute-force amplitude-vector oracle. Qubit 0 is the most significant bit
// of the basis-state index.
class StateVector {
 public:
  static StateVector plus_state(int n_qubits, int cap = kDefaultCap);
  static StateVector from_amplitudes(int n_qubits, std::vector<cd> amps);

  int n_qubits() const { return n_; }
  const std::vector<cd>& amplitudes() const { return amps_; }

  void apply_phase_zz(int q1, int q2, double gamma);  // elementwise phase
  void apply_mixer_x(int q, double beta);             // stride-pair update
  double norm() const;

  static constexpr int kDefaultCap = 24;

 private:
  StateVector(int n, std::vector<cd> amps) : n_(n), amps_(std::move(amps)) {}
  int n_;
  std::vector<cd> amps_;
};

// The QAOA ansatz evolved with the same gate order and phase convention as
// circuits::build_ansatz.
StateVector run_ansatz(const Graph& g, const Angles& a,
                       int cap = StateVector::kDefaultCap);

// <Z_u Z_v> in the given state.
double expectation_zz(const StateVector& sv, Edge e);

// <C> assembled from per-edge terms: |E|/2 - 1/2 sum <Z Z>.
double expectation_cost(const StateVector& sv, const Graph& g);

// <C> as sum_z |amp(z)|^2 * maxcut_value(g, z).
double expectation_cost_direct(const StateVector& sv, const Graph& g);

}  // namespace qtnsim
