#include "qtnsim/statevector.hpp"

#include <cmath>

#include "qtnsim/errors.hpp"

namespace qtnsim {

StateVector StateVector::plus_state(int n_qubits, int cap) {
  if (n_qubits < 1) throw InvalidInputError("state vector needs at least one qubit");
  if (n_qubits > cap)
    throw ResourceError("state vector of " + std::to_string(n_qubits) +
                        " qubits exceeds cap " + std::to_string(cap));
  const std::size_t dim = std::size_t{1} << n_qubits;
  const cd amp{1.0 / std::sqrt(static_cast<double>(dim)), 0.0};
  return StateVector(n_qubits, std::vector<cd>(dim, amp));
}

StateVector StateVector::from_amplitudes(int n_qubits, std::vector<cd> amps) {
  if (n_qubits < 1 || amps.size() != (std::size_t{1} << n_qubits))
    throw InvalidInputError("from_amplitudes: length must be 2^n");
  return StateVector(n_qubits, std::move(amps));
}

void StateVector::apply_phase_zz(int q1, int q2, double gamma) {
  if (q1 == q2 || q1 < 0 || q2 < 0 || q1 >= n_ || q2 >= n_)
    throw InvalidInputError("apply_phase_zz: bad qubit pair");
  // Qubit 0 is the most significant bit.
  const std::size_t m1 = std::size_t{1} << (n_ - 1 - q1);
  const std::size_t m2 = std::size_t{1} << (n_ - 1 - q2);
  const cd w = std::exp(cd{0.0, -gamma});
  for (std::size_t z = 0; z < amps_.size(); ++z)
    if (((z & m1) != 0) != ((z & m2) != 0)) amps_[z] *= w;
}

void StateVector::apply_mixer_x(int q, double beta) {
  if (q < 0 || q >= n_) throw InvalidInputError("apply_mixer_x: bad qubit");
  const std::size_t mask = std::size_t{1} << (n_ - 1 - q);
  const cd c{std::cos(beta), 0.0};
  const cd ms{0.0, -std::sin(beta)};
  for (std::size_t z = 0; z < amps_.size(); ++z) {
    if (z & mask) continue;
    const cd a = amps_[z], b = amps_[z | mask];
    amps_[z] = c * a + ms * b;
    amps_[z | mask] = ms * a + c * b;
  }
}

double StateVector::norm() const {
  double s = 0.0;
  for (const cd& a : amps_) s += std::norm(a);
  return std::sqrt(s);
}

StateVector run_ansatz(const Graph& g, const Angles& a, int cap) {
  a.validate();
  StateVector sv = StateVector::plus_state(g.n, cap);
  for (int k = 0; k < a.depth(); ++k) {
    for (const Edge& e : g.edges) sv.apply_phase_zz(e.u, e.v, a.gammas[k]);
    for (int q = 0; q < g.n; ++q) sv.apply_mixer_x(q, a.betas[k]);
  }
  return sv;
}

double expectation_zz(const StateVector& sv, Edge e) {
  const int n = sv.n_qubits();
  if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n)
    throw InvalidInputError("expectation_zz: endpoint out of range");
  const std::size_t m1 = std::size_t{1} << (n - 1 - e.u);
  const std::size_t m2 = std::size_t{1} << (n - 1 - e.v);
  double acc = 0.0;
  const auto& amps = sv.amplitudes();
  for (std::size_t z = 0; z < amps.size(); ++z) {
    const double sign = (((z & m1) != 0) != ((z & m2) != 0)) ? -1.0 : 1.0;
    acc += sign * std::norm(amps[z]);
  }
  return acc;
}

double expectation_cost(const StateVector& sv, const Graph& g) {
  double sum = 0.0;
  for (const Edge& e : g.edges) sum += expectation_zz(sv, e);
  return 0.5 * static_cast<double>(g.edges.size()) - 0.5 * sum;
}

double expectation_cost_direct(const StateVector& sv, const Graph& g) {
  if (sv.n_qubits() != g.n)
    throw InvalidInputError("expectation_cost_direct: qubit/vertex mismatch");
  const auto& amps = sv.amplitudes();
  double acc = 0.0;
  std::string assignment(g.n, '0');
  for (std::size_t z = 0; z < amps.size(); ++z) {
    for (int q = 0; q < g.n; ++q)
      assignment[q] = (z >> (g.n - 1 - q)) & 1 ? '1' : '0';
    acc += std::norm(amps[z]) * maxcut_value(g, assignment);
  }
  return acc;
}

}  // namespace qtnsim
