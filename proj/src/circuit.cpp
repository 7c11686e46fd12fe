#include "qtnsim/circuit.hpp"

#include <cmath>

#include "qtnsim/errors.hpp"

namespace qtnsim {

void Angles::validate() const {
  if (gammas.empty() || gammas.size() != betas.size())
    throw InvalidInputError("angles: gammas and betas must have equal length p >= 1");
  for (double x : gammas)
    if (!std::isfinite(x)) throw InvalidInputError("angles: non-finite gamma");
  for (double x : betas)
    if (!std::isfinite(x)) throw InvalidInputError("angles: non-finite beta");
}

bool is_diagonal(GateKind k) {
  return k == GateKind::PhaseZZ || k == GateKind::ConjPhaseZZ ||
         k == GateKind::ObservableZZ;
}

int gate_arity(GateKind k) {
  switch (k) {
    case GateKind::PhaseZZ:
    case GateKind::ConjPhaseZZ:
    case GateKind::ObservableZZ:
      return 2;
    default:
      return 1;
  }
}

namespace {

// Diagonal of exp(-i g (1 - Z Z) / 2) over (z_j, z_k): entries 1 on the
// aligned assignments, e^{-i g} on the anti-aligned ones.
std::vector<cd> phase_zz_diag(double gamma) {
  const cd w = std::exp(cd{0.0, -gamma});
  return {cd{1.0, 0.0}, w, w, cd{1.0, 0.0}};
}

std::vector<cd> mixer_x_matrix(double beta) {
  const double c = std::cos(beta), s = std::sin(beta);
  return {cd{c, 0.0}, cd{0.0, -s}, cd{0.0, -s}, cd{c, 0.0}};
}

std::vector<cd> conjugated(std::vector<cd> v) {
  for (cd& x : v) x = std::conj(x);
  return v;
}

}  // namespace

GateData gate_matrix(const Gate& g) {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  switch (g.kind) {
    case GateKind::PlusState:
    case GateKind::BraPlus:
      return {GateData::Form::Ket2, {cd{inv_sqrt2, 0.0}, cd{inv_sqrt2, 0.0}}};
    case GateKind::PhaseZZ:
      return {GateData::Form::Diag4, phase_zz_diag(g.angle)};
    case GateKind::ConjPhaseZZ:
      return {GateData::Form::Diag4, conjugated(phase_zz_diag(g.angle))};
    case GateKind::ObservableZZ:
      return {GateData::Form::Diag4,
              {cd{1.0, 0.0}, cd{-1.0, 0.0}, cd{-1.0, 0.0}, cd{1.0, 0.0}}};
    case GateKind::MixerX:
      return {GateData::Form::Mat2, mixer_x_matrix(g.angle)};
    case GateKind::ConjMixerX:
      return {GateData::Form::Mat2, conjugated(mixer_x_matrix(g.angle))};
  }
  throw InvalidInputError("unknown gate kind");
}

Circuit build_ansatz(const Graph& g, const Angles& a) {
  a.validate();
  Circuit c;
  c.n_qubits = g.n;
  for (int q = 0; q < g.n; ++q)
    c.gates.push_back(Gate{GateKind::PlusState, 0.0, {q, 0}});
  for (int k = 0; k < a.depth(); ++k) {
    for (const Edge& e : g.edges)
      c.gates.push_back(Gate{GateKind::PhaseZZ, a.gammas[k], {e.u, e.v}});
    for (int q = 0; q < g.n; ++q)
      c.gates.push_back(Gate{GateKind::MixerX, a.betas[k], {q, 0}});
  }
  return c;
}

EdgeExpectationCircuit build_edge_expectation_circuit(const Graph& g, Edge e,
                                                      const Angles& a) {
  a.validate();
  if (e.u > e.v) std::swap(e.u, e.v);
  if (!g.has_edge(e)) throw InvalidInputError("expectation circuit: edge not in graph");

  EdgeExpectationCircuit result;
  result.cone = lightcone(g, e, a.depth());

  const Circuit forward = build_ansatz(result.cone.subgraph, a);
  Circuit& c = result.circuit;
  c.n_qubits = forward.n_qubits;
  c.gates = forward.gates;
  c.gates.push_back(Gate{GateKind::ObservableZZ, 0.0,
                         {result.cone.target.u, result.cone.target.v}});
  for (auto it = forward.gates.rbegin(); it != forward.gates.rend(); ++it) {
    Gate conj = *it;
    switch (conj.kind) {
      case GateKind::PlusState: conj.kind = GateKind::BraPlus; break;
      case GateKind::PhaseZZ: conj.kind = GateKind::ConjPhaseZZ; break;
      case GateKind::MixerX: conj.kind = GateKind::ConjMixerX; break;
      default:
        throw InvalidInputError("unexpected gate kind in ansatz");
    }
    c.gates.push_back(conj);
  }
  return result;
}

}  // namespace qtnsim
