#include "qtnsim/circuit.hpp"

#include <cmath>

#include "doctest.h"
#include "qtnsim/errors.hpp"

using namespace qtnsim;

namespace {
constexpr double kEps = 1e-12;

bool close(cd a, cd b, double eps = kEps) { return std::abs(a - b) <= eps; }
}  // namespace

TEST_CASE("gate_matrix fixed points") {
  const GateData zz0 = gate_matrix({GateKind::PhaseZZ, 0.0, {0, 1}});
  REQUIRE(zz0.form == GateData::Form::Diag4);
  for (cd v : zz0.values) CHECK(close(v, cd{1.0, 0.0}));

  const GateData x0 = gate_matrix({GateKind::MixerX, 0.0, {0, 0}});
  REQUIRE(x0.form == GateData::Form::Mat2);
  CHECK(close(x0.values[0], cd{1.0, 0.0}));
  CHECK(close(x0.values[1], cd{0.0, 0.0}));
  CHECK(close(x0.values[2], cd{0.0, 0.0}));
  CHECK(close(x0.values[3], cd{1.0, 0.0}));

  const GateData xh = gate_matrix({GateKind::MixerX, M_PI / 2, {0, 0}});
  CHECK(close(xh.values[0], cd{0.0, 0.0}));
  CHECK(close(xh.values[1], cd{0.0, -1.0}));
  CHECK(close(xh.values[2], cd{0.0, -1.0}));
  CHECK(close(xh.values[3], cd{0.0, 0.0}));

  const GateData obs = gate_matrix({GateKind::ObservableZZ, 0.0, {0, 1}});
  CHECK(close(obs.values[0], cd{1.0, 0.0}));
  CHECK(close(obs.values[1], cd{-1.0, 0.0}));
  CHECK(close(obs.values[2], cd{-1.0, 0.0}));
  CHECK(close(obs.values[3], cd{1.0, 0.0}));
}

TEST_CASE("PhaseZZ diagonal and conjugate") {
  const double gamma = 0.7;
  const GateData zz = gate_matrix({GateKind::PhaseZZ, gamma, {0, 1}});
  const cd w = std::exp(cd{0.0, -gamma});
  CHECK(close(zz.values[0], cd{1.0, 0.0}));
  CHECK(close(zz.values[1], w));
  CHECK(close(zz.values[2], w));
  CHECK(close(zz.values[3], cd{1.0, 0.0}));

  const GateData czz = gate_matrix({GateKind::ConjPhaseZZ, gamma, {0, 1}});
  for (int i = 0; i < 4; ++i) CHECK(close(czz.values[i], std::conj(zz.values[i])));
}

TEST_CASE("gate unitarity to 1e-12") {
  for (double angle : {0.1, 0.7, 1.3, 2.9}) {
    const GateData zz = gate_matrix({GateKind::PhaseZZ, angle, {0, 1}});
    for (cd v : zz.values) CHECK(std::abs(std::abs(v) - 1.0) <= kEps);

    const GateData x = gate_matrix({GateKind::MixerX, angle, {0, 0}});
    // U^dagger U for the 2x2 matrix
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        cd acc{0.0, 0.0};
        for (int k = 0; k < 2; ++k)
          acc += std::conj(x.values[k * 2 + i]) * x.values[k * 2 + j];
        CHECK(close(acc, i == j ? cd{1.0, 0.0} : cd{0.0, 0.0}));
      }
  }
}

TEST_CASE("build_ansatz gate counts") {
  const Graph k4 = random_regular(4, 3, 0);
  const Circuit c1 = build_ansatz(k4, Angles{{0.5}, {0.3}});
  CHECK(c1.gates.size() == 14);  // 4 plus + 6 phase + 4 mixer

  const Graph g30 = random_regular(30, 3, 42);
  Angles a4{{0.1, 0.2, 0.3, 0.4}, {0.4, 0.3, 0.2, 0.1}};
  const Circuit c4 = build_ansatz(g30, a4);
  CHECK(c4.gates.size() == 330);  // 30 + 4*(45+30)
}

TEST_CASE("ansatz layer structure") {
  const Graph tri = make_graph(3, {{0, 1}, {1, 2}, {0, 2}});
  const Circuit c = build_ansatz(tri, Angles{{0.5, 0.6}, {0.3, 0.2}});
  // plus states first, then alternating phase/mixer blocks
  for (int i = 0; i < 3; ++i) CHECK(c.gates[i].kind == GateKind::PlusState);
  CHECK(c.gates[3].kind == GateKind::PhaseZZ);
  CHECK(c.gates[3].angle == doctest::Approx(0.5));
  CHECK(c.gates[6].kind == GateKind::MixerX);
  CHECK(c.gates[9].kind == GateKind::PhaseZZ);
  CHECK(c.gates[9].angle == doctest::Approx(0.6));
}

TEST_CASE("edge expectation circuit is a structural palindrome") {
  const Graph g = random_regular(8, 3, 2);
  const Angles a{{0.4, 0.2}, {0.1, 0.3}};
  const EdgeExpectationCircuit ec = build_edge_expectation_circuit(g, g.edges[3], a);
  const std::size_t total = ec.circuit.gates.size();
  REQUIRE(total % 2 == 1);
  const std::size_t half = total / 2;
  CHECK(ec.circuit.gates[half].kind == GateKind::ObservableZZ);
  for (std::size_t i = 0; i < half; ++i) {
    const Gate& fwd = ec.circuit.gates[i];
    const Gate& rev = ec.circuit.gates[total - 1 - i];
    CHECK(fwd.qubits == rev.qubits);
    CHECK(fwd.angle == rev.angle);
    switch (fwd.kind) {
      case GateKind::PlusState: CHECK(rev.kind == GateKind::BraPlus); break;
      case GateKind::PhaseZZ: CHECK(rev.kind == GateKind::ConjPhaseZZ); break;
      case GateKind::MixerX: CHECK(rev.kind == GateKind::ConjMixerX); break;
      default: FAIL("unexpected forward gate");
    }
  }
}

TEST_CASE("edge expectation circuit stays within the lightcone") {
  const Graph g = random_regular(30, 3, 42);
  const Angles a{{0.1, 0.2, 0.3, 0.4}, {0.4, 0.3, 0.2, 0.1}};
  const EdgeExpectationCircuit ec = build_edge_expectation_circuit(g, g.edges[0], a);
  CHECK(ec.circuit.n_qubits <= 30);
  CHECK(ec.circuit.n_qubits == ec.cone.subgraph.n);
}

TEST_CASE("edge expectation circuit rejects a missing edge") {
  const Graph g = make_graph(4, {{0, 1}, {2, 3}});
  CHECK_THROWS_AS(build_edge_expectation_circuit(g, Edge{1, 2}, Angles{{0.1}, {0.1}}),
                  InvalidInputError);
}

TEST_CASE("angles validation") {
  CHECK_THROWS_AS(Angles({}, {}).validate(), InvalidInputError);
  CHECK_THROWS_AS(Angles({0.1}, {0.1, 0.2}).validate(), InvalidInputError);
  CHECK_THROWS_AS(Angles({std::nan("")}, {0.1}).validate(), InvalidInputError);
}
