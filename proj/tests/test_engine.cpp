#include "qtnsim/engine.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "doctest.h"
#include "qtnsim/errors.hpp"
#include "qtnsim/statevector.hpp"

using namespace qtnsim;

namespace {

const NaiveBackend kNaive;
const MatmulBackend kMatmul;

// Test-local brute-force oracle: iterates every assignment of the bucket's
// variables with plain maps, independent of the backends' index machinery.
Tensor oracle_contract(const Bucket& b) {
  std::vector<VarId> uniq = unique_vars(b.tensors);
  std::vector<VarId> kept;
  for (VarId v : uniq)
    if (std::find(b.sum_vars.begin(), b.sum_vars.end(), v) == b.sum_vars.end())
      kept.push_back(v);

  Tensor out{"oracle", kept, std::vector<cd>(std::size_t{1} << kept.size(), cd{})};
  const std::size_t total = std::size_t{1} << uniq.size();
  for (std::size_t a = 0; a < total; ++a) {
    std::map<VarId, int> bits;
    for (std::size_t i = 0; i < uniq.size(); ++i)
      bits[uniq[i]] = (a >> (uniq.size() - 1 - i)) & 1;
    cd prod{1.0, 0.0};
    for (const Tensor& t : b.tensors) {
      std::size_t off = 0;
      for (VarId v : t.vars) off = off * 2 + bits[v];
      prod *= t.data[off];
    }
    std::size_t koff = 0;
    for (VarId v : kept) koff = koff * 2 + bits[v];
    out.data[koff] += prod;
  }
  return out;
}

Bucket random_bucket(int n_tensors, int n_vars, int n_sum, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Bucket b;
  for (int t = 0; t < n_tensors; ++t) {
    std::vector<VarId> vars;
    for (VarId v = 0; v < n_vars; ++v)
      if (rng() % 2 || (t == 0))  // first tensor carries all vars
        vars.push_back(v);
    if (vars.empty()) vars.push_back(static_cast<VarId>(rng() % n_vars));
    std::shuffle(vars.begin(), vars.end(), rng);
    Tensor tensor{"rnd", vars, {}};
    tensor.data.resize(std::size_t{1} << vars.size());
    for (cd& x : tensor.data) x = cd{dist(rng), dist(rng)};
    b.tensors.push_back(std::move(tensor));
  }
  for (VarId v = 0; v < n_sum; ++v) b.sum_vars.push_back(v);
  return b;
}

double rel_err(cd a, cd b) {
  return std::abs(a - b) / std::max(1.0, std::abs(b));
}

ContractionSchedule schedule_for(const TensorNetwork& net) {
  return assign_buckets(net, greedy_order(line_graph(net)));
}

}  // namespace

TEST_CASE("contracting <+|+> gives 1.0") {
  Bucket b;
  const double r = 1.0 / std::sqrt(2.0);
  b.tensors.push_back(Tensor{"plus", {0}, {cd{r, 0}, cd{r, 0}}});
  b.tensors.push_back(Tensor{"bra", {0}, {cd{r, 0}, cd{r, 0}}});
  b.sum_vars = {0};
  for (const ContractionBackend* backend : {(const ContractionBackend*)&kNaive,
                                            (const ContractionBackend*)&kMatmul}) {
    const Tensor t = backend->contract(b);
    REQUIRE(t.vars.empty());
    CHECK(std::abs(t.data[0] - cd{1.0, 0.0}) < 1e-12);
  }
}

TEST_CASE("backends match the brute-force oracle on random buckets") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const Bucket b = random_bucket(2 + trial % 4, 3 + trial % 5, 1 + trial % 2, rng);
    const Tensor expected = oracle_contract(b);
    for (const ContractionBackend* backend : {(const ContractionBackend*)&kNaive,
                                              (const ContractionBackend*)&kMatmul}) {
      const Tensor got = backend->contract(b);
      REQUIRE(got.vars == expected.vars);
      for (std::size_t i = 0; i < got.data.size(); ++i)
        CHECK(std::abs(got.data[i] - expected.data[i]) < 1e-12);
    }
  }
}

TEST_CASE("result axes come out in ascending variable id") {
  std::mt19937_64 rng(5);
  const Bucket b = random_bucket(3, 6, 2, rng);
  for (const ContractionBackend* backend : {(const ContractionBackend*)&kNaive,
                                            (const ContractionBackend*)&kMatmul}) {
    const Tensor t = backend->contract(b);
    CHECK(std::is_sorted(t.vars.begin(), t.vars.end()));
  }
}

TEST_CASE("memory cap refuses wide results and names the width") {
  std::mt19937_64 rng(9);
  const Bucket b = random_bucket(2, 6, 1, rng);  // result width 5
  EngineConfig cfg;
  cfg.max_result_width = 3;
  try {
    contract_bucket(b, kNaive, cfg);
    FAIL("expected ResourceError");
  } catch (const ResourceError& ex) {
    CHECK(std::string(ex.what()).find("5") != std::string::npos);
  }
}

TEST_CASE("tensor bytes law") {
  CHECK(tensor_bytes_for_rank(0) == 16);
  CHECK(tensor_bytes_for_rank(27) == (std::uint64_t{1} << 31));  // 2 GiB
}

TEST_CASE("contract_network on the <+|+> network") {
  Circuit c;
  c.n_qubits = 1;
  c.gates = {{GateKind::PlusState, 0.0, {0, 0}}, {GateKind::BraPlus, 0.0, {0, 0}}};
  const TensorNetwork net = circuit_to_network(c);
  const ContractionReport rep = contract_network(schedule_for(net), kNaive);
  CHECK(std::abs(rep.scalar - cd{1.0, 0.0}) < 1e-12);
  CHECK(rep.records.size() == 1);
  CHECK(rep.records[0].ops == 2);  // width 1
}

TEST_CASE("zero-angle edge expectation contracts to zero") {
  const Graph g = random_regular(6, 3, 4);
  const ContractionSchedule sched =
      edge_schedule(g, g.edges[0], Angles{{0.0}, {0.0}}, false);
  const ContractionReport rep = contract_network(sched, kMatmul);
  CHECK(std::abs(rep.scalar) < 1e-12);
}

TEST_CASE("triangle p=1 edge term matches the state-vector oracle") {
  const Graph tri = make_graph(3, {{0, 1}, {1, 2}, {0, 2}});
  const Angles a{{0.7}, {0.3}};
  const ContractionSchedule sched = edge_schedule(tri, Edge{0, 1}, a, false);
  const ContractionReport rep = contract_network(sched, kNaive);
  const double expected = expectation_zz(run_ansatz(tri, a), Edge{0, 1});
  CHECK(std::abs(rep.scalar.real() - expected) < 1e-10);
  CHECK(std::abs(rep.scalar.imag()) < 1e-10);
}

TEST_CASE("lightcone and full-graph edge terms agree") {
  const Graph g = random_regular(14, 3, 8);
  const Angles a{{0.5, 0.3}, {0.2, 0.4}};
  const StateVector sv = run_ansatz(g, a);
  for (const Edge& e : {g.edges[0], g.edges[7], g.edges[20]}) {
    const ContractionReport rep = contract_network(edge_schedule(g, e, a, false), kMatmul);
    CHECK(std::abs(rep.scalar.real() - expectation_zz(sv, e)) < 1e-10);
  }
}

TEST_CASE("merge: nested var sets collapse to one bucket") {
  // bucket a: vars {a,b} sum a; bucket b: vars {a?,b,c}; use tensors directly
  const double r = 1.0 / std::sqrt(2.0);
  ContractionSchedule sched;
  Bucket b0;
  b0.sum_vars = {0};
  b0.tensors.push_back(Tensor{"t0", {0, 1}, {cd{r, 0}, cd{0, 0}, cd{0, 0}, cd{r, 0}}});
  Bucket b1;
  b1.sum_vars = {1};
  b1.tensors.push_back(Tensor{"t1", {1, 2}, {cd{1, 0}, cd{0, 0}, cd{0, 0}, cd{1, 0}}});
  Bucket b2;
  b2.sum_vars = {2};
  b2.tensors.push_back(Tensor{"t2", {2}, {cd{1, 0}, cd{1, 0}}});
  sched.buckets = {b0, b1, b2};

  const ContractionSchedule merged = merge_buckets(sched);
  CHECK(merged.buckets.size() < sched.buckets.size());
  CHECK(merged.merges_applied >= 1);

  const cd ref = contract_network(sched, kNaive).scalar;
  const cd got = contract_network(merged, kNaive).scalar;
  CHECK(rel_err(got, ref) < 1e-12);
}

TEST_CASE("merge: non-nested kept variables block the merge") {
  ContractionSchedule sched;
  Bucket b0;
  b0.sum_vars = {0};
  b0.tensors.push_back(Tensor{"t0", {0, 3, 4}, std::vector<cd>(8, cd{1, 0})});
  Bucket b1;
  b1.sum_vars = {3};
  b1.tensors.push_back(Tensor{"t1", {3}, {cd{3, 0}, cd{4, 0}}});
  Bucket b2;
  b2.sum_vars = {4};
  b2.tensors.push_back(Tensor{"t2", {4}, {cd{1, 0}, cd{2, 0}}});
  sched.buckets = {b0, b1, b2};
  // bucket 0 keeps {3,4}; no single later bucket covers both, so it stays
  const ContractionSchedule merged = merge_buckets(sched);
  REQUIRE(!merged.buckets.empty());
  CHECK(merged.buckets[0].tensors.size() == 1);
  CHECK(merged.buckets[0].tensors[0].label == "t0");
  CHECK(merged.buckets[0].sum_vars == std::vector<VarId>{0});
  const cd ref = contract_network(sched, kNaive).scalar;
  const cd got = contract_network(merged, kNaive).scalar;
  CHECK(rel_err(got, ref) < 1e-12);
}

TEST_CASE("merge: unrelated buckets are not chained together") {
  // both buckets fully sum their own variable; gluing them would double the
  // contraction width for nothing, so the merge must be skipped
  ContractionSchedule sched;
  Bucket b0;
  b0.sum_vars = {0};
  b0.tensors.push_back(Tensor{"t0", {0}, {cd{1, 0}, cd{2, 0}}});
  Bucket b1;
  b1.sum_vars = {1};
  b1.tensors.push_back(Tensor{"t1", {1}, {cd{3, 0}, cd{4, 0}}});
  sched.buckets = {b0, b1};
  const ContractionSchedule merged = merge_buckets(sched);
  CHECK(merged.buckets.size() == 2);
  CHECK(merged.merges_applied == 0);
}

TEST_CASE("merge: widest schedule bucket never grows") {
  const Graph g = random_regular(12, 3, 41);
  const Angles a{{0.5, 0.4}, {0.3, 0.2}};
  for (const Edge& e : g.edges) {
    const std::vector<int> wu = simulate_widths(edge_schedule(g, e, a, false));
    const std::vector<int> wm = simulate_widths(edge_schedule(g, e, a, true));
    const int mu = *std::max_element(wu.begin(), wu.end());
    const int mm = *std::max_element(wm.begin(), wm.end());
    CHECK(mm <= mu);
  }
}

TEST_CASE("merged and unmerged QAOA schedules agree") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> dist(0.0, 3.0);
  for (int trial = 0; trial < 4; ++trial) {
    const Graph g = random_regular(8, 3, 50 + trial);
    const Angles a{{dist(rng), dist(rng)}, {dist(rng), dist(rng)}};
    for (const Edge& e : {g.edges[0], g.edges[5]}) {
      const ContractionSchedule unmerged = edge_schedule(g, e, a, false);
      const ContractionSchedule merged = edge_schedule(g, e, a, true);
      CHECK(merged.buckets.size() <= unmerged.buckets.size());
      const cd ref = contract_network(unmerged, kMatmul).scalar;
      const cd got = contract_network(merged, kMatmul).scalar;
      CHECK(rel_err(got, ref) < 1e-10);
    }
  }
}

TEST_CASE("merge monotonicity: merged buckets are at least as wide") {
  const Graph g = random_regular(10, 3, 13);
  const Angles a{{0.6, 0.2}, {0.1, 0.5}};
  const ContractionSchedule unmerged = edge_schedule(g, g.edges[2], a, false);
  const ContractionSchedule merged = edge_schedule(g, g.edges[2], a, true);
  CHECK(merged.buckets.size() <= unmerged.buckets.size());
  for (const Bucket& b : merged.buckets)
    if (b.sum_vars.size() > 1) CHECK(bucket_width(b) >= (int)b.sum_vars.size());
}

TEST_CASE("mixed dispatch routes by width against the threshold") {
  const MixedBackend mixed(15, kNaive, kMatmul);
  CHECK(mixed.select(4).name() == "naive");
  CHECK(mixed.select(15).name() == "naive");  // boundary inclusive
  CHECK(mixed.select(16).name() == "matmul");
  CHECK_THROWS_AS(MixedBackend(0, kNaive, kMatmul), InvalidInputError);
  CHECK_THROWS_AS(MixedBackend(41, kNaive, kMatmul), InvalidInputError);
}

TEST_CASE("timing records name the backend actually used") {
  const Graph g = random_regular(10, 3, 2);
  const Angles a{{0.4, 0.6}, {0.3, 0.1}};
  const MixedBackend mixed(6, kNaive, kMatmul);
  const EnergyResult res = energy_expectation(g, a, mixed, false);
  bool saw_low = false, saw_high = false;
  for (const TimingRecord& r : res.report.records) {
    if (r.width <= 6) {
      CHECK(r.backend == "naive");
      saw_low = true;
    } else {
      CHECK(r.backend == "matmul");
      saw_high = true;
    }
    CHECK(r.ops == (std::uint64_t{1} << r.width));
    CHECK(r.elapsed_s > 0.0);
  }
  CHECK(saw_low);
  CHECK(saw_high);
}

TEST_CASE("energy with zero angles is |E|/2") {
  const Graph g = random_regular(12, 3, 6);
  const EnergyResult res = energy_expectation(g, Angles{{0.0}, {0.0}}, kMatmul, false);
  CHECK(res.energy == doctest::Approx(9.0).epsilon(1e-12));
}

TEST_CASE("energy matches the state-vector oracle") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> dist(0.0, 3.14);
  const Graph g = random_regular(8, 3, 19);
  const Angles a{{dist(rng), dist(rng)}, {dist(rng), dist(rng)}};
  const double expected = expectation_cost(run_ansatz(g, a), g);
  const EnergyResult res = energy_expectation(g, a, kMatmul, false);
  CHECK(std::abs(res.energy - expected) < 1e-8);
}

TEST_CASE("energy never exceeds the MaxCut optimum (K4)") {
  const Graph k4 = random_regular(4, 3, 0);
  // brute-force optimum over all 2^4 assignments
  int best = 0;
  for (int z = 0; z < 16; ++z) {
    std::string s(4, '0');
    for (int q = 0; q < 4; ++q) s[q] = (z >> (3 - q)) & 1 ? '1' : '0';
    best = std::max(best, maxcut_value(k4, s));
  }
  CHECK(best == 4);
  const EnergyResult res = energy_expectation(k4, Angles{{0.6}, {0.4}}, kNaive, false);
  CHECK(res.energy <= best + 1e-10);
}

TEST_CASE("parallel energy run is deterministic and matches sequential") {
  const Graph g = random_regular(10, 3, 33);
  const Angles a{{0.8, 0.3}, {0.2, 0.7}};
  const EnergyResult seq = energy_expectation(g, a, kMatmul, false, {}, 1);
  const EnergyResult par = energy_expectation(g, a, kMatmul, false, {}, 4);
  CHECK(seq.energy == doctest::Approx(par.energy).epsilon(1e-14));
  CHECK(seq.report.records.size() == par.report.records.size());
}

TEST_CASE("schedule validation catches a stray sum variable") {
  ContractionSchedule bad;
  Bucket b0;
  b0.sum_vars = {0};
  b0.tensors.push_back(Tensor{"t0", {0}, {cd{1, 0}, cd{1, 0}}});
  Bucket b1;
  b1.sum_vars = {1};
  // variable 0 still appears after its elimination step: invalid
  b1.tensors.push_back(Tensor{"t1", {0, 1}, std::vector<cd>(4, cd{1, 0})});
  bad.buckets = {b0, b1};
  CHECK(!validate_schedule(bad));
  CHECK_THROWS_AS(contract_network(bad, kNaive), ScheduleError);
}

TEST_CASE("simulated widths match contraction-time widths") {
  const Graph g = random_regular(10, 3, 14);
  const Angles a{{0.5, 0.1}, {0.3, 0.6}};
  const ContractionSchedule sched = edge_schedule(g, g.edges[1], a, false);
  const std::vector<int> widths = simulate_widths(sched);
  const ContractionReport rep = contract_network(sched, kMatmul);
  REQUIRE(widths.size() == rep.records.size());
  for (std::size_t i = 0; i < widths.size(); ++i)
    CHECK(widths[i] == rep.records[i].width);
}

namespace {

// Naive plus a fixed busy-wait, so it loses to plain naive at every width.
class SlowBackend final : public ContractionBackend {
 public:
  std::string name() const override { return "slow"; }
  Tensor contract(const Bucket& b) const override {
    const auto t0 = std::chrono::steady_clock::now();
    while (std::chrono::steady_clock::now() - t0 < std::chrono::milliseconds(2)) {
    }
    return kNaive.contract(b);
  }
};

}  // namespace

TEST_CASE("calibrate falls back to 15 when no crossover exists") {
  CalibrationConfig cfg;
  cfg.trial_n = 6;
  cfg.trial_p = 1;
  cfg.repetitions = 3;
  cfg.max_synthetic_width = 8;
  const SlowBackend slow;
  const CalibrationResult res = calibrate(kNaive, slow, cfg);
  CHECK(!res.crossover_found);
  CHECK(res.threshold == 15);
}

TEST_CASE("calibrate with identical backends finds no crossover") {
  CalibrationConfig cfg;
  cfg.trial_n = 6;
  cfg.trial_p = 1;
  cfg.repetitions = 3;
  cfg.max_synthetic_width = 8;
  const CalibrationResult res = calibrate(kNaive, kNaive, cfg);
  CHECK(!res.crossover_found);
  CHECK(res.threshold == 15);
}

TEST_CASE("timing CSV round-trips") {
  std::vector<TimingRecord> records(2);
  records[0] = {0, 3, 5, 7, "naive", 0.25, 128, 4096.0};
  records[1] = {1, 2, 0, 18, "matmul", 0.5, 262144, 4194304.0};
  std::stringstream ss;
  write_timing_csv(ss, records);
  const std::vector<TimingRecord> back = read_timing_csv(ss);
  REQUIRE(back.size() == 2);
  CHECK(back[1].width == 18);
  CHECK(back[1].backend == "matmul");
  CHECK(back[1].ops == 262144);
  CHECK(back[0].edge_v == 3);
}

TEST_CASE("peak tensor bytes is bounded by the widest bucket") {
  const Graph g = random_regular(8, 3, 23);
  const Angles a{{0.9}, {0.2}};
  const ContractionSchedule sched = edge_schedule(g, g.edges[0], a, false);
  const ContractionReport rep = contract_network(sched, kNaive);
  int max_width = 0;
  for (const TimingRecord& r : rep.records) max_width = std::max(max_width, r.width);
  CHECK(rep.peak_tensor_bytes >= 16);
  CHECK(rep.peak_tensor_bytes <= tensor_bytes_for_rank(max_width));
}
