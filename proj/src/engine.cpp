#include "qtnsim/engine.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "qtnsim/contraction.hpp"
#include "qtnsim/errors.hpp"

namespace qtnsim {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  const double s = std::chrono::duration<double>(Clock::now() - t0).count();
  return s > 0.0 ? s : 1e-9;  // clamp for coarse clocks
}

std::vector<VarId> present_sum_vars(const Bucket& b, const std::vector<VarId>& uniq) {
  std::vector<VarId> present;
  for (VarId v : b.sum_vars)
    if (std::binary_search(uniq.begin(), uniq.end(), v)) present.push_back(v);
  if (present.size() != b.sum_vars.size())
    throw ScheduleError("bucket sums a variable absent from its tensors");
  std::sort(present.begin(), present.end());
  return present;
}

DenseOperand<cd> to_operand(const Tensor& t) {
  DenseOperand<cd> op;
  op.ids = t.vars;
  op.dims.assign(t.vars.size(), 2);
  op.data = t.data;
  return op;
}

Tensor from_operand(DenseOperand<cd> op, std::string label) {
  return Tensor{std::move(label), std::move(op.ids), std::move(op.data)};
}

}  // namespace

EngineConfig EngineConfig::from_env() {
  EngineConfig cfg;
  if (const char* v = std::getenv("QTNSIM_MAX_WIDTH")) cfg.max_result_width = std::atoi(v);
  return cfg;
}

int bucket_width(const Bucket& b) {
  return static_cast<int>(unique_vars(b.tensors).size());
}

std::uint64_t tensor_bytes_for_rank(int rank) {
  return std::uint64_t{16} << rank;
}

// ---------------------------------------------------------------- naive

Tensor NaiveBackend::contract(const Bucket& b) const {
  const std::vector<VarId> uniq = unique_vars(b.tensors);
  const std::vector<VarId> sums = present_sum_vars(b, uniq);
  std::vector<VarId> kept;
  std::set_difference(uniq.begin(), uniq.end(), sums.begin(), sums.end(),
                      std::back_inserter(kept));

  const int r = static_cast<int>(uniq.size());
  auto pos_of = [&uniq](VarId v) {
    return static_cast<int>(std::lower_bound(uniq.begin(), uniq.end(), v) - uniq.begin());
  };

  // Assignment bit i (MSB-first over uniq) lives at shift r-1-i.
  struct AxisMap { int src_shift; int dst_shift; };
  std::vector<std::vector<AxisMap>> maps(b.tensors.size());
  for (std::size_t t = 0; t < b.tensors.size(); ++t) {
    const Tensor& tt = b.tensors[t];
    for (std::size_t ax = 0; ax < tt.vars.size(); ++ax)
      maps[t].push_back({r - 1 - pos_of(tt.vars[ax]),
                         static_cast<int>(tt.vars.size() - 1 - ax)});
  }
  std::vector<AxisMap> kept_map;
  for (std::size_t ax = 0; ax < kept.size(); ++ax)
    kept_map.push_back({r - 1 - pos_of(kept[ax]),
                        static_cast<int>(kept.size() - 1 - ax)});

  std::vector<cd> acc(std::size_t{1} << kept.size(), cd{0.0, 0.0});
  const std::uint64_t total = std::uint64_t{1} << r;
  for (std::uint64_t a = 0; a < total; ++a) {
    cd prod{1.0, 0.0};
    for (std::size_t t = 0; t < b.tensors.size(); ++t) {
      std::uint64_t off = 0;
      for (const AxisMap& m : maps[t]) off |= ((a >> m.src_shift) & 1u) << m.dst_shift;
      prod *= b.tensors[t].data[off];
    }
    std::uint64_t koff = 0;
    for (const AxisMap& m : kept_map) koff |= ((a >> m.src_shift) & 1u) << m.dst_shift;
    acc[koff] += prod;
  }
  return Tensor{"bucket_result", std::move(kept), std::move(acc)};
}

// ---------------------------------------------------------------- matmul

Tensor MatmulBackend::contract(const Bucket& b) const {
  const std::vector<VarId> uniq = unique_vars(b.tensors);
  const std::vector<VarId> sums = present_sum_vars(b, uniq);

  if (b.tensors.size() == 1)
    return from_operand(sum_axes(to_operand(b.tensors[0]), sums), "bucket_result");

  // Fold pairwise in bucket order; each sum variable is contracted at the
  // last step in which it can be (no later tensor still carries it).
  DenseOperand<cd> acc = to_operand(b.tensors[0]);
  for (std::size_t i = 1; i < b.tensors.size(); ++i) {
    std::vector<VarId> remaining;
    for (std::size_t j = i + 1; j < b.tensors.size(); ++j)
      remaining.insert(remaining.end(), b.tensors[j].vars.begin(),
                       b.tensors[j].vars.end());
    std::sort(remaining.begin(), remaining.end());
    std::vector<VarId> sum_now;
    for (VarId v : sums)
      if (!std::binary_search(remaining.begin(), remaining.end(), v))
        sum_now.push_back(v);
    acc = pairwise_contract(acc, to_operand(b.tensors[i]), sum_now);
  }
  return from_operand(std::move(acc), "bucket_result");
}

// ---------------------------------------------------------------- mixed

MixedBackend::MixedBackend(int threshold, const ContractionBackend& low,
                           const ContractionBackend& high)
    : threshold_(threshold), low_(&low), high_(&high) {
  if (threshold < 1 || threshold > 40)
    throw InvalidInputError("mixed backend threshold must be in [1, 40]");
}

std::string MixedBackend::name() const {
  return "mixed(" + std::to_string(threshold_) + ")";
}

const ContractionBackend& MixedBackend::select(int width) const {
  return width <= threshold_ ? *low_ : *high_;
}

Tensor MixedBackend::contract(const Bucket& b) const {
  return select(bucket_width(b)).contract(b);
}

// ---------------------------------------------------------------- driver

Tensor contract_bucket(const Bucket& b, const ContractionBackend& backend,
                       const EngineConfig& cfg) {
  const int width = bucket_width(b);
  const int result_width = width - static_cast<int>(b.sum_vars.size());
  if (result_width > cfg.max_result_width)
    throw ResourceError("contraction refused: result width " +
                        std::to_string(result_width) + " exceeds cap " +
                        std::to_string(cfg.max_result_width));
  return backend.select(width).contract(b);
}

namespace {

// Shared walk for contraction, symbolic simulation, and validation. The
// symbolic mode tracks only variable sets.
struct SymbolicBucket {
  std::vector<std::set<VarId>> tensor_vars;
  std::vector<VarId> sum_vars;
};

std::vector<SymbolicBucket> symbolic_schedule(const ContractionSchedule& s) {
  std::vector<SymbolicBucket> out(s.buckets.size());
  for (std::size_t i = 0; i < s.buckets.size(); ++i) {
    out[i].sum_vars = s.buckets[i].sum_vars;
    for (const Tensor& t : s.buckets[i].tensors)
      out[i].tensor_vars.emplace_back(t.vars.begin(), t.vars.end());
  }
  return out;
}

std::map<VarId, int> sum_var_positions(const ContractionSchedule& s) {
  std::map<VarId, int> pos;
  for (std::size_t i = 0; i < s.buckets.size(); ++i)
    for (VarId v : s.buckets[i].sum_vars) pos[v] = static_cast<int>(i);
  return pos;
}

// Runs the schedule on variable sets only. Returns false on any invariant
// violation; widths of non-empty buckets are appended when requested.
bool walk_symbolic(const ContractionSchedule& s, std::vector<int>* widths) {
  std::vector<SymbolicBucket> buckets = symbolic_schedule(s);
  const std::map<VarId, int> pos = sum_var_positions(s);

  for (std::size_t i = 0; i < buckets.size(); ++i) {
    if (buckets[i].tensor_vars.empty()) continue;
    std::set<VarId> uni;
    for (const auto& tv : buckets[i].tensor_vars) uni.insert(tv.begin(), tv.end());

    for (VarId v : buckets[i].sum_vars) {
      if (!uni.count(v)) return false;
      for (std::size_t j = i + 1; j < buckets.size(); ++j)
        for (const auto& tv : buckets[j].tensor_vars)
          if (tv.count(v)) return false;
    }
    if (widths) widths->push_back(static_cast<int>(uni.size()));

    std::set<VarId> result = uni;
    for (VarId v : buckets[i].sum_vars) result.erase(v);
    buckets[i].tensor_vars.clear();
    if (result.empty()) continue;

    int target = std::numeric_limits<int>::max();
    for (VarId v : result) {
      auto it = pos.find(v);
      if (it == pos.end()) return false;
      target = std::min(target, it->second);
    }
    if (target <= static_cast<int>(i)) return false;
    buckets[target].tensor_vars.push_back(std::move(result));
  }
  return true;
}

}  // namespace

std::vector<int> simulate_widths(const ContractionSchedule& schedule) {
  std::vector<int> widths;
  if (!walk_symbolic(schedule, &widths))
    throw ScheduleError("invalid schedule in width simulation");
  return widths;
}

bool validate_schedule(const ContractionSchedule& schedule) {
  return walk_symbolic(schedule, nullptr);
}

ContractionReport contract_network(const ContractionSchedule& schedule,
                                   const ContractionBackend& backend,
                                   const EngineConfig& cfg) {
  ContractionSchedule work = schedule;
  const std::map<VarId, int> pos = sum_var_positions(work);

  ContractionReport report;
  report.scalar = cd{1.0, 0.0};
  report.merges_applied = schedule.merges_applied;
  report.merges_skipped = schedule.merges_skipped;

  for (std::size_t i = 0; i < work.buckets.size(); ++i) {
    Bucket& bucket = work.buckets[i];
    if (bucket.tensors.empty()) continue;

    for (VarId v : bucket.sum_vars)
      for (std::size_t j = i + 1; j < work.buckets.size(); ++j)
        for (const Tensor& t : work.buckets[j].tensors)
          if (std::find(t.vars.begin(), t.vars.end(), v) != t.vars.end())
            throw ScheduleError("sum variable " + std::to_string(v) +
                                " still live outside its bucket");

    const int width = bucket_width(bucket);
    const ContractionBackend& sel = backend.select(width);

    const auto t0 = Clock::now();
    Tensor result = contract_bucket(bucket, sel, cfg);
    const double elapsed = seconds_since(t0);

    TimingRecord rec;
    rec.bucket_seq = static_cast<int>(i);
    rec.width = width;
    rec.backend = sel.name();
    rec.elapsed_s = elapsed;
    rec.ops = std::uint64_t{1} << width;
    rec.flops_est = 8.0 * static_cast<double>(rec.ops) / elapsed;
    report.records.push_back(std::move(rec));

    report.peak_tensor_bytes =
        std::max(report.peak_tensor_bytes, tensor_bytes_for_rank(result.rank()));

    bucket.tensors.clear();
    if (result.vars.empty()) {
      report.scalar *= result.data[0];
      continue;
    }
    int target = std::numeric_limits<int>::max();
    for (VarId v : result.vars) {
      auto it = pos.find(v);
      if (it == pos.end())
        throw ScheduleError("result variable not covered by the schedule");
      target = std::min(target, it->second);
    }
    if (target <= static_cast<int>(i))
      throw ScheduleError("result tensor flows backwards in the schedule");
    work.buckets[target].tensors.push_back(std::move(result));
  }
  return report;
}

ContractionSchedule merge_buckets(const ContractionSchedule& schedule) {
  ContractionSchedule sched = schedule;

  const auto max_width = [](const ContractionSchedule& s) {
    int m = 0;
    for (int w : simulate_widths(s)) m = std::max(m, w);
    return m;
  };
  const int width_budget = max_width(sched);

  std::size_t i = 0;
  while (i < sched.buckets.size()) {
    const Bucket& a = sched.buckets[i];
    if (a.tensors.empty()) { ++i; continue; }

    const std::vector<VarId> uniq_a = unique_vars(a.tensors);
    std::vector<VarId> sum_a = a.sum_vars;
    std::sort(sum_a.begin(), sum_a.end());
    std::vector<VarId> need_a;
    std::set_difference(uniq_a.begin(), uniq_a.end(), sum_a.begin(), sum_a.end(),
                        std::back_inserter(need_a));

    bool merged = false;
    for (std::size_t j = i + 1; j < sched.buckets.size(); ++j) {
      const Bucket& b = sched.buckets[j];
      if (b.tensors.empty()) continue;
      const std::vector<VarId> uniq_b = unique_vars(b.tensors);
      if (!std::includes(uniq_b.begin(), uniq_b.end(), need_a.begin(), need_a.end()))
        continue;

      ContractionSchedule trial = sched;
      Bucket& tb = trial.buckets[j];
      for (const Tensor& t : sched.buckets[i].tensors) tb.tensors.push_back(t);
      tb.sum_vars.insert(tb.sum_vars.end(), a.sum_vars.begin(), a.sum_vars.end());
      std::sort(tb.sum_vars.begin(), tb.sum_vars.end());
      trial.buckets.erase(trial.buckets.begin() + static_cast<long>(i));

      // Commit only if the schedule stays valid and the merge does not push
      // any bucket past the widest contraction already present; unrelated
      // variable sets would otherwise chain into one enormous bucket.
      if (validate_schedule(trial) && max_width(trial) <= width_budget) {
        trial.merges_applied = sched.merges_applied + 1;
        trial.merges_skipped = sched.merges_skipped;
        sched = std::move(trial);
        merged = true;
        break;
      }
      ++sched.merges_skipped;
    }
    if (!merged) ++i;
  }
  return sched;
}

// ---------------------------------------------------------------- calibration

namespace {

double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

// Two-tensor bucket whose unique-variable count is exactly `width`.
Bucket synthetic_bucket(int width, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  auto random_tensor = [&](std::vector<VarId> vars) {
    Tensor t;
    t.label = "synthetic";
    t.vars = std::move(vars);
    t.data.resize(std::size_t{1} << t.vars.size());
    for (cd& x : t.data) x = cd{dist(rng), dist(rng)};
    return t;
  };

  Bucket b;
  std::vector<VarId> all(width);
  for (int v = 0; v < width; ++v) all[v] = v;
  b.tensors.push_back(random_tensor(all));
  b.tensors.push_back(random_tensor(width >= 2 ? std::vector<VarId>{0, 1}
                                               : std::vector<VarId>{0}));
  b.sum_vars = {0};
  return b;
}

}  // namespace

CalibrationResult calibrate(const ContractionBackend& low,
                            const ContractionBackend& high,
                            const CalibrationConfig& cfg) {
  std::map<int, std::vector<double>> low_times, high_times;

  auto time_bucket = [&](const Bucket& b, const ContractionBackend& backend) {
    const auto t0 = Clock::now();
    backend.contract(b);
    return seconds_since(t0);
  };

  try {
    const Graph g = random_regular(cfg.trial_n, cfg.trial_degree, cfg.seed);
    Angles a;
    for (int k = 0; k < cfg.trial_p; ++k) {
      a.gammas.push_back(0.4 + 0.1 * k);
      a.betas.push_back(0.3 - 0.05 * k);
    }

    // Collect the live buckets of the trial circuit once, then time them.
    std::vector<Bucket> trial_buckets;
    for (const Edge& e : g.edges) {
      ContractionSchedule sched = edge_schedule(g, e, a, false);
      const std::map<VarId, int> pos = sum_var_positions(sched);
      for (std::size_t i = 0; i < sched.buckets.size(); ++i) {
        Bucket& bucket = sched.buckets[i];
        if (bucket.tensors.empty()) continue;
        trial_buckets.push_back(bucket);
        Tensor result = MatmulBackend{}.contract(bucket);
        bucket.tensors.clear();
        if (result.vars.empty()) continue;
        int target = std::numeric_limits<int>::max();
        for (VarId v : result.vars) target = std::min(target, pos.at(v));
        sched.buckets[target].tensors.push_back(std::move(result));
      }
    }

    std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ull);
    std::set<int> widths_seen;
    for (const Bucket& b : trial_buckets) widths_seen.insert(bucket_width(b));
    std::vector<Bucket> synth;
    for (int w = 1; w <= cfg.max_synthetic_width; ++w)
      if (!widths_seen.count(w)) synth.push_back(synthetic_bucket(w, rng));

    auto run_all = [&](const ContractionBackend& backend,
                       std::map<int, std::vector<double>>& times) {
      for (int rep = -1; rep < cfg.repetitions; ++rep) {  // rep -1 is warm-up
        for (const Bucket& b : trial_buckets) {
          const double s = time_bucket(b, backend);
          if (rep >= 0) times[bucket_width(b)].push_back(s);
        }
        for (const Bucket& b : synth) {
          const double s = time_bucket(b, backend);
          if (rep >= 0) times[bucket_width(b)].push_back(s);
        }
      }
    };
    run_all(low, low_times);
    run_all(high, high_times);
  } catch (const std::exception& ex) {
    throw CalibrationError(std::string("calibration trial failed: ") + ex.what());
  }

  CalibrationResult result;
  for (const auto& [w, xs] : low_times)
    if (high_times.count(w))
      result.medians[w] = {median(xs), median(high_times[w])};

  // Smallest width from which the high backend wins at every measured width.
  // A win requires a margin over timing noise, so two backends with
  // indistinguishable timings never produce a spurious crossover.
  const auto high_wins = [](double low_s, double high_s) {
    return high_s < low_s - std::max(1e-6, 0.05 * low_s);
  };
  int crossover = -1;
  for (const auto& [w, pair] : result.medians) {
    bool all_faster = true;
    for (const auto& [w2, pair2] : result.medians)
      if (w2 >= w && !high_wins(pair2.first, pair2.second)) {
        all_faster = false;
        break;
      }
    if (all_faster) { crossover = w; break; }
  }

  if (crossover >= 1) {
    result.crossover_found = true;
    result.threshold = std::clamp(crossover - 1, 1, 40);
  } else {
    std::cerr << "calibrate: no CPU-overhead crossover observed; "
                 "falling back to threshold " << cfg.fallback_threshold << "\n";
    result.crossover_found = false;
    result.threshold = cfg.fallback_threshold;
  }
  return result;
}

// ---------------------------------------------------------------- energy

ContractionSchedule edge_schedule(const Graph& g, Edge e, const Angles& a,
                                  bool merged) {
  const EdgeExpectationCircuit ec = build_edge_expectation_circuit(g, e, a);
  const TensorNetwork net = circuit_to_network(ec.circuit);
  const EliminationOrder ord = greedy_order(line_graph(net));
  ContractionSchedule sched = assign_buckets(net, ord);
  if (merged) sched = merge_buckets(sched);
  return sched;
}

EnergyResult energy_expectation(const Graph& g, const Angles& a,
                                const ContractionBackend& backend, bool merged,
                                const EngineConfig& cfg, int jobs) {
  a.validate();
  const int m = static_cast<int>(g.edges.size());
  std::vector<double> terms(m, 0.0);
  std::vector<ContractionReport> reports(m);
  std::vector<std::string> failures(m);

  auto run_edge = [&](int idx) {
    try {
      const Edge e = g.edges[idx];
      ContractionSchedule sched = edge_schedule(g, e, a, merged);
      ContractionReport rep = contract_network(sched, backend, cfg);
      if (std::abs(rep.scalar.imag()) > 1e-8)
        throw NumericalError("edge term has non-real value: imag = " +
                             std::to_string(rep.scalar.imag()));
      terms[idx] = rep.scalar.real();
      for (TimingRecord& r : rep.records) {
        r.edge_u = e.u;
        r.edge_v = e.v;
      }
      reports[idx] = std::move(rep);
    } catch (const std::exception& ex) {
      failures[idx] = ex.what();
    }
  };

  if (jobs <= 1) {
    for (int i = 0; i < m; ++i) run_edge(i);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t)
      pool.emplace_back([&] {
        for (int i = next.fetch_add(1); i < m; i = next.fetch_add(1)) run_edge(i);
      });
    for (std::thread& t : pool) t.join();
  }

  for (int i = 0; i < m; ++i)
    if (!failures[i].empty())
      throw ScheduleError("edge (" + std::to_string(g.edges[i].u) + ", " +
                          std::to_string(g.edges[i].v) + "): " + failures[i]);

  EnergyResult out;
  double sum = 0.0;
  for (int i = 0; i < m; ++i) {
    sum += terms[i];
    const ContractionReport& rep = reports[i];
    out.report.records.insert(out.report.records.end(), rep.records.begin(),
                              rep.records.end());
    out.report.peak_tensor_bytes =
        std::max(out.report.peak_tensor_bytes, rep.peak_tensor_bytes);
    out.report.merges_applied += rep.merges_applied;
    out.report.merges_skipped += rep.merges_skipped;
  }
  out.energy = 0.5 * m - 0.5 * sum;
  out.report.scalar = cd{out.energy, 0.0};
  return out;
}

// ---------------------------------------------------------------- CSV

void write_timing_csv(std::ostream& out, const std::vector<TimingRecord>& records) {
  out << "edge_u,edge_v,bucket_seq,width,backend,elapsed_s,ops,flops_est\n";
  for (const TimingRecord& r : records)
    out << r.edge_u << ',' << r.edge_v << ',' << r.bucket_seq << ',' << r.width
        << ',' << r.backend << ',' << r.elapsed_s << ',' << r.ops << ','
        << r.flops_est << '\n';
}

std::vector<TimingRecord> read_timing_csv(std::istream& in) {
  std::vector<TimingRecord> records;
  std::string line;
  if (!std::getline(in, line))
    throw InvalidInputError("timing CSV: missing header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    TimingRecord r;
    std::string field;
    auto next = [&]() {
      if (!std::getline(ss, field, ','))
        throw InvalidInputError("timing CSV: short row: " + line);
      return field;
    };
    r.edge_u = std::stoi(next());
    r.edge_v = std::stoi(next());
    r.bucket_seq = std::stoi(next());
    r.width = std::stoi(next());
    r.backend = next();
    r.elapsed_s = std::stod(next());
    r.ops = std::stoull(next());
    r.flops_est = std::stod(next());
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace qtnsim
