#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "qtnsim/circuit.hpp"
#include "qtnsim/ordering.hpp"

namespace qtnsim {

struct EngineConfig {
  int max_result_width = 30;  // refuse result tensors wider than this

  static EngineConfig from_env();  // honors QTNSIM_MAX_WIDTH
};

class ContractionBackend {
 public:
  virtual ~ContractionBackend() = default;
  virtual std::string name() const = 0;
  // The backend that will actually run a bucket of the given width.
  virtual const ContractionBackend& select(int width) const { return *this; }
  // Sums the bucket's sum_vars out of the member tensors. Result axes in
  // ascending variable id.
  virtual Tensor contract(const Bucket& b) const = 0;
};

// Direct enumeration over all 2^width assignments. Low fixed overhead.
class NaiveBackend final : public ContractionBackend {
 public:
  std::string name() const override { return "naive"; }
  Tensor contract(const Bucket& b) const override;
};

// Pairwise folds through transpose/reshape + GEMM. High throughput.
class MatmulBackend final : public ContractionBackend {
 public:
  std::string name() const override { return "matmul"; }
  Tensor contract(const Bucket& b) const override;
};

// Width-threshold dispatcher: width <= threshold goes to the low-overhead
// backend, wider buckets to the high-throughput one.
class MixedBackend final : public ContractionBackend {
 public:
  MixedBackend(int threshold, const ContractionBackend& low,
               const ContractionBackend& high);
  std::string name() const override;
  const ContractionBackend& select(int width) const override;
  Tensor contract(const Bucket& b) const override;
  int threshold() const { return threshold_; }

 private:
  int threshold_;
  const ContractionBackend* low_;
  const ContractionBackend* high_;
};

// Bucket width: number of unique variables across the member tensors.
int bucket_width(const Bucket& b);

// Width/memory-checked single-bucket contraction.
Tensor contract_bucket(const Bucket& b, const ContractionBackend& backend,
                       const EngineConfig& cfg = {});

struct TimingRecord {
  int edge_u = -1;  // -1 when not part of an energy run
  int edge_v = -1;
  int bucket_seq = 0;
  int width = 0;
  std::string backend;
  double elapsed_s = 0.0;
  std::uint64_t ops = 0;  // 2^width
  double flops_est = 0.0; // 8 * ops / elapsed
};

struct ContractionReport {
  cd scalar{0.0, 0.0};
  std::vector<TimingRecord> records;   // one per non-empty bucket
  std::uint64_t peak_tensor_bytes = 0; // 16 * 2^(largest result rank)
  int merges_applied = 0;
  int merges_skipped = 0;
};

std::uint64_t tensor_bytes_for_rank(int rank);  // complex128 entries

// Contracts buckets in schedule order; intermediate results flow to the
// bucket of their earliest remaining variable, scalars multiply into the
// running result.
ContractionReport contract_network(const ContractionSchedule& schedule,
                                   const ContractionBackend& backend,
                                   const EngineConfig& cfg = {});

// Merges bucket A into a later bucket B when A's non-summed variables all
// occur in B; the merged bucket sums both index sets at once. A candidate
// merge is committed only if the symbolic schedule check still passes.
ContractionSchedule merge_buckets(const ContractionSchedule& schedule);

// Bucket widths as they will be observed at contraction time, computed by a
// data-free simulation of the schedule. Empty buckets yield no entry.
std::vector<int> simulate_widths(const ContractionSchedule& schedule);

// True when every bucket's sum variables are confined to that bucket at its
// contraction step.
bool validate_schedule(const ContractionSchedule& schedule);

struct CalibrationConfig {
  int trial_n = 10;
  int trial_degree = 3;
  int trial_p = 2;
  std::uint64_t seed = 7;
  int repetitions = 5;
  int max_synthetic_width = 22;  // widths absent from the trial are filled in
  int fallback_threshold = 15;
};

struct CalibrationResult {
  int threshold = 15;
  bool crossover_found = false;
  // width -> (low-backend median seconds, high-backend median seconds)
  std::map<int, std::pair<double, double>> medians;
};

// Times both backends across bucket widths on a trial workload and returns
// the smallest width from which the high backend is consistently faster.
CalibrationResult calibrate(const ContractionBackend& low,
                            const ContractionBackend& high,
                            const CalibrationConfig& cfg = {});

struct EnergyResult {
  double energy = 0.0;
  ContractionReport report;  // records tagged with (edge_u, edge_v)
};

// <C> = |E|/2 - 1/2 sum_e Re(e_jk), one lightcone contraction per edge.
EnergyResult energy_expectation(const Graph& g, const Angles& a,
                                const ContractionBackend& backend, bool merged,
                                const EngineConfig& cfg = {}, int jobs = 1);

// Schedule for one edge's lightcone network (merge applied when requested).
ContractionSchedule edge_schedule(const Graph& g, Edge e, const Angles& a,
                                  bool merged);

void write_timing_csv(std::ostream& out, const std::vector<TimingRecord>& records);
std::vector<TimingRecord> read_timing_csv(std::istream& in);

}  // namespace qtnsim
