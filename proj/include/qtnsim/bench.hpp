#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qtnsim/engine.hpp"

namespace qtnsim {

enum class Precision { real32, real64, complex64, complex128 };

std::string precision_name(Precision p);
Precision parse_precision(const std::string& s);

// FLOPs factor: 8 per complex operation (mul+add), 2 per real operation.
int flops_factor(Precision p);

struct BenchResult {
  std::string kind;      // matmul, tncontract_fixed, tncontract_random,
                         // bucket_unmerged, bucket_merged, lightcone, circuit
  std::string param;     // size, index count, expression, or instance tag
  Precision precision = Precision::complex128;
  std::string backend;
  std::uint64_t ops = 0;
  double mean_s = 0.0;   // median of the repetitions, warm-up excluded
  double flops = 0.0;
};

struct BenchConfig {
  int repetitions = 5;          // >= 3
  std::uint64_t seed = 1;
  std::uint64_t mem_budget_bytes = 4ull << 30;  // skip tasks beyond this
};

// Square matrix multiplication; ops = n^3.
std::vector<BenchResult> bench_matmul(const std::vector<int>& sizes,
                                      Precision prec,
                                      const std::string& backend,
                                      const BenchConfig& cfg = {});

// Fixed expression "abcd,bcdf->acf" with every index of extent n; ops = n^5.
std::vector<BenchResult> bench_tncontract_fixed(const std::vector<int>& sizes,
                                                Precision prec,
                                                const std::string& backend,
                                                const BenchConfig& cfg = {});

// Random expressions over k distinct indices of extent 2; ops = 2^k.
std::vector<BenchResult> bench_tncontract_random(const std::vector<int>& index_counts,
                                                 Precision prec,
                                                 const std::string& backend,
                                                 const BenchConfig& cfg = {});

// Rows derived from an actual expectation-value run: the max-FLOPs single
// bucket, the per-edge lightcone aggregate nearest 1e8 ops, and the whole run.
std::vector<BenchResult> bench_from_circuit(const Graph& g, const Angles& a,
                                            const ContractionBackend& backend,
                                            bool merged);

// --- expression utilities (two-operand einsum notation like "caedb,eab->cde")

struct Expression {
  std::string lhs_a;
  std::string lhs_b;
  std::string out;
};

Expression parse_expression(const std::string& expr);
int distinct_index_count(const Expression& e);

// ops = product of every distinct index's extent (2^k when all extents are 2).
std::uint64_t ops_for_expression(const Expression& e, std::size_t extent);

// Evaluates the expression on the given backend ("naive" or "matmul") with
// uniform index extent. Used by the benchmarks and their oracles.
std::vector<cd> contract_expression(const Expression& e, std::size_t extent,
                                    const std::vector<cd>& a,
                                    const std::vector<cd>& b,
                                    const std::string& backend);

void write_bench_csv(std::ostream& out, const std::vector<BenchResult>& rows);

}  // namespace qtnsim
