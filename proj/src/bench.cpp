#include "qtnsim/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include <cblas.h>

#include "qtnsim/contraction.hpp"
#include "qtnsim/errors.hpp"

namespace qtnsim {

namespace {

using Clock = std::chrono::steady_clock;

double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

// Median over the repetitions with one warm-up run excluded.
template <typename F>
double timed_median(int repetitions, F&& body) {
  body();  // warm-up
  std::vector<double> times;
  times.reserve(repetitions);
  for (int r = 0; r < repetitions; ++r) {
    const auto t0 = Clock::now();
    body();
    double s = std::chrono::duration<double>(Clock::now() - t0).count();
    times.push_back(s > 0.0 ? s : 1e-9);
  }
  return median(std::move(times));
}

template <typename T>
void fill_random(std::vector<T>& data, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  if constexpr (std::is_floating_point_v<T>) {
    for (T& x : data) x = static_cast<T>(dist(rng));
  } else {
    using R = typename T::value_type;
    for (T& x : data) x = T{static_cast<R>(dist(rng)), static_cast<R>(dist(rng))};
  }
}

void matmul_kernel(int n, const float* a, const float* b, float* c) {
  cblas_sgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, n, n, n, 1.0f, a, n, b, n, 0.0f, c, n);
}
void matmul_kernel(int n, const double* a, const double* b, double* c) {
  cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, n, n, n, 1.0, a, n, b, n, 0.0, c, n);
}
void matmul_kernel(int n, const std::complex<float>* a, const std::complex<float>* b,
                   std::complex<float>* c) {
  const std::complex<float> one{1.0f, 0.0f}, zero{0.0f, 0.0f};
  cblas_cgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, n, n, n, &one, a, n, b, n, &zero, c, n);
}
void matmul_kernel(int n, const std::complex<double>* a, const std::complex<double>* b,
                   std::complex<double>* c) {
  const std::complex<double> one{1.0, 0.0}, zero{0.0, 0.0};
  cblas_zgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, n, n, n, &one, a, n, b, n, &zero, c, n);
}

template <typename T>
void matmul_naive(int n, const T* a, const T* b, T* c) {
  const std::size_t nn = static_cast<std::size_t>(n);
  std::fill(c, c + nn * nn, T{});
  for (std::size_t i = 0; i < nn; ++i)
    for (std::size_t k = 0; k < nn; ++k) {
      const T aik = a[i * nn + k];
      for (std::size_t j = 0; j < nn; ++j) c[i * nn + j] += aik * b[k * nn + j];
    }
}

template <typename T>
BenchResult run_matmul(int n, Precision prec, const std::string& backend,
                       const BenchConfig& cfg) {
  std::mt19937_64 rng(cfg.seed + static_cast<std::uint64_t>(n));
  const std::size_t nn = static_cast<std::size_t>(n) * n;
  std::vector<T> a(nn), b(nn), c(nn);
  fill_random(a, rng);
  fill_random(b, rng);

  const double mean_s = timed_median(cfg.repetitions, [&] {
    if (backend == "matmul")
      matmul_kernel(n, a.data(), b.data(), c.data());
    else
      matmul_naive(n, a.data(), b.data(), c.data());
  });

  BenchResult res;
  res.kind = "matmul";
  res.param = std::to_string(n);
  res.precision = prec;
  res.backend = backend;
  res.ops = static_cast<std::uint64_t>(n) * n * n;
  res.mean_s = mean_s;
  res.flops = flops_factor(prec) * static_cast<double>(res.ops) / mean_s;
  return res;
}

std::vector<int> ids_of(const std::string& letters) {
  std::vector<int> ids;
  ids.reserve(letters.size());
  for (char c : letters) {
    if (c < 'a' || c > 'z') throw InvalidInputError("expression index must be a-z");
    ids.push_back(c - 'a');
  }
  return ids;
}

template <typename T>
DenseOperand<T> make_operand(const std::string& letters, std::size_t extent,
                             std::mt19937_64& rng) {
  DenseOperand<T> op;
  op.ids = ids_of(letters);
  op.dims.assign(op.ids.size(), extent);
  std::size_t total = 1;
  for (std::size_t d : op.dims) total *= d;
  op.data.resize(total);
  fill_random(op.data, rng);
  return op;
}

template <typename T>
std::vector<T> eval_expression(const Expression& e, std::size_t extent,
                               const DenseOperand<T>& a, const DenseOperand<T>& b,
                               const std::string& backend) {
  const std::vector<int> out_ids = ids_of(e.out);
  if (backend == "naive")
    return enumerate_contract<T>({a, b}, out_ids).data;

  std::vector<int> all = a.ids;
  all.insert(all.end(), b.ids.begin(), b.ids.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  std::vector<int> out_sorted = out_ids;
  std::sort(out_sorted.begin(), out_sorted.end());
  std::vector<int> summed;
  std::set_difference(all.begin(), all.end(), out_sorted.begin(), out_sorted.end(),
                      std::back_inserter(summed));
  return permute(pairwise_contract(a, b, summed), out_ids).data;
}

template <typename T>
BenchResult run_expression(const Expression& e, std::size_t extent, Precision prec,
                           const std::string& backend, const std::string& kind,
                           const std::string& param, const BenchConfig& cfg,
                           std::uint64_t salt) {
  std::mt19937_64 rng(cfg.seed ^ salt);
  const DenseOperand<T> a = make_operand<T>(e.lhs_a, extent, rng);
  const DenseOperand<T> b = make_operand<T>(e.lhs_b, extent, rng);

  const double mean_s = timed_median(cfg.repetitions, [&] {
    volatile auto sink = eval_expression(e, extent, a, b, backend).size();
    (void)sink;
  });

  BenchResult res;
  res.kind = kind;
  res.param = param;
  res.precision = prec;
  res.backend = backend;
  res.ops = ops_for_expression(e, extent);
  res.mean_s = mean_s;
  res.flops = flops_factor(prec) * static_cast<double>(res.ops) / mean_s;
  return res;
}

template <typename F>
auto with_precision(Precision prec, F&& f) {
  switch (prec) {
    case Precision::real32: return f(float{});
    case Precision::real64: return f(double{});
    case Precision::complex64: return f(std::complex<float>{});
    case Precision::complex128: return f(std::complex<double>{});
  }
  throw InvalidInputError("unknown precision");
}

void check_config(const BenchConfig& cfg) {
  if (cfg.repetitions < 3)
    throw InvalidInputError("benchmark repetitions must be >= 3");
}

}  // namespace

std::string precision_name(Precision p) {
  switch (p) {
    case Precision::real32: return "real32";
    case Precision::real64: return "real64";
    case Precision::complex64: return "complex64";
    case Precision::complex128: return "complex128";
  }
  return "?";
}

Precision parse_precision(const std::string& s) {
  if (s == "real32") return Precision::real32;
  if (s == "real64") return Precision::real64;
  if (s == "complex64") return Precision::complex64;
  if (s == "complex128") return Precision::complex128;
  throw InvalidInputError("unknown precision: " + s);
}

int flops_factor(Precision p) {
  return (p == Precision::real32 || p == Precision::real64) ? 2 : 8;
}

Expression parse_expression(const std::string& expr) {
  const auto arrow = expr.find("->");
  const auto comma = expr.find(',');
  if (arrow == std::string::npos || comma == std::string::npos || comma > arrow)
    throw InvalidInputError("expression must look like \"abcd,bcdf->acf\"");
  Expression e;
  e.lhs_a = expr.substr(0, comma);
  e.lhs_b = expr.substr(comma + 1, arrow - comma - 1);
  e.out = expr.substr(arrow + 2);
  ids_of(e.lhs_a);
  ids_of(e.lhs_b);
  for (char c : e.out)
    if (e.lhs_a.find(c) == std::string::npos && e.lhs_b.find(c) == std::string::npos)
      throw InvalidInputError("output index not present in operands");
  return e;
}

int distinct_index_count(const Expression& e) {
  std::string all = e.lhs_a + e.lhs_b;
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return static_cast<int>(all.size());
}

std::uint64_t ops_for_expression(const Expression& e, std::size_t extent) {
  std::uint64_t ops = 1;
  for (int i = 0; i < distinct_index_count(e); ++i) ops *= extent;
  return ops;
}

std::vector<cd> contract_expression(const Expression& e, std::size_t extent,
                                    const std::vector<cd>& a,
                                    const std::vector<cd>& b,
                                    const std::string& backend) {
  DenseOperand<cd> oa{ids_of(e.lhs_a), {}, a};
  DenseOperand<cd> ob{ids_of(e.lhs_b), {}, b};
  oa.dims.assign(oa.ids.size(), extent);
  ob.dims.assign(ob.ids.size(), extent);
  std::size_t na = 1, nb = 1;
  for (std::size_t d : oa.dims) na *= d;
  for (std::size_t d : ob.dims) nb *= d;
  if (na != a.size() || nb != b.size())
    throw InvalidInputError("operand data size does not match expression shape");
  return eval_expression(e, extent, oa, ob, backend);
}

std::vector<BenchResult> bench_matmul(const std::vector<int>& sizes, Precision prec,
                                      const std::string& backend,
                                      const BenchConfig& cfg) {
  check_config(cfg);
  std::vector<BenchResult> out;
  for (int n : sizes) {
    if (n < 1) throw InvalidInputError("matmul size must be >= 1");
    const std::uint64_t bytes = 3ull * n * n * 16;
    if (bytes > cfg.mem_budget_bytes) {
      BenchResult skip;
      skip.kind = "matmul";
      skip.param = std::to_string(n) + ":skipped";
      skip.precision = prec;
      skip.backend = backend;
      out.push_back(skip);
      continue;
    }
    out.push_back(with_precision(prec, [&](auto tag) {
      return run_matmul<decltype(tag)>(n, prec, backend, cfg);
    }));
  }
  return out;
}

std::vector<BenchResult> bench_tncontract_fixed(const std::vector<int>& sizes,
                                                Precision prec,
                                                const std::string& backend,
                                                const BenchConfig& cfg) {
  check_config(cfg);
  const Expression e = parse_expression("abcd,bcdf->acf");
  std::vector<BenchResult> out;
  for (int n : sizes) {
    if (n < 2) throw InvalidInputError("fixed contraction size must be >= 2");
    const std::uint64_t entries = 2ull * n * n * n * n + 1ull * n * n * n;
    if (entries * 16 > cfg.mem_budget_bytes) {
      BenchResult skip;
      skip.kind = "tncontract_fixed";
      skip.param = std::to_string(n) + ":skipped";
      skip.precision = prec;
      skip.backend = backend;
      out.push_back(skip);
      continue;
    }
    out.push_back(with_precision(prec, [&](auto tag) {
      return run_expression<decltype(tag)>(e, static_cast<std::size_t>(n), prec,
                                           backend, "tncontract_fixed",
                                           std::to_string(n), cfg, 0x5f1du);
    }));
  }
  return out;
}

namespace {

// Random two-operand expression over k distinct indices of extent 2: operand
// index sets cover all k indices, the kept set is a random subset.
Expression random_expression(int k, std::mt19937_64& rng) {
  if (k < 2 || k > 25) throw InvalidInputError("index count must be in [2, 25]");
  std::vector<char> letters(k);
  for (int i = 0; i < k; ++i) letters[i] = static_cast<char>('a' + i);

  std::string lhs_a, lhs_b;
  for (int rounds = 0; lhs_a.empty() || lhs_b.empty(); ++rounds) {
    lhs_a.clear();
    lhs_b.clear();
    for (char c : letters) {
      const int where = static_cast<int>(rng() % 3);  // a-only, b-only, both
      if (where == 0 || where == 2) lhs_a.push_back(c);
      if (where == 1 || where == 2) lhs_b.push_back(c);
    }
    if (rounds > 100) {  // degenerate rng stream; force a split
      lhs_a.assign(letters.begin(), letters.begin() + k / 2 + 1);
      lhs_b.assign(letters.begin() + k / 2, letters.end());
    }
  }
  std::string out;
  for (char c : letters)
    if (rng() % 2) out.push_back(c);
  std::shuffle(lhs_a.begin(), lhs_a.end(), rng);
  std::shuffle(lhs_b.begin(), lhs_b.end(), rng);
  std::shuffle(out.begin(), out.end(), rng);
  return Expression{lhs_a, lhs_b, out};
}

}  // namespace

std::vector<BenchResult> bench_tncontract_random(const std::vector<int>& index_counts,
                                                 Precision prec,
                                                 const std::string& backend,
                                                 const BenchConfig& cfg) {
  check_config(cfg);
  std::vector<BenchResult> out;
  for (int k : index_counts) {
    if (k < 4 || k > 25)
      throw InvalidInputError("random contraction index count must be in [4, 25]");
    std::mt19937_64 rng(cfg.seed * 1000003u + static_cast<std::uint64_t>(k));
    const Expression e = random_expression(k, rng);
    const std::string param =
        std::to_string(k) + ":" + e.lhs_a + "," + e.lhs_b + "->" + e.out;
    out.push_back(with_precision(prec, [&](auto tag) {
      return run_expression<decltype(tag)>(e, 2, prec, backend, "tncontract_random",
                                           param, cfg, static_cast<std::uint64_t>(k));
    }));
  }
  return out;
}

std::vector<BenchResult> bench_from_circuit(const Graph& g, const Angles& a,
                                            const ContractionBackend& backend,
                                            bool merged) {
  const EnergyResult run = energy_expectation(g, a, backend, merged);
  const std::vector<TimingRecord>& records = run.report.records;
  if (records.empty()) throw InvalidInputError("circuit benchmark produced no buckets");

  std::vector<BenchResult> out;
  const std::string bucket_kind = merged ? "bucket_merged" : "bucket_unmerged";

  // Max-FLOPs single bucket.
  const TimingRecord* best = &records[0];
  for (const TimingRecord& r : records)
    if (r.flops_est > best->flops_est) best = &r;
  out.push_back(BenchResult{bucket_kind, "width" + std::to_string(best->width),
                            Precision::complex128, best->backend, best->ops,
                            best->elapsed_s, best->flops_est});

  // Per-edge aggregate closest to 1e8 ops.
  struct Agg { std::uint64_t ops = 0; double time = 0.0; };
  std::map<std::pair<int, int>, Agg> per_edge;
  for (const TimingRecord& r : records) {
    Agg& agg = per_edge[{r.edge_u, r.edge_v}];
    agg.ops += r.ops;
    agg.time += r.elapsed_s;
  }
  const double target_ops = 1e8;
  const std::pair<const std::pair<int, int>, Agg>* pick = nullptr;
  for (const auto& kv : per_edge)
    if (!pick || std::abs(static_cast<double>(kv.second.ops) - target_ops) <
                     std::abs(static_cast<double>(pick->second.ops) - target_ops))
      pick = &kv;
  out.push_back(BenchResult{
      "lightcone",
      std::to_string(pick->first.first) + "-" + std::to_string(pick->first.second),
      Precision::complex128, backend.name(), pick->second.ops, pick->second.time,
      8.0 * static_cast<double>(pick->second.ops) / pick->second.time});

  // Whole run.
  std::uint64_t total_ops = 0;
  double total_time = 0.0;
  for (const TimingRecord& r : records) {
    total_ops += r.ops;
    total_time += r.elapsed_s;
  }
  out.push_back(BenchResult{"circuit",
                            "n" + std::to_string(g.n) + "_p" + std::to_string(a.depth()),
                            Precision::complex128, backend.name(), total_ops,
                            total_time, 8.0 * static_cast<double>(total_ops) / total_time});
  return out;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchResult>& rows) {
  out << "task,kind,param,precision,backend,ops,mean_s,flops\n";
  for (const BenchResult& r : rows)
    out << r.kind << ',' << r.kind << ',' << r.param << ','
        << precision_name(r.precision) << ',' << r.backend << ',' << r.ops << ','
        << r.mean_s << ',' << r.flops << '\n';
}

}  // namespace qtnsim
