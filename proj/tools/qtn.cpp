#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "qtnsim/bench.hpp"
#include "qtnsim/engine.hpp"
#include "qtnsim/errors.hpp"
#include "qtnsim/statevector.hpp"

namespace {

using namespace qtnsim;

std::vector<double> parse_csv_doubles(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(std::stod(field));
  return out;
}

// Angles come either from --angles JSON ({"gammas": [...], "betas": [...]})
// or from --gammas/--betas comma-separated radians.
Angles resolve_angles(const std::string& angles_path, const std::string& gammas,
                      const std::string& betas, int p) {
  Angles a;
  if (!angles_path.empty()) {
    std::ifstream in(angles_path);
    if (!in) throw InvalidInputError("cannot open angles file: " + angles_path);
    nlohmann::json j;
    in >> j;
    a.gammas = j.at("gammas").get<std::vector<double>>();
    a.betas = j.at("betas").get<std::vector<double>>();
  } else if (gammas.empty() && betas.empty() && p > 0) {
    // schedule-shape commands only need the depth; use zero angles
    a.gammas.assign(p, 0.0);
    a.betas.assign(p, 0.0);
  } else {
    a.gammas = parse_csv_doubles(gammas);
    a.betas = parse_csv_doubles(betas);
  }
  a.validate();
  if (p > 0 && a.depth() != p)
    throw InvalidInputError("--p disagrees with the number of angles");
  return a;
}

Graph resolve_graph(const std::string& path, int n, int d, std::uint64_t seed) {
  if (!path.empty()) return load_graph(path);
  if (n <= 0) throw InvalidInputError("provide --graph or generator params --n/--d");
  return random_regular(n, d, seed);
}

struct BackendSet {
  NaiveBackend naive;
  MatmulBackend matmul;
  std::unique_ptr<MixedBackend> mixed;

  const ContractionBackend& resolve(const std::string& name, const std::string& threshold) {
    if (name == "naive") return naive;
    if (name == "matmul") return matmul;
    if (name == "mixed") {
      int t;
      if (threshold == "auto")
        t = calibrate(naive, matmul).threshold;
      else
        t = std::stoi(threshold);
      mixed = std::make_unique<MixedBackend>(t, naive, matmul);
      return *mixed;
    }
    throw InvalidInputError("unknown backend: " + name);
  }
};

void write_records(const std::string& path, const std::vector<TimingRecord>& records) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw InvalidInputError("cannot open output file: " + path);
  write_timing_csv(out, records);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QAOA MaxCut expectation values by tensor-network bucket elimination"};
  app.require_subcommand(1);

  std::string graph_path, out_path, csv_path, angles_path, gammas, betas;
  std::string backend_name = "matmul", threshold = "15", precision = "complex128";
  int n = 0, d = 3, p = 0, jobs = 1, reps = 5;
  std::uint64_t seed = 1;
  int max_width = EngineConfig::from_env().max_result_width;
  bool merged = false;

  auto add_graph_flags = [&](CLI::App* cmd) {
    cmd->add_option("--graph", graph_path, "graph JSON file");
    cmd->add_option("--n", n, "generated graph: vertex count");
    cmd->add_option("--d", d, "generated graph: degree");
    cmd->add_option("--seed", seed, "random seed");
  };
  auto add_angle_flags = [&](CLI::App* cmd) {
    cmd->add_option("--angles", angles_path, "angles JSON file");
    cmd->add_option("--gammas", gammas, "comma-separated gamma angles (radians)");
    cmd->add_option("--betas", betas, "comma-separated beta angles (radians)");
    cmd->add_option("--p", p, "QAOA depth (checked against the angle lists)");
  };

  auto* gen = app.add_subcommand("generate-graph", "write a random regular graph");
  add_graph_flags(gen);
  gen->add_option("--out", out_path, "output path (default stdout)");

  auto* energy = app.add_subcommand("energy", "tensor-network energy expectation");
  add_graph_flags(energy);
  add_angle_flags(energy);
  energy->add_option("--backend", backend_name, "naive | matmul | mixed");
  energy->add_option("--threshold", threshold, "mixed dispatch width threshold or 'auto'");
  energy->add_flag("--merged", merged, "merge nested buckets before contraction");
  energy->add_option("--timing-csv", csv_path, "write per-bucket timing CSV");
  energy->add_option("--jobs", jobs, "parallel lightcone workers");
  energy->add_option("--max-width", max_width, "refuse result tensors wider than this");

  auto* oracle = app.add_subcommand("oracle-energy", "state-vector reference energy");
  add_graph_flags(oracle);
  add_angle_flags(oracle);

  auto* calib = app.add_subcommand("calibrate", "measure the mixed-dispatch threshold");
  calib->add_option("--seed", seed, "trial seed");
  calib->add_option("--reps", reps, "repetitions per width");

  auto* stats = app.add_subcommand("order-stats", "bucket width histogram CSV");
  add_graph_flags(stats);
  add_angle_flags(stats);
  stats->add_flag("--merged", merged, "merge nested buckets first");
  stats->add_option("--out", out_path, "output path (default stdout)");

  auto* report = app.add_subcommand("report", "aggregate a timing CSV per width");
  std::string report_in;
  report->add_option("--csv", report_in, "timing CSV from an energy run")->required();

  auto* bench = app.add_subcommand("bench", "synthetic benchmark tiers");
  std::string bench_task = "matmul", bench_sizes;
  add_graph_flags(bench);
  add_angle_flags(bench);
  bench->add_option("--task", bench_task,
                    "matmul | tncontract-fixed | tncontract-random | circuit");
  bench->add_option("--sizes", bench_sizes, "comma-separated sizes / index counts");
  bench->add_option("--precision", precision, "real32 | real64 | complex64 | complex128");
  bench->add_option("--backend", backend_name, "naive | matmul | mixed");
  bench->add_option("--threshold", threshold, "mixed threshold for circuit task");
  bench->add_flag("--merged", merged, "merged schedule for circuit task");
  bench->add_option("--reps", reps, "repetitions (median reported)");
  bench->add_option("--out", out_path, "CSV output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    BackendSet backends;
    EngineConfig cfg;
    cfg.max_result_width = max_width;

    auto out_stream = [&]() -> std::ostream& {
      static std::ofstream file;
      if (out_path.empty()) return std::cout;
      file.open(out_path);
      if (!file) throw InvalidInputError("cannot open output file: " + out_path);
      return file;
    };

    if (gen->parsed()) {
      const Graph g = random_regular(n, d, seed);
      write_graph_json(g, out_stream());
    } else if (energy->parsed()) {
      const Graph g = resolve_graph(graph_path, n, d, seed);
      const Angles a = resolve_angles(angles_path, gammas, betas, p);
      const ContractionBackend& backend = backends.resolve(backend_name, threshold);
      const EnergyResult res = energy_expectation(g, a, backend, merged, cfg, jobs);
      std::cout << std::setprecision(12) << res.energy << "\n";
      write_records(csv_path, res.report.records);
    } else if (oracle->parsed()) {
      const Graph g = resolve_graph(graph_path, n, d, seed);
      const Angles a = resolve_angles(angles_path, gammas, betas, p);
      const StateVector sv = run_ansatz(g, a);
      std::cout << std::setprecision(12) << expectation_cost(sv, g) << "\n";
    } else if (calib->parsed()) {
      CalibrationConfig ccfg;
      ccfg.seed = seed;
      ccfg.repetitions = reps;
      const CalibrationResult res = calibrate(backends.naive, backends.matmul, ccfg);
      std::cout << res.threshold << "\n";
    } else if (stats->parsed()) {
      const Graph g = resolve_graph(graph_path, n, d, seed);
      const Angles a = resolve_angles(angles_path, gammas, betas, p);
      std::map<int, int> hist;
      for (const Edge& e : g.edges)
        for (int w : simulate_widths(edge_schedule(g, e, a, merged))) ++hist[w];
      std::ostream& out = out_stream();
      out << "width,count\n";
      for (const auto& [w, c] : hist) out << w << ',' << c << '\n';
    } else if (report->parsed()) {
      std::ifstream in(report_in);
      if (!in) throw InvalidInputError("cannot open timing CSV: " + report_in);
      const std::vector<TimingRecord> records = read_timing_csv(in);
      struct Agg { int count = 0; double total = 0.0; double flops = 0.0; };
      std::map<std::pair<std::string, int>, Agg> agg;
      for (const TimingRecord& r : records) {
        Agg& a = agg[{r.backend, r.width}];
        ++a.count;
        a.total += r.elapsed_s;
        a.flops += r.flops_est;
      }
      std::cout << "backend,width,count,mean_s,total_s,mean_flops\n";
      for (const auto& [key, a] : agg)
        std::cout << key.first << ',' << key.second << ',' << a.count << ','
                  << a.total / a.count << ',' << a.total << ',' << a.flops / a.count
                  << '\n';
    } else if (bench->parsed()) {
      BenchConfig bcfg;
      bcfg.repetitions = reps;
      bcfg.seed = seed;
      const Precision prec = parse_precision(precision);
      std::vector<int> sizes;
      if (!bench_sizes.empty())
        for (double x : parse_csv_doubles(bench_sizes)) sizes.push_back(static_cast<int>(x));

      std::vector<BenchResult> rows;
      if (bench_task == "matmul") {
        if (sizes.empty()) sizes = {16, 64, 128, 256, 465, 512, 1024, 2048};
        rows = bench_matmul(sizes, prec, backend_name, bcfg);
      } else if (bench_task == "tncontract-fixed") {
        if (sizes.empty()) sizes = {10, 20, 30, 40, 50, 60};
        rows = bench_tncontract_fixed(sizes, prec, backend_name, bcfg);
      } else if (bench_task == "tncontract-random") {
        if (sizes.empty()) sizes = {4, 8, 12, 16, 20, 25};
        rows = bench_tncontract_random(sizes, prec, backend_name, bcfg);
      } else if (bench_task == "circuit") {
        const Graph g = resolve_graph(graph_path, n, d, seed);
        const Angles a = resolve_angles(angles_path, gammas, betas, p);
        const ContractionBackend& backend = backends.resolve(backend_name, threshold);
        rows = bench_from_circuit(g, a, backend, merged);
      } else {
        throw InvalidInputError("unknown bench task: " + bench_task);
      }
      write_bench_csv(out_stream(), rows);
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}
