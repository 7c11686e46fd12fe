#include "qtnsim/graph.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "qtnsim/errors.hpp"

#include "json.hpp"

namespace qtnsim {

bool Graph::has_edge(Edge e) const {
  return std::binary_search(edges.begin(), edges.end(), e);
}

std::vector<int> Graph::degrees() const {
  std::vector<int> deg(n, 0);
  for (const Edge& e : edges) {
    ++deg[e.u];
    ++deg[e.v];
  }
  return deg;
}

Graph make_graph(int n, std::vector<Edge> edges) {
  if (n < 0) throw InvalidInputError("vertex count must be non-negative");
  for (Edge& e : edges) {
    if (e.u > e.v) std::swap(e.u, e.v);
    if (e.u == e.v) throw InvalidInputError("self-loop at vertex " + std::to_string(e.u));
    if (e.u < 0 || e.v >= n)
      throw InvalidInputError("edge endpoint out of range: (" + std::to_string(e.u) +
                              ", " + std::to_string(e.v) + ")");
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    throw InvalidInputError("duplicate edge");
  return Graph{n, std::move(edges)};
}

Graph random_regular(int n, int d, std::uint64_t seed) {
  if (d >= n) throw InvalidInputError("degree must be smaller than vertex count");
  if (d < 0 || n <= 0) throw InvalidInputError("n and d must be positive");
  if ((static_cast<long long>(n) * d) % 2 != 0)
    throw InvalidInputError("n*d must be even for a d-regular graph");

  std::mt19937_64 rng(seed);
  constexpr int kMaxRestarts = 10000;

  // Pairing model: d stubs per vertex, shuffled and paired; restart on any
  // loop or duplicate edge.
  std::vector<int> stubs(static_cast<std::size_t>(n) * d);
  for (int v = 0; v < n; ++v)
    std::fill_n(stubs.begin() + static_cast<std::size_t>(v) * d, d, v);

  for (int attempt = 0; attempt < kMaxRestarts; ++attempt) {
    std::shuffle(stubs.begin(), stubs.end(), rng);
    std::set<std::pair<int, int>> seen;
    std::vector<Edge> edges;
    edges.reserve(stubs.size() / 2);
    bool ok = true;
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
      int u = stubs[i], v = stubs[i + 1];
      if (u == v) { ok = false; break; }
      if (u > v) std::swap(u, v);
      if (!seen.insert({u, v}).second) { ok = false; break; }
      edges.push_back(Edge{u, v});
    }
    if (ok) return make_graph(n, std::move(edges));
  }
  throw GenerationError("random_regular: no simple pairing found in 10000 restarts");
}

int maxcut_value(const Graph& g, const std::string& assignment) {
  if (static_cast<int>(assignment.size()) != g.n)
    throw InvalidInputError("assignment length must equal vertex count");
  int cut = 0;
  for (const Edge& e : g.edges)
    if (assignment[e.u] != assignment[e.v]) ++cut;
  return cut;
}

Lightcone lightcone(const Graph& g, Edge e, int p) {
  if (e.u > e.v) std::swap(e.u, e.v);
  if (!g.has_edge(e)) throw InvalidInputError("lightcone: edge not in graph");
  if (p < 1) throw InvalidInputError("lightcone: depth must be >= 1");

  std::vector<std::vector<int>> adj(g.n);
  for (const Edge& ge : g.edges) {
    adj[ge.u].push_back(ge.v);
    adj[ge.v].push_back(ge.u);
  }

  // BFS ball of radius p-1 around the edge endpoints.
  std::vector<int> dist(g.n, -1);
  std::deque<int> queue{e.u, e.v};
  dist[e.u] = dist[e.v] = 0;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    if (dist[v] == p - 1) continue;
    for (int w : adj[v])
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
  }

  std::vector<Edge> kept;
  std::set<int> vertices;
  for (const Edge& ge : g.edges)
    if (dist[ge.u] >= 0 || dist[ge.v] >= 0) {
      kept.push_back(ge);
      vertices.insert(ge.u);
      vertices.insert(ge.v);
    }

  Lightcone lc;
  lc.old_to_new.assign(g.n, -1);
  for (int v : vertices) {
    lc.old_to_new[v] = static_cast<int>(lc.new_to_old.size());
    lc.new_to_old.push_back(v);
  }
  std::vector<Edge> relabeled;
  relabeled.reserve(kept.size());
  for (const Edge& ge : kept)
    relabeled.push_back(Edge{lc.old_to_new[ge.u], lc.old_to_new[ge.v]});
  lc.subgraph = make_graph(static_cast<int>(lc.new_to_old.size()), std::move(relabeled));
  lc.target = Edge{lc.old_to_new[e.u], lc.old_to_new[e.v]};
  if (lc.target.u > lc.target.v) std::swap(lc.target.u, lc.target.v);
  return lc;
}

Graph read_graph_json(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw InvalidInputError(std::string("graph JSON parse error: ") + ex.what());
  }
  if (!j.contains("n") || !j.contains("edges"))
    throw InvalidInputError("graph JSON must contain \"n\" and \"edges\"");
  std::vector<Edge> edges;
  for (const auto& pair : j["edges"]) {
    if (!pair.is_array() || pair.size() != 2)
      throw InvalidInputError("graph JSON edge must be a pair");
    edges.push_back(Edge{pair[0].get<int>(), pair[1].get<int>()});
  }
  return make_graph(j["n"].get<int>(), std::move(edges));
}

Graph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open graph file: " + path);
  return read_graph_json(in);
}

void write_graph_json(const Graph& g, std::ostream& out) {
  nlohmann::json j;
  j["n"] = g.n;
  auto edges = nlohmann::json::array();
  for (const Edge& e : g.edges) edges.push_back({e.u, e.v});
  j["edges"] = edges;
  out << j.dump() << "\n";
}

void save_graph(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInputError("cannot open output file: " + path);
  write_graph_json(g, out);
}

}  // namespace qtnsim
