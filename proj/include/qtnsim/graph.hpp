#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace qtnsim {

struct Edge {
  int u = 0;
  int v = 0;  // invariant: u < v
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Undirected simple graph: the MaxCut instance.
struct Graph {
  int n = 0;
  std::vector<Edge> edges;  // sorted lexicographically, no duplicates

  bool has_edge(Edge e) const;
  std::vector<int> degrees() const;
};

// Normalizes endpoint order, sorts edges, and checks simplicity.
Graph make_graph(int n, std::vector<Edge> edges);

// Pairing-model d-regular graph; restarts on loops/multi-edges.
// Deterministic for a fixed seed.
Graph random_regular(int n, int d, std::uint64_t seed);

// Number of edges crossing the partition given by '0'/'1' assignment.
int maxcut_value(const Graph& g, const std::string& assignment);

struct Lightcone {
  Graph subgraph;               // relabeled to contiguous vertex ids
  std::vector<int> old_to_new;  // size g.n, -1 for vertices not kept
  std::vector<int> new_to_old;
  Edge target;                  // the observable edge, relabeled
};

// Subgraph relevant to the edge observable at QAOA depth p: every edge of g
// with at least one endpoint within graph distance p-1 of {e.u, e.v}.
Lightcone lightcone(const Graph& g, Edge e, int p);

// JSON round-trip: {"n": <int>, "edges": [[u, v], ...]}
Graph read_graph_json(std::istream& in);
Graph load_graph(const std::string& path);
void write_graph_json(const Graph& g, std::ostream& out);
void save_graph(const Graph& g, const std::string& path);

}  // namespace qtnsim
