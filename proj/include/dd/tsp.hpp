#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dd/engine.hpp"
#include "dd/multipliers.hpp"

namespace dd {

// Undirected graph with real edge scores; the relaxation maximizes tour
// score. Vertices are 0-based internally (vertex 0 plays the special role).
struct WeightedGraph {
  struct Edge {
    int u;
    int v;
    double score;
  };

  int n = 0;
  std::vector<Edge> edges;

  void validate() const;
  int findEdge(int u, int v) const;  // -1 if absent
};

// Spanning tree over vertices 1..n-1 plus exactly two edges at vertex 0;
// always n edges in total.
struct OneTree {
  std::vector<int> edgeIds;  // sorted

  bool operator==(const OneTree&) const = default;
};

// Hamiltonian cycle as a vertex order starting at 0.
struct Tour {
  std::vector<int> vertexOrder;

  std::vector<int> edgeIds(const WeightedGraph& graph) const;
};

bool isOneTree(const WeightedGraph& graph, const std::vector<int>& edgeIds);

double edgeSetScore(const WeightedGraph& graph, const std::vector<int>& edgeIds);

// Max-score one-tree under adjusted scores theta'_e = theta_e + u_i + u_j:
// greedy max spanning tree over vertices 1..n-1 (sorted-edge selection with
// union-find) plus the two best vertex-0 edges. Ties take the lower edge id.
OneTree bestOneTree(const WeightedGraph& graph, const std::vector<double>& u);

// Degree of each vertex in the one-tree minus 2; sums to zero.
std::vector<int> degreeResiduals(const WeightedGraph& graph, const OneTree& tree);

class TspBackend {
 public:
  using Structure = OneTree;

  explicit TspBackend(WeightedGraph graph);

  OracleResult<Structure> oracle(const DualVariables& u) const;
  std::optional<Primal<Structure>> primalize(const Structure& s) const;
  std::string describe() const;

  const WeightedGraph& graph() const { return graph_; }

 private:
  WeightedGraph graph_;
};

}  // namespace dd
