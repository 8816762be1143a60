#include "dd/tsp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "dd/errors.hpp"

namespace dd {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int root(int i) {
    while (parent[static_cast<std::size_t>(i)] != i) {
      parent[static_cast<std::size_t>(i)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])];
      i = parent[static_cast<std::size_t>(i)];
    }
    return i;
  }
  bool unite(int a, int b) {
    int ra = root(a), rb = root(b);
    if (ra == rb) return false;
    parent[static_cast<std::size_t>(ra)] = rb;
    return true;
  }
};

}  // namespace

void WeightedGraph::validate() const {
  if (n < 3) throw InvalidInstanceError("graph needs at least three vertices");
  std::set<std::pair<int, int>> seen;
  for (const Edge& e : edges) {
    if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n)
      throw InvalidInstanceError("edge endpoint out of range");
    if (e.u == e.v) throw InvalidInstanceError("self-loop edge");
    int a = std::min(e.u, e.v), b = std::max(e.u, e.v);
    if (!seen.insert({a, b}).second) throw InvalidInstanceError("duplicate edge");
    if (!std::isfinite(e.score)) throw InvalidInstanceError("edge score must be finite");
  }
}

int WeightedGraph::findEdge(int u, int v) const {
  if (u > v) std::swap(u, v);
  for (int i = 0; i < static_cast<int>(edges.size()); ++i) {
    int a = std::min(edges[static_cast<std::size_t>(i)].u, edges[static_cast<std::size_t>(i)].v);
    int b = std::max(edges[static_cast<std::size_t>(i)].u, edges[static_cast<std::size_t>(i)].v);
    if (a == u && b == v) return i;
  }
  return -1;
}

std::vector<int> Tour::edgeIds(const WeightedGraph& graph) const {
  if (static_cast<int>(vertexOrder.size()) != graph.n)
    throw InvalidInstanceError("tour must visit every vertex once");
  std::vector<int> ids;
  for (std::size_t i = 0; i < vertexOrder.size(); ++i) {
    int a = vertexOrder[i];
    int b = vertexOrder[(i + 1) % vertexOrder.size()];
    int id = graph.findEdge(a, b);
    if (id < 0) throw InvalidInstanceError("tour uses a missing edge");
    ids.push_back(id);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

bool isOneTree(const WeightedGraph& graph, const std::vector<int>& edgeIds) {
  if (static_cast<int>(edgeIds.size()) != graph.n) return false;
  std::set<int> unique(edgeIds.begin(), edgeIds.end());
  if (unique.size() != edgeIds.size()) return false;

  int zeroDegree = 0;
  UnionFind uf(graph.n);
  int treeEdges = 0;
  for (int id : edgeIds) {
    if (id < 0 || id >= static_cast<int>(graph.edges.size())) return false;
    const WeightedGraph::Edge& e = graph.edges[static_cast<std::size_t>(id)];
    if (e.u == 0 || e.v == 0) {
      ++zeroDegree;
    } else {
      if (!uf.unite(e.u, e.v)) return false;  // cycle among vertices 1..n-1
      ++treeEdges;
    }
  }
  if (zeroDegree != 2) return false;
  return treeEdges == graph.n - 2;  // acyclic + n-2 edges over n-1 vertices = spanning tree
}

double edgeSetScore(const WeightedGraph& graph, const std::vector<int>& edgeIds) {
  double total = 0.0;
  for (int id : edgeIds) total += graph.edges[static_cast<std::size_t>(id)].score;
  return total;
}

OneTree bestOneTree(const WeightedGraph& graph, const std::vector<double>& u) {
  graph.validate();
  if (static_cast<int>(u.size()) != graph.n)
    throw InvalidInstanceError("multiplier vector length must equal the vertex count");

  auto adjusted = [&](int id) {
    const WeightedGraph::Edge& e = graph.edges[static_cast<std::size_t>(id)];
    return e.score + u[static_cast<std::size_t>(e.u)] + u[static_cast<std::size_t>(e.v)];
  };

  std::vector<int> order(graph.edges.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    double sa = adjusted(a), sb = adjusted(b);
    if (sa != sb) return sa > sb;
    return a < b;
  });

  OneTree tree;
  UnionFind uf(graph.n);
  int picked = 0;
  for (int id : order) {
    const WeightedGraph::Edge& e = graph.edges[static_cast<std::size_t>(id)];
    if (e.u == 0 || e.v == 0) continue;
    if (uf.unite(e.u, e.v)) {
      tree.edgeIds.push_back(id);
      ++picked;
    }
  }
  if (picked != graph.n - 2)
    throw InfeasibleError("vertices 2..n are not connected without vertex 1");

  int zeroPicked = 0;
  for (int id : order) {
    const WeightedGraph::Edge& e = graph.edges[static_cast<std::size_t>(id)];
    if (e.u != 0 && e.v != 0) continue;
    tree.edgeIds.push_back(id);
    if (++zeroPicked == 2) break;
  }
  if (zeroPicked != 2) throw InfeasibleError("vertex 1 has fewer than two incident edges");

  std::sort(tree.edgeIds.begin(), tree.edgeIds.end());
  return tree;
}

std::vector<int> degreeResiduals(const WeightedGraph& graph, const OneTree& tree) {
  std::vector<int> residuals(static_cast<std::size_t>(graph.n), -2);
  for (int id : tree.edgeIds) {
    const WeightedGraph::Edge& e = graph.edges[static_cast<std::size_t>(id)];
    ++residuals[static_cast<std::size_t>(e.u)];
    ++residuals[static_cast<std::size_t>(e.v)];
  }
  return residuals;
}

TspBackend::TspBackend(WeightedGraph graph) : graph_(std::move(graph)) { graph_.validate(); }

OracleResult<TspBackend::Structure> TspBackend::oracle(const DualVariables& u) const {
  std::vector<double> dense(static_cast<std::size_t>(graph_.n), 0.0);
  for (int i = 0; i < graph_.n; ++i) dense[static_cast<std::size_t>(i)] = u.get(ConstraintId::vertex(i));

  OneTree tree = bestOneTree(graph_, dense);
  std::vector<int> residuals = degreeResiduals(graph_, tree);

  OracleResult<Structure> res;
  for (int i = 0; i < graph_.n; ++i)
    if (residuals[static_cast<std::size_t>(i)] != 0)
      res.subgradient.add(ConstraintId::vertex(i),
                          static_cast<double>(residuals[static_cast<std::size_t>(i)]));

  // Lagrangian value: raw one-tree score plus sum_i u_i (deg_i - 2), which
  // equals the adjusted-score optimum minus the 2 sum u_i constant.
  res.dualValue = edgeSetScore(graph_, tree.edgeIds) + u.dot(res.subgradient);
  res.structure = std::move(tree);
  return res;
}

std::optional<Primal<TspBackend::Structure>> TspBackend::primalize(const Structure& s) const {
  for (int r : degreeResiduals(graph_, s))
    if (r != 0) return std::nullopt;
  Primal<Structure> primal;
  primal.solution = s;
  primal.value = edgeSetScore(graph_, s.edgeIds);
  return primal;
}

std::string TspBackend::describe() const {
  std::ostringstream os;
  os << "tsp-onetree n=" << graph_.n << " edges=" << graph_.edges.size();
  return os.str();
}

}  // namespace dd
