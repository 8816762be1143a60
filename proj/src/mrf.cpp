#include "dd/mrf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
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
  // false if already connected
  bool unite(int a, int b) {
    int ra = root(a), rb = root(b);
    if (ra == rb) return false;
    parent[static_cast<std::size_t>(ra)] = rb;
    return true;
  }
};

}  // namespace

void PairwiseMRF::validate() const {
  if (n < 1) throw InvalidInstanceError("MRF needs at least one variable");
  std::set<std::pair<int, int>> seen;
  for (const Edge& e : edges) {
    if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n)
      throw InvalidInstanceError("MRF edge endpoint out of range");
    if (e.u == e.v) throw InvalidInstanceError("MRF edge is a self-loop");
    if (e.u > e.v) throw InvalidInstanceError("MRF edges must be stored with u < v");
    if (!seen.insert({e.u, e.v}).second) throw InvalidInstanceError("duplicate MRF edge");
    for (double value : e.table)
      if (!std::isfinite(value)) throw InvalidInstanceError("MRF potential must be finite");
  }
}

double PairwiseMRF::evaluate(const std::vector<std::uint8_t>& assignment) const {
  double total = 0.0;
  for (const Edge& e : edges) {
    int idx = (assignment[static_cast<std::size_t>(e.u)] << 1) |
              assignment[static_cast<std::size_t>(e.v)];
    total += e.table[static_cast<std::size_t>(idx)];
  }
  return total;
}

int PairwiseMRF::findEdge(int u, int v) const {
  if (u > v) std::swap(u, v);
  for (int i = 0; i < static_cast<int>(edges.size()); ++i)
    if (edges[static_cast<std::size_t>(i)].u == u && edges[static_cast<std::size_t>(i)].v == v)
      return i;
  return -1;
}

void TreeCover::validate(const PairwiseMRF& mrf) const {
  std::vector<char> covered(mrf.edges.size(), 0);
  for (const std::vector<int>* side : {&t1, &t2}) {
    UnionFind uf(mrf.n);
    std::set<int> seen;
    for (int idx : *side) {
      if (idx < 0 || idx >= static_cast<int>(mrf.edges.size()))
        throw InvalidInstanceError("cover references a missing edge");
      if (!seen.insert(idx).second) throw InvalidInstanceError("cover lists an edge twice");
      const PairwiseMRF::Edge& e = mrf.edges[static_cast<std::size_t>(idx)];
      if (!uf.unite(e.u, e.v)) throw AcyclicityError("cover side contains a cycle");
      covered[static_cast<std::size_t>(idx)] = 1;
    }
  }
  for (std::size_t i = 0; i < covered.size(); ++i)
    if (!covered[i]) throw CoverageError("cover misses an edge of the MRF");
}

SplitPotentials splitPotentials(const PairwiseMRF& mrf, const TreeCover& cover) {
  cover.validate(mrf);
  SplitPotentials split;
  split.t1.assign(mrf.edges.size(), std::nullopt);
  split.t2.assign(mrf.edges.size(), std::nullopt);
  std::vector<int> multiplicity(mrf.edges.size(), 0);
  for (int idx : cover.t1) ++multiplicity[static_cast<std::size_t>(idx)];
  for (int idx : cover.t2) ++multiplicity[static_cast<std::size_t>(idx)];
  auto shared = [&](int idx) {
    std::array<double, 4> table = mrf.edges[static_cast<std::size_t>(idx)].table;
    for (double& value : table) value /= static_cast<double>(multiplicity[static_cast<std::size_t>(idx)]);
    return table;
  };
  for (int idx : cover.t1) split.t1[static_cast<std::size_t>(idx)] = shared(idx);
  for (int idx : cover.t2) split.t2[static_cast<std::size_t>(idx)] = shared(idx);
  return split;
}

std::vector<std::uint8_t> maxProductForest(int n, const std::vector<std::pair<int, int>>& edges,
                                           const std::vector<std::array<double, 4>>& tables,
                                           const std::map<int, double>& unaryAdjust) {
  if (edges.size() != tables.size())
    throw InvalidInstanceError("edge list and table list must have equal length");
  UnionFind cycleCheck(n);
  std::vector<std::vector<int>> incident(static_cast<std::size_t>(n));
  for (int idx = 0; idx < static_cast<int>(edges.size()); ++idx) {
    auto [a, b] = edges[static_cast<std::size_t>(idx)];
    if (a < 0 || b < 0 || a >= n || b >= n || a == b)
      throw InvalidInstanceError("bad forest edge");
    if (!cycleCheck.unite(a, b)) throw AcyclicityError("edge set is not acyclic");
    incident[static_cast<std::size_t>(a)].push_back(idx);
    incident[static_cast<std::size_t>(b)].push_back(idx);
  }

  auto unary = [&](int vertex, int state) {
    if (state == 0) return 0.0;
    auto it = unaryAdjust.find(vertex);
    return it == unaryAdjust.end() ? 0.0 : it->second;
  };
  auto tableAt = [&](int idx, int stateU, int stateV) {
    return tables[static_cast<std::size_t>(idx)][static_cast<std::size_t>((stateU << 1) | stateV)];
  };

  std::vector<std::uint8_t> assignment(static_cast<std::size_t>(n), 0);
  std::vector<int> parent(static_cast<std::size_t>(n), -2);  // -2 unvisited, -1 root
  std::vector<int> parentEdge(static_cast<std::size_t>(n), -1);
  std::vector<std::array<double, 2>> up(static_cast<std::size_t>(n));

  for (int rootVertex = 0; rootVertex < n; ++rootVertex) {
    if (parent[static_cast<std::size_t>(rootVertex)] != -2) continue;

    std::vector<int> order;
    parent[static_cast<std::size_t>(rootVertex)] = -1;
    order.push_back(rootVertex);
    for (std::size_t head = 0; head < order.size(); ++head) {
      int v = order[head];
      for (int idx : incident[static_cast<std::size_t>(v)]) {
        auto [a, b] = edges[static_cast<std::size_t>(idx)];
        int other = a == v ? b : a;
        if (parent[static_cast<std::size_t>(other)] != -2) continue;
        parent[static_cast<std::size_t>(other)] = v;
        parentEdge[static_cast<std::size_t>(other)] = idx;
        order.push_back(other);
      }
    }

    // Upward pass: children before parents.
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      int v = *it;
      for (int s = 0; s < 2; ++s) up[static_cast<std::size_t>(v)][static_cast<std::size_t>(s)] = unary(v, s);
      for (int idx : incident[static_cast<std::size_t>(v)]) {
        auto [a, b] = edges[static_cast<std::size_t>(idx)];
        int child = a == v ? b : a;
        if (parent[static_cast<std::size_t>(child)] != v) continue;
        for (int s = 0; s < 2; ++s) {
          double best = -std::numeric_limits<double>::infinity();
          for (int cs = 0; cs < 2; ++cs) {
            double value = (a == v ? tableAt(idx, s, cs) : tableAt(idx, cs, s)) +
                           up[static_cast<std::size_t>(child)][static_cast<std::size_t>(cs)];
            best = std::max(best, value);
          }
          up[static_cast<std::size_t>(v)][static_cast<std::size_t>(s)] += best;
        }
      }
    }

    // Downward pass: parents decided first; ties take state 0.
    for (int v : order) {
      int chosen;
      if (parent[static_cast<std::size_t>(v)] < 0) {
        chosen = up[static_cast<std::size_t>(v)][0] >= up[static_cast<std::size_t>(v)][1] ? 0 : 1;
      } else {
        int p = parent[static_cast<std::size_t>(v)];
        int idx = parentEdge[static_cast<std::size_t>(v)];
        int edgeU = edges[static_cast<std::size_t>(idx)].first;
        int ps = assignment[static_cast<std::size_t>(p)];
        auto value = [&](int s) {
          return (edgeU == p ? tableAt(idx, ps, s) : tableAt(idx, s, ps)) +
                 up[static_cast<std::size_t>(v)][static_cast<std::size_t>(s)];
        };
        chosen = value(0) >= value(1) ? 0 : 1;
      }
      assignment[static_cast<std::size_t>(v)] = static_cast<std::uint8_t>(chosen);
    }
  }
  return assignment;
}

PairwiseMRF makeGridMrf(int rows, int cols, const std::vector<std::array<double, 4>>& tables) {
  if (rows < 1 || cols < 1) throw InvalidInstanceError("grid dimensions must be >= 1");
  PairwiseMRF mrf;
  mrf.n = rows * cols;
  std::size_t next = 0;
  auto take = [&]() -> std::array<double, 4> {
    if (next >= tables.size()) throw InvalidInstanceError("not enough grid edge tables");
    return tables[next++];
  };
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c + 1 < cols; ++c)
      mrf.edges.push_back({r * cols + c, r * cols + c + 1, take()});
  for (int r = 0; r + 1 < rows; ++r)
    for (int c = 0; c < cols; ++c)
      mrf.edges.push_back({r * cols + c, (r + 1) * cols + c, take()});
  if (next != tables.size()) throw InvalidInstanceError("too many grid edge tables");
  mrf.validate();
  return mrf;
}

TreeCover gridCover(const PairwiseMRF& mrf, int rows, int cols) {
  if (rows * cols != mrf.n) throw InvalidInstanceError("grid dimensions do not match the MRF");
  TreeCover cover;
  for (int idx = 0; idx < static_cast<int>(mrf.edges.size()); ++idx) {
    const PairwiseMRF::Edge& e = mrf.edges[static_cast<std::size_t>(idx)];
    bool horizontal = e.v == e.u + 1 && e.u / cols == e.v / cols;
    bool vertical = e.v == e.u + cols;
    if (horizontal)
      cover.t1.push_back(idx);
    else if (vertical)
      cover.t2.push_back(idx);
    else
      throw InvalidInstanceError("edge is neither horizontal nor vertical in the grid");
  }
  cover.validate(mrf);
  return cover;
}

MrfBackend::MrfBackend(PairwiseMRF mrf, TreeCover cover)
    : mrf_(std::move(mrf)), cover_(std::move(cover)) {
  mrf_.validate();
  split_ = splitPotentials(mrf_, cover_);
  for (int idx : cover_.t1) {
    const PairwiseMRF::Edge& e = mrf_.edges[static_cast<std::size_t>(idx)];
    t1Edges_.emplace_back(e.u, e.v);
    t1Tables_.push_back(*split_.t1[static_cast<std::size_t>(idx)]);
  }
  for (int idx : cover_.t2) {
    const PairwiseMRF::Edge& e = mrf_.edges[static_cast<std::size_t>(idx)];
    t2Edges_.emplace_back(e.u, e.v);
    t2Tables_.push_back(*split_.t2[static_cast<std::size_t>(idx)]);
  }
}

OracleResult<MrfBackend::Structure> MrfBackend::oracle(const DualVariables& u) const {
  std::map<int, double> plus, minus;
  for (int i = 0; i < mrf_.n; ++i) {
    double value = u.get(ConstraintId::vertex(i));
    if (value != 0.0) {
      plus[i] = value;
      minus[i] = -value;
    }
  }
  std::vector<std::uint8_t> y = maxProductForest(mrf_.n, t1Edges_, t1Tables_, plus);
  std::vector<std::uint8_t> z = maxProductForest(mrf_.n, t2Edges_, t2Tables_, minus);

  OracleResult<Structure> res;
  for (int i = 0; i < mrf_.n; ++i) {
    int diff = static_cast<int>(y[static_cast<std::size_t>(i)]) -
               static_cast<int>(z[static_cast<std::size_t>(i)]);
    if (diff != 0) res.subgradient.add(ConstraintId::vertex(i), static_cast<double>(diff));
  }

  double f = 0.0;
  for (std::size_t j = 0; j < t1Edges_.size(); ++j) {
    auto [a, b] = t1Edges_[j];
    f += t1Tables_[j][static_cast<std::size_t>((y[static_cast<std::size_t>(a)] << 1) |
                                               y[static_cast<std::size_t>(b)])];
  }
  double g = 0.0;
  for (std::size_t j = 0; j < t2Edges_.size(); ++j) {
    auto [a, b] = t2Edges_[j];
    g += t2Tables_[j][static_cast<std::size_t>((z[static_cast<std::size_t>(a)] << 1) |
                                               z[static_cast<std::size_t>(b)])];
  }
  res.dualValue = f + g + u.dot(res.subgradient);
  res.structure = Structure{std::move(y), std::move(z)};
  return res;
}

std::optional<Primal<MrfBackend::Structure>> MrfBackend::primalize(const Structure& s) const {
  Primal<Structure> primal;
  primal.value = mrf_.evaluate(s.y);
  primal.solution = Structure{s.y, s.y};
  return primal;
}

std::string MrfBackend::describe() const {
  std::ostringstream os;
  os << "mrf-map n=" << mrf_.n << " edges=" << mrf_.edges.size() << " |T1|=" << cover_.t1.size()
     << " |T2|=" << cover_.t2.size();
  return os.str();
}

}  // namespace dd
