#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dd/engine.hpp"
#include "dd/multipliers.hpp"

namespace dd {

// Pairwise binary MRF: h(y) = sum over edges of theta_{i,j}(y_i, y_j).
// Vertices are 0-based; edges are stored with u < v and the 2x2 table is
// indexed (y_u << 1) | y_v.
struct PairwiseMRF {
  struct Edge {
    int u;
    int v;
    std::array<double, 4> table;
  };

  int n = 0;
  std::vector<Edge> edges;

  void validate() const;
  double evaluate(const std::vector<std::uint8_t>& assignment) const;
  int findEdge(int u, int v) const;  // -1 if absent
};

// Two edge subsets (by edge index) whose union is the full edge set, each
// acyclic over the vertices.
struct TreeCover {
  std::vector<int> t1;
  std::vector<int> t2;

  void validate(const PairwiseMRF& mrf) const;
};

// Per-tree tables after dividing each edge's table by its cover multiplicity.
// Entries are indexed like PairwiseMRF::edges; absent means the edge is not
// in that tree.
struct SplitPotentials {
  std::vector<std::optional<std::array<double, 4>>> t1;
  std::vector<std::optional<std::array<double, 4>>> t2;
};

SplitPotentials splitPotentials(const PairwiseMRF& mrf, const TreeCover& cover);

// Exact MAP over an acyclic edge set plus per-vertex bonuses on state 1:
//   argmax over {0,1}^n of sum of edge tables + sum_i unaryAdjust(i) * y_i.
// Leaf-to-root message passing per component, rooted at the lowest vertex;
// ties prefer state 0, so isolated vertices follow the sign of their bonus.
std::vector<std::uint8_t> maxProductForest(int n, const std::vector<std::pair<int, int>>& edges,
                                           const std::vector<std::array<double, 4>>& tables,
                                           const std::map<int, double>& unaryAdjust);

// Canonical cover for a rows x cols grid under row-major vertex numbering:
// horizontal edges in one forest, vertical edges in the other.
TreeCover gridCover(const PairwiseMRF& mrf, int rows, int cols);

// Grid builder used by generators and file loading; edges ordered rows-first.
PairwiseMRF makeGridMrf(int rows, int cols, const std::vector<std::array<double, 4>>& tables);

class MrfBackend {
 public:
  struct Structure {
    std::vector<std::uint8_t> y;
    std::vector<std::uint8_t> z;
    bool operator==(const Structure&) const = default;
  };

  MrfBackend(PairwiseMRF mrf, TreeCover cover);

  OracleResult<Structure> oracle(const DualVariables& u) const;
  std::optional<Primal<Structure>> primalize(const Structure& s) const;
  std::string describe() const;

  const PairwiseMRF& mrf() const { return mrf_; }
  const TreeCover& cover() const { return cover_; }

 private:
  PairwiseMRF mrf_;
  TreeCover cover_;
  SplitPotentials split_;
  std::vector<std::pair<int, int>> t1Edges_, t2Edges_;
  std::vector<std::array<double, 4>> t1Tables_, t2Tables_;
};

}  // namespace dd
