#pragma once

// Reference backend over explicitly listed structures, for exercising the
// engine without any real decoder: the y side and z side are finite lists of
// (indicator vector, score) rows, and the oracle maximizes each side by
// scanning its list. Ties take the earlier row, so list order is the total
// order on structures.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dd/engine.hpp"
#include "dd/multipliers.hpp"

namespace ddtest {

struct TableRow {
  std::string name;
  std::vector<std::pair<dd::ConstraintId, double>> indicators;
  double score = 0.0;
};

class TableBackend {
 public:
  struct Structure {
    int yIndex = -1;
    int zIndex = -1;
    bool operator==(const Structure&) const = default;
  };

  TableBackend(std::vector<TableRow> ySide, std::vector<TableRow> zSide)
      : ySide_(std::move(ySide)), zSide_(std::move(zSide)) {}

  dd::OracleResult<Structure> oracle(const dd::DualVariables& u) const {
    int yBest = argmax(ySide_, u, +1.0);
    int zBest = argmax(zSide_, u, -1.0);
    dd::OracleResult<Structure> res;
    res.structure = Structure{yBest, zBest};
    for (const auto& [id, value] : ySide_[static_cast<std::size_t>(yBest)].indicators)
      res.subgradient.add(id, value);
    for (const auto& [id, value] : zSide_[static_cast<std::size_t>(zBest)].indicators)
      res.subgradient.add(id, -value);
    res.dualValue = ySide_[static_cast<std::size_t>(yBest)].score +
                    zSide_[static_cast<std::size_t>(zBest)].score + u.dot(res.subgradient);
    return res;
  }

  std::optional<dd::Primal<Structure>> primalize(const Structure& s) const {
    // Feasible iff the pair's indicators already agree.
    const TableRow& y = ySide_[static_cast<std::size_t>(s.yIndex)];
    for (int z = 0; z < static_cast<int>(zSide_.size()); ++z) {
      if (indicatorsEqual(y, zSide_[static_cast<std::size_t>(z)])) {
        dd::Primal<Structure> primal;
        primal.solution = Structure{s.yIndex, z};
        primal.value = y.score + zSide_[static_cast<std::size_t>(z)].score;
        return primal;
      }
    }
    return std::nullopt;
  }

  std::string describe() const { return "table backend"; }

  const TableRow& yRow(int i) const { return ySide_[static_cast<std::size_t>(i)]; }
  const TableRow& zRow(int i) const { return zSide_[static_cast<std::size_t>(i)]; }

 private:
  static bool indicatorsEqual(const TableRow& a, const TableRow& b) {
    dd::SubgradientVector diff;
    for (const auto& [id, value] : a.indicators) diff.add(id, value);
    for (const auto& [id, value] : b.indicators) diff.add(id, -value);
    return diff.isZero();
  }

  int argmax(const std::vector<TableRow>& rows, const dd::DualVariables& u, double sign) const {
    int best = 0;
    double bestScore = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
      double score = rows[static_cast<std::size_t>(i)].score;
      for (const auto& [id, value] : rows[static_cast<std::size_t>(i)].indicators)
        score += sign * u.get(id) * value;
      if (score > bestScore) {
        bestScore = score;
        best = i;
      }
    }
    return best;
  }

  std::vector<TableRow> ySide_;
  std::vector<TableRow> zSide_;
};

// The fractional-gap example as raw tables: y rows (a,b):1, (b,a):1, (c,c):2
// and z rows (a,a):1, (b,b):1, (c,c):-2 over two positions.
TableBackend makeTableToy();

}  // namespace ddtest
