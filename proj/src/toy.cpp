#include "dd/toy.hpp"

#include <cmath>
#include <stdexcept>

#include "dd/errors.hpp"

namespace dd {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::logic_error(std::string("toy instance validation failed: ") + what);
}

}  // namespace

ToyInstance makeToyInstance() {
  std::vector<std::string> tags = {"a", "b", "c"};
  std::vector<Grammar::NamedBinary> binary = {
      {"S", "a", "b", 1.0},
      {"S", "b", "a", 1.0},
      {"S", "c", "c", 2.0},
  };
  std::vector<Grammar::NamedLexical> lexical;
  for (const std::string& tag : tags) {
    lexical.emplace_back(tag, "w1", 0.0);
    lexical.emplace_back(tag, "w2", 0.0);
  }
  Grammar grammar("S", tags, binary, lexical);

  TagModel model(1, tags);
  model.setTransition({TagModel::kStartName, "a"}, 1.0);
  model.setTransition({"a", "a"}, 0.0);
  model.setTransition({TagModel::kStartName, "b"}, 1.0);
  model.setTransition({"b", "b"}, 0.0);
  model.setTransition({TagModel::kStartName, "c"}, -2.0);
  model.setTransition({"c", "c"}, 0.0);
  for (const std::string& tag : tags) {
    model.setEmission(tag, "w1", 0.0);
    model.setEmission(tag, "w2", 0.0);
  }

  std::vector<std::string> sentence = {"w1", "w2"};

  // Validate the instance against the defining equations before handing it
  // out: structure sets, scores, and the indicator expectations under the
  // integral mixture (weight 1 on the (c,c) pair) and the half-half mixture
  // (weight 0.5 on each of the first two pairs).
  int a = 0, b = 1, c = 2;
  std::vector<ParseTree> trees = enumerateDerivations(grammar, sentence, 16);
  require(trees.size() == 3, "expected exactly three trees");
  const ParseTree* y1 = nullptr;
  const ParseTree* y2 = nullptr;
  const ParseTree* y3 = nullptr;
  for (const ParseTree& tree : trees) {
    if (tree.tagRanks == std::vector<int>{a, b}) y1 = &tree;
    if (tree.tagRanks == std::vector<int>{b, a}) y2 = &tree;
    if (tree.tagRanks == std::vector<int>{c, c}) y3 = &tree;
  }
  require(y1 && y2 && y3, "tree tag sequences must be (a,b), (b,a), (c,c)");
  require(scoreTree(grammar, sentence, *y1) == 1.0, "f(y1) == 1");
  require(scoreTree(grammar, sentence, *y2) == 1.0, "f(y2) == 1");
  require(scoreTree(grammar, sentence, *y3) == 2.0, "f(y3) == 2");

  int finiteSeqs = 0;
  for (int t1 = 0; t1 < 3; ++t1)
    for (int t2 = 0; t2 < 3; ++t2)
      if (model.score({t1, t2}, sentence)) ++finiteSeqs;
  require(finiteSeqs == 3, "expected exactly three feasible tag sequences");
  require(model.score({a, a}, sentence) == 1.0, "g(z1) == 1");
  require(model.score({b, b}, sentence) == 1.0, "g(z2) == 1");
  require(model.score({c, c}, sentence) == -2.0, "g(z3) == -2");

  auto treeInd = [](const ParseTree& tree, int pos, int tag) {
    return tree.tagRanks[static_cast<std::size_t>(pos)] == tag ? 1.0 : 0.0;
  };
  auto seqInd = [](std::vector<int> seq, int pos, int tag) {
    return seq[static_cast<std::size_t>(pos)] == tag ? 1.0 : 0.0;
  };
  // Half-half mixture over (y1, z1) and (y2, z2): both sides expect 0.5 on
  // tags a and b at both positions.
  for (int pos = 0; pos < 2; ++pos) {
    for (int tag : {a, b}) {
      double treeSide = 0.5 * treeInd(*y1, pos, tag) + 0.5 * treeInd(*y2, pos, tag);
      double seqSide = 0.5 * seqInd({a, a}, pos, tag) + 0.5 * seqInd({b, b}, pos, tag);
      require(treeSide == 0.5 && seqSide == 0.5, "half-half mixture expectations must be 0.5");
    }
  }
  // Integral mixture on the (c,c) pair: expectation 1 on tag c at both
  // positions, for both sides.
  for (int pos = 0; pos < 2; ++pos) {
    require(treeInd(*y3, pos, c) == 1.0 && seqInd({c, c}, pos, c) == 1.0,
            "integral mixture expectations must be 1");
  }

  return ToyInstance{std::move(grammar), std::move(model), std::move(sentence)};
}

BigramTriple toyTighteningConstraint() { return BigramTriple{0, 0, 1}; }

}  // namespace dd
