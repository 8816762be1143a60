#include <algorithm>

#include "dd/errors.hpp"
#include "dd/generate.hpp"
#include "dd/oracles.hpp"
#include "dd/toy.hpp"
#include "doctest.h"
#include "test_oracles.hpp"

using namespace dd;
using namespace dd::oracles;

namespace {

// Independent derivation counter: counts per (symbol, span) by the standard
// recurrence, without building any trees.
std::size_t countBySpans(const Grammar& grammar, const std::vector<std::string>& sentence) {
  int n = static_cast<int>(sentence.size());
  std::map<std::tuple<int, int, int>, std::size_t> counts;
  for (int i = 0; i < n; ++i)
    for (int rank = 0; rank < grammar.tagCount(); ++rank)
      if (grammar.lexicalWeight(rank, sentence[static_cast<std::size_t>(i)]))
        counts[{grammar.tagSymbol(rank), i, 1}] = 1;
  for (int len = 2; len <= n; ++len)
    for (int start = 0; start + len <= n; ++start)
      for (const Grammar::BinaryRule& rule : grammar.binaryRules())
        for (int split = 1; split < len; ++split) {
          auto left = counts.find({rule.left, start, split});
          auto right = counts.find({rule.right, start + split, len - split});
          if (left != counts.end() && right != counts.end())
            counts[{rule.lhs, start, len}] += left->second * right->second;
        }
  auto it = counts.find({grammar.startSymbol(), 0, n});
  return it == counts.end() ? 0 : it->second;
}

}  // namespace

TEST_SUITE_BEGIN("oracles");

TEST_CASE("the toy instance enumerates to exactly three trees") {
  ToyInstance toy = makeToyInstance();
  std::vector<ParseTree> trees = enumerateParses(toy.grammar, toy.sentence);
  CHECK(trees.size() == 3);
}

TEST_CASE("a grammar with a unique derivation enumerates to one tree") {
  Grammar grammar("S", {"A", "B"}, {{"S", "A", "B", 1.0}}, {{"A", "x", 0.0}, {"B", "y", 0.0}});
  CHECK(enumerateParses(grammar, {"x", "y"}).size() == 1);
}

TEST_CASE("enumeration size matches the counting recurrence") {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    ParseTagInstance inst = genParseTag(seed, 2 + static_cast<int>(seed % 5), 2 + seed % 3);
    std::vector<ParseTree> trees = enumerateParses(inst.grammar, inst.sentence);
    CHECK(trees.size() == countBySpans(inst.grammar, inst.sentence));
    // duplicate-freedom: encodings are distinct
    std::vector<std::vector<int>> encodings;
    for (const ParseTree& tree : trees) encodings.push_back(tree.encoding());
    std::sort(encodings.begin(), encodings.end());
    CHECK(std::adjacent_find(encodings.begin(), encodings.end()) == encodings.end());
  }
}

TEST_CASE("enumeration respects its budget") {
  ToyInstance toy = makeToyInstance();
  EnumerationBudget tiny{2};
  CHECK_THROWS_AS(enumerateParses(toy.grammar, toy.sentence, tiny), BudgetExceededError);
}

TEST_CASE("joint brute force finds the only agreeing pair of the toy") {
  ToyInstance toy = makeToyInstance();
  JointParseTag joint = bruteJointParseTag(toy.grammar, toy.model, toy.sentence);
  CHECK(joint.value == 0.0);
  int c = toy.grammar.tagRank(toy.grammar.symbolId("c"));
  CHECK(joint.tree.tagRanks == std::vector<int>{c, c});
  CHECK(joint.seq.tagRanks == std::vector<int>{c, c});
}

TEST_CASE("joint brute force on a single-structure instance") {
  Grammar grammar("S", {"A", "B"}, {{"S", "A", "B", 1.5}}, {{"A", "x", 0.0}, {"B", "y", 0.0}});
  TagModel model(1, {"A", "B"});
  model.setTransition({TagModel::kStartName, "A"}, 0.25);
  model.setTransition({"A", "B"}, 0.0);
  model.setEmission("A", "x", 0.0);
  model.setEmission("B", "y", 0.0);
  JointParseTag joint = bruteJointParseTag(grammar, model, {"x", "y"});
  CHECK(joint.value == doctest::Approx(1.75));
}

TEST_CASE("joint brute force reports infeasible agreement") {
  // The single tree tags (A,B) but the model only allows (B,A)-style paths.
  Grammar grammar("S", {"A", "B"}, {{"S", "A", "B", 1.0}}, {{"A", "x", 0.0}, {"B", "y", 0.0}});
  TagModel model(1, {"A", "B"});
  model.setTransition({TagModel::kStartName, "B"}, 0.0);
  model.setTransition({"B", "A"}, 0.0);
  model.setEmission("A", "x", 0.0);
  model.setEmission("B", "y", 0.0);
  CHECK_THROWS_AS(bruteJointParseTag(grammar, model, {"x", "y"}), NoFeasiblePairError);
}

TEST_CASE("exhaustive MAP tie-break takes the lexicographically first assignment") {
  PairwiseMRF flat;
  flat.n = 3;
  flat.edges.push_back({0, 1, {0, 0, 0, 0}});
  flat.edges.push_back({1, 2, {0, 0, 0, 0}});
  MrfMap result = bruteMrfMap(flat);
  CHECK(result.assignment == std::vector<std::uint8_t>{0, 0, 0});
  CHECK(result.value == 0.0);
}

TEST_CASE("exhaustive tour search") {
  WeightedGraph triangle;
  triangle.n = 3;
  triangle.edges = {{0, 1, 1.0}, {0, 2, 1.0}, {1, 2, 1.0}};
  BestTour best = bruteTsp(triangle);
  CHECK(best.value == 3.0);
  CHECK(best.tour.vertexOrder == std::vector<int>{0, 1, 2});
  CHECK(isOneTree(triangle, best.tour.edgeIds(triangle)));

  // All tours tie on a uniform K4; the first vertex order wins.
  WeightedGraph k4 = genCompleteGraph(1, 4);
  for (auto& e : k4.edges) e.score = 2.0;
  BestTour tied = bruteTsp(k4);
  CHECK(tied.tour.vertexOrder == std::vector<int>{0, 1, 2, 3});

  // The one-tree relaxation upper-bounds the best tour.
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    WeightedGraph k5 = genCompleteGraph(seed, 5);
    OneTree tree = bestOneTree(k5, std::vector<double>(5, 0.0));
    CHECK(edgeSetScore(k5, tree.edgeIds) >= bruteTsp(k5).value - 1e-9);
  }
}

TEST_CASE("exhaustive phrase search modes") {
  PhraseLexicon lexicon;
  lexicon.sourceLength = 1;
  lexicon.phrases = {{0, 0, {"hi"}, 1.0}};
  BigramLanguageModel lm;
  BestDerivation only = brutePhrase(lexicon, lm, PhraseSearchMode::ExactCover);
  CHECK(only.derivation.phraseIds == std::vector<int>{0});

  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    PhraseInstance inst = genPhrase(seed, 4);
    BestDerivation relaxed = brutePhrase(inst.lexicon, inst.lm, PhraseSearchMode::TotalCountN);
    Derivation viaDp = relaxedDecode(inst.lexicon, inst.lm,
                                     std::vector<double>(static_cast<std::size_t>(4), 0.0));
    CHECK(relaxed.derivation == viaDp);
  }

  // Overlapping spans cover everything but admit no exact tiling.
  PhraseLexicon overlapping;
  overlapping.sourceLength = 3;
  overlapping.phrases = {{0, 1, {"x"}, 0.0}, {1, 2, {"y"}, 0.0}};
  CHECK_THROWS_AS(brutePhrase(overlapping, lm, PhraseSearchMode::ExactCover), NoFeasiblePairError);
}

TEST_CASE("simplex maximization equivalence") {
  CHECK(simplexMaxEquivalence({0.0, 0.0, 1.0}));
  CHECK(simplexMaxEquivalence({42.0}));
  Rng rng(3);
  for (int round = 0; round < 5; ++round) {
    std::vector<double> values;
    int count = rng.rangeInt(2, 12);
    for (int i = 0; i < count; ++i) values.push_back(rng.uniform(-5.0, 5.0));
    CHECK(simplexMaxEquivalence(values, 1000, 900 + static_cast<std::uint64_t>(round)));
  }
}

TEST_SUITE_END();
