#include "dd/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "dd/errors.hpp"

namespace dd::oracles {

std::vector<ParseTree> enumerateParses(const Grammar& grammar,
                                       const std::vector<std::string>& sentence,
                                       const EnumerationBudget& budget) {
  int n = static_cast<int>(sentence.size());
  if (n == 0) throw NoParseError("empty sentence");

  // chart[(start,len,sym)] holds every subtree, built bottom-up over span
  // lengths; the running total guards the budget.
  std::map<std::tuple<int, int, int>, std::vector<ParseTree>> chart;
  std::size_t live = 0;
  auto push = [&](int start, int len, int sym, ParseTree tree) {
    if (++live > budget.maxStructures)
      throw BudgetExceededError("parse enumeration exceeds the structure budget");
    chart[{start, len, sym}].push_back(std::move(tree));
  };

  for (int i = 0; i < n; ++i) {
    for (int rank = 0; rank < grammar.tagCount(); ++rank) {
      if (!grammar.lexicalWeight(rank, sentence[static_cast<std::size_t>(i)])) continue;
      ParseTree leaf;
      ParseTree::Node nd;
      nd.symbol = grammar.tagSymbol(rank);
      nd.wordPos = i;
      leaf.nodes.push_back(nd);
      leaf.root = 0;
      push(i, 1, nd.symbol, std::move(leaf));
    }
  }

  for (int len = 2; len <= n; ++len) {
    for (int start = 0; start + len <= n; ++start) {
      const auto& rules = grammar.binaryRules();
      for (int r = 0; r < static_cast<int>(rules.size()); ++r) {
        const Grammar::BinaryRule& rule = rules[static_cast<std::size_t>(r)];
        for (int split = 1; split < len; ++split) {
          auto leftIt = chart.find({start, split, rule.left});
          if (leftIt == chart.end()) continue;
          auto rightIt = chart.find({start + split, len - split, rule.right});
          if (rightIt == chart.end()) continue;
          for (const ParseTree& lt : leftIt->second) {
            for (const ParseTree& rt : rightIt->second) {
              ParseTree combined;
              combined.nodes = lt.nodes;
              int offset = static_cast<int>(combined.nodes.size());
              for (ParseTree::Node nd : rt.nodes) {
                if (nd.left >= 0) nd.left += offset;
                if (nd.right >= 0) nd.right += offset;
                combined.nodes.push_back(nd);
              }
              ParseTree::Node top;
              top.symbol = rule.lhs;
              top.ruleIndex = r;
              top.left = lt.root;
              top.right = rt.root + offset;
              combined.nodes.push_back(top);
              combined.root = static_cast<int>(combined.nodes.size()) - 1;
              push(start, len, rule.lhs, std::move(combined));
            }
          }
        }
      }
    }
  }

  auto it = chart.find({0, n, grammar.startSymbol()});
  if (it == chart.end()) throw NoParseError("sentence has no derivation from the start symbol");
  std::vector<ParseTree> out = std::move(it->second);
  for (ParseTree& tree : out) {
    tree.tagRanks.assign(static_cast<std::size_t>(n), -1);
    for (const ParseTree::Node& nd : tree.nodes)
      if (nd.wordPos >= 0)
        tree.tagRanks[static_cast<std::size_t>(nd.wordPos)] = grammar.tagRank(nd.symbol);
  }
  return out;
}

JointParseTag bruteJointParseTag(const Grammar& grammar, const TagModel& model,
                                 const std::vector<std::string>& sentence,
                                 const EnumerationBudget& budget) {
  std::vector<ParseTree> trees = enumerateParses(grammar, sentence, budget);
  const ParseTree* best = nullptr;
  double bestValue = 0.0;
  std::vector<int> bestEnc;
  for (const ParseTree& tree : trees) {
    // Agreement on every indicator forces the tag sequence to be l(y).
    auto g = model.score(tree.tagRanks, sentence);
    if (!g) continue;
    double value = scoreTree(grammar, sentence, tree) + *g;
    std::vector<int> enc = tree.encoding();
    if (!best || value > bestValue || (value == bestValue && enc < bestEnc)) {
      best = &tree;
      bestValue = value;
      bestEnc = std::move(enc);
    }
  }
  if (!best) throw NoFeasiblePairError("no parse has a tag sequence the model allows");
  return JointParseTag{*best, TagSequence{best->tagRanks}, bestValue};
}

MrfMap bruteMrfMap(const PairwiseMRF& mrf) {
  mrf.validate();
  if (mrf.n > 20) throw BudgetExceededError("brute-force MAP supports at most 20 variables");
  MrfMap best;
  best.value = -std::numeric_limits<double>::infinity();
  std::vector<std::uint8_t> assignment(static_cast<std::size_t>(mrf.n), 0);
  // Counter bit i (from the most significant position) is variable i, so the
  // scan runs in lexicographic order over (y_0, ..., y_{n-1}).
  for (std::uint64_t mask = 0; mask < (1ull << mrf.n); ++mask) {
    for (int i = 0; i < mrf.n; ++i)
      assignment[static_cast<std::size_t>(i)] =
          static_cast<std::uint8_t>((mask >> (mrf.n - 1 - i)) & 1ull);
    double value = mrf.evaluate(assignment);
    if (value > best.value) {
      best.value = value;
      best.assignment = assignment;
    }
  }
  return best;
}

BestTour bruteTsp(const WeightedGraph& graph) {
  graph.validate();
  if (graph.n > 9) throw BudgetExceededError("brute-force TSP supports at most 9 vertices");

  std::vector<int> rest;
  for (int v = 1; v < graph.n; ++v) rest.push_back(v);

  BestTour best;
  best.value = -std::numeric_limits<double>::infinity();
  bool found = false;
  do {
    // Fix vertex 0 first and drop reversals by orientation.
    if (rest.front() > rest.back()) continue;
    double value = 0.0;
    bool valid = true;
    int prev = 0;
    for (int v : rest) {
      int id = graph.findEdge(prev, v);
      if (id < 0) {
        valid = false;
        break;
      }
      value += graph.edges[static_cast<std::size_t>(id)].score;
      prev = v;
    }
    if (valid) {
      int id = graph.findEdge(prev, 0);
      if (id < 0)
        valid = false;
      else
        value += graph.edges[static_cast<std::size_t>(id)].score;
    }
    if (!valid) continue;
    std::vector<int> order;
    order.push_back(0);
    order.insert(order.end(), rest.begin(), rest.end());
    if (!found || value > best.value ||
        (value == best.value && order < best.tour.vertexOrder)) {
      best.value = value;
      best.tour.vertexOrder = std::move(order);
      found = true;
    }
  } while (std::next_permutation(rest.begin(), rest.end()));

  if (!found) throw InfeasibleError("graph has no Hamiltonian cycle");
  return best;
}

BestDerivation brutePhrase(const PhraseLexicon& lexicon, const BigramLanguageModel& lm,
                           PhraseSearchMode mode) {
  lexicon.validate();
  if (lexicon.sourceLength > 6 || lexicon.phrases.size() > 8)
    throw BudgetExceededError("brute-force phrase search supports n <= 6 and at most 8 phrases");

  BestDerivation best;
  best.value = -std::numeric_limits<double>::infinity();
  bool found = false;
  Derivation current;

  auto consider = [&](const Derivation& d) {
    double value = derivationScore(lexicon, lm, d);
    if (!found || value > best.value ||
        (value == best.value && d.phraseIds < best.derivation.phraseIds)) {
      best.value = value;
      best.derivation = d;
      found = true;
    }
  };

  auto search = [&](auto&& self, int total) -> void {
    if (total == lexicon.sourceLength) {
      if (mode == PhraseSearchMode::TotalCountN) {
        consider(current);
      } else {
        std::vector<int> counts = current.counts(lexicon);
        if (std::all_of(counts.begin(), counts.end(), [](int c) { return c == 1; }))
          consider(current);
      }
      return;
    }
    for (std::size_t id = 0; id < lexicon.phrases.size(); ++id) {
      const PhraseEntry& p = lexicon.phrases[id];
      int width = p.t - p.s + 1;
      if (total + width > lexicon.sourceLength) continue;
      current.phraseIds.push_back(static_cast<int>(id));
      self(self, total + width);
      current.phraseIds.pop_back();
    }
  };
  search(search, 0);

  if (!found) {
    if (mode == PhraseSearchMode::ExactCover)
      throw NoFeasiblePairError("no derivation covers every source word exactly once");
    throw InfeasibleError("no derivation translates exactly n source words");
  }
  return best;
}

bool simplexMaxEquivalence(const std::vector<double>& values, int samples, std::uint64_t seed) {
  if (values.empty()) throw ConfigError("value set must be nonempty");
  const double tolerance = 1e-12;
  double vertexMax = *std::max_element(values.begin(), values.end());

  // The indicator distribution on an argmax attains the vertex max.
  bool attained = false;
  for (double value : values)
    if (std::abs(value - vertexMax) <= tolerance) attained = true;

  // No sampled distribution may exceed it.
  std::mt19937_64 eng(seed);
  for (int s = 0; s < samples; ++s) {
    std::vector<double> weights(values.size());
    double total = 0.0;
    for (double& w : weights) {
      w = -std::log(static_cast<double>((eng() >> 11) + 1) * 0x1.0p-53);
      total += w;
    }
    double expectation = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
      expectation += (weights[i] / total) * values[i];
    if (expectation > vertexMax + tolerance) return false;
  }
  return attained;
}

}  // namespace dd::oracles
