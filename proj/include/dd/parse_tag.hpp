#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "dd/engine.hpp"
#include "dd/multipliers.hpp"
#include "dd/schedule.hpp"
#include "dd/trace.hpp"

namespace dd {

// Tags are addressed by rank: the position of the tag name in the sorted tag
// list. Grammar and tag model agree on ranks because both sort the same names.

// Weighted context-free grammar in Chomsky normal form: binary rules over
// nonterminals plus lexical rules from designated tag symbols. Tags appear
// only as preterminals. Symbols are interned in sorted name order, so symbol
// ids and rule order are independent of input order.
class Grammar {
 public:
  struct BinaryRule {
    int lhs;
    int left;
    int right;
    double weight;
  };

  using NamedBinary = std::tuple<std::string, std::string, std::string, double>;
  using NamedLexical = std::tuple<std::string, std::string, double>;  // (tag, word, weight)

  Grammar(const std::string& startSymbol, const std::vector<std::string>& tagNames,
          const std::vector<NamedBinary>& binaryRules, const std::vector<NamedLexical>& lexicalRules);

  int symbolCount() const { return static_cast<int>(symbolNames_.size()); }
  const std::string& symbolName(int sym) const { return symbolNames_[static_cast<std::size_t>(sym)]; }
  int symbolId(const std::string& name) const;
  int startSymbol() const { return startSymbol_; }

  bool isTag(int sym) const { return tagRankOfSymbol_[static_cast<std::size_t>(sym)] >= 0; }
  int tagCount() const { return static_cast<int>(tagSymbols_.size()); }
  int tagRank(int sym) const { return tagRankOfSymbol_[static_cast<std::size_t>(sym)]; }
  int tagSymbol(int rank) const { return tagSymbols_[static_cast<std::size_t>(rank)]; }
  const std::string& tagName(int rank) const { return symbolName(tagSymbol(rank)); }
  std::vector<std::string> tagNames() const;

  const std::vector<BinaryRule>& binaryRules() const { return binaryRules_; }
  std::optional<double> lexicalWeight(int tagRank, const std::string& word) const;
  const std::map<std::pair<int, std::string>, double>& lexicalRules() const { return lexical_; }
  bool wordDerivable(const std::string& word) const;

 private:
  std::vector<std::string> symbolNames_;
  int startSymbol_ = -1;
  std::vector<int> tagRankOfSymbol_;
  std::vector<int> tagSymbols_;
  std::vector<BinaryRule> binaryRules_;  // sorted by (lhs, left, right)
  std::map<std::pair<int, std::string>, double> lexical_;  // (tag rank, word) -> weight
};

// Binary derivation. Leaves are preterminal tags over single words; tagRanks
// is the in-order preterminal sequence l(y). encoding() is a preorder token
// stream that induces the fixed total order used for tie-breaking.
struct ParseTree {
  struct Node {
    int symbol = -1;
    int ruleIndex = -1;  // branch nodes: index into Grammar::binaryRules()
    int left = -1;
    int right = -1;
    int wordPos = -1;  // leaf nodes: 0-based sentence position
  };

  std::vector<Node> nodes;
  int root = -1;
  std::vector<int> tagRanks;

  int length() const { return static_cast<int>(tagRanks.size()); }
  std::vector<int> encoding() const;
  bool operator==(const ParseTree& other) const { return encoding() == other.encoding(); }
};

// f(y): sum of binary-rule weights plus lexical weights at the leaves.
double scoreTree(const Grammar& grammar, const std::vector<std::string>& sentence,
                 const ParseTree& tree);

// Order-m tagger (m in {1,2}). Transition keys are (m+1)-grams of tag ranks
// with -1 standing for the start symbol at positions <= 0. Missing
// transitions or emissions make a sequence infeasible.
class TagModel {
 public:
  static constexpr const char* kStartName = "<s>";

  TagModel(int order, const std::vector<std::string>& tagNames);

  void setTransition(const std::vector<std::string>& gram, double weight);
  void setEmission(const std::string& tagName, const std::string& word, double weight);

  int order() const { return order_; }
  int tagCount() const { return static_cast<int>(tagNames_.size()); }
  const std::string& tagName(int rank) const { return tagNames_[static_cast<std::size_t>(rank)]; }
  int tagRank(const std::string& name) const;
  const std::vector<std::string>& tagNames() const { return tagNames_; }

  std::optional<double> transition(const std::vector<int>& gramRanks) const;
  std::optional<double> emission(int rank, const std::string& word) const;

  // Per-position local score: transition plus emission; absent means the
  // structure is forbidden.
  std::optional<double> localScore(int pos, const std::vector<int>& gramRanks,
                                   const std::vector<std::string>& sentence) const;

  // g(z); absent if any position is forbidden.
  std::optional<double> score(const std::vector<int>& seqRanks,
                              const std::vector<std::string>& sentence) const;

  const std::map<std::vector<int>, double>& transitions() const { return transitions_; }
  const std::map<std::pair<int, std::string>, double>& emissions() const { return emissions_; }

 private:
  int order_;
  std::vector<std::string> tagNames_;  // sorted
  std::map<std::vector<int>, double> transitions_;
  std::map<std::pair<int, std::string>, double> emissions_;
};

struct TagSequence {
  std::vector<int> tagRanks;
  bool operator==(const TagSequence&) const = default;
};

// Tag-agreement constraint on the bigram at pair index i (0-based: positions
// i and i+1), between tag ranks t1 and t2.
struct BigramTriple {
  int i = 0;
  int t1 = 0;
  int t2 = 0;
  auto operator<=>(const BigramTriple&) const = default;
};

struct BigramConstraintSet {
  std::vector<BigramTriple> active;  // kept sorted and unique
};

// argmax over trees of f(y) + sum tagAdjust(i,t) y(i,t), by CKY over adjusted
// lexical scores. Ties resolve to the smallest derivation encoding.
ParseTree ckyDecode(const Grammar& grammar, const std::vector<std::string>& sentence,
                    const DualVariables& tagAdjust);

// argmax over sequences of g(z) - sum tagAdjust(i,t) z(i,t)
//                              - sum bigramAdjust(i,t1,t2) z(i,t1,t2).
// Bigram terms fold into the transition lattice. Ties resolve to the
// lexicographically smallest rank sequence.
TagSequence viterbiDecode(const TagModel& model, const std::vector<std::string>& sentence,
                          const DualVariables& tagAdjust, const DualVariables& bigramAdjust);

// All derivations of the sentence, erroring once more than cap exist. This is
// the decoding path behind tightenedParseOracle, not a test oracle.
std::vector<ParseTree> enumerateDerivations(const Grammar& grammar,
                                            const std::vector<std::string>& sentence,
                                            std::size_t cap);

// argmax of f(y) + sum tagAdjust y(i,t) + sum bigramAdjust y(i,t1,t2) by
// bounded enumeration; exact wherever it runs.
ParseTree tightenedParseOracle(const Grammar& grammar, const std::vector<std::string>& sentence,
                               const DualVariables& tagAdjust, const DualVariables& bigramAdjust,
                               std::size_t enumerationCap);

class ParseTagBackend {
 public:
  struct Structure {
    ParseTree tree;
    TagSequence seq;
  };

  ParseTagBackend(Grammar grammar, TagModel model, std::vector<std::string> sentence,
                  BigramConstraintSet active = {}, std::size_t enumerationCap = 100000);

  OracleResult<Structure> oracle(const DualVariables& u) const;
  std::optional<Primal<Structure>> primalize(const Structure& s) const;
  std::string describe() const;

  const Grammar& grammar() const { return grammar_; }
  const TagModel& model() const { return model_; }
  const std::vector<std::string>& sentence() const { return sentence_; }
  const BigramConstraintSet& constraints() const { return active_; }
  bool tightened() const { return !active_.active.empty(); }

 private:
  Grammar grammar_;
  TagModel model_;
  std::vector<std::string> sentence_;
  BigramConstraintSet active_;
  std::size_t enumerationCap_;
};

// Most frequently violated bigram triples over the last `window` iterations,
// ranked by count with lexicographic tie-break; at most topK of them.
std::vector<BigramTriple> selectTighteningConstraints(
    const RunTrace<ParseTagBackend::Structure>& trace, int window, int topK);

struct ParseTagRun {
  RunTrace<ParseTagBackend::Structure> trace;  // final phase
  std::optional<RunTrace<ParseTagBackend::Structure>> untightenedTrace;  // first phase, if re-run
  std::vector<BigramTriple> addedConstraints;
};

// Joint decoding via dual decomposition. With tighten set, a run that fails
// to e-converge selects violated bigram constraints from its tail and re-runs
// from zero multipliers with those constraints enforced.
ParseTagRun ddParseTag(const Grammar& grammar, const TagModel& model,
                       const std::vector<std::string>& sentence, const StepSizeSchedule& schedule,
                       int maxIters, bool tighten, int stallWindow = 20, double stallEps = 1e-6,
                       int selectionWindow = 20, int selectionTopK = 4,
                       std::size_t enumerationCap = 100000);

}  // namespace dd
