#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "dd/mrf.hpp"
#include "dd/parse_tag.hpp"
#include "dd/phrase.hpp"
#include "dd/tsp.hpp"

namespace dd::oracles {

// Brute-force reference solvers, written against the problem definitions and
// sharing no decoding code with the backends, so agreement is evidence rather
// than tautology. All budgets are desk scale.

struct EnumerationBudget {
  std::size_t maxStructures = 1000000;
};

// Complete, duplicate-free derivation list via bottom-up chart products.
std::vector<ParseTree> enumerateParses(const Grammar& grammar,
                                       const std::vector<std::string>& sentence,
                                       const EnumerationBudget& budget = {});

struct JointParseTag {
  ParseTree tree;
  TagSequence seq;
  double value = 0.0;
};

// argmax of f(y) + g(z) over pairs whose tag indicators agree everywhere,
// which forces z to equal the preterminal sequence of y.
JointParseTag bruteJointParseTag(const Grammar& grammar, const TagModel& model,
                                 const std::vector<std::string>& sentence,
                                 const EnumerationBudget& budget = {});

struct MrfMap {
  std::vector<std::uint8_t> assignment;
  double value = 0.0;
};

// Exhaustive argmax of h over all 2^n assignments; first-in-lexicographic-
// order tie-break. Requires n <= 20.
MrfMap bruteMrfMap(const PairwiseMRF& mrf);

struct BestTour {
  Tour tour;
  double value = 0.0;
};

// Exhaustive max over tours: fixed start at vertex 0, reversal-deduplicated
// permutations, lexicographically first order on ties. Requires n <= 9.
BestTour bruteTsp(const WeightedGraph& graph);

enum class PhraseSearchMode { ExactCover, TotalCountN };

struct BestDerivation {
  Derivation derivation;
  double value = 0.0;
};

// Exhaustive search over phrase sequences in the selected feasible set.
// Requires n <= 6 and at most 8 phrases.
BestDerivation brutePhrase(const PhraseLexicon& lexicon, const BigramLanguageModel& lm,
                           PhraseSearchMode mode);

// Checks that the max over a finite value set equals the max over the simplex
// of distributions on it: sampled random distributions never beat the best
// element, and the indicator distribution attains it, both within 1e-12.
bool simplexMaxEquivalence(const std::vector<double>& values, int samples = 1000,
                           std::uint64_t seed = 20240901);

}  // namespace dd::oracles
