#pragma once

// Test-only brute-force references, kept apart from both the backends and the
// shipped oracle module so decoder checks have an independent yardstick.

#include <cstdint>
#include <vector>

#include "dd/generate.hpp"
#include "dd/mrf.hpp"
#include "dd/multipliers.hpp"
#include "dd/parse_tag.hpp"
#include "dd/phrase.hpp"
#include "dd/tsp.hpp"

namespace ddtest {

// All tag sequences of the given length over the model's tag set.
std::vector<std::vector<int>> allTagSequences(int tagCount, int length);

// Best sequence under g(z) - sum tagAdjust - sum bigramAdjust by full scan;
// max score, then lexicographically smallest sequence. Mirrors the contract
// of viterbiDecode without sharing its lattice.
dd::TagSequence bruteTagArgmax(const dd::TagModel& model, const std::vector<std::string>& sentence,
                               const dd::DualVariables& tagAdjust,
                               const dd::DualVariables& bigramAdjust);

// Best tree under f(y) + adjustments by scanning an enumeration; max score,
// then smallest encoding.
dd::ParseTree bruteParseArgmax(const dd::Grammar& grammar, const std::vector<std::string>& sentence,
                               const dd::DualVariables& tagAdjust,
                               const dd::DualVariables& bigramAdjust);

// Exhaustive forest MAP over 2^n assignments, first-in-lexicographic-order
// tie-break (matches maxProductForest's prefer-zero rule only generically;
// tests keep scores tie-free).
std::vector<std::uint8_t> bruteForestArgmax(int n, const std::vector<std::pair<int, int>>& edges,
                                            const std::vector<std::array<double, 4>>& tables,
                                            const std::map<int, double>& unaryAdjust);

// All one-trees of the graph: spanning trees over vertices 1..n-1 crossed
// with pairs of vertex-0 edges. Edge id lists are sorted.
std::vector<dd::OneTree> allOneTrees(const dd::WeightedGraph& graph);

// Best one-tree under adjusted scores by scanning allOneTrees; max score with
// smallest edge-id vector on ties.
dd::OneTree bruteOneTreeArgmax(const dd::WeightedGraph& graph, const std::vector<double>& u);

// Best total-count-n derivation under adjusted scores by exhaustive sequence
// search; max score, then smallest phrase-id sequence.
dd::Derivation bruteRelaxedDerivation(const dd::PhraseLexicon& lexicon,
                                      const dd::BigramLanguageModel& lm,
                                      const std::vector<double>& u);

// Deterministic random multipliers over the given keys.
dd::DualVariables randomMultipliers(dd::Rng& rng, const std::vector<dd::ConstraintId>& keys,
                                    double lo, double hi);

std::vector<dd::ConstraintId> tagKeys(int sentenceLength, int tagCount);
std::vector<dd::ConstraintId> vertexKeys(int n);

}  // namespace ddtest
