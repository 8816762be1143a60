#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "dd/mrf.hpp"
#include "dd/parse_tag.hpp"
#include "dd/phrase.hpp"
#include "dd/tsp.hpp"

namespace dd {

// Deterministic generator: mt19937_64 with hand-rolled value mappings, so a
// seed pins the byte-identical instance independent of the standard library's
// distribution implementations. uniform() uses the top 53 bits of one draw;
// rangeInt() reduces one draw modulo the range width.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  double uniform(double lo, double hi) {
    double unit = static_cast<double>(next() >> 11) * 0x1.0p-53;
    return lo + unit * (hi - lo);
  }

  int rangeInt(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  bool chance(double p) { return uniform(0.0, 1.0) < p; }

 private:
  std::mt19937_64 eng_;
};

struct ParseTagInstance {
  Grammar grammar;
  TagModel model;
  std::vector<std::string> sentence;
};

// Random joint instance: CNF grammar over `numTags` tags plus symbols S and X
// with a right-branching spine guaranteeing derivability for any length >= 2,
// and a full first-order tag model so every sequence is feasible. Tagger
// weights are scaled down relative to the grammar so the two models disagree
// without being adversarial.
ParseTagInstance genParseTag(std::uint64_t seed, int sentenceLength, int numTags);

struct MrfInstance {
  PairwiseMRF mrf;
  TreeCover cover;
  int rows = 0;
  int cols = 0;
};

// Random grid MRF with the rows/columns cover; potentials lean attractive so
// a healthy share of instances e-converge.
MrfInstance genGridMrf(std::uint64_t seed, int rows, int cols);

// Complete graph on n vertices with continuous random scores.
WeightedGraph genCompleteGraph(std::uint64_t seed, int n);

struct PhraseInstance {
  PhraseLexicon lexicon;
  BigramLanguageModel lm;
};

// Unit phrases covering every position plus a few random multi-word phrases,
// with a bigram model over the produced targets.
PhraseInstance genPhrase(std::uint64_t seed, int sourceLength);

}  // namespace dd
