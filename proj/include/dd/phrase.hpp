#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dd/engine.hpp"
#include "dd/multipliers.hpp"

namespace dd {

// Phrase entry: source span [s, t] (0-based, inclusive) translated as the
// target word sequence `words`, with model score `score`.
struct PhraseEntry {
  int s = 0;
  int t = 0;
  std::vector<std::string> words;
  double score = 0.0;
};

struct PhraseLexicon {
  int sourceLength = 0;
  std::vector<PhraseEntry> phrases;

  void validate() const;  // spans in range, nonempty targets, full coverage
};

// Bigram scores over target words; unknown bigrams fall back to a finite
// floor so the relaxed search stays total.
struct BigramLanguageModel {
  std::map<std::pair<std::string, std::string>, double> scores;
  std::string startToken = "<s>";
  double floor = -20.0;

  double score(const std::string& prev, const std::string& word) const {
    auto it = scores.find(std::make_pair(prev, word));
    return it == scores.end() ? floor : it->second;
  }
};

// Ordered phrase sequence. counts(i) is how many chosen phrases cover source
// position i; a derivation is a real translation when every count is 1.
struct Derivation {
  std::vector<int> phraseIds;

  bool operator==(const Derivation&) const = default;

  std::vector<int> counts(const PhraseLexicon& lexicon) const;
  int totalCount(const PhraseLexicon& lexicon) const;
  std::vector<std::string> translation(const PhraseLexicon& lexicon) const;
};

// h(y): language-model score of the concatenated translation (start token
// boundary) plus the phrase scores.
double derivationScore(const PhraseLexicon& lexicon, const BigramLanguageModel& lm,
                       const Derivation& derivation);

// argmax over derivations with total source count exactly n of
//   h(y) + sum_p sum_{i in span(p)} u(i)
// by dynamic programming over (words translated, last target word) states.
// Ties take the lexicographically smallest phrase-id sequence.
Derivation relaxedDecode(const PhraseLexicon& lexicon, const BigramLanguageModel& lm,
                         const std::vector<double>& u);

class PhraseBackend {
 public:
  using Structure = Derivation;

  PhraseBackend(PhraseLexicon lexicon, BigramLanguageModel lm);

  OracleResult<Structure> oracle(const DualVariables& u) const;
  std::optional<Primal<Structure>> primalize(const Structure& s) const;
  std::string describe() const;

  const PhraseLexicon& lexicon() const { return lexicon_; }
  const BigramLanguageModel& lm() const { return lm_; }

 private:
  PhraseLexicon lexicon_;
  BigramLanguageModel lm_;
};

}  // namespace dd
