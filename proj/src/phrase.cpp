#include "dd/phrase.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dd/errors.hpp"

namespace dd {

void PhraseLexicon::validate() const {
  if (sourceLength < 1) throw InvalidInstanceError("source sentence must be nonempty");
  std::vector<char> covered(static_cast<std::size_t>(sourceLength), 0);
  for (const PhraseEntry& p : phrases) {
    if (p.s < 0 || p.t < p.s || p.t >= sourceLength)
      throw InvalidInstanceError("phrase span out of range");
    if (p.words.empty()) throw InvalidInstanceError("phrase target must be nonempty");
    if (!std::isfinite(p.score)) throw InvalidInstanceError("phrase score must be finite");
    for (int i = p.s; i <= p.t; ++i) covered[static_cast<std::size_t>(i)] = 1;
  }
  for (int i = 0; i < sourceLength; ++i)
    if (!covered[static_cast<std::size_t>(i)])
      throw InvalidInstanceError("source position " + std::to_string(i + 1) +
                                 " is covered by no phrase");
}

std::vector<int> Derivation::counts(const PhraseLexicon& lexicon) const {
  std::vector<int> out(static_cast<std::size_t>(lexicon.sourceLength), 0);
  for (int id : phraseIds) {
    const PhraseEntry& p = lexicon.phrases[static_cast<std::size_t>(id)];
    for (int i = p.s; i <= p.t; ++i) ++out[static_cast<std::size_t>(i)];
  }
  return out;
}

int Derivation::totalCount(const PhraseLexicon& lexicon) const {
  int total = 0;
  for (int id : phraseIds) {
    const PhraseEntry& p = lexicon.phrases[static_cast<std::size_t>(id)];
    total += p.t - p.s + 1;
  }
  return total;
}

std::vector<std::string> Derivation::translation(const PhraseLexicon& lexicon) const {
  std::vector<std::string> out;
  for (int id : phraseIds) {
    const PhraseEntry& p = lexicon.phrases[static_cast<std::size_t>(id)];
    out.insert(out.end(), p.words.begin(), p.words.end());
  }
  return out;
}

double derivationScore(const PhraseLexicon& lexicon, const BigramLanguageModel& lm,
                       const Derivation& derivation) {
  double total = 0.0;
  std::string prev = lm.startToken;
  for (int id : derivation.phraseIds) {
    const PhraseEntry& p = lexicon.phrases[static_cast<std::size_t>(id)];
    total += p.score;
    for (const std::string& word : p.words) {
      total += lm.score(prev, word);
      prev = word;
    }
  }
  return total;
}

Derivation relaxedDecode(const PhraseLexicon& lexicon, const BigramLanguageModel& lm,
                         const std::vector<double>& u) {
  lexicon.validate();
  int n = lexicon.sourceLength;
  if (static_cast<int>(u.size()) != n)
    throw InvalidInstanceError("multiplier vector length must equal the source length");

  // Adjusted phrase scores plus the phrase-internal language-model mass; the
  // boundary bigram against the previous state is added per transition.
  std::vector<double> adjusted(lexicon.phrases.size());
  std::vector<double> internal(lexicon.phrases.size(), 0.0);
  for (std::size_t id = 0; id < lexicon.phrases.size(); ++id) {
    const PhraseEntry& p = lexicon.phrases[id];
    adjusted[id] = p.score;
    for (int i = p.s; i <= p.t; ++i) adjusted[id] += u[static_cast<std::size_t>(i)];
    for (std::size_t w = 1; w < p.words.size(); ++w)
      internal[id] += lm.score(p.words[w - 1], p.words[w]);
  }

  struct Path {
    double score = 0.0;
    std::vector<int> phraseIds;
  };
  // State: (source words translated so far, last target word).
  std::vector<std::map<std::string, Path>> layers(static_cast<std::size_t>(n) + 1);
  layers[0][lm.startToken] = Path{};

  for (int translated = 0; translated < n; ++translated) {
    for (const auto& [lastWord, path] : layers[static_cast<std::size_t>(translated)]) {
      for (std::size_t id = 0; id < lexicon.phrases.size(); ++id) {
        const PhraseEntry& p = lexicon.phrases[id];
        int width = p.t - p.s + 1;
        if (translated + width > n) continue;  // over budget
        Path cand;
        cand.score = path.score + adjusted[id] + internal[id] + lm.score(lastWord, p.words.front());
        cand.phraseIds = path.phraseIds;
        cand.phraseIds.push_back(static_cast<int>(id));
        auto& layer = layers[static_cast<std::size_t>(translated + width)];
        auto it = layer.find(p.words.back());
        if (it == layer.end() || cand.score > it->second.score ||
            (cand.score == it->second.score && cand.phraseIds < it->second.phraseIds)) {
          layer[p.words.back()] = std::move(cand);
        }
      }
    }
  }

  const Path* best = nullptr;
  for (const auto& [lastWord, path] : layers[static_cast<std::size_t>(n)]) {
    if (!best || path.score > best->score ||
        (path.score == best->score && path.phraseIds < best->phraseIds)) {
      best = &path;
    }
  }
  if (!best) throw InfeasibleError("no derivation translates exactly n source words");
  return Derivation{best->phraseIds};
}

PhraseBackend::PhraseBackend(PhraseLexicon lexicon, BigramLanguageModel lm)
    : lexicon_(std::move(lexicon)), lm_(std::move(lm)) {
  lexicon_.validate();
}

OracleResult<PhraseBackend::Structure> PhraseBackend::oracle(const DualVariables& u) const {
  std::vector<double> dense(static_cast<std::size_t>(lexicon_.sourceLength), 0.0);
  for (int i = 0; i < lexicon_.sourceLength; ++i)
    dense[static_cast<std::size_t>(i)] = u.get(ConstraintId::vertex(i));

  Derivation derivation = relaxedDecode(lexicon_, lm_, dense);
  std::vector<int> counts = derivation.counts(lexicon_);

  OracleResult<Structure> res;
  for (int i = 0; i < lexicon_.sourceLength; ++i)
    if (counts[static_cast<std::size_t>(i)] != 1)
      res.subgradient.add(ConstraintId::vertex(i),
                          static_cast<double>(counts[static_cast<std::size_t>(i)] - 1));

  // h(y) + sum_i u(i) (y(i) - 1); the -sum u(i) constant is inside the dot.
  res.dualValue = derivationScore(lexicon_, lm_, derivation) + u.dot(res.subgradient);
  res.structure = std::move(derivation);
  return res;
}

std::optional<Primal<PhraseBackend::Structure>> PhraseBackend::primalize(const Structure& s) const {
  for (int count : s.counts(lexicon_))
    if (count != 1) return std::nullopt;
  Primal<Structure> primal;
  primal.solution = s;
  primal.value = derivationScore(lexicon_, lm_, s);
  return primal;
}

std::string PhraseBackend::describe() const {
  std::ostringstream os;
  os << "phrase-lr n=" << lexicon_.sourceLength << " phrases=" << lexicon_.phrases.size();
  return os.str();
}

}  // namespace dd
