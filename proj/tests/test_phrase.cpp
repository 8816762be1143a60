#include <algorithm>

#include "dd/engine.hpp"
#include "dd/errors.hpp"
#include "dd/generate.hpp"
#include "dd/oracles.hpp"
#include "dd/phrase.hpp"
#include "doctest.h"
#include "test_oracles.hpp"

using namespace dd;

namespace {

StepSizeSchedule adaptive(double c) { return {ScheduleKind::Adaptive, c}; }

}  // namespace

TEST_SUITE_BEGIN("phrase");

TEST_CASE("lexicon validation requires full coverage") {
  PhraseLexicon lexicon;
  lexicon.sourceLength = 3;
  lexicon.phrases = {{0, 1, {"x"}, 0.0}};
  CHECK_THROWS_AS(lexicon.validate(), InvalidInstanceError);
}

TEST_CASE("single-phrase instance decodes to that phrase") {
  PhraseLexicon lexicon;
  lexicon.sourceLength = 1;
  lexicon.phrases = {{0, 0, {"hello"}, 2.0}};
  BigramLanguageModel lm;
  lm.scores[{lm.startToken, "hello"}] = -0.5;

  Derivation d = relaxedDecode(lexicon, lm, {0.0});
  CHECK(d.phraseIds == std::vector<int>{0});
  CHECK(derivationScore(lexicon, lm, d) == doctest::Approx(1.5));
}

TEST_CASE("over-covering derivations belong to the relaxed set") {
  // Mirrors the over-translation pattern: spans (1,3), (1,2), (3,3), (6,6)
  // give counts 2,2,2,0,0,1,0 with total 7 = n.
  PhraseLexicon lexicon;
  lexicon.sourceLength = 7;
  lexicon.phrases = {
      {0, 2, {"we", "must", "also"}, 0.0},
      {0, 1, {"we", "must"}, 0.0},
      {2, 2, {"also"}, 0.0},
      {5, 5, {"seriously"}, 0.0},
      {3, 3, {"this"}, 0.0},
      {4, 4, {"criticism"}, 0.0},
      {6, 6, {"take"}, 0.0},
  };
  lexicon.validate();

  Derivation d{{0, 1, 2, 3}};
  CHECK(d.counts(lexicon) == std::vector<int>{2, 2, 2, 0, 0, 1, 0});
  CHECK(d.totalCount(lexicon) == 7);
  CHECK(d.translation(lexicon) ==
        std::vector<std::string>{"we", "must", "also", "we", "must", "also", "seriously"});
}

TEST_CASE("unknown bigrams score the floor") {
  BigramLanguageModel lm;
  lm.floor = -7.5;
  lm.scores[{"a", "b"}] = -0.25;
  CHECK(lm.score("a", "b") == -0.25);
  CHECK(lm.score("b", "a") == -7.5);
}

TEST_CASE("relaxed decoding equals exhaustive search over the count-n set") {
  Rng rng(23);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    PhraseInstance inst = genPhrase(seed, 3 + static_cast<int>(seed % 3));
    std::vector<double> u(static_cast<std::size_t>(inst.lexicon.sourceLength), 0.0);
    if (seed % 2 == 0)
      for (double& value : u) value = rng.uniform(-2.0, 2.0);
    Derivation viaDp = relaxedDecode(inst.lexicon, inst.lm, u);
    Derivation viaScan = ddtest::bruteRelaxedDerivation(inst.lexicon, inst.lm, u);
    CHECK(viaDp == viaScan);
  }
}

TEST_CASE("an instance whose best relaxed derivation is an exact cover converges at once") {
  // Count-2 candidates: [good,night] scores 4, [good,good] and [night,*]
  // lose at least one floor bigram, the wide phrase scores far less.
  PhraseLexicon lexicon;
  lexicon.sourceLength = 2;
  lexicon.phrases = {{0, 0, {"good"}, 2.0}, {1, 1, {"night"}, 2.0}, {0, 1, {"bad"}, 0.1}};
  BigramLanguageModel lm;
  lm.floor = -1.0;
  lm.scores[{lm.startToken, "good"}] = 0.0;
  lm.scores[{"good", "night"}] = 0.0;
  PhraseBackend backend(lexicon, lm);
  auto trace = runSubgradient(backend, adaptive(1.0), 50);
  CHECK(trace.status == RunStatus::EConverged);
  CHECK(trace.certifiedIteration == 1);
}

TEST_CASE("doubly covered positions get their multipliers pushed down") {
  // With a flat language model the count-3 optimum is [wide(0,1), unit(1)]
  // at 5 + 1 minus three floor bigrams: position 1 is covered twice and
  // position 2 not at all.
  PhraseLexicon lexicon;
  lexicon.sourceLength = 3;
  lexicon.phrases = {
      {0, 1, {"strong", "pair"}, 5.0},
      {0, 0, {"one"}, 0.1},
      {1, 1, {"two"}, 1.0},
      {2, 2, {"three"}, 0.1},
  };
  BigramLanguageModel lm;
  lm.floor = -0.1;
  PhraseBackend backend(lexicon, lm);

  auto first = backend.oracle({});
  CHECK(first.structure.counts(lexicon) == std::vector<int>{1, 2, 0});
  CHECK(first.subgradient.get(ConstraintId::vertex(1)) == 1.0);
  CHECK(first.subgradient.get(ConstraintId::vertex(2)) == -1.0);

  auto trace = runSubgradient(backend, adaptive(1.0), 1);
  CHECK(trace.finalMultipliers.get(ConstraintId::vertex(1)) < 0.0);
  CHECK(trace.finalMultipliers.get(ConstraintId::vertex(2)) > 0.0);
}

TEST_CASE("exact covers are members of the relaxed search set") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    PhraseInstance inst = genPhrase(seed, 3 + static_cast<int>(seed % 4));
    auto cover = oracles::brutePhrase(inst.lexicon, inst.lm, oracles::PhraseSearchMode::ExactCover);
    CHECK(cover.derivation.totalCount(inst.lexicon) == inst.lexicon.sourceLength);
    // And the relaxed optimum bounds it from above.
    auto relaxed =
        oracles::brutePhrase(inst.lexicon, inst.lm, oracles::PhraseSearchMode::TotalCountN);
    CHECK(relaxed.value >= cover.value - 1e-9);
  }
}

TEST_CASE("e-converged runs match the exhaustive exact-cover optimum") {
  int converged = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    PhraseInstance inst = genPhrase(seed, 3 + static_cast<int>(seed % 3));
    PhraseBackend backend(inst.lexicon, inst.lm);
    auto trace = runSubgradient(backend, adaptive(1.0), 300, 60);
    double opt =
        oracles::brutePhrase(inst.lexicon, inst.lm, oracles::PhraseSearchMode::ExactCover).value;
    for (const IterationRecord& rec : trace.records) CHECK(rec.dual >= opt - 1e-9);
    if (trace.status == RunStatus::EConverged) {
      ++converged;
      CHECK(*trace.certifiedValue == doctest::Approx(opt).epsilon(1e-9));
    }
  }
  CHECK(converged > 0);
}

TEST_SUITE_END();
