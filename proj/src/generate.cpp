#include "dd/generate.hpp"

#include <algorithm>

#include "dd/errors.hpp"

namespace dd {

namespace {

std::vector<std::string> tagNamesFor(int numTags) {
  static const std::vector<std::string> pool = {"a", "b", "c", "d"};
  if (numTags < 2 || numTags > static_cast<int>(pool.size()))
    throw ConfigError("tag count must be between 2 and 4");
  return {pool.begin(), pool.begin() + numTags};
}

}  // namespace

ParseTagInstance genParseTag(std::uint64_t seed, int sentenceLength, int numTags) {
  if (sentenceLength < 2 || sentenceLength > 8)
    throw ConfigError("sentence length must be between 2 and 8");
  Rng rng(seed);
  std::vector<std::string> tags = tagNamesFor(numTags);

  std::vector<std::string> sentence;
  for (int i = 0; i < sentenceLength; ++i) sentence.push_back("w" + std::to_string(i + 1));

  // Spine: S -> t X | t t, X -> t X | t t over the first tag keeps every
  // length >= 2 derivable; extra random rules add reordering pressure.
  std::vector<Grammar::NamedBinary> binary = {
      {"S", tags[0], "X", rng.uniform(-1.0, 1.0)},
      {"S", tags[0], tags[0], rng.uniform(-1.0, 1.0)},
      {"X", tags[0], "X", rng.uniform(-1.0, 1.0)},
      {"X", tags[0], tags[0], rng.uniform(-1.0, 1.0)},
  };
  auto haveRule = [&](const std::string& lhs, const std::string& l, const std::string& r) {
    for (const auto& [a, b, c, w] : binary)
      if (a == lhs && b == l && c == r) return true;
    return false;
  };
  int extras = rng.rangeInt(3, 6);
  for (int e = 0; e < extras; ++e) {
    std::string lhs = rng.chance(0.5) ? "S" : "X";
    auto pick = [&]() -> std::string {
      int idx = rng.rangeInt(0, numTags);  // tags plus X
      return idx == numTags ? "X" : tags[static_cast<std::size_t>(idx)];
    };
    std::string left = pick();
    std::string right = pick();
    if (left == "X" && right == "X") right = tags[0];
    if (!haveRule(lhs, left, right)) binary.emplace_back(lhs, left, right, rng.uniform(-1.0, 1.0));
  }

  std::vector<Grammar::NamedLexical> lexical;
  for (const std::string& tag : tags)
    for (const std::string& word : sentence)
      lexical.emplace_back(tag, word, rng.uniform(-1.0, 1.0));

  Grammar grammar("S", tags, binary, lexical);

  TagModel model(1, tags);
  const double taggerScale = 0.4;
  for (const std::string& prev : tags)
    for (const std::string& tag : tags)
      model.setTransition({prev, tag}, taggerScale * rng.uniform(-1.0, 1.0));
  for (const std::string& tag : tags)
    model.setTransition({TagModel::kStartName, tag}, taggerScale * rng.uniform(-1.0, 1.0));
  for (const std::string& tag : tags)
    for (const std::string& word : sentence)
      model.setEmission(tag, word, taggerScale * rng.uniform(-1.0, 1.0));

  return ParseTagInstance{std::move(grammar), std::move(model), std::move(sentence)};
}

MrfInstance genGridMrf(std::uint64_t seed, int rows, int cols) {
  if (rows < 1 || cols < 1 || rows * cols > 20) throw ConfigError("grid size out of range");
  Rng rng(seed);
  int edgeCount = rows * (cols - 1) + (rows - 1) * cols;
  std::vector<std::array<double, 4>> tables;
  for (int e = 0; e < edgeCount; ++e) {
    std::array<double, 4> table;
    for (double& value : table) value = rng.uniform(-1.0, 1.0);
    if (rng.chance(0.6)) {  // attractive lean: reward agreement
      double bonus = rng.uniform(0.2, 1.0);
      table[0] += bonus;
      table[3] += bonus;
    }
    tables.push_back(table);
  }
  PairwiseMRF mrf = makeGridMrf(rows, cols, tables);
  TreeCover cover = gridCover(mrf, rows, cols);
  return MrfInstance{std::move(mrf), std::move(cover), rows, cols};
}

WeightedGraph genCompleteGraph(std::uint64_t seed, int n) {
  if (n < 3 || n > 12) throw ConfigError("vertex count must be between 3 and 12");
  Rng rng(seed);
  WeightedGraph graph;
  graph.n = n;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      graph.edges.push_back({u, v, rng.uniform(0.0, 10.0)});
  graph.validate();
  return graph;
}

PhraseInstance genPhrase(std::uint64_t seed, int sourceLength) {
  if (sourceLength < 1 || sourceLength > 6) throw ConfigError("source length must be between 1 and 6");
  Rng rng(seed);

  static const std::vector<std::string> vocab = {"the", "cat", "sat", "mat", "on", "a", "dog", "ran"};
  auto word = [&]() { return vocab[static_cast<std::size_t>(rng.rangeInt(0, static_cast<int>(vocab.size()) - 1))]; };

  // Unit phrase scores sit in a narrow positive band, so translating a word
  // twice costs roughly what skipping another word saves; multi-word phrases
  // score near the unit mass they replace. Both keep the count relaxation from
  // being dominated by repeats while leaving real argmax competition.
  PhraseLexicon lexicon;
  lexicon.sourceLength = sourceLength;
  for (int i = 0; i < sourceLength; ++i)
    lexicon.phrases.push_back({i, i, {word()}, rng.uniform(0.6, 1.4)});
  int extras = std::min(rng.rangeInt(0, 3), 8 - sourceLength);
  for (int e = 0; e < extras && sourceLength >= 2; ++e) {
    int s = rng.rangeInt(0, sourceLength - 2);
    int t = std::min(sourceLength - 1, s + rng.rangeInt(1, 2));
    std::vector<std::string> target = {word()};
    if (rng.chance(0.5)) target.push_back(word());
    double unitMass = 0.0;
    for (int i = s; i <= t; ++i) unitMass += lexicon.phrases[static_cast<std::size_t>(i)].score;
    lexicon.phrases.push_back({s, t, std::move(target), unitMass + rng.uniform(-0.3, 0.5)});
  }
  lexicon.validate();

  BigramLanguageModel lm;
  lm.floor = -1.0;
  std::vector<std::string> seen = {lm.startToken};
  for (const PhraseEntry& p : lexicon.phrases)
    for (const std::string& w : p.words) seen.push_back(w);
  std::sort(seen.begin(), seen.end());
  seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
  for (const std::string& prev : seen)
    for (const std::string& next : seen)
      if (next != lm.startToken && rng.chance(0.7))
        lm.scores[{prev, next}] = rng.uniform(-0.4, 0.0);

  return PhraseInstance{std::move(lexicon), std::move(lm)};
}

}  // namespace dd
