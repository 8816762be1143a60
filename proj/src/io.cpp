#include "dd/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

#include "dd/errors.hpp"
#include "json.hpp"

namespace dd {

namespace {

struct Line {
  int number;
  std::vector<std::string> fields;
};

std::vector<Line> readLines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileFormatError(path + ": cannot open file");
  std::vector<Line> lines;
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    std::string::size_type hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream fields(raw);
    Line line;
    line.number = number;
    std::string field;
    while (fields >> field) line.fields.push_back(field);
    if (!line.fields.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

[[noreturn]] void fail(const std::string& path, int line, const std::string& what) {
  throw FileFormatError(path + ":" + std::to_string(line) + ": " + what);
}

double parseReal(const std::string& path, int line, const std::string& field) {
  try {
    std::size_t used = 0;
    double value = std::stod(field, &used);
    if (used != field.size()) fail(path, line, "trailing characters in number '" + field + "'");
    return value;
  } catch (const std::logic_error&) {
    fail(path, line, "expected a number, got '" + field + "'");
  }
}

int parseInt(const std::string& path, int line, const std::string& field) {
  try {
    std::size_t used = 0;
    int value = std::stoi(field, &used);
    if (used != field.size()) fail(path, line, "trailing characters in integer '" + field + "'");
    return value;
  } catch (const std::logic_error&) {
    fail(path, line, "expected an integer, got '" + field + "'");
  }
}

std::ofstream openOut(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw FileFormatError(path + ": cannot open file for writing");
  return out;
}

}  // namespace

std::string formatDouble(double value) {
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  (void)ec;
  return std::string(buffer, ptr);
}

// ---------------------------------------------------------------------------
// Grammar

Grammar loadGrammar(const std::string& path) {
  std::string start;
  std::vector<std::string> tags;  // inferred: the symbols heading LEX lines
  std::vector<Grammar::NamedBinary> binary;
  std::vector<Grammar::NamedLexical> lexical;
  for (const Line& line : readLines(path)) {
    const auto& f = line.fields;
    if (f[0] == "START" && f.size() == 2) {
      start = f[1];
    } else if (f[0] == "RULE" && f.size() == 5) {
      binary.emplace_back(f[1], f[2], f[3], parseReal(path, line.number, f[4]));
    } else if (f[0] == "LEX" && f.size() == 4) {
      lexical.emplace_back(f[1], f[2], parseReal(path, line.number, f[3]));
      tags.push_back(f[1]);
    } else {
      fail(path, line.number, "unrecognized grammar line");
    }
  }
  if (start.empty()) throw FileFormatError(path + ": missing START line");
  if (tags.empty()) throw FileFormatError(path + ": grammar has no LEX lines");
  return Grammar(start, tags, binary, lexical);
}

void saveGrammar(const Grammar& grammar, const std::string& path) {
  std::ofstream out = openOut(path);
  out << "START " << grammar.symbolName(grammar.startSymbol()) << "\n";
  for (const Grammar::BinaryRule& rule : grammar.binaryRules())
    out << "RULE " << grammar.symbolName(rule.lhs) << " " << grammar.symbolName(rule.left) << " "
        << grammar.symbolName(rule.right) << " " << formatDouble(rule.weight) << "\n";
  for (const auto& [key, weight] : grammar.lexicalRules())
    out << "LEX " << grammar.tagName(key.first) << " " << key.second << " " << formatDouble(weight)
        << "\n";
}

// ---------------------------------------------------------------------------
// Tag model

TagModel loadTagModel(const std::string& path) {
  std::vector<Line> lines = readLines(path);
  int order = -1;
  std::vector<std::string> tags;  // inferred from TRANS and EMIT lines
  for (const Line& line : lines) {
    const auto& f = line.fields;
    if (f[0] == "ORDER" && f.size() == 2) order = parseInt(path, line.number, f[1]);
    if (f[0] == "TRANS" && f.size() >= 3)
      for (std::size_t i = 1; i + 1 < f.size(); ++i)
        if (f[i] != TagModel::kStartName) tags.push_back(f[i]);
    if (f[0] == "EMIT" && f.size() == 4) tags.push_back(f[1]);
  }
  if (order < 0) throw FileFormatError(path + ": missing ORDER line");
  if (tags.empty()) throw FileFormatError(path + ": tag model declares no tags");
  TagModel model(order, tags);
  for (const Line& line : lines) {
    const auto& f = line.fields;
    if (f[0] == "ORDER") continue;
    if (f[0] == "TRANS" && static_cast<int>(f.size()) == order + 3) {
      std::vector<std::string> gram(f.begin() + 1, f.end() - 1);
      model.setTransition(gram, parseReal(path, line.number, f.back()));
    } else if (f[0] == "EMIT" && f.size() == 4) {
      model.setEmission(f[1], f[2], parseReal(path, line.number, f[3]));
    } else {
      fail(path, line.number, "unrecognized tag model line");
    }
  }
  return model;
}

void saveTagModel(const TagModel& model, const std::string& path) {
  std::ofstream out = openOut(path);
  out << "ORDER " << model.order() << "\n";
  for (const auto& [gram, weight] : model.transitions()) {
    out << "TRANS";
    for (int rank : gram) out << " " << (rank < 0 ? std::string(TagModel::kStartName) : model.tagName(rank));
    out << " " << formatDouble(weight) << "\n";
  }
  for (const auto& [key, weight] : model.emissions())
    out << "EMIT " << model.tagName(key.first) << " " << key.second << " " << formatDouble(weight)
        << "\n";
}

// ---------------------------------------------------------------------------
// MRF

LoadedMrf loadMrf(const std::string& path) {
  LoadedMrf loaded;
  std::vector<std::pair<int, int>> tree1, tree2;
  for (const Line& line : readLines(path)) {
    const auto& f = line.fields;
    if (f[0] == "VARS" && f.size() == 2) {
      loaded.mrf.n = parseInt(path, line.number, f[1]);
    } else if (f[0] == "GRID" && f.size() == 3) {
      loaded.grid = {parseInt(path, line.number, f[1]), parseInt(path, line.number, f[2])};
    } else if (f[0] == "EDGE" && f.size() == 7) {
      PairwiseMRF::Edge edge;
      edge.u = parseInt(path, line.number, f[1]) - 1;
      edge.v = parseInt(path, line.number, f[2]) - 1;
      if (edge.u > edge.v) std::swap(edge.u, edge.v);
      for (int s = 0; s < 4; ++s)
        edge.table[static_cast<std::size_t>(s)] = parseReal(path, line.number, f[static_cast<std::size_t>(3 + s)]);
      loaded.mrf.edges.push_back(edge);
    } else if ((f[0] == "TREE1" || f[0] == "TREE2") && f.size() == 3) {
      auto& side = f[0] == "TREE1" ? tree1 : tree2;
      side.emplace_back(parseInt(path, line.number, f[1]) - 1, parseInt(path, line.number, f[2]) - 1);
    } else {
      fail(path, line.number, "unrecognized MRF line");
    }
  }
  loaded.mrf.validate();
  if (!tree1.empty() || !tree2.empty()) {
    TreeCover cover;
    for (auto [u, v] : tree1) {
      int idx = loaded.mrf.findEdge(u, v);
      if (idx < 0) throw FileFormatError(path + ": TREE1 references a missing edge");
      cover.t1.push_back(idx);
    }
    for (auto [u, v] : tree2) {
      int idx = loaded.mrf.findEdge(u, v);
      if (idx < 0) throw FileFormatError(path + ": TREE2 references a missing edge");
      cover.t2.push_back(idx);
    }
    cover.validate(loaded.mrf);
    loaded.cover = std::move(cover);
  }
  return loaded;
}

TreeCover LoadedMrf::resolveCover() const {
  if (cover) return *cover;
  if (grid) return gridCover(mrf, grid->first, grid->second);
  throw InvalidInstanceError("MRF instance needs TREE1/TREE2 lines or a GRID declaration");
}

void saveMrf(const PairwiseMRF& mrf, const std::optional<TreeCover>& cover,
             std::optional<std::pair<int, int>> grid, const std::string& path) {
  std::ofstream out = openOut(path);
  out << "VARS " << mrf.n << "\n";
  if (grid) out << "GRID " << grid->first << " " << grid->second << "\n";
  for (const PairwiseMRF::Edge& e : mrf.edges) {
    out << "EDGE " << e.u + 1 << " " << e.v + 1;
    for (double value : e.table) out << " " << formatDouble(value);
    out << "\n";
  }
  if (cover) {
    for (int idx : cover->t1)
      out << "TREE1 " << mrf.edges[static_cast<std::size_t>(idx)].u + 1 << " "
          << mrf.edges[static_cast<std::size_t>(idx)].v + 1 << "\n";
    for (int idx : cover->t2)
      out << "TREE2 " << mrf.edges[static_cast<std::size_t>(idx)].u + 1 << " "
          << mrf.edges[static_cast<std::size_t>(idx)].v + 1 << "\n";
  }
}

// ---------------------------------------------------------------------------
// Graph

WeightedGraph loadGraph(const std::string& path) {
  WeightedGraph graph;
  for (const Line& line : readLines(path)) {
    const auto& f = line.fields;
    if (f[0] == "N" && f.size() == 2) {
      graph.n = parseInt(path, line.number, f[1]);
    } else if (f[0] == "EDGE" && f.size() == 4) {
      graph.edges.push_back({parseInt(path, line.number, f[1]) - 1,
                             parseInt(path, line.number, f[2]) - 1,
                             parseReal(path, line.number, f[3])});
    } else {
      fail(path, line.number, "unrecognized graph line");
    }
  }
  graph.validate();
  return graph;
}

void saveGraph(const WeightedGraph& graph, const std::string& path) {
  std::ofstream out = openOut(path);
  out << "N " << graph.n << "\n";
  for (const WeightedGraph::Edge& e : graph.edges)
    out << "EDGE " << e.u + 1 << " " << e.v + 1 << " " << formatDouble(e.score) << "\n";
}

// ---------------------------------------------------------------------------
// Phrase table and language model

PhraseLexicon loadPhraseTable(const std::string& path) {
  PhraseLexicon lexicon;
  for (const Line& line : readLines(path)) {
    const auto& f = line.fields;
    if (f[0] == "PHRASE" && f.size() >= 5) {
      PhraseEntry entry;
      entry.s = parseInt(path, line.number, f[1]) - 1;
      entry.t = parseInt(path, line.number, f[2]) - 1;
      entry.score = parseReal(path, line.number, f[3]);
      entry.words.assign(f.begin() + 4, f.end());
      lexicon.phrases.push_back(std::move(entry));
      lexicon.sourceLength = std::max(lexicon.sourceLength, lexicon.phrases.back().t + 1);
    } else {
      fail(path, line.number, "unrecognized phrase table line");
    }
  }
  lexicon.validate();
  return lexicon;
}

void savePhraseTable(const PhraseLexicon& lexicon, const std::string& path) {
  std::ofstream out = openOut(path);
  for (const PhraseEntry& p : lexicon.phrases) {
    out << "PHRASE " << p.s + 1 << " " << p.t + 1 << " " << formatDouble(p.score);
    for (const std::string& word : p.words) out << " " << word;
    out << "\n";
  }
}

BigramLanguageModel loadLanguageModel(const std::string& path) {
  BigramLanguageModel lm;
  for (const Line& line : readLines(path)) {
    const auto& f = line.fields;
    if (f[0] == "START" && f.size() == 2) {
      lm.startToken = f[1];
    } else if (f[0] == "FLOOR" && f.size() == 2) {
      lm.floor = parseReal(path, line.number, f[1]);
    } else if (f[0] == "LM" && f.size() == 4) {
      lm.scores[{f[1], f[2]}] = parseReal(path, line.number, f[3]);
    } else {
      fail(path, line.number, "unrecognized language model line");
    }
  }
  return lm;
}

void saveLanguageModel(const BigramLanguageModel& lm, const std::string& path) {
  std::ofstream out = openOut(path);
  out << "START " << lm.startToken << "\n";
  out << "FLOOR " << formatDouble(lm.floor) << "\n";
  for (const auto& [key, weight] : lm.scores)
    out << "LM " << key.first << " " << key.second << " " << formatDouble(weight) << "\n";
}

std::vector<std::string> loadSentence(const std::string& path) {
  std::vector<std::string> sentence;
  for (const Line& line : readLines(path))
    sentence.insert(sentence.end(), line.fields.begin(), line.fields.end());
  if (sentence.empty()) throw FileFormatError(path + ": empty sentence");
  return sentence;
}

void saveSentence(const std::vector<std::string>& sentence, const std::string& path) {
  std::ofstream out = openOut(path);
  for (std::size_t i = 0; i < sentence.size(); ++i) out << (i ? " " : "") << sentence[i];
  out << "\n";
}

// ---------------------------------------------------------------------------
// Trace emission

void writeTraceCsv(std::ostream& out, const std::vector<IterationRecord>& records) {
  out << "k,dual,primal,best_dual,best_primal,gap,step_size,violations\n";
  double bestDual = std::numeric_limits<double>::infinity();
  std::optional<double> bestPrimal;
  for (const IterationRecord& rec : records) {
    bestDual = std::min(bestDual, rec.dual);
    if (rec.primal && (!bestPrimal || *rec.primal > *bestPrimal)) bestPrimal = *rec.primal;
    out << rec.k << ',' << formatDouble(rec.dual) << ',';
    if (rec.primal) out << formatDouble(*rec.primal);
    out << ',' << formatDouble(bestDual) << ',';
    if (bestPrimal) out << formatDouble(*bestPrimal);
    out << ',';
    if (bestPrimal) out << formatDouble(std::max(0.0, bestDual - *bestPrimal));
    out << ',' << formatDouble(rec.stepSize) << ',' << rec.violationCount << "\n";
  }
}

void writeTraceCsv(const std::string& path, const std::vector<IterationRecord>& records) {
  std::ofstream out = openOut(path);
  writeTraceCsv(out, records);
}

std::string summaryJson(const TraceStats& stats, const std::string& problem,
                        const std::string& scheduleName, double scheduleC) {
  nlohmann::json j;
  j["problem"] = problem;
  j["schedule"] = {{"kind", scheduleName}, {"c", scheduleC}};
  j["status"] = runStatusName(stats.status);
  j["iterations"] = stats.iterations;
  j["best_dual"] = stats.bestDual;
  j["best_primal"] = stats.bestPrimal ? nlohmann::json(*stats.bestPrimal) : nlohmann::json(nullptr);
  j["gap"] = stats.gap ? nlohmann::json(*stats.gap) : nlohmann::json(nullptr);
  j["certified"] = stats.certified;
  j["certified_iteration"] =
      stats.certifiedIteration ? nlohmann::json(*stats.certifiedIteration) : nlohmann::json(nullptr);
  j["certified_value"] =
      stats.certifiedValue ? nlohmann::json(*stats.certifiedValue) : nlohmann::json(nullptr);
  return j.dump(2) + "\n";
}

TraceStats parseSummaryJson(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  TraceStats stats;
  auto status = runStatusFromName(j.at("status").get<std::string>());
  if (!status) throw FileFormatError("summary JSON has an unknown status");
  stats.status = *status;
  stats.iterations = j.at("iterations").get<int>();
  stats.bestDual = j.at("best_dual").get<double>();
  if (!j.at("best_primal").is_null()) stats.bestPrimal = j.at("best_primal").get<double>();
  if (!j.at("gap").is_null()) stats.gap = j.at("gap").get<double>();
  stats.certified = j.at("certified").get<bool>();
  if (!j.at("certified_iteration").is_null())
    stats.certifiedIteration = j.at("certified_iteration").get<int>();
  if (!j.at("certified_value").is_null())
    stats.certifiedValue = j.at("certified_value").get<double>();
  return stats;
}

void writeSummaryJson(const std::string& path, const TraceStats& stats, const std::string& problem,
                      const std::string& scheduleName, double scheduleC) {
  std::ofstream out = openOut(path);
  out << summaryJson(stats, problem, scheduleName, scheduleC);
}

}  // namespace dd
