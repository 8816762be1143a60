#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dd/generate.hpp"
#include "dd/mrf.hpp"
#include "dd/parse_tag.hpp"
#include "dd/phrase.hpp"
#include "dd/trace.hpp"
#include "dd/tsp.hpp"

namespace dd {

// All instance files are UTF-8 line-oriented text; '#' starts a comment and
// blank lines are skipped. Vertices and positions are 1-indexed on disk and
// 0-indexed in memory.
//
// Grammar:     START S | RULE X Y Z w | LEX t word w | TAGS t1 t2 ...
// Tag model:   ORDER m | TRANS prev... t w | EMIT t word w   (start tag <s>)
// MRF:         VARS n | GRID r c | EDGE i j t00 t01 t10 t11 | TREE1 i j | TREE2 i j
// Graph:       N n | EDGE i j w
// Phrase table PHRASE s t w word... ; LM: START tok | FLOOR w | LM w1 w2 w

Grammar loadGrammar(const std::string& path);
void saveGrammar(const Grammar& grammar, const std::string& path);

TagModel loadTagModel(const std::string& path);
void saveTagModel(const TagModel& model, const std::string& path);

struct LoadedMrf {
  PairwiseMRF mrf;
  std::optional<TreeCover> cover;
  std::optional<std::pair<int, int>> grid;

  // explicit cover when present, else the grid cover; errors without either
  TreeCover resolveCover() const;
};

LoadedMrf loadMrf(const std::string& path);
void saveMrf(const PairwiseMRF& mrf, const std::optional<TreeCover>& cover,
             std::optional<std::pair<int, int>> grid, const std::string& path);

WeightedGraph loadGraph(const std::string& path);
void saveGraph(const WeightedGraph& graph, const std::string& path);

PhraseLexicon loadPhraseTable(const std::string& path);
void savePhraseTable(const PhraseLexicon& lexicon, const std::string& path);

BigramLanguageModel loadLanguageModel(const std::string& path);
void saveLanguageModel(const BigramLanguageModel& lm, const std::string& path);

std::vector<std::string> loadSentence(const std::string& path);
void saveSentence(const std::vector<std::string>& sentence, const std::string& path);

// Numeric fields are shortest round-trip decimal (std::to_chars).
std::string formatDouble(double value);

// Trace CSV: header k,dual,primal,best_dual,best_primal,gap,step_size,violations
// with one row per iteration and empty cells where no primal exists yet.
void writeTraceCsv(std::ostream& out, const std::vector<IterationRecord>& records);
void writeTraceCsv(const std::string& path, const std::vector<IterationRecord>& records);

// Flat view of a trace for reporting, independent of the structure type.
struct TraceStats {
  RunStatus status = RunStatus::MaxIterations;
  int iterations = 0;
  double bestDual = 0.0;
  std::optional<double> bestPrimal;
  std::optional<double> gap;
  bool certified = false;
  std::optional<int> certifiedIteration;
  std::optional<double> certifiedValue;
};

template <class S>
TraceStats traceStats(const RunTrace<S>& trace) {
  TraceStats stats;
  stats.status = trace.status;
  stats.iterations = static_cast<int>(trace.records.size());
  stats.bestDual = trace.bestDual;
  stats.bestPrimal = trace.bestPrimal;
  stats.gap = dualityGap(trace);
  stats.certified = trace.status == RunStatus::EConverged;
  stats.certifiedIteration = trace.certifiedIteration;
  stats.certifiedValue = trace.certifiedValue;
  return stats;
}

std::string summaryJson(const TraceStats& stats, const std::string& problem,
                        const std::string& scheduleName, double scheduleC);
TraceStats parseSummaryJson(const std::string& text);
void writeSummaryJson(const std::string& path, const TraceStats& stats, const std::string& problem,
                      const std::string& scheduleName, double scheduleC);

}  // namespace dd
