#include "dd/harness.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "dd/engine.hpp"
#include "dd/errors.hpp"
#include "dd/generate.hpp"
#include "dd/io.hpp"
#include "dd/oracles.hpp"
#include "dd/toy.hpp"

namespace dd {

namespace {

constexpr double kVerifyTolerance = 1e-9;

std::vector<std::string> splitWords(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> words;
  std::string word;
  while (in >> word) words.push_back(word);
  return words;
}

double defaultStepConstant(Problem problem) {
  // The built-in fractional instance needs a small base step to settle into
  // its matched oscillation; the other problems run well with c = 1.
  return problem == Problem::Toy ? 0.3 : 1.0;
}

struct Verification {
  bool ran = false;
  bool failed = false;
};

template <class S>
Verification verifyAgainstOracle(const RunTrace<S>& trace, std::optional<double> bruteOpt,
                                 const std::string& oracleName, std::ostream& out) {
  Verification v;
  if (!bruteOpt) return v;
  v.ran = true;

  double worst = 0.0;
  bool weakDuality = true;
  for (const IterationRecord& rec : trace.records) {
    worst = std::min(worst, rec.dual - *bruteOpt);
    if (rec.dual < *bruteOpt - kVerifyTolerance) weakDuality = false;
  }
  out << (weakDuality ? "PASS" : "FAIL") << " weak-duality: every dual bound >= " << oracleName
      << " optimum " << formatDouble(*bruteOpt) << " (worst margin " << formatDouble(worst) << ")\n";
  if (!weakDuality) v.failed = true;

  if (trace.status == RunStatus::EConverged) {
    bool match = std::abs(*trace.certifiedValue - *bruteOpt) <= kVerifyTolerance;
    out << (match ? "PASS" : "FAIL") << " certificate: certified value "
        << formatDouble(*trace.certifiedValue) << " vs optimum " << formatDouble(*bruteOpt) << "\n";
    if (!match) v.failed = true;
  } else {
    bool bound = !trace.bestPrimal || *trace.bestPrimal <= *bruteOpt + kVerifyTolerance;
    out << (bound ? "PASS" : "FAIL") << " primal-bound: best primal does not exceed the optimum\n";
    if (!bound) v.failed = true;
  }
  return v;
}

template <class S>
int reportRun(const RunConfig& cfg, const RunTrace<S>& trace, const std::string& description,
              std::optional<double> bruteOpt, const std::string& oracleName, std::ostream& out) {
  TraceStats stats = traceStats(trace);
  out << "instance: " << description << "\n";
  out << "status: " << runStatusName(stats.status) << " after " << stats.iterations
      << " iterations\n";
  out << "best_dual: " << formatDouble(stats.bestDual);
  if (stats.bestPrimal)
    out << "  best_primal: " << formatDouble(*stats.bestPrimal)
        << "  gap: " << formatDouble(*stats.gap);
  out << "\n";
  if (stats.certified)
    out << "certified optimum " << formatDouble(*stats.certifiedValue) << " at iteration "
        << *stats.certifiedIteration << "\n";

  if (!cfg.traceOut.empty()) writeTraceCsv(cfg.traceOut, trace.records);
  if (!cfg.summaryOut.empty())
    writeSummaryJson(cfg.summaryOut, stats, problemName(cfg.problem),
                     scheduleKindName(cfg.schedule.kind), cfg.schedule.c);

  Verification v = verifyAgainstOracle(trace, bruteOpt, oracleName, out);
  return v.failed ? 1 : 0;
}

int runParseTagProblem(const RunConfig& cfg, const Grammar& grammar, const TagModel& model,
                       const std::vector<std::string>& sentence, std::ostream& out) {
  ParseTagRun run = ddParseTag(grammar, model, sentence, cfg.schedule, cfg.maxIters, cfg.tighten,
                               cfg.stallWindow, cfg.stallEps);
  if (!run.addedConstraints.empty()) {
    out << "tightened with" ;
    for (const BigramTriple& t : run.addedConstraints)
      out << " (" << t.i + 1 << "," << grammar.tagName(t.t1) << "," << grammar.tagName(t.t2) << ")";
    out << "\n";
  }

  std::optional<double> bruteOpt;
  if (cfg.verify) bruteOpt = oracles::bruteJointParseTag(grammar, model, sentence).value;

  ParseTagBackend describeOnly(grammar, model, sentence,
                               BigramConstraintSet{run.addedConstraints});
  return reportRun(cfg, run.trace, describeOnly.describe(), bruteOpt, "joint enumeration", out);
}

}  // namespace

std::optional<Problem> problemFromName(const std::string& name) {
  if (name == "parse-tag") return Problem::ParseTag;
  if (name == "mrf") return Problem::Mrf;
  if (name == "tsp") return Problem::Tsp;
  if (name == "phrase") return Problem::Phrase;
  if (name == "toy") return Problem::Toy;
  return std::nullopt;
}

std::string problemName(Problem problem) {
  switch (problem) {
    case Problem::ParseTag: return "parse-tag";
    case Problem::Mrf: return "mrf";
    case Problem::Tsp: return "tsp";
    case Problem::Phrase: return "phrase";
    case Problem::Toy: return "toy";
  }
  return "?";
}

int runCommand(const RunConfig& rawConfig, std::ostream& out) {
  RunConfig cfg = rawConfig;
  cfg.schedule.c = cfg.stepConstant.value_or(defaultStepConstant(cfg.problem));
  cfg.schedule.validate();
  if (cfg.tighten && cfg.problem != Problem::ParseTag && cfg.problem != Problem::Toy)
    throw ConfigError("--tighten applies only to the parse-tag and toy problems");

  switch (cfg.problem) {
    case Problem::Toy: {
      ToyInstance toy = makeToyInstance();
      return runParseTagProblem(cfg, toy.grammar, toy.model, toy.sentence, out);
    }
    case Problem::ParseTag: {
      if (cfg.generate) {
        ParseTagInstance inst = genParseTag(cfg.seed, cfg.genSize, cfg.genTags);
        return runParseTagProblem(cfg, inst.grammar, inst.model, inst.sentence, out);
      }
      if (cfg.grammarPath.empty() || cfg.tagModelPath.empty())
        throw ConfigError("parse-tag needs --grammar and --tag-model (or --gen)");
      if (cfg.sentenceInline.empty() && cfg.sentencePath.empty())
        throw ConfigError("parse-tag needs --sentence or --sentence-file");
      Grammar grammar = loadGrammar(cfg.grammarPath);
      TagModel model = loadTagModel(cfg.tagModelPath);
      std::vector<std::string> sentence = !cfg.sentenceInline.empty()
                                              ? splitWords(cfg.sentenceInline)
                                              : loadSentence(cfg.sentencePath);
      return runParseTagProblem(cfg, grammar, model, sentence, out);
    }
    case Problem::Mrf: {
      PairwiseMRF mrf;
      TreeCover cover;
      if (cfg.generate) {
        MrfInstance inst = genGridMrf(cfg.seed, cfg.genRows, cfg.genCols);
        mrf = std::move(inst.mrf);
        cover = std::move(inst.cover);
      } else {
        if (cfg.mrfPath.empty()) throw ConfigError("mrf needs --mrf (or --gen)");
        LoadedMrf loaded = loadMrf(cfg.mrfPath);
        cover = loaded.resolveCover();
        mrf = std::move(loaded.mrf);
      }
      MrfBackend backend(mrf, cover);
      RunTrace<MrfBackend::Structure> trace =
          runSubgradient(backend, cfg.schedule, cfg.maxIters, cfg.stallWindow, cfg.stallEps);
      std::optional<double> bruteOpt;
      if (cfg.verify) bruteOpt = oracles::bruteMrfMap(mrf).value;
      return reportRun(cfg, trace, backend.describe(), bruteOpt, "exhaustive MAP", out);
    }
    case Problem::Tsp: {
      if (!cfg.generate && cfg.graphPath.empty()) throw ConfigError("tsp needs --graph (or --gen)");
      WeightedGraph graph =
          cfg.generate ? genCompleteGraph(cfg.seed, cfg.genSize) : loadGraph(cfg.graphPath);
      TspBackend backend(graph);
      RunTrace<TspBackend::Structure> trace =
          runSubgradient(backend, cfg.schedule, cfg.maxIters, cfg.stallWindow, cfg.stallEps);
      std::optional<double> bruteOpt;
      if (cfg.verify) bruteOpt = oracles::bruteTsp(graph).value;
      return reportRun(cfg, trace, backend.describe(), bruteOpt, "exhaustive tour search", out);
    }
    case Problem::Phrase: {
      PhraseLexicon lexicon;
      BigramLanguageModel lm;
      if (cfg.generate) {
        PhraseInstance inst = genPhrase(cfg.seed, cfg.genSize);
        lexicon = std::move(inst.lexicon);
        lm = std::move(inst.lm);
      } else {
        if (cfg.phrasesPath.empty() || cfg.lmPath.empty())
          throw ConfigError("phrase needs --phrases and --lm (or --gen)");
        lexicon = loadPhraseTable(cfg.phrasesPath);
        lm = loadLanguageModel(cfg.lmPath);
      }
      PhraseBackend backend(lexicon, lm);
      RunTrace<PhraseBackend::Structure> trace =
          runSubgradient(backend, cfg.schedule, cfg.maxIters, cfg.stallWindow, cfg.stallEps);
      std::optional<double> bruteOpt;
      if (cfg.verify)
        bruteOpt = oracles::brutePhrase(lexicon, lm, oracles::PhraseSearchMode::ExactCover).value;
      return reportRun(cfg, trace, backend.describe(), bruteOpt, "exact-cover search", out);
    }
  }
  throw ConfigError("unknown problem");
}

int generateInstance(const GenConfig& cfg, std::ostream& out) {
  switch (cfg.problem) {
    case Problem::Toy:
      throw ConfigError("the toy instance is built in; nothing to generate");
    case Problem::ParseTag: {
      ParseTagInstance inst = genParseTag(cfg.seed, cfg.size, cfg.tags);
      saveGrammar(inst.grammar, cfg.outPrefix + ".grammar");
      saveTagModel(inst.model, cfg.outPrefix + ".tags");
      saveSentence(inst.sentence, cfg.outPrefix + ".sentence");
      out << "wrote " << cfg.outPrefix << ".grammar, .tags, .sentence\n";
      return 0;
    }
    case Problem::Mrf: {
      MrfInstance inst = genGridMrf(cfg.seed, cfg.rows, cfg.cols);
      saveMrf(inst.mrf, inst.cover, std::make_pair(inst.rows, inst.cols), cfg.outPrefix + ".mrf");
      out << "wrote " << cfg.outPrefix << ".mrf\n";
      return 0;
    }
    case Problem::Tsp: {
      WeightedGraph graph = genCompleteGraph(cfg.seed, cfg.size);
      saveGraph(graph, cfg.outPrefix + ".graph");
      out << "wrote " << cfg.outPrefix << ".graph\n";
      return 0;
    }
    case Problem::Phrase: {
      PhraseInstance inst = genPhrase(cfg.seed, cfg.size);
      savePhraseTable(inst.lexicon, cfg.outPrefix + ".phrases");
      saveLanguageModel(inst.lm, cfg.outPrefix + ".lm");
      out << "wrote " << cfg.outPrefix << ".phrases, .lm\n";
      return 0;
    }
  }
  throw ConfigError("unknown problem");
}

}  // namespace dd
