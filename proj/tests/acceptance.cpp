// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Populations, seeds, schedules, and tolerances are all pinned here.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "dd/diagnostics.hpp"
#include "dd/engine.hpp"
#include "dd/generate.hpp"
#include "dd/mrf.hpp"
#include "dd/oracles.hpp"
#include "dd/parse_tag.hpp"
#include "dd/phrase.hpp"
#include "dd/toy.hpp"
#include "dd/tsp.hpp"
#include "test_oracles.hpp"

using namespace dd;

namespace {

constexpr double kTol = 1e-9;

struct Gate {
  int failures = 0;

  void report(int index, const std::string& name, bool pass, const std::string& detail) {
    std::printf("%s  criterion %d (%s): %s\n", pass ? "PASS" : "FAIL", index, name.c_str(),
                detail.c_str());
    if (!pass) ++failures;
  }
};

struct Stopwatch {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

StepSizeSchedule adaptive(double c) { return {ScheduleKind::Adaptive, c}; }

// Shared bookkeeping for criteria 3, 4, 6 and 8, fed by every run the suite
// produces.
struct TraceAudit {
  int weakDualityViolations = 0;
  int certificateMismatches = 0;
  int boundViolations = 0;
  int envelopeViolations = 0;
  int runs = 0;
  int converged = 0;

  template <RelaxationBackend B>
  void absorb(const B& backend, const RunTrace<typename B::Structure>& trace,
              std::optional<double> bruteOpt) {
    ++runs;

    if (bruteOpt) {
      for (const IterationRecord& rec : trace.records)
        if (rec.dual < *bruteOpt - kTol) ++weakDualityViolations;
    }
    if (trace.status == RunStatus::EConverged) {
      ++converged;
      if (bruteOpt && std::abs(*trace.certifiedValue - *bruteOpt) > kTol) ++certificateMismatches;
    }

    double maxNormSq = 0.0;
    for (const IterationRecord& rec : trace.records)
      maxNormSq = std::max(maxNormSq, rec.subgradNormSq);
    double G = std::sqrt(maxNormSq);
    DualVariables zero;
    if (!verifyConvergenceBound(backend, trace, zero, G)) ++boundViolations;
    if (!verifyConvergenceBound(backend, trace, trace.finalMultipliers, G)) ++boundViolations;

    // Rebuild the running envelope columns and check monotonicity plus
    // agreement with the trace's own bookkeeping.
    double bestDual = std::numeric_limits<double>::infinity();
    std::optional<double> bestPrimal;
    double prevBestDual = std::numeric_limits<double>::infinity();
    std::optional<double> prevBestPrimal;
    for (const IterationRecord& rec : trace.records) {
      bestDual = std::min(bestDual, rec.dual);
      if (rec.primal && (!bestPrimal || *rec.primal > *bestPrimal)) bestPrimal = *rec.primal;
      if (bestDual > prevBestDual) ++envelopeViolations;
      if (prevBestPrimal && (!bestPrimal || *bestPrimal < *prevBestPrimal)) ++envelopeViolations;
      prevBestDual = bestDual;
      prevBestPrimal = bestPrimal;
      if (rec.primal && rec.dual < *rec.primal - kTol) ++weakDualityViolations;
    }
    if (bestDual != trace.bestDual) ++envelopeViolations;
    if (bestPrimal != trace.bestPrimal) ++envelopeViolations;
  }
};

std::vector<int> toyTagPair(const Grammar& grammar, const char* a, const char* b) {
  return {grammar.tagRank(grammar.symbolId(a)), grammar.tagRank(grammar.symbolId(b))};
}

}  // namespace

int main() {
  Gate gate;
  TraceAudit audit;
  ToyInstance toy = makeToyInstance();

  // ---------------------------------------------------------------- 1
  {
    Stopwatch clock;
    ParseTagBackend backend(toy.grammar, toy.model, toy.sentence);
    auto trace = runSubgradient(backend, adaptive(0.3), 500);
    audit.absorb(backend, trace, 0.0);
    double elapsed = clock.seconds();

    bool nearTwo = std::abs(trace.bestDual - 2.0) <= 0.05;
    bool noCertificate = trace.status != RunStatus::EConverged;
    bool within500 = trace.records.size() <= 500;

    std::vector<int> ab = toyTagPair(toy.grammar, "a", "b");
    std::vector<int> ba = toyTagPair(toy.grammar, "b", "a");
    std::vector<int> aa = toyTagPair(toy.grammar, "a", "a");
    std::vector<int> bb = toyTagPair(toy.grammar, "b", "b");
    bool tailAlternates = trace.structures.size() >= 20;
    if (tailAlternates) {
      for (std::size_t i = trace.structures.size() - 20; i < trace.structures.size(); ++i) {
        const auto& [tree, seq] = trace.structures[i];
        bool pair1 = tree.tagRanks == ab && seq.tagRanks == aa;
        bool pair2 = tree.tagRanks == ba && seq.tagRanks == bb;
        if (!pair1 && !pair2) tailAlternates = false;
        if (i + 1 < trace.structures.size() &&
            trace.structures[i].tree.tagRanks == trace.structures[i + 1].tree.tagRanks)
          tailAlternates = false;
      }
    }
    bool fast = elapsed < 1.0;

    std::ostringstream detail;
    detail << "best dual " << trace.bestDual << ", status " << runStatusName(trace.status)
           << ", tail alternates=" << (tailAlternates ? "yes" : "no") << ", " << elapsed << "s";
    gate.report(1, "toy reproduction", nearTwo && noCertificate && within500 && tailAlternates && fast,
                detail.str());
  }

  // ---------------------------------------------------------------- 2
  {
    Stopwatch clock;
    ParseTagBackend backend(toy.grammar, toy.model, toy.sentence,
                            BigramConstraintSet{{toyTighteningConstraint()}});
    auto trace = runSubgradient(backend, adaptive(1.0), 500);
    audit.absorb(backend, trace, 0.0);
    double elapsed = clock.seconds();

    bool certified = trace.status == RunStatus::EConverged;
    bool valueZero = certified && std::abs(*trace.certifiedValue) <= 1e-12;
    bool rightPair = false;
    if (certified) {
      const auto* solution = trace.certifiedSolution();
      std::vector<int> cc = toyTagPair(toy.grammar, "c", "c");
      rightPair = solution && solution->tree.tagRanks == cc && solution->seq.tagRanks == cc;
    }
    bool fast = elapsed < 1.0;

    std::ostringstream detail;
    detail << "status " << runStatusName(trace.status);
    if (certified) detail << ", certified value " << *trace.certifiedValue;
    detail << ", " << elapsed << "s";
    gate.report(2, "tightening reproduction", certified && valueZero && rightPair && fast,
                detail.str());
  }

  // ---------------------------------------------------------------- 3 + 4
  int convergedParseTag = 0, convergedMrf = 0, convergedTsp = 0, convergedPhrase = 0;
  double suite34Seconds = 0.0;
  int weakBefore = audit.weakDualityViolations;
  int certBefore = audit.certificateMismatches;
  {
    Stopwatch clock;

    // Sentence length up to 8 over grammars with at most five symbols
    // (two or three tags plus the two phrase symbols).
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      ParseTagInstance inst =
          genParseTag(seed, 2 + static_cast<int>(seed % 7), 2 + static_cast<int>(seed % 2));
      ParseTagBackend backend(inst.grammar, inst.model, inst.sentence);
      auto trace = runSubgradient(backend, adaptive(1.0), 300, 60);
      double opt = oracles::bruteJointParseTag(inst.grammar, inst.model, inst.sentence).value;
      audit.absorb(backend, trace, opt);
      if (trace.status == RunStatus::EConverged) ++convergedParseTag;
    }

    const std::pair<int, int> dims[] = {{2, 2}, {2, 3}, {3, 3}, {3, 4}, {2, 5}, {2, 6}};
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      auto [rows, cols] = dims[seed % 6];
      MrfInstance inst = genGridMrf(seed, rows, cols);
      MrfBackend backend(inst.mrf, inst.cover);
      auto trace = runSubgradient(backend, adaptive(1.0), 300, 60);
      double opt = oracles::bruteMrfMap(inst.mrf).value;
      audit.absorb(backend, trace, opt);
      if (trace.status == RunStatus::EConverged) ++convergedMrf;
    }

    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      WeightedGraph graph = genCompleteGraph(seed, 4 + static_cast<int>(seed % 5));
      TspBackend backend(graph);
      auto trace = runSubgradient(backend, adaptive(1.0), 300, 60);
      double opt = oracles::bruteTsp(graph).value;
      audit.absorb(backend, trace, opt);
      if (trace.status == RunStatus::EConverged) ++convergedTsp;
    }

    const int phraseSizes[] = {3, 4, 5, 3, 4, 6};
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      PhraseInstance inst = genPhrase(seed, phraseSizes[seed % 6]);
      PhraseBackend backend(inst.lexicon, inst.lm);
      auto trace = runSubgradient(backend, adaptive(1.0), 400, 60);
      double opt =
          oracles::brutePhrase(inst.lexicon, inst.lm, oracles::PhraseSearchMode::ExactCover).value;
      audit.absorb(backend, trace, opt);
      if (trace.status == RunStatus::EConverged) ++convergedPhrase;
    }

    suite34Seconds = clock.seconds();
  }
  {
    int weakViolations = audit.weakDualityViolations - weakBefore;
    std::ostringstream detail;
    detail << "400 instances, " << weakViolations << " weak-duality violations, " << suite34Seconds
           << "s";
    gate.report(3, "weak duality", weakViolations == 0 && suite34Seconds < 120.0, detail.str());

    int certMismatches = audit.certificateMismatches - certBefore;
    bool enoughConverged = convergedParseTag >= 30 && convergedMrf >= 30 && convergedTsp >= 30 &&
                           convergedPhrase >= 30;
    std::ostringstream detail4;
    detail4 << "e-converged parse-tag " << convergedParseTag << "%, mrf " << convergedMrf
            << "%, tsp " << convergedTsp << "%, phrase " << convergedPhrase << "%; "
            << certMismatches << " certificate mismatches";
    gate.report(4, "certificates", certMismatches == 0 && enoughConverged, detail4.str());
  }

  // ---------------------------------------------------------------- 5
  {
    Stopwatch clock;
    int failures = 0;
    int probes = 0;
    Rng rng(515151);

    auto probeBackend = [&](const auto& backend, const std::vector<ConstraintId>& keys,
                            int count) {
      for (int p = 0; p < count; ++p) {
        DualVariables u = ddtest::randomMultipliers(rng, keys, -3.0, 3.0);
        DualVariables v = ddtest::randomMultipliers(rng, keys, -3.0, 3.0);
        double lambda = rng.uniform(0.0, 1.0);
        if (!checkSubgradientInequality(backend, u, v)) ++failures;
        if (!checkConvexityInequality(backend, u, v, lambda)) ++failures;
        ++probes;
      }
    };

    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      ParseTagInstance inst =
          genParseTag(seed, 2 + static_cast<int>(seed % 5), 2 + static_cast<int>(seed % 3));
      ParseTagBackend backend(inst.grammar, inst.model, inst.sentence);
      probeBackend(backend, ddtest::tagKeys(static_cast<int>(inst.sentence.size()),
                                            inst.grammar.tagCount()),
                   25);
    }
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      MrfInstance inst = genGridMrf(seed, 2 + static_cast<int>(seed % 2), 3);
      MrfBackend backend(inst.mrf, inst.cover);
      probeBackend(backend, ddtest::vertexKeys(inst.mrf.n), 25);
    }
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      WeightedGraph graph = genCompleteGraph(seed, 5 + static_cast<int>(seed % 3));
      TspBackend backend(graph);
      probeBackend(backend, ddtest::vertexKeys(graph.n), 25);
    }
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      PhraseInstance inst = genPhrase(seed, 3 + static_cast<int>(seed % 4));
      PhraseBackend backend(inst.lexicon, inst.lm);
      probeBackend(backend, ddtest::vertexKeys(inst.lexicon.sourceLength), 25);
    }

    double elapsed = clock.seconds();
    std::ostringstream detail;
    detail << probes << " (u,v,lambda) probes, " << failures << " inequality failures, " << elapsed
           << "s";
    gate.report(5, "subgradient and convexity inequalities",
                probes >= 1000 && failures == 0 && elapsed < 30.0, detail.str());
  }

  // ---------------------------------------------------------------- 6
  {
    std::ostringstream detail;
    detail << audit.runs << " traces from criteria 1-4, " << audit.boundViolations
           << " bound violations (references: zero and final multipliers)";
    gate.report(6, "convergence bound", audit.boundViolations == 0, detail.str());
  }

  // ---------------------------------------------------------------- 7
  {
    Stopwatch clock;
    int mismatches = 0;
    Rng rng(700700);

    for (std::uint64_t seed = 201; seed <= 250; ++seed) {
      ParseTagInstance inst =
          genParseTag(seed, 2 + static_cast<int>(seed % 5), 2 + static_cast<int>(seed % 3));
      int n = static_cast<int>(inst.sentence.size());
      DualVariables adjust = ddtest::randomMultipliers(
          rng, ddtest::tagKeys(n, inst.grammar.tagCount()), -2.0, 2.0);
      if (!(ckyDecode(inst.grammar, inst.sentence, adjust) ==
            ddtest::bruteParseArgmax(inst.grammar, inst.sentence, adjust, {})))
        ++mismatches;

      DualVariables bigramAdjust;
      for (int i = 0; i + 1 < n; ++i)
        bigramAdjust.set(ConstraintId::bigram(i, rng.rangeInt(0, inst.grammar.tagCount() - 1),
                                              rng.rangeInt(0, inst.grammar.tagCount() - 1)),
                         rng.uniform(-2.0, 2.0));
      if (!(viterbiDecode(inst.model, inst.sentence, adjust, bigramAdjust) ==
            ddtest::bruteTagArgmax(inst.model, inst.sentence, adjust, bigramAdjust)))
        ++mismatches;
    }

    for (std::uint64_t seed = 301; seed <= 350; ++seed) {
      Rng forestRng(seed);
      int n = 4 + static_cast<int>(seed % 9);  // up to 12 vertices
      std::vector<std::pair<int, int>> edges;
      std::vector<std::array<double, 4>> tables;
      for (int v = 1; v < n; ++v) {
        if (!forestRng.chance(0.75)) continue;
        std::array<double, 4> table;
        for (double& value : table) value = forestRng.uniform(-2.0, 2.0);
        edges.push_back({forestRng.rangeInt(0, v - 1), v});
        tables.push_back(table);
      }
      std::map<int, double> unary;
      for (int v = 0; v < n; ++v)
        if (forestRng.chance(0.5)) unary[v] = forestRng.uniform(-2.0, 2.0);
      if (maxProductForest(n, edges, tables, unary) !=
          ddtest::bruteForestArgmax(n, edges, tables, unary))
        ++mismatches;
    }

    for (std::uint64_t seed = 401; seed <= 450; ++seed) {
      WeightedGraph graph = genCompleteGraph(seed, 4 + static_cast<int>(seed % 4));
      std::vector<double> u(static_cast<std::size_t>(graph.n), 0.0);
      for (double& value : u) value = rng.uniform(-2.0, 2.0);
      if (!(bestOneTree(graph, u) == ddtest::bruteOneTreeArgmax(graph, u))) ++mismatches;
    }

    for (std::uint64_t seed = 501; seed <= 550; ++seed) {
      PhraseInstance inst = genPhrase(seed, 3 + static_cast<int>(seed % 3));
      std::vector<double> u(static_cast<std::size_t>(inst.lexicon.sourceLength), 0.0);
      for (double& value : u) value = rng.uniform(-2.0, 2.0);
      if (!(relaxedDecode(inst.lexicon, inst.lm, u) ==
            ddtest::bruteRelaxedDerivation(inst.lexicon, inst.lm, u)))
        ++mismatches;
    }

    double elapsed = clock.seconds();
    std::ostringstream detail;
    detail << "250 decoder-vs-enumeration checks, " << mismatches << " mismatches, " << elapsed
           << "s";
    gate.report(7, "oracle equivalence", mismatches == 0 && elapsed < 120.0, detail.str());
  }

  // ---------------------------------------------------------------- 8
  {
    ParseTagBackend backend(toy.grammar, toy.model, toy.sentence);
    auto trace = runSubgradient(backend, {ScheduleKind::Constant, 0.01}, 500);
    audit.absorb(backend, trace, 0.0);
    int increases = 0;
    for (std::size_t i = 1; i < trace.records.size(); ++i)
      if (trace.records[i].dual > trace.records[i - 1].dual) ++increases;

    std::ostringstream detail;
    detail << audit.envelopeViolations << " envelope violations across " << audit.runs
           << " traces; constant-step toy run has " << increases << " dual increases";
    gate.report(8, "monotone envelopes", audit.envelopeViolations == 0 && increases >= 1,
                detail.str());
  }

  // ---------------------------------------------------------------- 9
  {
    Rng rng(909090);
    int violations = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      WeightedGraph graph = genCompleteGraph(seed, 4 + static_cast<int>(seed % 5));
      std::vector<double> u(static_cast<std::size_t>(graph.n), 0.0);
      if (seed % 2 == 0)
        for (double& value : u) value = rng.uniform(-3.0, 3.0);
      OneTree tree = bestOneTree(graph, u);
      if (static_cast<int>(tree.edgeIds.size()) != graph.n) ++violations;
      int residualSum = 0;
      for (int r : degreeResiduals(graph, tree)) residualSum += r;
      if (residualSum != 0) ++violations;
      if (!isOneTree(graph, tree.edgeIds)) ++violations;
      if (!isOneTree(graph, oracles::bruteTsp(graph).tour.edgeIds(graph))) ++violations;
    }
    std::ostringstream detail;
    detail << "100 graphs, " << violations << " structural violations";
    gate.report(9, "one-tree structure", violations == 0, detail.str());
  }

  if (gate.failures > 0) {
    std::printf("%d criterion(s) failed\n", gate.failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
