#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "dd/schedule.hpp"

namespace dd {

enum class Problem { ParseTag, Mrf, Tsp, Phrase, Toy };

std::optional<Problem> problemFromName(const std::string& name);
std::string problemName(Problem problem);

struct RunConfig {
  Problem problem = Problem::Toy;
  StepSizeSchedule schedule;
  std::optional<double> stepConstant;  // overrides the per-problem default for c
  int maxIters = 500;
  bool tighten = false;
  int stallWindow = 20;
  double stallEps = 1e-6;
  std::uint64_t seed = 1;
  bool verify = false;
  std::string traceOut;
  std::string summaryOut;

  // instance sources: explicit files, or --gen with the size parameters
  bool generate = false;
  int genSize = 5;
  int genTags = 3;
  int genRows = 3;
  int genCols = 3;
  std::string grammarPath;
  std::string tagModelPath;
  std::string sentencePath;
  std::string sentenceInline;  // space-separated words
  std::string mrfPath;
  std::string graphPath;
  std::string phrasesPath;
  std::string lmPath;
};

// Loads or generates the instance, runs the subgradient engine, writes the
// trace CSV and JSON summary, and (with verify) cross-checks the run against
// the brute-force oracles, printing one PASS/FAIL line per check. Returns the
// process exit status: 0 on success including non-e-converged runs, nonzero
// on errors or verification failure.
int runCommand(const RunConfig& config, std::ostream& out);

struct GenConfig {
  Problem problem = Problem::Tsp;
  std::uint64_t seed = 1;
  int size = 5;
  int tags = 3;
  int rows = 3;
  int cols = 3;
  std::string outPrefix = "instance";
};

// Writes reproducible instance files for the chosen problem; identical seeds
// produce identical bytes.
int generateInstance(const GenConfig& config, std::ostream& out);

}  // namespace dd
