// ddsolve: run Lagrangian-relaxation decoders over the bundled problem
// backends, generate random instances, and verify runs against brute force.

#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "dd/errors.hpp"
#include "dd/harness.hpp"

namespace {

void addScheduleOptions(CLI::App* cmd, std::string& step, double& c, bool& haveC) {
  cmd->add_option("--step", step, "step-size schedule: const|inv-k|inv-sqrt|adaptive")
      ->check(CLI::IsMember({"const", "inv-k", "inv-sqrt", "adaptive"}));
  cmd->add_option("--c", c, "step-size base constant")->each([&haveC](const std::string&) {
    haveC = true;
  });
}

dd::ScheduleKind parseKind(const std::string& step) {
  if (step == "const") return dd::ScheduleKind::Constant;
  if (step == "inv-k") return dd::ScheduleKind::InverseK;
  if (step == "inv-sqrt") return dd::ScheduleKind::InverseSqrtK;
  return dd::ScheduleKind::Adaptive;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dual decomposition / Lagrangian relaxation toolkit"};
  app.require_subcommand(1);

  dd::RunConfig run;
  std::string runProblem = "toy";
  std::string runStep = "adaptive";
  double runC = 1.0;
  bool runHaveC = false;

  auto addRunOptions = [&](CLI::App* cmd) {
    cmd->add_option("--problem", runProblem, "parse-tag|mrf|tsp|phrase|toy")
        ->check(CLI::IsMember({"parse-tag", "mrf", "tsp", "phrase", "toy"}));
    addScheduleOptions(cmd, runStep, runC, runHaveC);
    cmd->add_option("--max-iters", run.maxIters, "iteration budget");
    cmd->add_flag("--tighten", run.tighten, "re-run with selected bigram constraints (parse-tag/toy)");
    cmd->add_option("--stall-window", run.stallWindow, "stall detection window");
    cmd->add_option("--stall-eps", run.stallEps, "minimum best-dual improvement per window");
    cmd->add_option("--seed", run.seed, "seed for --gen instances");
    cmd->add_option("--trace-out", run.traceOut, "write per-iteration CSV here");
    cmd->add_option("--summary-out", run.summaryOut, "write JSON summary here");
    cmd->add_flag("--gen", run.generate, "generate the instance from --seed and size flags");
    cmd->add_option("--n", run.genSize, "generated instance size (sentence/vertices/source length)");
    cmd->add_option("--tags", run.genTags, "generated tag count (parse-tag)");
    cmd->add_option("--rows", run.genRows, "generated grid rows (mrf)");
    cmd->add_option("--cols", run.genCols, "generated grid cols (mrf)");
    cmd->add_option("--grammar", run.grammarPath, "grammar file");
    cmd->add_option("--tag-model", run.tagModelPath, "tag model file");
    cmd->add_option("--sentence", run.sentenceInline, "sentence words, space separated");
    cmd->add_option("--sentence-file", run.sentencePath, "sentence file");
    cmd->add_option("--mrf", run.mrfPath, "MRF file");
    cmd->add_option("--graph", run.graphPath, "graph file");
    cmd->add_option("--phrases", run.phrasesPath, "phrase table file");
    cmd->add_option("--lm", run.lmPath, "language model file");
  };

  CLI::App* runCmd = app.add_subcommand("run", "run a relaxation and emit diagnostics");
  addRunOptions(runCmd);
  runCmd->add_flag("--verify", run.verify, "cross-check against the brute-force oracle");

  CLI::App* verifyCmd = app.add_subcommand("verify", "run with oracle verification forced on");
  addRunOptions(verifyCmd);

  dd::GenConfig gen;
  std::string genProblem = "tsp";
  CLI::App* genCmd = app.add_subcommand("gen", "write a reproducible random instance");
  genCmd->add_option("--problem", genProblem, "parse-tag|mrf|tsp|phrase")
      ->check(CLI::IsMember({"parse-tag", "mrf", "tsp", "phrase"}));
  genCmd->add_option("--seed", gen.seed, "generator seed");
  genCmd->add_option("--n", gen.size, "instance size");
  genCmd->add_option("--tags", gen.tags, "tag count (parse-tag)");
  genCmd->add_option("--rows", gen.rows, "grid rows (mrf)");
  genCmd->add_option("--cols", gen.cols, "grid cols (mrf)");
  genCmd->add_option("--out", gen.outPrefix, "output file prefix");

  CLI11_PARSE(app, argc, argv);

  try {
    if (genCmd->parsed()) {
      gen.problem = *dd::problemFromName(genProblem);
      return dd::generateInstance(gen, std::cout);
    }
    run.problem = *dd::problemFromName(runProblem);
    run.schedule.kind = parseKind(runStep);
    if (runHaveC) run.stepConstant = runC;
    if (verifyCmd->parsed()) run.verify = true;
    return dd::runCommand(run, std::cout);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
}
