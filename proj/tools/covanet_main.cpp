// Command-line front end: train, eval, and plot subcommands over scenario
// files. Exit codes: 0 success, 2 configuration, 3 contract violation,
// 4 file IO, 1 anything else.
#include <cstdint>
#include <iostream>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "covanet/experiment.hpp"
#include "covanet/plots.hpp"
#include "covanet/scenario.hpp"

namespace {

std::vector<std::uint64_t> sequentialSeeds(int n) {
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(n));
  std::iota(seeds.begin(), seeds.end(), 1);
  return seeds;
}

int defaultJobs() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cooperative driving RL sandbox: VANET-coupled DDPG agents on "
               "a 2D track simulator"};
  app.require_subcommand(1);

  bool deterministic = false;
  app.add_flag("--deterministic", deterministic,
               "pin all RNG streams and run seeds sequentially");

  std::string scenarioPath, outDir, inDir;
  std::string actorCkpt, criticCkpt;
  int seedCount = 0;
  int episodes = -1;
  int jobs = defaultJobs();

  CLI::App* train = app.add_subcommand("train", "train agents on a scenario");
  train->add_option("--scenario", scenarioPath, "scenario file (key=value)")
      ->required();
  train->add_option("--seeds", seedCount,
                    "override the scenario seed list with seeds 1..N");
  train->add_option("--out", outDir, "output directory for metrics")
      ->required();
  train->add_option("--jobs", jobs, "parallel seed workers");

  CLI::App* eval = app.add_subcommand("eval", "run a trained policy");
  eval->add_option("--checkpoint", actorCkpt, "actor checkpoint file")
      ->required();
  eval->add_option("--critic", criticCkpt, "critic checkpoint file");
  eval->add_option("--scenario", scenarioPath, "scenario file (key=value)")
      ->required();
  eval->add_option("--episodes", episodes, "override scenario episode count");
  eval->add_option("--seeds", seedCount,
                   "override the scenario seed list with seeds 1..N");
  eval->add_option("--out", outDir, "output directory for metrics");
  eval->add_option("--jobs", jobs, "parallel seed workers");

  CLI::App* plot = app.add_subcommand("plot", "render charts from a run");
  plot->add_option("--in", inDir, "directory holding per_window.csv")
      ->required();
  plot->add_option("--out", outDir, "chart output directory (default: --in)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train || *eval) {
      covanet::ScenarioConfig cfg = covanet::loadScenarioFile(scenarioPath);
      if (seedCount > 0) cfg.seeds = sequentialSeeds(seedCount);
      if (episodes >= 0 && *eval) cfg.episodes = episodes;

      covanet::RunOptions opts;
      opts.mode = *train ? covanet::RunMode::Train : covanet::RunMode::Eval;
      opts.outDir = outDir;
      opts.jobs = deterministic ? 1 : jobs;
      opts.actorCheckpoint = actorCkpt;
      opts.criticCheckpoint = criticCkpt;

      const covanet::ExperimentResult result = covanet::runExperiment(cfg, opts);

      for (const auto& sr : result.perSeed) {
        long collisions = 0;
        double reward = 0.0;
        for (const auto& ep : sr.episodes) {
          collisions += ep.collisionsTotal;
          for (const auto& [id, r] : ep.reward) reward += r;
        }
        std::cout << "seed " << sr.seed << ": episodes " << sr.episodes.size()
                  << ", collisions " << collisions << ", total reward "
                  << reward << "\n";
      }
      if (!outDir.empty()) std::cout << "metrics written to " << outDir << "\n";
      return 0;
    }

    const covanet::PlotOutputs outputs =
        covanet::exportPlots(inDir, outDir.empty() ? inDir : outDir);
    std::cout << "wrote " << outputs.collisionsSvg << ", " << outputs.rewardSvg
              << ", " << outputs.latencySvg << "\n";
    return 0;
  } catch (const covanet::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const covanet::ContractViolation& e) {
    std::cerr << "contract violation: " << e.what() << "\n";
    return 3;
  } catch (const covanet::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
