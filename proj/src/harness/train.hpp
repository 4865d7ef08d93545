#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "harness/heatmap.hpp"
#include "harness/run_spec.hpp"

namespace agac::harness {

struct SeedOutcome {
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  std::int64_t frames = 0;
  double final_return = 0.0;       // rolling-100 mean at the last update
  double final_distinct_obs = 0.0; // reward-free: last full window's mean
};

struct RunResult {
  std::vector<SeedOutcome> seeds;

  bool all_ok() const;
  int exit_code() const { return all_ok() ? 0 : 1; }
};

// Per seed s in [base_seed, base_seed + n_seeds):
//   seed<s>_metrics.csv   one row per update (header documents columns)
//   seed<s>_metrics.jsonl same rows as JSON objects
//   seed<s>_final.ckpt    agent checkpoint
// then summary.csv with cross-seed mean/std per logging point. A failing
// seed is reported and skipped; the others still run and summarize.
RunResult run_train(const RunSpec& spec);

// Same loop with extrinsic reward forced to zero. Adds per seed:
//   seed<s>_coverage.csv  one row per completed 10-episode window
//   seed<s>_episodes.csv  one row per episode
//   seed<s>_heatmaps/     visit grids of the last heatmap_episodes episodes
RunResult run_reward_free(const RunSpec& spec);

// Rebuilds summary.csv from the per-seed metrics files on disk, so the
// published statistics are recomputable from the published data.
void summarize_runs(const std::string& output_dir, const std::vector<std::uint64_t>& seeds);

// Rolls out the (optionally checkpointed) policy until heatmap_episodes
// episodes finish and writes their visit grids under output_dir.
RunResult run_heatmap(const RunSpec& spec, const std::string& checkpoint_path);

// c0 x lr_ratio sensitivity grid: {c0/4, c0, 4 c0} x {0.1, 0.3, 1.0}, each
// cell a full run_train into its own subdirectory, plus sweep_summary.csv.
RunResult run_sweep(const RunSpec& spec);

}  // namespace agac::harness
