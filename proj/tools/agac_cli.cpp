// Command-line front end: training, reward-free evaluation, heatmap
// emission, the tabular policy-iteration sandbox, and the sensitivity sweep.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "harness/run_spec.hpp"
#include "harness/train.hpp"
#include "tabular/pi.hpp"

namespace {

using agac::harness::Mode;
using agac::harness::RunSpec;

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::string scenario;
  int seeds = 0;
  std::int64_t base_seed = -1;
  std::int64_t frames = 0;
  int threads = 0;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("-c,--config", o.config_path, "config file (key = value lines)");
  cmd->add_option("-o,--out", o.out_dir, "output directory");
  cmd->add_option("--scenario", o.scenario, "e.g. MultiRoom-N2-S4, KeyCorridor-S3-R3");
  cmd->add_option("-s,--seeds", o.seeds, "number of seeds");
  cmd->add_option("--base-seed", o.base_seed, "first seed value");
  cmd->add_option("-f,--frames", o.frames, "total frame budget override");
  cmd->add_option("-t,--threads", o.threads, "worker threads (0 = library default)");
}

RunSpec build_spec(const CommonOpts& o, Mode mode) {
  RunSpec spec;
  if (!o.config_path.empty()) spec = agac::harness::parse_config_file(o.config_path);
  spec.mode = mode;
  if (!o.out_dir.empty()) spec.output_dir = o.out_dir;
  if (!o.scenario.empty()) spec.scenario = agac::env::Scenario::parse(o.scenario);
  if (o.seeds > 0) spec.n_seeds = o.seeds;
  if (o.base_seed >= 0) spec.base_seed = static_cast<std::uint64_t>(o.base_seed);
  if (o.frames > 0) spec.config.total_frames = o.frames;
#ifdef _OPENMP
  if (o.threads > 0) omp_set_num_threads(o.threads);
#endif
  spec.validate();
  return spec;
}

void report(const agac::harness::RunResult& res) {
  for (const auto& s : res.seeds) {
    if (s.ok)
      std::printf("seed %llu: ok, %lld frames, final return %.4f\n",
                  static_cast<unsigned long long>(s.seed), static_cast<long long>(s.frames),
                  s.final_return);
    else
      std::printf("seed %llu: FAILED (%s)\n", static_cast<unsigned long long>(s.seed),
                  s.error.c_str());
  }
}

int run_tabular(const std::string& out_dir, int states, int actions, double gamma, double c,
                double alpha, int iters, const std::string& rule_name, double tau,
                std::uint64_t seed, bool corridor) {
  using namespace agac::tabular;
  AdversaryRule rule;
  if (rule_name == "ema")
    rule = AdversaryRule::kEma;
  else if (rule_name == "previous")
    rule = AdversaryRule::kPrevious;
  else if (rule_name == "fixed")
    rule = AdversaryRule::kFixed;
  else
    throw std::invalid_argument("rule must be ema, previous, or fixed");

  const auto mdp =
      corridor ? TabularMdp::corridor(states, gamma) : TabularMdp::random(states, actions, gamma, seed);
  RunPiOptions opt;
  opt.tau = tau;
  TabularPolicy start;
  if (corridor) {
    // a symmetric start is a fixed point of the zero-reward corridor, so
    // begin from a random policy to make the repulsion visible
    start = TabularPolicy::random(mdp.n_states, mdp.n_actions, seed + 1);
    opt.init_pi = &start;
  }
  const auto trace = run_pi(mdp, c, alpha, rule, iters, opt);

  std::filesystem::create_directories(out_dir);
  std::ofstream csv(out_dir + "/pi_trace.csv");
  csv << "k,j,kl_step,kl_adv,greedy_return\n";
  for (const auto& it : trace) {
    char line[160];
    std::snprintf(line, sizeof line, "%d,%.17g,%.17g,%.17g,%.17g\n", it.k, it.j, it.kl_step,
                  it.kl_adv, it.greedy_return);
    csv << line;
  }
  std::ofstream mdp_out(out_dir + "/mdp.txt");
  mdp.save_text(mdp_out);
  if (!csv || !mdp_out) {
    std::fprintf(stderr, "tabular-pi: write failed under %s\n", out_dir.c_str());
    return 1;
  }
  std::printf("wrote %zu iterations to %s/pi_trace.csv\n", trace.size(), out_dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"AGAC gridworld trainer"};
  app.require_subcommand(1);

  CommonOpts train_o, rf_o, heat_o, sweep_o;
  std::string ckpt_path;
  int heat_episodes = 0;

  auto* train_cmd = app.add_subcommand("train", "train on a scenario across seeds");
  add_common(train_cmd, train_o);

  auto* rf_cmd = app.add_subcommand("reward-free", "train with extrinsic reward forced to zero");
  add_common(rf_cmd, rf_o);

  auto* heat_cmd = app.add_subcommand("heatmap", "roll out a policy and dump visit grids");
  add_common(heat_cmd, heat_o);
  heat_cmd->add_option("--checkpoint", ckpt_path, "agent checkpoint (fresh agent if omitted)");
  heat_cmd->add_option("-k,--episodes", heat_episodes, "episode window size");

  auto* sweep_cmd = app.add_subcommand("sweep", "c0 x lr_ratio sensitivity grid");
  add_common(sweep_cmd, sweep_o);

  std::string tab_out = "runs/tabular";
  std::string rule = "ema";
  int states = 6, actions = 3, iters = 50;
  double gamma = 0.9, c = 0.2, alpha = 0.2, tau = 0.3;
  std::int64_t tab_seed = 0;
  bool corridor = false;
  auto* tab_cmd = app.add_subcommand("tabular-pi", "exact policy-iteration sandbox");
  tab_cmd->add_option("-o,--out", tab_out, "output directory");
  tab_cmd->add_option("--states", states, "state count");
  tab_cmd->add_option("--actions", actions, "action count (random MDP only)");
  tab_cmd->add_option("--gamma", gamma, "discount factor");
  tab_cmd->add_option("--c", c, "adversarial bonus coefficient");
  tab_cmd->add_option("--alpha", alpha, "entropy temperature");
  tab_cmd->add_option("--iters", iters, "iteration count");
  tab_cmd->add_option("--rule", rule, "adversary rule: ema | previous | fixed");
  tab_cmd->add_option("--tau", tau, "EMA mixing weight");
  tab_cmd->add_option("--seed", tab_seed, "MDP seed");
  tab_cmd->add_flag("--corridor", corridor, "use the zero-reward corridor chain");

  auto* print_cmd = app.add_subcommand("print-config", "emit the default config");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train_cmd) {
      const auto res = agac::harness::run_train(build_spec(train_o, Mode::kTrain));
      report(res);
      return res.exit_code();
    }
    if (*rf_cmd) {
      const auto res = agac::harness::run_reward_free(build_spec(rf_o, Mode::kRewardFree));
      report(res);
      return res.exit_code();
    }
    if (*heat_cmd) {
      auto spec = build_spec(heat_o, Mode::kHeatmap);
      if (heat_episodes > 0) spec.heatmap_episodes = heat_episodes;
      const auto res = agac::harness::run_heatmap(spec, ckpt_path);
      return res.exit_code();
    }
    if (*sweep_cmd) {
      const auto res = agac::harness::run_sweep(build_spec(sweep_o, Mode::kTrain));
      report(res);
      return res.exit_code();
    }
    if (*tab_cmd)
      return run_tabular(tab_out, states, actions, gamma, c, alpha, iters, rule, tau,
                         static_cast<std::uint64_t>(tab_seed), corridor);
    if (*print_cmd) {
      agac::harness::emit_config(std::cout, RunSpec{});
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
