#include "harness/train.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

#include "agac/updater.hpp"
#include "rollout/collector.hpp"
#include "rollout/frame_stack.hpp"

namespace agac::harness {

namespace fs = std::filesystem;

namespace {

constexpr int kCoverageWindow = 10;  // episodes per coverage row
constexpr int kRollingWindow = 100;  // episodes in the return average

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string seed_stem(const RunSpec& spec, std::uint64_t seed) {
  return spec.output_dir + "/seed" + std::to_string(seed);
}

struct RollingReturn {
  std::deque<double> window;
  std::int64_t episodes_done = 0;

  void add(double ret) {
    window.push_back(ret);
    if (window.size() > kRollingWindow) window.pop_front();
    ++episodes_done;
  }
  // 0 until the first episode completes (documented in the CSV header).
  double mean() const {
    if (window.empty()) return 0.0;
    double s = 0.0;
    for (double r : window) s += r;
    return s / static_cast<double>(window.size());
  }
};

const char* kMetricsColumns =
    "update,frames,c,policy_loss,value_loss,adversary_loss,entropy,clip_frac,"
    "mean_kl,mean_bonus,skipped,episodes_done,rolling_return";

void write_metrics_header(std::ostream& csv) {
  csv << "# one row per update; rolling_return averages the last " << kRollingWindow
      << " completed episodes (0 until the first completes);\n"
      << "# value_loss and adversary_loss are unweighted batch means\n"
      << kMetricsColumns << "\n";
}

void write_metrics_row(std::ostream& csv, std::ostream& jsonl, int update,
                       const train::UpdateMetrics& m, const RollingReturn& roll) {
  csv << update << "," << m.frames << "," << fmt(m.c) << "," << fmt(m.policy_loss) << ","
      << fmt(m.value_loss) << "," << fmt(m.adversary_loss) << "," << fmt(m.entropy) << ","
      << fmt(m.clip_frac) << "," << fmt(m.mean_kl) << "," << fmt(m.mean_bonus) << "," << m.skipped
      << "," << roll.episodes_done << "," << fmt(roll.mean()) << "\n";
  nlohmann::json j{{"update", update},
                   {"frames", m.frames},
                   {"c", m.c},
                   {"policy_loss", m.policy_loss},
                   {"value_loss", m.value_loss},
                   {"adversary_loss", m.adversary_loss},
                   {"entropy", m.entropy},
                   {"clip_frac", m.clip_frac},
                   {"mean_kl", m.mean_kl},
                   {"mean_bonus", m.mean_bonus},
                   {"skipped", m.skipped},
                   {"episodes_done", roll.episodes_done},
                   {"rolling_return", roll.mean()}};
  jsonl << j.dump() << "\n";
}

struct CoverageWindowAcc {
  int episodes = 0;
  double ret = 0.0;
  int goals = 0;
  double distinct = 0.0;
  double rooms = 0.0;
  int index = 0;
  double last_full_distinct = 0.0;

  void add(const rollout::EpisodeRecord& rec, std::ostream& csv, std::int64_t frames) {
    ret += rec.ret;
    distinct += rec.distinct_obs;
    rooms += rec.rooms_visited;
    goals += rec.reached_goal ? 1 : 0;
    if (++episodes == kCoverageWindow) {
      ++index;
      const double n = kCoverageWindow;
      csv << index << "," << kCoverageWindow << "," << frames << "," << fmt(ret / n) << ","
          << fmt(goals / n) << "," << fmt(distinct / n) << "," << fmt(rooms / n) << "\n";
      last_full_distinct = distinct / n;
      episodes = 0;
      ret = distinct = rooms = 0.0;
      goals = 0;
    }
  }
};

// The full per-seed loop shared by train and reward-free modes.
SeedOutcome train_one_seed(const RunSpec& spec, std::uint64_t seed, bool reward_free) {
  SeedOutcome out;
  out.seed = seed;

  const auto& cfg = spec.config;
  rollout::CollectorConfig cc;
  cc.scenario = env::set_reward_free(spec.scenario, reward_free);
  cc.n_envs = cfg.n_envs;
  cc.steps = cfg.horizon;
  cc.seed = seed;
  cc.count_bonus = cfg.count_bonus;
  cc.record_detail = reward_free;
  rollout::Collector collector(cc);

  train::Agent agent(cfg, rollout::FrameStack::kDim, env::kNumActions, seed);
  train::Updater updater(cfg, seed);

  const std::string stem = seed_stem(spec, seed);
  std::ofstream csv(stem + "_metrics.csv");
  std::ofstream jsonl(stem + "_metrics.jsonl");
  if (!csv || !jsonl) throw std::runtime_error("cannot open metrics files under " + spec.output_dir);
  write_metrics_header(csv);

  std::ofstream coverage, episodes;
  if (reward_free) {
    coverage.open(stem + "_coverage.csv");
    episodes.open(stem + "_episodes.csv");
    if (!coverage || !episodes)
      throw std::runtime_error("cannot open coverage files under " + spec.output_dir);
    coverage << "# one row per completed " << kCoverageWindow << "-episode window\n"
             << "window,episodes,end_frames,mean_return,goal_frac,mean_distinct_obs,"
                "mean_rooms_visited\n";
    episodes << "episode,env_seed,length,return,reached_goal,distinct_obs,rooms_visited\n";
  }

  RollingReturn roll;
  CoverageWindowAcc cov;
  std::deque<rollout::EpisodeRecord> tail;  // last episodes for heatmaps

  int update = 0;
  while (updater.frames_done() < cfg.total_frames) {
    const auto traj = collector.collect(agent.actor, agent.critic,
                                        cfg.ppo_mode() ? nullptr : &agent.adversary);
    const auto m = updater.update(agent, traj);
    ++update;

    auto& eps = collector.episodes();
    while (!eps.empty()) {
      rollout::EpisodeRecord rec = std::move(eps.front());
      eps.pop_front();
      roll.add(rec.ret);
      if (reward_free) {
        cov.add(rec, coverage, m.frames);
        episodes << roll.episodes_done << "," << rec.env_seed << "," << rec.length << ","
                 << fmt(rec.ret) << "," << (rec.reached_goal ? 1 : 0) << "," << rec.distinct_obs
                 << "," << rec.rooms_visited << "\n";
        tail.push_back(std::move(rec));
        if (static_cast<int>(tail.size()) > spec.heatmap_episodes) tail.pop_front();
      }
    }
    write_metrics_row(csv, jsonl, update, m, roll);
    if (!csv || !jsonl) throw std::runtime_error("metrics write failed under " + spec.output_dir);
  }

  {
    std::ofstream ckpt(stem + "_final.ckpt", std::ios::binary);
    agent.save(ckpt);
    if (!ckpt) throw std::runtime_error("checkpoint write failed: " + stem + "_final.ckpt");
  }
  if (reward_free && !tail.empty()) {
    save_heatmaps(stem + "_heatmaps",
                  build_heatmaps({tail.begin(), tail.end()}, cc.scenario.name(), seed));
  }

  out.ok = true;
  out.frames = updater.frames_done();
  out.final_return = roll.mean();
  out.final_distinct_obs = cov.last_full_distinct;
  return out;
}

RunResult run_mode(const RunSpec& spec, bool reward_free) {
  spec.validate();
  fs::create_directories(spec.output_dir);

  RunResult res;
  std::vector<std::uint64_t> ok_seeds;
  for (int i = 0; i < spec.n_seeds; ++i) {
    const std::uint64_t seed = spec.base_seed + static_cast<std::uint64_t>(i);
    try {
      res.seeds.push_back(train_one_seed(spec, seed, reward_free));
      ok_seeds.push_back(seed);
    } catch (const std::exception& e) {
      std::fprintf(stderr, "seed %llu failed: %s\n", static_cast<unsigned long long>(seed),
                   e.what());
      SeedOutcome bad;
      bad.seed = seed;
      bad.error = e.what();
      res.seeds.push_back(bad);
    }
  }
  if (!ok_seeds.empty()) summarize_runs(spec.output_dir, ok_seeds);
  return res;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string piece;
  while (std::getline(ss, piece, ',')) out.push_back(piece);
  return out;
}

}  // namespace

bool RunResult::all_ok() const {
  if (seeds.empty()) return false;
  for (const auto& s : seeds)
    if (!s.ok) return false;
  return true;
}

RunResult run_train(const RunSpec& spec) { return run_mode(spec, false); }

RunResult run_reward_free(const RunSpec& spec) { return run_mode(spec, true); }

void summarize_runs(const std::string& output_dir, const std::vector<std::uint64_t>& seeds) {
  if (seeds.empty()) throw std::invalid_argument("summarize_runs: no seeds");

  // Re-parse the published per-seed files so the summary is exactly
  // recomputable from them.
  std::vector<std::vector<std::vector<double>>> rows_per_seed;
  for (const std::uint64_t seed : seeds) {
    const std::string path = output_dir + "/seed" + std::to_string(seed) + "_metrics.csv";
    std::ifstream in(path);
    if (!in) throw std::runtime_error("summarize_runs: cannot open " + path);
    std::string line;
    bool saw_header = false;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      if (!saw_header) {
        if (line != kMetricsColumns)
          throw std::runtime_error("summarize_runs: unexpected header in " + path);
        saw_header = true;
        continue;
      }
      const auto cells = split_csv_line(line);
      if (cells.size() != 13)
        throw std::runtime_error("summarize_runs: malformed row in " + path);
      std::vector<double> vals;
      vals.reserve(cells.size());
      for (const auto& c : cells) vals.push_back(std::stod(c));
      rows.push_back(std::move(vals));
    }
    rows_per_seed.push_back(std::move(rows));
  }

  const std::size_t n_rows = rows_per_seed.front().size();
  for (const auto& rows : rows_per_seed)
    if (rows.size() != n_rows)
      throw std::runtime_error("summarize_runs: seeds logged different update counts");

  // update and frames are schedule columns and must agree across seeds;
  // skipped and episodes_done are integer counters and get means only.
  const std::array<int, 10> stat_cols = {2, 3, 4, 5, 6, 7, 8, 9, 11, 12};
  const std::array<const char*, 10> stat_names = {
      "c",       "policy_loss", "value_loss",    "adversary_loss", "entropy",
      "clip_frac", "mean_kl",   "mean_bonus",    "episodes_done",  "rolling_return"};

  std::ofstream out(output_dir + "/summary.csv");
  if (!out) throw std::runtime_error("summarize_runs: cannot open summary.csv");
  out << "# cross-seed summary over seeds";
  for (const auto s : seeds) out << " " << s;
  out << "; std is the population standard deviation\n";
  out << "update,frames";
  for (const char* name : stat_names) out << "," << name << "_mean," << name << "_std";
  out << "\n";

  const double n = static_cast<double>(seeds.size());
  for (std::size_t r = 0; r < n_rows; ++r) {
    const double update = rows_per_seed.front()[r][0];
    const double frames = rows_per_seed.front()[r][1];
    for (const auto& rows : rows_per_seed)
      if (rows[r][0] != update || rows[r][1] != frames)
        throw std::runtime_error("summarize_runs: seeds disagree on the update schedule");
    out << static_cast<std::int64_t>(update) << "," << static_cast<std::int64_t>(frames);
    for (const int col : stat_cols) {
      double mean = 0.0;
      for (const auto& rows : rows_per_seed) mean += rows[r][col];
      mean /= n;
      double var = 0.0;
      for (const auto& rows : rows_per_seed) {
        const double d = rows[r][col] - mean;
        var += d * d;
      }
      out << "," << fmt(mean) << "," << fmt(std::sqrt(var / n));
    }
    out << "\n";
  }
  if (!out) throw std::runtime_error("summarize_runs: summary write failed");
}

RunResult run_heatmap(const RunSpec& spec, const std::string& checkpoint_path) {
  spec.validate();
  fs::create_directories(spec.output_dir);

  RunResult res;
  SeedOutcome out;
  out.seed = spec.base_seed;
  try {
    train::Agent agent(spec.config, rollout::FrameStack::kDim, env::kNumActions, spec.base_seed);
    if (!checkpoint_path.empty()) {
      std::ifstream in(checkpoint_path, std::ios::binary);
      if (!in) throw std::runtime_error("cannot open checkpoint '" + checkpoint_path + "'");
      agent = train::Agent::load(in);
    }

    rollout::CollectorConfig cc;
    cc.scenario = spec.scenario;
    cc.n_envs = spec.config.n_envs;
    cc.steps = spec.config.horizon;
    cc.seed = spec.base_seed;
    cc.count_bonus = spec.config.count_bonus;
    cc.record_detail = true;
    rollout::Collector collector(cc);

    std::deque<rollout::EpisodeRecord> tail;
    while (static_cast<int>(tail.size()) < spec.heatmap_episodes) {
      collector.collect(agent.actor, agent.critic, nullptr);
      auto& eps = collector.episodes();
      while (!eps.empty()) {
        tail.push_back(std::move(eps.front()));
        eps.pop_front();
        if (static_cast<int>(tail.size()) > spec.heatmap_episodes) tail.pop_front();
      }
      out.frames = collector.frames_collected();
    }
    save_heatmaps(spec.output_dir,
                  build_heatmaps({tail.begin(), tail.end()}, cc.scenario.name(), spec.base_seed));
    out.ok = true;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "heatmap run failed: %s\n", e.what());
    out.error = e.what();
  }
  res.seeds.push_back(std::move(out));
  return res;
}

RunResult run_sweep(const RunSpec& spec) {
  spec.validate();
  fs::create_directories(spec.output_dir);
  const std::array<double, 3> c_mults = {0.25, 1.0, 4.0};
  const std::array<double, 3> ratios = {0.1, 0.3, 1.0};

  std::ofstream summary(spec.output_dir + "/sweep_summary.csv");
  if (!summary) throw std::runtime_error("run_sweep: cannot open sweep_summary.csv");
  summary << "c0,lr_ratio,mean_final_return,all_seeds_ok\n";

  RunResult all;
  for (const double cm : c_mults) {
    for (const double nu : ratios) {
      RunSpec sub = spec;
      sub.config.c0 = spec.config.c0 * cm;
      sub.config.lr_ratio = nu;
      char dir[64];
      std::snprintf(dir, sizeof dir, "/c%g_nu%g", cm, nu);
      sub.output_dir = spec.output_dir + dir;
      fs::create_directories(sub.output_dir);
      const auto res = run_train(sub);

      double mean_ret = 0.0;
      int ok = 0;
      for (const auto& s : res.seeds) {
        if (!s.ok) continue;
        mean_ret += s.final_return;
        ++ok;
      }
      if (ok > 0) mean_ret /= ok;
      summary << fmt(sub.config.c0) << "," << fmt(nu) << "," << fmt(mean_ret) << ","
              << (res.all_ok() ? 1 : 0) << "\n";
      for (const auto& s : res.seeds) all.seeds.push_back(s);
    }
  }
  return all;
}

}  // namespace agac::harness
