#include "harness/heatmap.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace agac::harness {

std::uint64_t HeatmapGrid::total() const {
  std::uint64_t t = 0;
  for (std::uint32_t v : counts) t += v;
  return t;
}

std::vector<HeatmapGrid> build_heatmaps(const std::vector<rollout::EpisodeRecord>& episodes,
                                        const std::string& scenario, std::uint64_t seed) {
  if (episodes.empty()) throw std::invalid_argument("build_heatmaps: no episodes");
  int h = 0, w = 0;
  for (const auto& ep : episodes) {
    if (ep.visits.empty()) throw std::invalid_argument("build_heatmaps: episode lacks detail");
    h = std::max(h, ep.height);
    w = std::max(w, ep.width);
  }

  std::vector<HeatmapGrid> grids;
  HeatmapGrid agg;
  agg.height = h;
  agg.width = w;
  agg.counts.assign(static_cast<std::size_t>(h) * w, 0);
  agg.scenario = scenario;
  agg.seed = seed;
  agg.window = "aggregate of " + std::to_string(episodes.size());

  const int n = static_cast<int>(episodes.size());
  for (int i = 0; i < n; ++i) {
    const auto& ep = episodes[i];
    HeatmapGrid g;
    g.height = h;
    g.width = w;
    g.counts.assign(static_cast<std::size_t>(h) * w, 0);
    g.scenario = scenario;
    g.seed = seed;
    g.window = "episode " + std::to_string(i + 1) + " of last " + std::to_string(n);
    for (int r = 0; r < ep.height; ++r)
      for (int c = 0; c < ep.width; ++c) {
        const std::uint32_t v = ep.visits[static_cast<std::size_t>(r) * ep.width + c];
        g.at(r, c) += v;
        agg.at(r, c) += v;
      }
    grids.push_back(std::move(g));
  }
  grids.push_back(std::move(agg));
  return grids;
}

void write_heatmap_text(std::ostream& out, const HeatmapGrid& g) {
  out << "# scenario=" << g.scenario << " seed=" << g.seed << " window=\"" << g.window
      << "\" rows=" << g.height << " cols=" << g.width << " total=" << g.total() << "\n";
  for (int r = 0; r < g.height; ++r) {
    for (int c = 0; c < g.width; ++c)
      out << (c ? " " : "") << g.counts[static_cast<std::size_t>(r) * g.width + c];
    out << "\n";
  }
}

void write_heatmap_pgm(std::ostream& out, const HeatmapGrid& g) {
  std::uint32_t mx = 0;
  for (std::uint32_t v : g.counts) mx = std::max(mx, v);
  out << "P2\n# " << g.scenario << " seed=" << g.seed << " " << g.window << "\n";
  out << g.width << " " << g.height << "\n255\n";
  for (int r = 0; r < g.height; ++r) {
    for (int c = 0; c < g.width; ++c) {
      const std::uint32_t v = g.counts[static_cast<std::size_t>(r) * g.width + c];
      const int shade = mx == 0 ? 255 : 255 - static_cast<int>((255ull * v) / mx);
      out << (c ? " " : "") << shade;
    }
    out << "\n";
  }
}

void save_heatmaps(const std::string& dir, const std::vector<HeatmapGrid>& grids) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const int n = static_cast<int>(grids.size());
  for (int i = 0; i < n; ++i) {
    const bool is_agg = i == n - 1;
    const std::string stem =
        is_agg ? dir + "/heatmap_all" : dir + "/heatmap_ep" + std::to_string(i + 1);
    std::ofstream txt(stem + ".txt");
    write_heatmap_text(txt, grids[i]);
    std::ofstream pgm(stem + ".pgm");
    write_heatmap_pgm(pgm, grids[i]);
    if (!txt || !pgm) throw std::runtime_error("heatmap write failed under " + dir);
  }
}

}  // namespace agac::harness
