#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rollout/collector.hpp"

namespace agac::harness {

// Visit counts over world coordinates for one episode window.
struct HeatmapGrid {
  int height = 0;
  int width = 0;
  std::vector<std::uint32_t> counts;  // row-major
  std::string scenario;
  std::uint64_t seed = 0;   // run seed
  std::string window;       // e.g. "episode 3 of last 10" or "aggregate of 10"

  std::uint64_t total() const;
  std::uint32_t& at(int r, int c) { return counts[static_cast<std::size_t>(r) * width + c]; }
};

// One grid per episode plus the aggregate last. Episodes may come from
// differently sized mazes; every grid is padded to the common bounding box.
// Episodes must carry detail (visits and dimensions).
std::vector<HeatmapGrid> build_heatmaps(const std::vector<rollout::EpisodeRecord>& episodes,
                                        const std::string& scenario, std::uint64_t seed);

// Space-separated integers, one row per line, after a "# <metadata>" header.
void write_heatmap_text(std::ostream& out, const HeatmapGrid& g);
// ASCII portable graymap; darker pixels mean more visits.
void write_heatmap_pgm(std::ostream& out, const HeatmapGrid& g);

// Writes heatmap_ep<k>.txt/.pgm per episode and heatmap_all.txt/.pgm into
// dir (created if missing).
void save_heatmaps(const std::string& dir, const std::vector<HeatmapGrid>& grids);

}  // namespace agac::harness
