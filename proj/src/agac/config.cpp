#include "agac/config.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "rollout/frame_stack.hpp"

namespace agac::train {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("config: " + what);
}

}  // namespace

void AgacConfig::validate() const {
  require(gamma > 0.0 && gamma < 1.0, "gamma must be in (0, 1)");
  require(lambda >= 0.0 && lambda <= 1.0, "lambda must be in [0, 1]");
  require(clip_eps > 0.0 && clip_eps < 1.0, "clip_eps must be in (0, 1)");
  require(entropy_coef >= 0.0, "entropy_coef must be >= 0");
  require(value_coef >= 0.0, "value_coef must be >= 0");
  require(adv_coef >= 0.0, "adv_coef must be >= 0");
  require(c0 >= 0.0, "c0 must be >= 0");
  require(lr > 0.0, "lr must be > 0");
  require(lr_ratio >= 0.0, "lr_ratio must be >= 0");
  require(grad_clip > 0.0, "grad_clip must be > 0");
  require(epochs >= 1, "epochs must be >= 1");
  require(minibatches >= 1, "minibatches must be >= 1");
  require(n_envs >= 1, "n_envs must be >= 1");
  require(horizon >= 1, "horizon must be >= 1");
  require(minibatches <= n_envs * horizon, "more minibatches than samples");
  require(frame_stack == rollout::FrameStack::kFrames,
          "frame_stack must be " + std::to_string(rollout::FrameStack::kFrames) +
              " (stack depth is fixed at compile time)");
  require(!hidden.empty(), "hidden layer list must not be empty");
  require(std::all_of(hidden.begin(), hidden.end(), [](int h) { return h >= 1; }),
          "hidden widths must be >= 1");
  require(total_frames >= batch_frames(), "total_frames must cover at least one batch");
  require(anneal_frames >= 0, "anneal_frames must be >= 0 (0 = total_frames)");
}

double anneal_c(const AgacConfig& cfg, std::int64_t frames_done) {
  const auto horizon = cfg.anneal_frames > 0 ? cfg.anneal_frames : cfg.total_frames;
  const double frac = static_cast<double>(frames_done) / static_cast<double>(horizon);
  return cfg.c0 * std::max(0.0, 1.0 - frac);
}

}  // namespace agac::train
