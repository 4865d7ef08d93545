#include "harness/run_spec.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace agac::harness {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& src, int line, const std::string& what) {
  throw std::runtime_error(src + ":" + std::to_string(line) + ": " + what);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string mode_name(Mode m) {
  switch (m) {
    case Mode::kTrain: return "train";
    case Mode::kRewardFree: return "reward-free";
    case Mode::kHeatmap: return "heatmap";
    case Mode::kTabularPi: return "tabular-pi";
  }
  throw std::invalid_argument("mode_name: bad enum value");
}

Mode parse_mode(const std::string& text) {
  if (text == "train") return Mode::kTrain;
  if (text == "reward-free") return Mode::kRewardFree;
  if (text == "heatmap") return Mode::kHeatmap;
  if (text == "tabular-pi") return Mode::kTabularPi;
  throw std::invalid_argument("unknown mode '" + text + "'");
}

void RunSpec::validate() const {
  config.validate();
  scenario.validate();
  if (n_seeds < 1) throw std::invalid_argument("spec: n_seeds must be at least 1");
  if (heatmap_episodes < 1) throw std::invalid_argument("spec: heatmap_episodes must be at least 1");
  if (output_dir.empty()) throw std::invalid_argument("spec: output_dir must not be empty");
}

RunSpec parse_config(std::istream& in, const std::string& source_name) {
  RunSpec spec;
  std::string raw;
  int line = 0;

  const auto as_double = [&](const std::string& v) {
    std::size_t used = 0;
    double out = 0.0;
    try {
      out = std::stod(v, &used);
    } catch (const std::exception&) {
      fail(source_name, line, "expected a number, got '" + v + "'");
    }
    if (used != v.size()) fail(source_name, line, "trailing characters in number '" + v + "'");
    return out;
  };
  const auto as_i64 = [&](const std::string& v) {
    std::size_t used = 0;
    long long out = 0;
    try {
      out = std::stoll(v, &used);
    } catch (const std::exception&) {
      fail(source_name, line, "expected an integer, got '" + v + "'");
    }
    if (used != v.size()) fail(source_name, line, "trailing characters in integer '" + v + "'");
    return static_cast<std::int64_t>(out);
  };
  const auto as_int = [&](const std::string& v) { return static_cast<int>(as_i64(v)); };
  const auto as_bool = [&](const std::string& v) {
    if (v == "true") return true;
    if (v == "false") return false;
    fail(source_name, line, "expected true or false, got '" + v + "'");
  };
  const auto in_unit = [&](double x, const char* key) {
    if (!(x > 0.0 && x < 1.0)) fail(source_name, line, std::string(key) + " out of range (0, 1)");
    return x;
  };
  const auto nonneg = [&](double x, const char* key) {
    if (!(x >= 0.0)) fail(source_name, line, std::string(key) + " must not be negative");
    return x;
  };
  const auto positive = [&](double x, const char* key) {
    if (!(x > 0.0)) fail(source_name, line, std::string(key) + " must be positive");
    return x;
  };
  const auto at_least_1 = [&](int x, const char* key) {
    if (x < 1) fail(source_name, line, std::string(key) + " must be at least 1");
    return x;
  };

  while (std::getline(in, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string text = trim(raw);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) fail(source_name, line, "expected 'key = value'");
    const std::string key = trim(text.substr(0, eq));
    const std::string val = trim(text.substr(eq + 1));
    if (key.empty()) fail(source_name, line, "empty key");
    if (val.empty()) fail(source_name, line, "empty value for '" + key + "'");

    auto& c = spec.config;
    if (key == "scenario") {
      try {
        spec.scenario = env::Scenario::parse(val);
      } catch (const std::exception& e) {
        fail(source_name, line, e.what());
      }
    } else if (key == "mode") {
      try {
        spec.mode = parse_mode(val);
      } catch (const std::exception& e) {
        fail(source_name, line, e.what());
      }
    } else if (key == "n_seeds") {
      spec.n_seeds = at_least_1(as_int(val), "n_seeds");
    } else if (key == "base_seed") {
      spec.base_seed = static_cast<std::uint64_t>(as_i64(val));
    } else if (key == "output_dir") {
      spec.output_dir = val;
    } else if (key == "heatmap_episodes") {
      spec.heatmap_episodes = at_least_1(as_int(val), "heatmap_episodes");
    } else if (key == "gamma") {
      c.gamma = in_unit(as_double(val), "gamma");
    } else if (key == "lambda") {
      c.lambda = as_double(val);
      if (!(c.lambda >= 0.0 && c.lambda <= 1.0)) fail(source_name, line, "lambda out of range [0, 1]");
    } else if (key == "clip_eps") {
      c.clip_eps = in_unit(as_double(val), "clip_eps");
    } else if (key == "entropy_coef") {
      c.entropy_coef = nonneg(as_double(val), "entropy_coef");
    } else if (key == "value_coef") {
      c.value_coef = nonneg(as_double(val), "value_coef");
    } else if (key == "adv_coef") {
      c.adv_coef = nonneg(as_double(val), "adv_coef");
    } else if (key == "c0") {
      c.c0 = nonneg(as_double(val), "c0");
    } else if (key == "lr") {
      c.lr = positive(as_double(val), "lr");
    } else if (key == "lr_ratio") {
      c.lr_ratio = positive(as_double(val), "lr_ratio");
    } else if (key == "grad_clip") {
      c.grad_clip = positive(as_double(val), "grad_clip");
    } else if (key == "epochs") {
      c.epochs = at_least_1(as_int(val), "epochs");
    } else if (key == "minibatches") {
      c.minibatches = at_least_1(as_int(val), "minibatches");
    } else if (key == "n_envs") {
      c.n_envs = at_least_1(as_int(val), "n_envs");
    } else if (key == "horizon") {
      c.horizon = at_least_1(as_int(val), "horizon");
    } else if (key == "frame_stack") {
      c.frame_stack = at_least_1(as_int(val), "frame_stack");
    } else if (key == "hidden") {
      std::vector<int> sizes;
      std::stringstream ss(val);
      std::string piece;
      while (std::getline(ss, piece, ',')) {
        piece = trim(piece);
        if (piece.empty()) fail(source_name, line, "empty entry in hidden list");
        sizes.push_back(at_least_1(as_int(piece), "hidden"));
      }
      if (sizes.empty()) fail(source_name, line, "hidden list must not be empty");
      c.hidden = std::move(sizes);
    } else if (key == "total_frames") {
      c.total_frames = as_i64(val);
      if (c.total_frames < 1) fail(source_name, line, "total_frames must be at least 1");
    } else if (key == "anneal_frames") {
      c.anneal_frames = as_i64(val);
      if (c.anneal_frames < 0) fail(source_name, line, "anneal_frames must be >= 0");
    } else if (key == "count_bonus") {
      c.count_bonus = as_bool(val);
    } else {
      fail(source_name, line, "unknown key '" + key + "'");
    }
  }

  try {
    spec.validate();
  } catch (const std::exception& e) {
    throw std::runtime_error(source_name + ": " + e.what());
  }
  return spec;
}

RunSpec parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  return parse_config(in, path);
}

void emit_config(std::ostream& out, const RunSpec& spec) {
  const auto& c = spec.config;
  out << "scenario = " << spec.scenario.name() << "\n";
  out << "mode = " << mode_name(spec.mode) << "\n";
  out << "n_seeds = " << spec.n_seeds << "\n";
  out << "base_seed = " << spec.base_seed << "\n";
  out << "output_dir = " << spec.output_dir << "\n";
  out << "heatmap_episodes = " << spec.heatmap_episodes << "\n";
  out << "gamma = " << fmt(c.gamma) << "\n";
  out << "lambda = " << fmt(c.lambda) << "\n";
  out << "clip_eps = " << fmt(c.clip_eps) << "\n";
  out << "entropy_coef = " << fmt(c.entropy_coef) << "\n";
  out << "value_coef = " << fmt(c.value_coef) << "\n";
  out << "adv_coef = " << fmt(c.adv_coef) << "\n";
  out << "c0 = " << fmt(c.c0) << "\n";
  out << "lr = " << fmt(c.lr) << "\n";
  out << "lr_ratio = " << fmt(c.lr_ratio) << "\n";
  out << "grad_clip = " << fmt(c.grad_clip) << "\n";
  out << "epochs = " << c.epochs << "\n";
  out << "minibatches = " << c.minibatches << "\n";
  out << "n_envs = " << c.n_envs << "\n";
  out << "horizon = " << c.horizon << "\n";
  out << "frame_stack = " << c.frame_stack << "\n";
  out << "hidden = ";
  for (std::size_t i = 0; i < c.hidden.size(); ++i) out << (i ? "," : "") << c.hidden[i];
  out << "\n";
  out << "total_frames = " << c.total_frames << "\n";
  out << "anneal_frames = " << c.anneal_frames << "\n";
  out << "count_bonus = " << (c.count_bonus ? "true" : "false") << "\n";
}

}  // namespace agac::harness
