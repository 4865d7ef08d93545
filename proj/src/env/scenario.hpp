#pragma once

#include <string>

namespace agac::env {

struct Scenario {
  enum class Family { MultiRoom, KeyCorridor };

  Family family = Family::MultiRoom;
  int n = 2;               // MultiRoom room count
  int s = 4;               // room side (MultiRoom: max side; KeyCorridor: side)
  int r = 1;               // KeyCorridor room rows
  bool reward_free = false;

  int max_steps() const {
    return family == Family::MultiRoom ? 20 * n : 30 * s * s;
  }
  std::string name() const;
  void validate() const;  // throws std::invalid_argument

  // "MultiRoom-N4-S5", "KeyCorridor-S3-R3", optional suffix "-rf".
  static Scenario parse(const std::string& text);

  bool operator==(const Scenario&) const = default;
};

inline Scenario set_reward_free(Scenario sc, bool flag) {
  sc.reward_free = flag;
  return sc;
}

}  // namespace agac::env
