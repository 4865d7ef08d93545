#include "env/scenario.hpp"

#include <sstream>
#include <stdexcept>
#include <vector>

namespace agac::env {

std::string Scenario::name() const {
  std::ostringstream os;
  if (family == Family::MultiRoom)
    os << "MultiRoom-N" << n << "-S" << s;
  else
    os << "KeyCorridor-S" << s << "-R" << r;
  if (reward_free) os << "-rf";
  return os.str();
}

void Scenario::validate() const {
  if (family == Family::MultiRoom) {
    if (n < 2) throw std::invalid_argument("MultiRoom needs N >= 2");
    if (s < 4) throw std::invalid_argument("MultiRoom needs S >= 4");
    if (n > 8 || s > 10) throw std::invalid_argument("MultiRoom size out of supported range");
  } else {
    if (s < 3) throw std::invalid_argument("KeyCorridor needs S >= 3");
    if (r < 1) throw std::invalid_argument("KeyCorridor needs R >= 1");
    if (s > 8 || r > 6) throw std::invalid_argument("KeyCorridor size out of supported range");
  }
}

Scenario Scenario::parse(const std::string& text) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : text) {
    if (ch == '-') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  parts.push_back(cur);

  Scenario sc;
  std::size_t i = 1;
  if (parts.empty()) throw std::invalid_argument("empty scenario string");
  if (parts[0] == "MultiRoom")
    sc.family = Family::MultiRoom;
  else if (parts[0] == "KeyCorridor")
    sc.family = Family::KeyCorridor;
  else
    throw std::invalid_argument("unknown scenario family: " + parts[0]);

  bool have_n = false, have_s = false, have_r = false;
  for (; i < parts.size(); ++i) {
    const std::string& p = parts[i];
    if (p == "rf") {
      if (i + 1 != parts.size()) throw std::invalid_argument("rf must be the last suffix");
      sc.reward_free = true;
      continue;
    }
    if (p.size() < 2) throw std::invalid_argument("bad scenario token: " + p);
    int value;
    try {
      std::size_t pos = 0;
      value = std::stoi(p.substr(1), &pos);
      if (pos + 1 != p.size()) throw std::invalid_argument("");
    } catch (...) {
      throw std::invalid_argument("bad scenario token: " + p);
    }
    switch (p[0]) {
      case 'N': sc.n = value; have_n = true; break;
      case 'S': sc.s = value; have_s = true; break;
      case 'R': sc.r = value; have_r = true; break;
      default: throw std::invalid_argument("bad scenario token: " + p);
    }
  }
  if (sc.family == Family::MultiRoom && (!have_n || !have_s || have_r))
    throw std::invalid_argument("MultiRoom expects N and S: " + text);
  if (sc.family == Family::KeyCorridor && (!have_s || !have_r || have_n))
    throw std::invalid_argument("KeyCorridor expects S and R: " + text);
  sc.validate();
  return sc;
}

}  // namespace agac::env
