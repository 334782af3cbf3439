#include "qpsim/fsm.hpp"

#include <algorithm>
#include <stdexcept>

namespace qpsim {

FsmSpec counter_fsm(int depth) {
  if (depth < 1) {
    throw std::invalid_argument("counter_fsm: depth must be >= 1");
  }
  FsmSpec fsm;
  fsm.state_count = 2 * depth;
  fsm.alphabet_size = 2;
  fsm.transitions.resize(static_cast<std::size_t>(fsm.state_count) * 2);
  fsm.output.resize(fsm.state_count);
  for (int s = 0; s < fsm.state_count; ++s) {
    fsm.transitions[s * 2 + 0] = std::max(s - 1, 0);
    fsm.transitions[s * 2 + 1] = std::min(s + 1, fsm.state_count - 1);
    fsm.output[s] = s >= depth ? 1 : 0;
  }
  fsm.initial_state = 0;
  return fsm;
}

FsmSpec constant_fsm(std::uint8_t bit) {
  FsmSpec fsm;
  fsm.state_count = 1;
  fsm.alphabet_size = 2;
  fsm.transitions = {0, 0};
  fsm.output = {bit};
  fsm.initial_state = 0;
  return fsm;
}

std::vector<std::string> validate(const FsmSpec& fsm) {
  std::vector<std::string> errors;
  if (fsm.state_count < 1) errors.push_back("state_count must be positive");
  if (fsm.alphabet_size < 1) errors.push_back("alphabet_size must be positive");
  if (!errors.empty()) return errors;

  const auto n = static_cast<std::size_t>(fsm.state_count);
  const auto k = static_cast<std::size_t>(fsm.alphabet_size);
  if (fsm.transitions.size() != n * k) {
    errors.push_back("transition table is not total: expected " +
                     std::to_string(n * k) + " entries, got " +
                     std::to_string(fsm.transitions.size()));
  }
  if (fsm.output.size() != n) {
    errors.push_back("output map is not total: expected " + std::to_string(n) +
                     " entries, got " + std::to_string(fsm.output.size()));
  }
  if (fsm.initial_state < 0 || fsm.initial_state >= fsm.state_count) {
    errors.push_back("initial state " + std::to_string(fsm.initial_state) +
                     " out of range");
  }
  if (!errors.empty()) return errors;

  for (int s = 0; s < fsm.state_count; ++s) {
    for (int a = 0; a < fsm.alphabet_size; ++a) {
      const int t = fsm.next_state(s, a);
      if (t < 0 || t >= fsm.state_count) {
        errors.push_back("transition (" + std::to_string(s) + ", " +
                         std::to_string(a) + ") -> " + std::to_string(t) +
                         " out of range");
      }
    }
    if (fsm.output[s] > 1) {
      errors.push_back("output bit of state " + std::to_string(s) +
                       " is not binary");
    }
  }
  if (!errors.empty()) return errors;

  // reachability from the initial state
  std::vector<char> seen(n, 0);
  std::vector<int> stack{fsm.initial_state};
  seen[fsm.initial_state] = 1;
  while (!stack.empty()) {
    const int s = stack.back();
    stack.pop_back();
    for (int a = 0; a < fsm.alphabet_size; ++a) {
      const int t = fsm.next_state(s, a);
      if (!seen[t]) {
        seen[t] = 1;
        stack.push_back(t);
      }
    }
  }
  for (int s = 0; s < fsm.state_count; ++s) {
    if (!seen[s]) {
      errors.push_back("state " + std::to_string(s) +
                       " unreachable from the initial state");
    }
  }
  return errors;
}

}  // namespace qpsim
