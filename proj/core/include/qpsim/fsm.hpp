#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qpsim {

/// A finite state machine driven by input symbols, with one output bit per
/// state. Transition and output tables are total over the declared states
/// and alphabet; validate() checks totality, ranges and reachability.
struct FsmSpec {
  int state_count = 0;
  int alphabet_size = 0;
  std::vector<int> transitions;       // state * alphabet_size + symbol -> state
  std::vector<std::uint8_t> output;   // state -> emitted bit
  int initial_state = 0;

  int next_state(int state, int symbol) const {
    return transitions[static_cast<std::size_t>(state) * alphabet_size + symbol];
  }
  std::uint8_t output_bit(int state) const {
    return output[static_cast<std::size_t>(state)];
  }
};

/// Saturating up/down counter of the given depth: 2d states, input 1 moves
/// up, input 0 moves down, the top d states emit 1. Depth 1 is the two-state
/// "last input wins" neuron.
FsmSpec counter_fsm(int depth);

/// Single-state machine that always emits the given bit (binary alphabet,
/// self-loops on both symbols).
FsmSpec constant_fsm(std::uint8_t bit);

/// Returns one message per violated invariant; empty means the spec is valid.
std::vector<std::string> validate(const FsmSpec& fsm);

}  // namespace qpsim
