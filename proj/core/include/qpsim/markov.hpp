#pragma once

#include <cstdint>
#include <vector>

#include "qpsim/fsm.hpp"

namespace qpsim {

/// Row-stochastic reinterpretation of a binary-input FSM: every 1-edge
/// carries probability p, every 0-edge carries 1-p.
struct MarkovChain {
  int state_count = 0;
  std::vector<double> transition;     // row-major state_count x state_count
  std::vector<std::uint8_t> output;   // inherited from the FSM
  int initial_state = 0;

  double at(int from, int to) const {
    return transition[static_cast<std::size_t>(from) * state_count + to];
  }
};

struct ActivationCurve {
  std::vector<double> p;  // input-1 fraction
  std::vector<double> q;  // predicted probability of emitting a 1 event
};

MarkovChain to_markov_chain(const FsmSpec& fsm, double p);

/// Stationary distribution pi with pi P = pi, sum pi = 1. Chains up to 1000
/// states are solved directly; larger ones by damped power iteration. A
/// deterministic chain (p in {0, 1}) yields the uniform distribution on the
/// cycle absorbed from the initial state. Throws if no valid distribution is
/// found (reducible user FSMs).
std::vector<double> stationary(const MarkovChain& chain);

/// q(p) = sum of stationary mass over states with output bit 1.
ActivationCurve activation_curve(const FsmSpec& fsm, const std::vector<double>& p_grid);

}  // namespace qpsim
