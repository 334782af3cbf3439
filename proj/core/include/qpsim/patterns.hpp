#pragma once

#include <cstdint>
#include <vector>

#include "qpsim/engine.hpp"

namespace qpsim {

/// Competitive pattern network: n_patterns two-port pattern units, each fed
/// by n_inputs constant-value input units through binary weights, plus a
/// clock unit. A 1 event from any pattern unit shuts all of them down; a clk
/// event reactivates them at state 0.
struct PatternNetworkSpec {
  int n_inputs = 100;
  int n_patterns = 10;
  std::vector<std::vector<std::uint8_t>> weights;  // n_patterns rows of n_inputs
  std::vector<std::uint8_t> input_state;           // z, length n_inputs
  int pattern_depth = 1;
};

/// m_i: matching entries of w_i and z divided by n_inputs.
std::vector<double> match_scores(const PatternNetworkSpec& spec);

/// Renormalized win probabilities m_i / sum_j m_j. Throws when all m are zero.
std::vector<double> predict_win_probabilities(const std::vector<double>& m);

struct PatternNetwork {
  Network network;
  std::vector<std::uint32_t> input_ids;
  std::vector<std::uint32_t> pattern_ids;
  std::uint32_t clk_id = 0;
};

/// Weight-1 connections route the input's 1 events to the up port and 0
/// events to the down port; weight-0 connections route them the other way
/// round. Every pattern unit therefore sees all input events, and the up-port
/// fraction equals the unit's match score. Oscillators are placeholders;
/// assign frequencies before running.
PatternNetwork build_pattern_network(const PatternNetworkSpec& spec);

struct PatternExperimentConfig {
  int n_inputs = 100;
  int n_patterns = 10;
  int n_input_patterns = 100;
  std::uint64_t clk_cycles = 10000;
  double input_freq_lo = 40.0;
  double input_freq_hi = 50.0;
  double pattern_freq_lo = 44.5;
  double pattern_freq_hi = 45.5;
  double clk_frequency = 45.0;
  int pattern_depth = 1;
};

/// One row per (input pattern, pattern unit).
struct PatternExperimentResult {
  int n_input_patterns = 0;
  int n_patterns = 0;
  std::vector<double> observed;      // win frequency, normalized over wins
  std::vector<double> predicted;     // m_i / sum m_j
  std::vector<double> unit_frequency;

  double& obs(int pattern, int unit);
  double& pred(int pattern, int unit);
};

/// Draws weight vectors once and a fresh input pattern, frequencies and
/// phases per trial, runs each trial for clk_cycles clock periods, and counts
/// each pattern unit's 1 events.
PatternExperimentResult run_experiment(const PatternExperimentConfig& config,
                                       std::uint64_t seed);

}  // namespace qpsim
