#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qpsim/engine.hpp"
#include "qpsim/patterns.hpp"
#include "qpsim/stats.hpp"

namespace qpsim {

/// Resolved parameters for one experiment command. Defaults mirror the
/// standard setup: 5 trials of 1.5e5 events with frequencies redrawn from
/// [40, 50] Hz per trial.
struct ExperimentConfig {
  std::uint64_t seed = 1;
  std::string out_dir = "out";

  // activation / correlations
  double freq_lo = 40.0;
  double freq_hi = 50.0;
  std::vector<int> depths;  // defaults to {3}
  int n_sources = 100;
  std::uint64_t events = 150000;  // target-neuron events per trial
  int trials = 5;
  std::vector<std::string> modes = {"periodic", "poisson", "stationary"};
  std::vector<double> grid;  // x/N values; defaults to 0.1 .. 0.9
  int max_lag = 100;

  // rbm
  int nv = 10;
  int nh = 10;
  int wmax = 3;
  int streams = 6;
  double temperature = 0.0;  // 0 = derive N / (4 d) from the compiled geometry
  std::uint64_t samples = 100000;
  std::uint64_t burn_in = 0;
  int repeats = 4;
  std::string rbm_file;

  // patterns
  PatternExperimentConfig patterns;
};

ExperimentConfig config_from_json(const std::string& text);
std::string config_to_json(const ExperimentConfig& config);

// Each command writes plot-ready CSV files plus manifest.json (the resolved
// config, including every drawn frequency) into config.out_dir, and returns
// the written file names. CSV bodies are a pure function of the resolved
// config and seed.
std::vector<std::string> run_activation(const ExperimentConfig& config);
std::vector<std::string> run_correlations(const ExperimentConfig& config);
std::vector<std::string> run_rbm(const ExperimentConfig& config);
std::vector<std::string> run_patterns(const ExperimentConfig& config);

// Building blocks, shared with the test suites.

/// N constant sources (x_ones emitting 1, the rest 0) all feeding n_targets
/// counter neurons of the given depth. Target ids are n_sources ..
/// n_sources + n_targets - 1. Oscillators are placeholders.
Network star_network(int depth, int n_sources, int x_ones, int n_targets = 1);

/// Runs a star network with frequencies drawn from [freq_lo, freq_hi] until
/// every target has emitted `target_events` events; returns each target's
/// first `target_events` output bits.
std::vector<BitSequence> star_target_sequences(
    int depth, int n_sources, int x_ones, OscMode mode,
    std::uint64_t target_events, int n_targets, double freq_lo, double freq_hi,
    std::uint64_t seed, std::vector<double>* drawn_frequencies = nullptr);

/// Fraction of 1 bits among the single target's first `target_events` events.
double empirical_star_activation(
    int depth, int n_sources, int x_ones, OscMode mode,
    std::uint64_t target_events, double freq_lo, double freq_hi,
    std::uint64_t seed, std::vector<double>* drawn_frequencies = nullptr);

/// Geometric checkpoint grid (8 per decade) from 100 up to and including n.
std::vector<std::uint64_t> kl_checkpoints(std::uint64_t n);

}  // namespace qpsim
