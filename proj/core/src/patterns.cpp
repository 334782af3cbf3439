#include "qpsim/patterns.hpp"

#include <stdexcept>

#include "qpsim/fsm.hpp"
#include "qpsim/rng.hpp"

namespace qpsim {

namespace {

void check_spec(const PatternNetworkSpec& spec) {
  if (spec.n_inputs < 1 || spec.n_patterns < 1 || spec.pattern_depth < 1) {
    throw std::invalid_argument("bad pattern network dimensions");
  }
  if (spec.weights.size() != static_cast<std::size_t>(spec.n_patterns) ||
      spec.input_state.size() != static_cast<std::size_t>(spec.n_inputs)) {
    throw std::invalid_argument("pattern network dimensions inconsistent");
  }
  for (const auto& row : spec.weights) {
    if (row.size() != static_cast<std::size_t>(spec.n_inputs)) {
      throw std::invalid_argument("weight vector has wrong length");
    }
    for (auto w : row) {
      if (w > 1) throw std::invalid_argument("pattern weights must be binary");
    }
  }
}

}  // namespace

std::vector<double> match_scores(const PatternNetworkSpec& spec) {
  check_spec(spec);
  std::vector<double> m(spec.n_patterns);
  for (int i = 0; i < spec.n_patterns; ++i) {
    int matches = 0;
    for (int k = 0; k < spec.n_inputs; ++k) {
      if (spec.weights[i][k] == spec.input_state[k]) ++matches;
    }
    m[i] = static_cast<double>(matches) / spec.n_inputs;
  }
  return m;
}

std::vector<double> predict_win_probabilities(const std::vector<double>& m) {
  double sum = 0.0;
  for (double v : m) sum += v;
  if (!(sum > 0.0)) {
    throw std::invalid_argument("all match scores are zero");
  }
  std::vector<double> p(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) p[i] = m[i] / sum;
  return p;
}

PatternNetwork build_pattern_network(const PatternNetworkSpec& spec) {
  check_spec(spec);
  PatternNetwork pn;
  Network& net = pn.network;
  net.fsms.push_back(constant_fsm(0));                 // 0: input units at z=0
  net.fsms.push_back(constant_fsm(1));                 // 1: input units at z=1, clk
  net.fsms.push_back(counter_fsm(spec.pattern_depth)); // 2: pattern units

  const std::vector<OscillatorSpec> one_osc(1);
  for (int k = 0; k < spec.n_inputs; ++k) {
    pn.input_ids.push_back(net.add_neuron(spec.input_state[k] ? 1 : 0, one_osc));
  }
  for (int i = 0; i < spec.n_patterns; ++i) {
    pn.pattern_ids.push_back(net.add_neuron(2, one_osc));
  }
  pn.clk_id = net.add_neuron(1, one_osc);

  for (int i = 0; i < spec.n_patterns; ++i) {
    for (int k = 0; k < spec.n_inputs; ++k) {
      const std::uint32_t src = pn.input_ids[k];
      // A weight-1 edge treats 1 events as matches; a weight-0 edge treats
      // 0 events as matches. Matches arrive on the up port.
      if (spec.weights[i][k]) {
        net.wire(src, 0, 0, pn.pattern_ids[i], 0);
        net.wire(src, 0, 1, pn.pattern_ids[i], 1);
      } else {
        net.wire(src, 0, 0, pn.pattern_ids[i], 1);
        net.wire(src, 0, 1, pn.pattern_ids[i], 0);
      }
    }
  }
  for (int i = 0; i < spec.n_patterns; ++i) {
    net.control_rules.push_back(
        {pn.pattern_ids[i], 1, ControlAction::deactivate, pn.pattern_ids});
  }
  net.control_rules.push_back(
      {pn.clk_id, 1, ControlAction::activate_reset, pn.pattern_ids});
  return pn;
}

double& PatternExperimentResult::obs(int pattern, int unit) {
  return observed[static_cast<std::size_t>(pattern) * n_patterns + unit];
}
double& PatternExperimentResult::pred(int pattern, int unit) {
  return predicted[static_cast<std::size_t>(pattern) * n_patterns + unit];
}

PatternExperimentResult run_experiment(const PatternExperimentConfig& config,
                                       std::uint64_t seed) {
  if (config.n_input_patterns < 1 || config.clk_cycles < 1) {
    throw std::invalid_argument("bad pattern experiment counts");
  }
  if (!(config.clk_frequency > 0.0)) {
    throw std::invalid_argument("clk frequency must be positive");
  }

  PatternNetworkSpec spec;
  spec.n_inputs = config.n_inputs;
  spec.n_patterns = config.n_patterns;
  spec.pattern_depth = config.pattern_depth;
  spec.weights.assign(config.n_patterns,
                      std::vector<std::uint8_t>(config.n_inputs));
  spec.input_state.resize(config.n_inputs);

  RngStream weight_rng(mix_seed(seed, 0x77ULL));
  for (auto& row : spec.weights) {
    for (auto& w : row) w = weight_rng.bernoulli(0.5) ? 1 : 0;
  }

  PatternExperimentResult result;
  result.n_input_patterns = config.n_input_patterns;
  result.n_patterns = config.n_patterns;
  const std::size_t rows =
      static_cast<std::size_t>(config.n_input_patterns) * config.n_patterns;
  result.observed.assign(rows, 0.0);
  result.predicted.assign(rows, 0.0);
  result.unit_frequency.assign(rows, 0.0);

  for (int trial = 0; trial < config.n_input_patterns; ++trial) {
    RngStream trial_rng(mix_seed(seed, 0x2AULL, static_cast<std::uint64_t>(trial)));
    for (auto& z : spec.input_state) z = trial_rng.bernoulli(0.5) ? 1 : 0;

    auto pn = build_pattern_network(spec);
    Network& net = pn.network;
    for (auto id : pn.input_ids) {
      auto& osc = net.neurons[id].oscillators[0];
      osc.frequency = trial_rng.uniform(config.input_freq_lo, config.input_freq_hi);
      osc.initial_phase = trial_rng.uniform_closed();
    }
    for (int i = 0; i < config.n_patterns; ++i) {
      auto& osc = net.neurons[pn.pattern_ids[i]].oscillators[0];
      osc.frequency = config.pattern_freq_lo == config.pattern_freq_hi
                          ? config.pattern_freq_lo
                          : trial_rng.uniform(config.pattern_freq_lo,
                                              config.pattern_freq_hi);
      osc.initial_phase = trial_rng.uniform_closed();
      result.unit_frequency[static_cast<std::size_t>(trial) * config.n_patterns + i] =
          osc.frequency;
    }
    {
      auto& osc = net.neurons[pn.clk_id].oscillators[0];
      osc.frequency = config.clk_frequency;
      osc.initial_phase = trial_rng.uniform_closed();
    }

    auto errors = net.validate();
    if (!errors.empty()) {
      throw std::invalid_argument("invalid pattern network: " + errors.front());
    }

    const double stop_time =
        static_cast<double>(config.clk_cycles) / config.clk_frequency;
    Engine engine(net, mix_seed(seed, 0xE7ULL, static_cast<std::uint64_t>(trial)));
    std::vector<std::uint64_t> wins(config.n_patterns, 0);
    std::vector<int> unit_of(net.neurons.size(), -1);
    for (int i = 0; i < config.n_patterns; ++i) unit_of[pn.pattern_ids[i]] = i;
    while (engine.next_time() <= stop_time) {
      auto ev = engine.step();
      if (ev && ev->bit == 1 && unit_of[ev->source] >= 0) {
        ++wins[unit_of[ev->source]];
      }
    }

    std::uint64_t total = 0;
    for (auto w : wins) total += w;
    const auto m = match_scores(spec);
    const auto pred = predict_win_probabilities(m);
    for (int i = 0; i < config.n_patterns; ++i) {
      result.obs(trial, i) =
          total ? static_cast<double>(wins[i]) / static_cast<double>(total) : 0.0;
      result.pred(trial, i) = pred[i];
    }
  }
  return result;
}

}  // namespace qpsim
