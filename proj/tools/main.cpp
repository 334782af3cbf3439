// qpsim — experiment runner and network simulator CLI.
//
// Subcommands: activation, correlations, rbm, patterns (batch experiments
// writing CSV + manifest.json into --out), and simulate (run a network JSON
// file and dump the event trace as CSV).
//
// Exit codes: 0 success, 1 validation error, 2 runtime failure.

#include <cstdint>
#include <exception>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qpsim/engine.hpp"
#include "qpsim/experiments.hpp"
#include "qpsim/io.hpp"

namespace {

struct CommonFlags {
  std::string config_file;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out_dir;
  std::vector<int> depths;
  int trials = 0;
  std::uint64_t events = 0;
  std::string freq_range;
  std::vector<std::string> modes;
  int streams = 0;
  double temperature = -1.0;
  bool temperature_set = false;
};

void add_common(CLI::App& cmd, CommonFlags& flags) {
  cmd.add_option("--config", flags.config_file, "JSON config file");
  cmd.add_option("--seed", flags.seed, "master RNG seed")
      ->each([&flags](const std::string&) { flags.seed_set = true; });
  cmd.add_option("--out", flags.out_dir, "output directory");
  cmd.add_option("--depth", flags.depths, "counter depth(s)");
  cmd.add_option("--trials", flags.trials, "trials per grid point");
  cmd.add_option("--events", flags.events, "event budget per trial");
  cmd.add_option("--freq-range", flags.freq_range,
                 "oscillator frequency range, lo,hi in Hz");
  cmd.add_option("--mode", flags.modes,
                 "oscillator mode(s): periodic|poisson|stationary");
  cmd.add_option("--streams", flags.streams, "oscillator streams per unit");
  cmd.add_option("--temperature", flags.temperature,
                 "sampling temperature (0 = derive from network size)")
      ->each([&flags](const std::string&) { flags.temperature_set = true; });
}

std::pair<double, double> parse_range(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) {
    throw std::invalid_argument("--freq-range expects lo,hi");
  }
  std::size_t used = 0;
  const double lo = std::stod(text.substr(0, comma), &used);
  const double hi = std::stod(text.substr(comma + 1));
  if (!(lo > 0.0) || !(hi >= lo)) {
    throw std::invalid_argument("--freq-range expects 0 < lo <= hi");
  }
  return {lo, hi};
}

qpsim::ExperimentConfig resolve(const CommonFlags& flags) {
  qpsim::ExperimentConfig config;
  if (!flags.config_file.empty()) {
    config = qpsim::config_from_json(qpsim::read_file(flags.config_file));
  }
  if (flags.seed_set) config.seed = flags.seed;
  if (!flags.out_dir.empty()) config.out_dir = flags.out_dir;
  if (!flags.depths.empty()) config.depths = flags.depths;
  if (flags.trials > 0) config.trials = flags.trials;
  if (flags.events > 0) config.events = flags.events;
  if (!flags.freq_range.empty()) {
    const auto [lo, hi] = parse_range(flags.freq_range);
    config.freq_lo = lo;
    config.freq_hi = hi;
    config.patterns.input_freq_lo = lo;
    config.patterns.input_freq_hi = hi;
  }
  if (!flags.modes.empty()) config.modes = flags.modes;
  if (flags.streams > 0) config.streams = flags.streams;
  if (flags.temperature_set) {
    if (flags.temperature < 0.0) {
      throw std::invalid_argument("--temperature must be >= 0");
    }
    config.temperature = flags.temperature;
  }
  return config;
}

void run_simulate(const std::string& network_file, const std::string& trace_file,
                  double duration, std::uint64_t events, std::uint64_t seed) {
  if ((duration > 0.0) == (events > 0)) {
    throw std::invalid_argument(
        "simulate needs exactly one of --duration and --events");
  }
  const auto net = qpsim::network_from_json(qpsim::read_file(network_file));
  const auto stop = duration > 0.0 ? qpsim::StopCondition::duration(duration)
                                   : qpsim::StopCondition::total_events(events);
  const auto trace = qpsim::run(net, stop, seed);
  const auto csv = qpsim::trace_to_csv(trace);
  if (trace_file.empty() || trace_file == "-") {
    std::cout << csv;
  } else {
    qpsim::write_file(trace_file, csv);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"FSM-neuron network simulator and experiment runner"};
  app.require_subcommand(1);

  CommonFlags activation_flags, correlations_flags, rbm_flags, patterns_flags;
  auto* activation =
      app.add_subcommand("activation", "activation-vs-input curves");
  add_common(*activation, activation_flags);
  auto* correlations =
      app.add_subcommand("correlations", "auto/cross-correlation runs");
  add_common(*correlations, correlations_flags);

  auto* rbm = app.add_subcommand("rbm", "RBM sampling KL experiment");
  add_common(*rbm, rbm_flags);
  std::string rbm_file;
  std::uint64_t rbm_samples = 0;
  int rbm_repeats = 0;
  rbm->add_option("--model", rbm_file, "RBM model JSON (omit for random models)");
  rbm->add_option("--samples", rbm_samples, "samples per curve");
  rbm->add_option("--repeats", rbm_repeats, "independent repeats");

  auto* patterns =
      app.add_subcommand("patterns", "competitive pattern-unit experiment");
  add_common(*patterns, patterns_flags);
  double clk_freq = 0.0;
  std::uint64_t clk_cycles = 0;
  int n_input_patterns = 0;
  std::string pattern_range;
  patterns->add_option("--clk-freq", clk_freq, "clk oscillator frequency, Hz");
  patterns->add_option("--cycles", clk_cycles, "clk cycles per input pattern");
  patterns->add_option("--input-patterns", n_input_patterns,
                       "number of input patterns");
  patterns->add_option("--pattern-freq-range", pattern_range,
                       "pattern-unit frequency range, lo,hi in Hz");

  auto* simulate =
      app.add_subcommand("simulate", "run a network file, emit the trace CSV");
  std::string network_file, trace_file;
  double sim_duration = 0.0;
  std::uint64_t sim_events = 0, sim_seed = 1;
  simulate->add_option("network", network_file, "network JSON file")->required();
  simulate->add_option("--out", trace_file, "trace CSV path (default stdout)");
  simulate->add_option("--duration", sim_duration, "simulated seconds");
  simulate->add_option("--events", sim_events, "total event budget");
  simulate->add_option("--seed", sim_seed, "RNG seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*activation) {
      qpsim::run_activation(resolve(activation_flags));
    } else if (*correlations) {
      qpsim::run_correlations(resolve(correlations_flags));
    } else if (*rbm) {
      auto config = resolve(rbm_flags);
      if (!rbm_file.empty()) config.rbm_file = rbm_file;
      if (rbm_samples > 0) config.samples = rbm_samples;
      if (rbm_repeats > 0) config.repeats = rbm_repeats;
      qpsim::run_rbm(config);
    } else if (*patterns) {
      auto config = resolve(patterns_flags);
      if (clk_freq > 0.0) config.patterns.clk_frequency = clk_freq;
      if (clk_cycles > 0) config.patterns.clk_cycles = clk_cycles;
      if (n_input_patterns > 0) config.patterns.n_input_patterns = n_input_patterns;
      if (!pattern_range.empty()) {
        const auto [lo, hi] = parse_range(pattern_range);
        config.patterns.pattern_freq_lo = lo;
        config.patterns.pattern_freq_hi = hi;
      }
      qpsim::run_patterns(config);
    } else if (*simulate) {
      run_simulate(network_file, trace_file, sim_duration, sim_events, sim_seed);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
