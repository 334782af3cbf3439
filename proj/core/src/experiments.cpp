#include "qpsim/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <stdexcept>

#include <json.hpp>

#include "qpsim/fsm.hpp"
#include "qpsim/io.hpp"
#include "qpsim/markov.hpp"
#include "qpsim/rbm.hpp"
#include "qpsim/rng.hpp"

namespace qpsim {

using nlohmann::json;

Network star_network(int depth, int n_sources, int x_ones, int n_targets) {
  if (n_sources < 1 || x_ones < 0 || x_ones > n_sources || n_targets < 1) {
    throw std::invalid_argument("bad star network dimensions");
  }
  Network net;
  net.fsms.push_back(constant_fsm(0));
  net.fsms.push_back(constant_fsm(1));
  net.fsms.push_back(counter_fsm(depth));
  const std::vector<OscillatorSpec> one_osc(1);
  for (int s = 0; s < n_sources; ++s) {
    net.add_neuron(s < x_ones ? 1 : 0, one_osc);
  }
  for (int t = 0; t < n_targets; ++t) {
    const auto target = net.add_neuron(2, one_osc);
    for (int s = 0; s < n_sources; ++s) {
      net.wire(static_cast<std::uint32_t>(s), 0, 0, target, 0);
      net.wire(static_cast<std::uint32_t>(s), 0, 1, target, 1);
    }
  }
  return net;
}

std::vector<BitSequence> star_target_sequences(
    int depth, int n_sources, int x_ones, OscMode mode,
    std::uint64_t target_events, int n_targets, double freq_lo, double freq_hi,
    std::uint64_t seed, std::vector<double>* drawn_frequencies) {
  auto net = star_network(depth, n_sources, x_ones, n_targets);
  assign_random_oscillators(net, freq_lo, freq_hi, mode, seed);
  if (drawn_frequencies) {
    drawn_frequencies->clear();
    for (const auto& n : net.neurons) {
      for (const auto& osc : n.oscillators) {
        drawn_frequencies->push_back(osc.frequency);
      }
    }
  }

  const auto first_target = static_cast<std::uint32_t>(n_sources);
  std::vector<BitSequence> seqs(n_targets);
  Engine engine(net, seed);
  int done = 0;
  while (done < n_targets) {
    const auto ev = engine.step();
    if (!ev || ev->source < first_target) continue;
    auto& seq = seqs[ev->source - first_target];
    if (seq.size() >= target_events) continue;
    seq.times.push_back(ev->time);
    seq.bits.push_back(ev->bit);
    if (seq.size() == target_events) ++done;
  }
  return seqs;
}

double empirical_star_activation(int depth, int n_sources, int x_ones,
                                 OscMode mode, std::uint64_t target_events,
                                 double freq_lo, double freq_hi,
                                 std::uint64_t seed,
                                 std::vector<double>* drawn_frequencies) {
  const auto seqs =
      star_target_sequences(depth, n_sources, x_ones, mode, target_events, 1,
                            freq_lo, freq_hi, seed, drawn_frequencies);
  return empirical_activation(seqs[0]);
}

std::vector<std::uint64_t> kl_checkpoints(std::uint64_t n) {
  std::vector<std::uint64_t> points;
  for (int k = 16;; ++k) {  // 10^(k/8), starting at 100
    const auto c = static_cast<std::uint64_t>(
        std::llround(std::pow(10.0, static_cast<double>(k) / 8.0)));
    if (c >= n) break;
    if (points.empty() || c != points.back()) points.push_back(c);
  }
  if (n >= 100 && (points.empty() || points.back() != n)) points.push_back(n);
  return points;
}

namespace {

std::vector<double> default_grid() {
  return {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
}

std::vector<int> depths_or_default(const ExperimentConfig& config) {
  return config.depths.empty() ? std::vector<int>{3} : config.depths;
}

OscMode parse_mode(const std::string& name) {
  if (name == "periodic") return OscMode::periodic;
  if (name == "poisson") return OscMode::poisson;
  throw std::invalid_argument("unknown mode: " + name);
}

json config_doc(const ExperimentConfig& c) {
  json doc;
  doc["seed"] = c.seed;
  doc["out_dir"] = c.out_dir;
  doc["freq_lo"] = c.freq_lo;
  doc["freq_hi"] = c.freq_hi;
  doc["depths"] = depths_or_default(c);
  doc["n_sources"] = c.n_sources;
  doc["events"] = c.events;
  doc["trials"] = c.trials;
  doc["modes"] = c.modes;
  doc["grid"] = c.grid.empty() ? default_grid() : c.grid;
  doc["max_lag"] = c.max_lag;
  doc["rbm"] = {{"nv", c.nv},
                {"nh", c.nh},
                {"wmax", c.wmax},
                {"streams", c.streams},
                {"temperature", c.temperature},
                {"samples", c.samples},
                {"burn_in", c.burn_in},
                {"repeats", c.repeats},
                {"file", c.rbm_file}};
  doc["patterns"] = {{"n_inputs", c.patterns.n_inputs},
                     {"n_patterns", c.patterns.n_patterns},
                     {"n_input_patterns", c.patterns.n_input_patterns},
                     {"clk_cycles", c.patterns.clk_cycles},
                     {"input_freq_lo", c.patterns.input_freq_lo},
                     {"input_freq_hi", c.patterns.input_freq_hi},
                     {"pattern_freq_lo", c.patterns.pattern_freq_lo},
                     {"pattern_freq_hi", c.patterns.pattern_freq_hi},
                     {"clk_frequency", c.patterns.clk_frequency},
                     {"pattern_depth", c.patterns.pattern_depth}};
  return doc;
}

void write_manifest(const ExperimentConfig& config, const std::string& name,
                    const std::vector<std::string>& outputs, json extra) {
  json doc;
  doc["experiment"] = name;
  doc["config"] = config_doc(config);
  doc["outputs"] = outputs;
  doc["details"] = std::move(extra);
  write_file((std::filesystem::path(config.out_dir) / "manifest.json").string(),
             doc.dump(2) + "\n");
}

std::string out_path(const ExperimentConfig& config, const std::string& name) {
  return (std::filesystem::path(config.out_dir) / name).string();
}

void prepare_out_dir(const ExperimentConfig& config) {
  std::filesystem::create_directories(config.out_dir);
}

struct MeanStd {
  double mean;
  double std;  // sample standard deviation across trials
};

MeanStd mean_std(const std::vector<double>& xs) {
  const auto n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  return {mean, xs.size() > 1 ? std::sqrt(var / (n - 1.0)) : 0.0};
}

}  // namespace

ExperimentConfig config_from_json(const std::string& text) {
  const json doc = json::parse(text);
  ExperimentConfig c;
  auto get = [&doc](const char* key, auto& field) {
    if (doc.contains(key)) field = doc.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("seed", c.seed);
  get("out_dir", c.out_dir);
  get("freq_lo", c.freq_lo);
  get("freq_hi", c.freq_hi);
  get("depths", c.depths);
  get("n_sources", c.n_sources);
  get("events", c.events);
  get("trials", c.trials);
  get("modes", c.modes);
  get("grid", c.grid);
  get("max_lag", c.max_lag);
  if (doc.contains("rbm")) {
    const auto& r = doc.at("rbm");
    auto rget = [&r](const char* key, auto& field) {
      if (r.contains(key)) field = r.at(key).get<std::decay_t<decltype(field)>>();
    };
    rget("nv", c.nv);
    rget("nh", c.nh);
    rget("wmax", c.wmax);
    rget("streams", c.streams);
    rget("temperature", c.temperature);
    rget("samples", c.samples);
    rget("burn_in", c.burn_in);
    rget("repeats", c.repeats);
    rget("file", c.rbm_file);
  }
  if (doc.contains("patterns")) {
    const auto& p = doc.at("patterns");
    auto pget = [&p](const char* key, auto& field) {
      if (p.contains(key)) field = p.at(key).get<std::decay_t<decltype(field)>>();
    };
    pget("n_inputs", c.patterns.n_inputs);
    pget("n_patterns", c.patterns.n_patterns);
    pget("n_input_patterns", c.patterns.n_input_patterns);
    pget("clk_cycles", c.patterns.clk_cycles);
    pget("input_freq_lo", c.patterns.input_freq_lo);
    pget("input_freq_hi", c.patterns.input_freq_hi);
    pget("pattern_freq_lo", c.patterns.pattern_freq_lo);
    pget("pattern_freq_hi", c.patterns.pattern_freq_hi);
    pget("clk_frequency", c.patterns.clk_frequency);
    pget("pattern_depth", c.patterns.pattern_depth);
  }
  return c;
}

std::string config_to_json(const ExperimentConfig& config) {
  return config_doc(config).dump(2) + "\n";
}

std::vector<std::string> run_activation(const ExperimentConfig& config) {
  if (config.trials < 1 || config.events < 1 || config.n_sources < 1) {
    throw std::invalid_argument("bad activation config");
  }
  const auto grid = config.grid.empty() ? default_grid() : config.grid;
  for (double p : grid) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::invalid_argument("grid values must lie in [0, 1]");
    }
  }
  prepare_out_dir(config);

  std::vector<std::string> outputs;
  json freq_log = json::array();
  for (int depth : depths_or_default(config)) {
    for (const auto& mode_name : config.modes) {
      const std::string file_name =
          "activation_d" + std::to_string(depth) + "_" + mode_name + ".csv";
      if (mode_name == "stationary") {
        const auto curve = activation_curve(counter_fsm(depth), grid);
        write_file(out_path(config, file_name), curve_to_csv(curve));
        outputs.push_back(file_name);
        continue;
      }
      const OscMode mode = parse_mode(mode_name);
      std::string csv = "p,mean,std\n";
      for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        const int x = static_cast<int>(std::lround(grid[gi] * config.n_sources));
        std::vector<double> fractions;
        for (int trial = 0; trial < config.trials; ++trial) {
          std::vector<double> freqs;
          const auto run_seed =
              mix_seed(config.seed, (static_cast<std::uint64_t>(depth) << 32) |
                                        (gi << 8) | (mode == OscMode::poisson),
                       static_cast<std::uint64_t>(trial));
          fractions.push_back(empirical_star_activation(
              depth, config.n_sources, x, mode, config.events, config.freq_lo,
              config.freq_hi, run_seed, &freqs));
          freq_log.push_back({{"depth", depth},
                              {"mode", mode_name},
                              {"p", grid[gi]},
                              {"trial", trial},
                              {"frequencies", freqs}});
        }
        const auto [mean, sd] = mean_std(fractions);
        csv += format_double(grid[gi]) + "," + format_double(mean) + "," +
               format_double(sd) + "\n";
      }
      write_file(out_path(config, file_name), csv);
      outputs.push_back(file_name);
    }
  }
  write_manifest(config, "activation", outputs,
                 {{"drawn_frequencies", std::move(freq_log)}});
  return outputs;
}

std::vector<std::string> run_correlations(const ExperimentConfig& config) {
  if (config.max_lag < 1 || config.events <= static_cast<std::uint64_t>(config.max_lag)) {
    throw std::invalid_argument("bad correlation config");
  }
  prepare_out_dir(config);

  std::vector<std::string> outputs;
  json details = json::object();
  for (int depth : depths_or_default(config)) {
    for (const OscMode mode : {OscMode::periodic, OscMode::poisson}) {
      const std::string mode_name =
          mode == OscMode::periodic ? "periodic" : "poisson";
      const auto run_seed = mix_seed(
          config.seed, static_cast<std::uint64_t>(depth),
          mode == OscMode::poisson ? 0x90155ULL : 0ULL);
      std::vector<double> freqs;
      const auto seqs = star_target_sequences(
          depth, config.n_sources, config.n_sources / 2, mode, config.events,
          2, config.freq_lo, config.freq_hi, run_seed, &freqs);

      const auto auto_series = autocorrelation(seqs[0], config.max_lag);
      const auto cross_series =
          crosscorrelation(seqs[0], seqs[1], config.max_lag);
      const std::string auto_name =
          "autocorr_d" + std::to_string(depth) + "_" + mode_name + ".csv";
      const std::string cross_name =
          "crosscorr_d" + std::to_string(depth) + "_" + mode_name + ".csv";
      write_file(out_path(config, auto_name), correlation_to_csv(auto_series));
      write_file(out_path(config, cross_name), correlation_to_csv(cross_series));
      outputs.push_back(auto_name);
      outputs.push_back(cross_name);
      details[auto_name] = {{"null_band", auto_series.null_band}};
      details[cross_name] = {{"null_band", cross_series.null_band}};
      details["frequencies_d" + std::to_string(depth) + "_" + mode_name] = freqs;
    }
  }
  write_manifest(config, "correlations", outputs, std::move(details));
  return outputs;
}

namespace {

std::string kl_curve_csv(const SampleRecord& record,
                         const ConfigDistribution& exact,
                         const std::vector<std::uint64_t>& checkpoints,
                         std::uint64_t burn_in) {
  std::vector<std::uint32_t> counts(exact.prob.size(), 0);
  std::vector<std::uint32_t> seen;
  std::string csv = "n_samples,kl_nats\n";
  std::uint64_t used = 0;
  std::size_t next_cp = 0;
  for (std::size_t i = burn_in; i < record.entries.size(); ++i) {
    const auto c = record.entries[i].config;
    if (counts[c]++ == 0) seen.push_back(c);
    ++used;
    if (next_cp < checkpoints.size() && used == checkpoints[next_cp]) {
      double kl = 0.0;
      const auto n = static_cast<double>(used);
      for (auto cfg : seen) {
        const double q = counts[cfg] / n;
        kl += q * std::log(q / exact.prob[cfg]);
      }
      csv += std::to_string(used) + "," + format_double(kl) + "\n";
      ++next_cp;
    }
  }
  return csv;
}

}  // namespace

std::vector<std::string> run_rbm(const ExperimentConfig& config) {
  if (config.repeats < 1 || config.samples < 100) {
    throw std::invalid_argument("bad rbm config");
  }
  prepare_out_dir(config);

  const auto checkpoints = kl_checkpoints(config.samples);
  std::vector<std::string> outputs;
  json details = json::array();
  for (int rep = 0; rep < config.repeats; ++rep) {
    RbmModel model =
        config.rbm_file.empty()
            ? random_rbm(config.nv, config.nh, config.wmax,
                         mix_seed(config.seed, 0xB00ULL, rep))
            : rbm_from_json(read_file(config.rbm_file));
    auto compiled = compile_network(model, config.streams);
    model.temperature = config.temperature > 0.0
                            ? config.temperature
                            : effective_temperature(compiled);
    const auto exact = exact_distribution(model);

    const auto total = config.samples + config.burn_in;
    const auto gibbs =
        gibbs_sample(model, total, mix_seed(config.seed, 0x6BB5ULL, rep));
    const std::string gibbs_name = "kl_gibbs_rep" + std::to_string(rep) + ".csv";
    write_file(out_path(config, gibbs_name),
               kl_curve_csv(gibbs, exact, checkpoints, config.burn_in));
    outputs.push_back(gibbs_name);

    assign_random_oscillators(compiled.network, config.freq_lo, config.freq_hi,
                              OscMode::periodic,
                              mix_seed(config.seed, 0x05CULL, rep));
    Engine engine(compiled.network, mix_seed(config.seed, 0x0E6ULL, rep));
    SampleRecorder recorder(compiled);
    while (recorder.record().entries.size() < total) {
      if (auto ev = engine.step()) recorder.observe(*ev);
    }
    const auto net_samples = recorder.take();
    const std::string net_name = "kl_network_rep" + std::to_string(rep) + ".csv";
    write_file(out_path(config, net_name),
               kl_curve_csv(net_samples, exact, checkpoints, config.burn_in));
    outputs.push_back(net_name);

    const std::string model_name = "rbm_model_rep" + std::to_string(rep) + ".json";
    write_file(out_path(config, model_name), rbm_to_json(model));
    outputs.push_back(model_name);
    details.push_back({{"repeat", rep},
                       {"temperature", model.temperature},
                       {"stream_count", stream_count(compiled)},
                       {"network_duration_s",
                        net_samples.entries.empty()
                            ? 0.0
                            : net_samples.entries.back().time}});
  }
  write_manifest(config, "rbm", outputs, {{"repeats", std::move(details)}});
  return outputs;
}

std::vector<std::string> run_patterns(const ExperimentConfig& config) {
  prepare_out_dir(config);
  const auto result = run_experiment(config.patterns, config.seed);

  std::string csv = "input_pattern_id,unit_id,observed,predicted\n";
  std::size_t row = 0;
  for (int pat = 0; pat < result.n_input_patterns; ++pat) {
    for (int unit = 0; unit < result.n_patterns; ++unit, ++row) {
      csv += std::to_string(pat) + "," + std::to_string(unit) + "," +
             format_double(result.observed[row]) + "," +
             format_double(result.predicted[row]) + "\n";
    }
  }
  const std::string name = "patterns.csv";
  write_file(out_path(config, name), csv);
  write_manifest(config, "patterns", {name},
                 {{"unit_frequencies", result.unit_frequency}});
  return {name};
}

}  // namespace qpsim
