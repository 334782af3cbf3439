#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <stdexcept>

#include "qpsim/experiments.hpp"
#include "qpsim/io.hpp"

using namespace qpsim;
namespace fs = std::filesystem;

namespace {

ExperimentConfig tiny_config(const std::string& dir) {
  ExperimentConfig config;
  config.seed = 77;
  config.out_dir = (fs::temp_directory_path() / dir).string();
  config.n_sources = 20;
  config.events = 2000;
  config.trials = 2;
  config.grid = {0.2, 0.5, 0.8};
  config.max_lag = 20;
  return config;
}

}  // namespace

TEST_CASE("star network wiring shape") {
  const auto net = star_network(3, 10, 4, 2);
  CHECK(net.neurons.size() == 12);
  CHECK(net.wiring_triples().size() == 10 * 2 * 2);  // both bits, both targets
  int ones = 0;
  for (int s = 0; s < 10; ++s) {
    ones += net.fsms[net.neurons[s].fsm].output_bit(0);
  }
  CHECK(ones == 4);
  CHECK_THROWS_AS(star_network(3, 10, 11, 1), std::invalid_argument);
}

TEST_CASE("balanced star activation sits near one half") {
  const double q = empirical_star_activation(3, 50, 25, OscMode::periodic, 5000,
                                             40.0, 50.0, 13);
  CHECK(q == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("kl checkpoint grid is geometric and ends at n") {
  const auto points = kl_checkpoints(100000);
  REQUIRE(!points.empty());
  CHECK(points.front() == 100);
  CHECK(points.back() == 100000);
  for (std::size_t i = 1; i < points.size(); ++i) {
    CHECK(points[i] > points[i - 1]);
    const double ratio =
        static_cast<double>(points[i]) / static_cast<double>(points[i - 1]);
    CHECK(ratio < 1.5);
  }
  CHECK(kl_checkpoints(50).empty());
  CHECK(kl_checkpoints(150).back() == 150);
}

TEST_CASE("experiment configs round-trip through JSON") {
  ExperimentConfig config = tiny_config("qpsim_cfg");
  config.depths = {1, 5};
  config.nv = 4;
  config.temperature = 2.5;
  config.patterns.clk_frequency = 90.0;
  const auto text = config_to_json(config);
  const auto back = config_from_json(text);
  CHECK(config_to_json(back) == text);
  CHECK(back.depths == config.depths);
  CHECK(back.patterns.clk_frequency == 90.0);
}

TEST_CASE("activation command writes per-mode files and a manifest") {
  auto config = tiny_config("qpsim_act");
  config.depths = {2};
  fs::remove_all(config.out_dir);
  const auto outputs = run_activation(config);
  REQUIRE(outputs.size() == 3);
  for (const auto& name : outputs) {
    CHECK(fs::exists(fs::path(config.out_dir) / name));
  }
  CHECK(fs::exists(fs::path(config.out_dir) / "manifest.json"));

  // Grid rows appear in order, and the empirical file has mean and std.
  const auto body =
      read_file((fs::path(config.out_dir) / "activation_d2_periodic.csv").string());
  CHECK(body.substr(0, 11) == "p,mean,std\n");
  CHECK(std::count(body.begin(), body.end(), '\n') == 4);

  // Byte-identical on a re-run with the same config.
  const auto stationary_body =
      read_file((fs::path(config.out_dir) / "activation_d2_stationary.csv").string());
  run_activation(config);
  CHECK(read_file((fs::path(config.out_dir) / "activation_d2_periodic.csv").string()) ==
        body);
  CHECK(read_file((fs::path(config.out_dir) / "activation_d2_stationary.csv").string()) ==
        stationary_body);
}

TEST_CASE("correlation command emits auto and cross files per mode") {
  auto config = tiny_config("qpsim_corr");
  config.depths = {1};
  config.events = 500;
  fs::remove_all(config.out_dir);
  const auto outputs = run_correlations(config);
  REQUIRE(outputs.size() == 4);
  const auto body =
      read_file((fs::path(config.out_dir) / "crosscorr_d1_poisson.csv").string());
  // Lags -20..20 plus the header.
  CHECK(std::count(body.begin(), body.end(), '\n') == 42);
  CHECK(body.rfind("lag,r\n-20,", 0) == 0);
}

TEST_CASE("rbm command pairs a gibbs and a network curve per repeat") {
  auto config = tiny_config("qpsim_rbm");
  config.nv = 3;
  config.nh = 3;
  config.wmax = 2;
  config.streams = 4;
  config.samples = 400;
  config.repeats = 2;
  fs::remove_all(config.out_dir);
  const auto outputs = run_rbm(config);
  REQUIRE(outputs.size() == 6);
  for (const auto& name : outputs) {
    CHECK(fs::exists(fs::path(config.out_dir) / name));
  }
  const auto curve =
      read_file((fs::path(config.out_dir) / "kl_network_rep1.csv").string());
  CHECK(curve.rfind("n_samples,kl_nats\n100,", 0) == 0);
  CHECK(curve.find("\n400,") != std::string::npos);

  const auto model = rbm_from_json(
      read_file((fs::path(config.out_dir) / "rbm_model_rep0.json").string()));
  CHECK(model.nv == 3);
  // T_eff = K (fan-in + 1) / (4 d) = 4 * 4 / 12
  CHECK(model.temperature == doctest::Approx(16.0 / 12.0));
}

TEST_CASE("patterns command writes one row per pattern pair") {
  auto config = tiny_config("qpsim_pat");
  config.patterns.n_inputs = 8;
  config.patterns.n_patterns = 3;
  config.patterns.n_input_patterns = 4;
  config.patterns.clk_cycles = 200;
  fs::remove_all(config.out_dir);
  const auto outputs = run_patterns(config);
  REQUIRE(outputs.size() == 1);
  const auto body =
      read_file((fs::path(config.out_dir) / "patterns.csv").string());
  CHECK(std::count(body.begin(), body.end(), '\n') == 13);  // header + 4*3

  // Re-running reproduces the file byte for byte.
  run_patterns(config);
  CHECK(read_file((fs::path(config.out_dir) / "patterns.csv").string()) == body);
}

TEST_CASE("commands validate their configs") {
  auto config = tiny_config("qpsim_bad");
  config.trials = 0;
  CHECK_THROWS_AS(run_activation(config), std::invalid_argument);

  auto config2 = tiny_config("qpsim_bad");
  config2.grid = {1.5};
  CHECK_THROWS_AS(run_activation(config2), std::invalid_argument);

  auto config3 = tiny_config("qpsim_bad");
  config3.modes = {"sometimes"};
  CHECK_THROWS_AS(run_activation(config3), std::invalid_argument);

  auto config4 = tiny_config("qpsim_bad");
  config4.events = 10;  // smaller than max_lag
  CHECK_THROWS_AS(run_correlations(config4), std::invalid_argument);

  auto config5 = tiny_config("qpsim_bad");
  config5.samples = 10;
  CHECK_THROWS_AS(run_rbm(config5), std::invalid_argument);
}
