#include <doctest.h>

#include <stdexcept>

#include "qpsim/io.hpp"

using namespace qpsim;

TEST_CASE("doubles round-trip through their CSV representation") {
  for (double v : {0.1, 1.0 / 3.0, 45.000000000000007, 1e-300, 123456.75}) {
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("trace CSV layout") {
  Trace trace;
  trace.events.push_back({0.025, 3, 1, 1});
  trace.events.push_back({0.5, 0, 0, 0});
  CHECK(trace_to_csv(trace) ==
        "time,source,stream,bit\n"
        "0.025000000000000001,3,1,1\n"
        "0.5,0,0,0\n");
}

TEST_CASE("curve and correlation CSV layout") {
  ActivationCurve curve;
  curve.p = {0.25};
  curve.q = {0.5};
  CHECK(curve_to_csv(curve) == "p,q\n0.25,0.5\n");

  CorrelationSeries series;
  series.min_lag = -1;
  series.r = {0.25, 1.0, 0.25};
  CHECK(correlation_to_csv(series) == "lag,r\n-1,0.25\n0,1\n1,0.25\n");
}

TEST_CASE("sample CSV writes visible bits first") {
  SampleRecord rec;
  rec.nv = 2;
  rec.nh = 1;
  rec.entries.push_back({0.5, 0b101});  // v0=1, v1=0, h0=1
  CHECK(samples_to_csv(rec) == "index,time,config\n0,0.5,101\n");
}

TEST_CASE("fsm documents round-trip") {
  const auto fsm = counter_fsm(3);
  const auto text = fsm_to_json(fsm);
  const auto back = fsm_from_json(text);
  CHECK(back.state_count == fsm.state_count);
  CHECK(back.transitions == fsm.transitions);
  CHECK(back.output == fsm.output);
  CHECK(fsm_to_json(back) == text);

  CHECK_THROWS(fsm_from_json("{}"));
  CHECK_THROWS_AS(fsm_from_json(R"({"states":2,"alphabet":2,"initial":0,
      "output":[0,1],"transitions":[[0,0,5],[0,1,1],[1,0,0],[1,1,1]]})"),
                  std::invalid_argument);
}

TEST_CASE("network documents round-trip") {
  Network net;
  net.fsms.push_back(constant_fsm(1));
  net.fsms.push_back(counter_fsm(2));
  const auto a = net.add_neuron(0, {{45.5, 0.25, OscMode::periodic}});
  const auto b = net.add_neuron(1, {{40.0, 1.0, OscMode::poisson},
                                    {42.0, 0.5, OscMode::periodic}});
  net.wire(a, 0, 1, b, 1);
  net.wire(a, 0, 0, b, 0);
  net.control_rules.push_back({a, 1, ControlAction::deactivate, {b}});
  net.control_rules.push_back({b, 0, ControlAction::activate_reset, {b}});

  const auto text = network_to_json(net);
  const auto back = network_from_json(text);
  CHECK(network_to_json(back) == text);
  CHECK(back.neurons.size() == 2);
  CHECK(back.neurons[1].oscillators[0].mode == OscMode::poisson);
  CHECK(back.wiring_triples() == net.wiring_triples());
  CHECK(back.control_rules.size() == 2);

  // Round-tripped networks simulate identically.
  const auto t1 = run(net, StopCondition::total_events(200), 6);
  const auto t2 = run(back, StopCondition::total_events(200), 6);
  CHECK(trace_to_csv(t1) == trace_to_csv(t2));
}

TEST_CASE("invalid network documents are rejected") {
  CHECK_THROWS(network_from_json("{"));
  // Wiring points at a neuron that does not exist.
  Network net;
  net.fsms.push_back(constant_fsm(1));
  net.add_neuron(0, {{45.0, 1.0, OscMode::periodic}});
  auto text = network_to_json(net);
  const std::string needle = "\"wiring\": []";
  const auto pos = text.find(needle);
  REQUIRE(pos != std::string::npos);
  text.replace(pos, needle.size(), "\"wiring\": [[0,0,0,9,0]]");
  CHECK_THROWS(network_from_json(text));
}

TEST_CASE("rbm documents round-trip") {
  RbmModel m;
  m.nv = 2;
  m.nh = 3;
  m.weights = {{1, -2, 0}, {3, 0, -1}};
  m.visible_bias = {1, -1};
  m.hidden_bias = {0, 2, -2};
  m.temperature = 5.5;
  const auto text = rbm_to_json(m);
  const auto back = rbm_from_json(text);
  CHECK(back.weights == m.weights);
  CHECK(back.visible_bias == m.visible_bias);
  CHECK(back.hidden_bias == m.hidden_bias);
  CHECK(back.temperature == m.temperature);
  CHECK(rbm_to_json(back) == text);
}

TEST_CASE("file helpers report missing paths") {
  CHECK_THROWS_AS(read_file("/nonexistent/path/x.json"), std::runtime_error);
  write_file("/tmp/qpsim_io_test.txt", "hello\n");
  CHECK(read_file("/tmp/qpsim_io_test.txt") == "hello\n");
}
