#include "qpsim/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace qpsim {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string trace_to_csv(const Trace& trace) {
  std::string out = "time,source,stream,bit\n";
  for (const auto& ev : trace.events) {
    out += format_double(ev.time);
    out += ',';
    out += std::to_string(ev.source);
    out += ',';
    out += std::to_string(ev.stream);
    out += ',';
    out += char('0' + ev.bit);
    out += '\n';
  }
  return out;
}

std::string curve_to_csv(const ActivationCurve& curve) {
  std::string out = "p,q\n";
  for (std::size_t i = 0; i < curve.p.size(); ++i) {
    out += format_double(curve.p[i]) + "," + format_double(curve.q[i]) + "\n";
  }
  return out;
}

std::string correlation_to_csv(const CorrelationSeries& s) {
  std::string out = "lag,r\n";
  for (std::size_t i = 0; i < s.r.size(); ++i) {
    out += std::to_string(s.min_lag + static_cast<int>(i)) + "," +
           format_double(s.r[i]) + "\n";
  }
  return out;
}

std::string samples_to_csv(const SampleRecord& record) {
  std::string out = "index,time,config\n";
  const int bits = record.nv + record.nh;
  for (std::size_t i = 0; i < record.entries.size(); ++i) {
    const auto& e = record.entries[i];
    out += std::to_string(i) + "," + format_double(e.time) + ",";
    for (int b = 0; b < bits; ++b) {
      out += char('0' + (e.config >> b & 1u));
    }
    out += '\n';
  }
  return out;
}

std::string fsm_to_json(const FsmSpec& fsm) {
  json doc;
  doc["states"] = fsm.state_count;
  doc["alphabet"] = fsm.alphabet_size;
  doc["initial"] = fsm.initial_state;
  doc["output"] = fsm.output;
  auto& tr = doc["transitions"] = json::array();
  for (int s = 0; s < fsm.state_count; ++s) {
    for (int a = 0; a < fsm.alphabet_size; ++a) {
      tr.push_back({s, a, fsm.next_state(s, a)});
    }
  }
  return doc.dump(2) + "\n";
}

FsmSpec fsm_from_json(const std::string& text) {
  const json doc = json::parse(text);
  FsmSpec fsm;
  fsm.state_count = doc.at("states").get<int>();
  fsm.alphabet_size = doc.at("alphabet").get<int>();
  fsm.initial_state = doc.at("initial").get<int>();
  fsm.output = doc.at("output").get<std::vector<std::uint8_t>>();
  fsm.transitions.assign(
      static_cast<std::size_t>(fsm.state_count) * fsm.alphabet_size, -1);
  for (const auto& t : doc.at("transitions")) {
    const int s = t.at(0).get<int>();
    const int a = t.at(1).get<int>();
    if (s < 0 || s >= fsm.state_count || a < 0 || a >= fsm.alphabet_size) {
      throw std::invalid_argument("fsm transition entry out of range");
    }
    fsm.transitions[static_cast<std::size_t>(s) * fsm.alphabet_size + a] =
        t.at(2).get<int>();
  }
  auto errors = validate(fsm);
  if (!errors.empty()) {
    throw std::invalid_argument("invalid fsm document: " + errors.front());
  }
  return fsm;
}

namespace {

const char* mode_name(OscMode m) {
  return m == OscMode::periodic ? "periodic" : "poisson";
}

OscMode mode_from_name(const std::string& name) {
  if (name == "periodic") return OscMode::periodic;
  if (name == "poisson") return OscMode::poisson;
  throw std::invalid_argument("unknown oscillator mode: " + name);
}

json fsm_doc(const FsmSpec& fsm) { return json::parse(fsm_to_json(fsm)); }

}  // namespace

std::string network_to_json(const Network& net) {
  json doc;
  auto& fsms = doc["fsms"] = json::array();
  for (const auto& f : net.fsms) fsms.push_back(fsm_doc(f));
  auto& neurons = doc["neurons"] = json::array();
  for (const auto& n : net.neurons) {
    json jn;
    jn["id"] = n.id;
    jn["fsm"] = n.fsm;
    jn["state"] = n.state;
    jn["active"] = n.active;
    auto& oscs = jn["oscillators"] = json::array();
    for (const auto& o : n.oscillators) {
      oscs.push_back({{"frequency", o.frequency},
                      {"phase", o.initial_phase},
                      {"mode", mode_name(o.mode)}});
    }
    neurons.push_back(std::move(jn));
  }
  doc["wiring"] = net.wiring_triples();
  auto& rules = doc["control_rules"] = json::array();
  for (const auto& r : net.control_rules) {
    rules.push_back({{"source", r.source},
                     {"trigger_bit", r.trigger_bit},
                     {"action", r.action == ControlAction::deactivate
                                    ? "deactivate"
                                    : "activate_reset"},
                     {"targets", r.targets}});
  }
  return doc.dump(2) + "\n";
}

Network network_from_json(const std::string& text) {
  const json doc = json::parse(text);
  Network net;
  for (const auto& f : doc.at("fsms")) {
    net.fsms.push_back(fsm_from_json(f.dump()));
  }
  for (const auto& jn : doc.at("neurons")) {
    std::vector<OscillatorSpec> oscs;
    for (const auto& o : jn.at("oscillators")) {
      oscs.push_back({o.at("frequency").get<double>(),
                      o.at("phase").get<double>(),
                      mode_from_name(o.at("mode").get<std::string>())});
    }
    const auto id = net.add_neuron(jn.at("fsm").get<std::uint32_t>(), std::move(oscs));
    if (id != jn.at("id").get<std::uint32_t>()) {
      throw std::invalid_argument("network neurons must be listed in id order");
    }
    if (jn.contains("state")) net.neurons[id].state = jn.at("state").get<int>();
    if (jn.contains("active")) net.neurons[id].active = jn.at("active").get<bool>();
  }
  for (const auto& t : doc.at("wiring")) {
    net.wire(t.at(0).get<std::uint32_t>(),
             t.at(1).get<std::uint16_t>(),
             t.at(2).get<std::uint8_t>(),
             t.at(3).get<std::uint32_t>(),
             t.at(4).get<std::uint8_t>());
  }
  if (doc.contains("control_rules")) {
    for (const auto& r : doc.at("control_rules")) {
      const auto action = r.at("action").get<std::string>();
      if (action != "deactivate" && action != "activate_reset") {
        throw std::invalid_argument("unknown control action: " + action);
      }
      net.control_rules.push_back(
          {r.at("source").get<std::uint32_t>(),
           r.at("trigger_bit").get<std::uint8_t>(),
           action == "deactivate" ? ControlAction::deactivate
                                  : ControlAction::activate_reset,
           r.at("targets").get<std::vector<std::uint32_t>>()});
    }
  }
  auto errors = net.validate();
  if (!errors.empty()) {
    throw std::invalid_argument("invalid network document: " + errors.front());
  }
  return net;
}

std::string rbm_to_json(const RbmModel& model) {
  json doc;
  doc["visible"] = model.nv;
  doc["hidden"] = model.nh;
  doc["weights"] = model.weights;
  doc["visible_bias"] = model.visible_bias;
  doc["hidden_bias"] = model.hidden_bias;
  doc["temperature"] = model.temperature;
  return doc.dump(2) + "\n";
}

RbmModel rbm_from_json(const std::string& text) {
  const json doc = json::parse(text);
  RbmModel model;
  model.nv = doc.at("visible").get<int>();
  model.nh = doc.at("hidden").get<int>();
  model.weights = doc.at("weights").get<std::vector<std::vector<int>>>();
  model.visible_bias = doc.at("visible_bias").get<std::vector<int>>();
  model.hidden_bias = doc.at("hidden_bias").get<std::vector<int>>();
  if (doc.contains("temperature")) {
    model.temperature = doc.at("temperature").get<double>();
  }
  return model;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << body;
}

}  // namespace qpsim
