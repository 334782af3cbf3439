#include "qpsim/engine.hpp"

#include <algorithm>
#include <stdexcept>

namespace qpsim {

double next_event_time(const OscillatorSpec& osc, std::uint64_t k, RngStream& rng) {
  if (!(osc.frequency > 0.0)) {
    throw std::invalid_argument("oscillator frequency must be positive");
  }
  if (osc.mode == OscMode::periodic) {
    return (osc.initial_phase + static_cast<double>(k)) / osc.frequency;
  }
  double t = 0.0;
  for (std::uint64_t i = 0; i <= k; ++i) {
    t += rng.exponential(osc.frequency);
  }
  return t;
}

std::uint32_t Network::add_neuron(std::uint32_t fsm_index,
                                  std::vector<OscillatorSpec> oscillators) {
  NeuronInstance n;
  n.id = static_cast<std::uint32_t>(neurons.size());
  n.fsm = fsm_index;
  n.state = fsms.at(fsm_index).initial_state;
  n.oscillators = std::move(oscillators);
  wiring_.emplace_back(n.oscillators.size());
  neurons.push_back(std::move(n));
  return neurons.back().id;
}

void Network::wire(std::uint32_t source, std::uint16_t stream, std::uint8_t bit,
                   std::uint32_t target, std::uint8_t symbol) {
  wiring_.at(source).at(stream).at(bit).push_back({target, symbol});
}

std::vector<std::array<std::uint32_t, 5>> Network::wiring_triples() const {
  std::vector<std::array<std::uint32_t, 5>> out;
  for (std::uint32_t n = 0; n < wiring_.size(); ++n) {
    for (std::uint32_t s = 0; s < wiring_[n].size(); ++s) {
      for (std::uint32_t b = 0; b < 2; ++b) {
        for (const auto& wt : wiring_[n][s][b]) {
          out.push_back({n, s, b, wt.target, wt.symbol});
        }
      }
    }
  }
  return out;
}

std::size_t Network::total_streams() const {
  std::size_t n = 0;
  for (const auto& neuron : neurons) n += neuron.oscillators.size();
  return n;
}

std::vector<std::string> Network::validate() const {
  std::vector<std::string> errors;
  for (std::size_t i = 0; i < fsms.size(); ++i) {
    for (auto& e : qpsim::validate(fsms[i])) {
      errors.push_back("fsm " + std::to_string(i) + ": " + e);
    }
  }
  for (std::size_t i = 0; i < neurons.size(); ++i) {
    const auto& n = neurons[i];
    if (n.id != i) {
      errors.push_back("neuron " + std::to_string(i) + " has id " +
                       std::to_string(n.id));
    }
    if (n.fsm >= fsms.size()) {
      errors.push_back("neuron " + std::to_string(i) + " references unknown fsm");
      continue;
    }
    const auto& fsm = fsms[n.fsm];
    if (n.state < 0 || n.state >= fsm.state_count) {
      errors.push_back("neuron " + std::to_string(i) + " state out of range");
    }
    for (const auto& osc : n.oscillators) {
      if (!(osc.frequency > 0.0)) {
        errors.push_back("neuron " + std::to_string(i) +
                         ": oscillator frequency must be positive");
      }
      if (!(osc.initial_phase > 0.0 && osc.initial_phase <= 1.0)) {
        errors.push_back("neuron " + std::to_string(i) +
                         ": oscillator phase must be in (0, 1]");
      }
    }
  }
  for (const auto& t : wiring_triples()) {
    if (t[3] >= neurons.size()) {
      errors.push_back("wiring targets unknown neuron " + std::to_string(t[3]));
    } else if (static_cast<int>(t[4]) >= fsms[neurons[t[3]].fsm].alphabet_size) {
      errors.push_back("wiring delivers symbol " + std::to_string(t[4]) +
                       " outside the alphabet of neuron " + std::to_string(t[3]));
    }
  }
  for (const auto& rule : control_rules) {
    if (rule.source >= neurons.size()) {
      errors.push_back("control rule has unknown source neuron");
    }
    for (auto t : rule.targets) {
      if (t >= neurons.size()) {
        errors.push_back("control rule targets unknown neuron");
      }
    }
  }
  return errors;
}

StopCondition StopCondition::duration(double seconds) {
  if (!(seconds > 0.0)) throw std::invalid_argument("stop duration must be positive");
  StopCondition s;
  s.kind = Kind::duration;
  s.seconds = seconds;
  return s;
}

StopCondition StopCondition::total_events(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("stop event count must be positive");
  StopCondition s;
  s.kind = Kind::total_events;
  s.count = n;
  return s;
}

StopCondition StopCondition::neuron_events(std::uint32_t neuron, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("stop event count must be positive");
  StopCondition s;
  s.kind = Kind::neuron_events;
  s.count = n;
  s.neuron = neuron;
  return s;
}

namespace {

bool firing_after(double ta, std::uint32_t na, std::uint16_t sa, double tb,
                  std::uint32_t nb, std::uint16_t sb) {
  if (ta != tb) return ta > tb;
  if (na != nb) return na > nb;
  return sa > sb;
}

}  // namespace

Engine::Engine(const Network& network, std::uint64_t seed) : net_(network) {
  streams_.resize(net_.neurons.size());
  rules_by_source_.resize(net_.neurons.size());
  for (std::uint32_t r = 0; r < net_.control_rules.size(); ++r) {
    rules_by_source_[net_.control_rules[r].source].push_back(r);
  }
  for (const auto& n : net_.neurons) {
    auto& ss = streams_[n.id];
    for (std::uint16_t s = 0; s < n.oscillators.size(); ++s) {
      ss.push_back({0.0, RngStream(mix_seed(seed, n.id, s))});
      schedule(n.id, s, 0);
    }
  }
}

void Engine::push(Firing f) {
  queue_.push_back(f);
  std::size_t i = queue_.size() - 1;
  while (i > 0) {
    std::size_t p = (i - 1) / 2;
    if (!firing_after(queue_[p].time, queue_[p].neuron, queue_[p].stream,
                      queue_[i].time, queue_[i].neuron, queue_[i].stream)) {
      break;
    }
    std::swap(queue_[p], queue_[i]);
    i = p;
  }
}

Engine::Firing Engine::pop() {
  Firing top = queue_.front();
  queue_.front() = queue_.back();
  queue_.pop_back();
  std::size_t i = 0;
  const std::size_t n = queue_.size();
  while (true) {
    std::size_t l = 2 * i + 1, r = 2 * i + 2, m = i;
    if (l < n && firing_after(queue_[m].time, queue_[m].neuron, queue_[m].stream,
                              queue_[l].time, queue_[l].neuron, queue_[l].stream)) {
      m = l;
    }
    if (r < n && firing_after(queue_[m].time, queue_[m].neuron, queue_[m].stream,
                              queue_[r].time, queue_[r].neuron, queue_[r].stream)) {
      m = r;
    }
    if (m == i) break;
    std::swap(queue_[i], queue_[m]);
    i = m;
  }
  return top;
}

void Engine::schedule(std::uint32_t neuron, std::uint16_t stream, std::uint64_t k) {
  const auto& osc = net_.neurons[neuron].oscillators[stream];
  auto& ss = streams_[neuron][stream];
  double t;
  if (osc.mode == OscMode::periodic) {
    t = (osc.initial_phase + static_cast<double>(k)) / osc.frequency;
  } else {
    ss.clock += ss.rng.exponential(osc.frequency);
    t = ss.clock;
  }
  push({t, neuron, stream, k});
}

std::optional<Event> Engine::step() {
  const Firing f = pop();
  schedule(f.neuron, f.stream, f.k + 1);

  NeuronInstance& src = net_.neurons[f.neuron];
  if (!src.active) return std::nullopt;

  const std::uint8_t bit = net_.fsms[src.fsm].output_bit(src.state);
  const Event ev{f.time, f.neuron, f.stream, bit};

  for (const auto& wt : net_.targets(f.neuron, f.stream, bit)) {
    NeuronInstance& tgt = net_.neurons[wt.target];
    tgt.state = net_.fsms[tgt.fsm].next_state(tgt.state, wt.symbol);
  }
  for (auto r : rules_by_source_[f.neuron]) {
    const ControlRule& rule = net_.control_rules[r];
    if (rule.trigger_bit != bit) continue;
    for (auto t : rule.targets) {
      NeuronInstance& tgt = net_.neurons[t];
      if (rule.action == ControlAction::deactivate) {
        tgt.active = false;
      } else {
        tgt.active = true;
        tgt.state = net_.fsms[tgt.fsm].initial_state;
      }
    }
  }
  ++emitted_;
  return ev;
}

Trace run(const Network& network, const StopCondition& stop, std::uint64_t seed) {
  auto errors = network.validate();
  if (!errors.empty()) {
    throw std::invalid_argument("invalid network: " + errors.front());
  }
  if (network.total_streams() == 0) {
    throw std::invalid_argument("network has no oscillators");
  }

  Engine engine(network, seed);
  Trace trace;
  std::uint64_t per_neuron = 0;
  while (true) {
    if (stop.kind == StopCondition::Kind::duration &&
        engine.next_time() > stop.seconds) {
      break;
    }
    auto ev = engine.step();
    if (!ev) continue;
    trace.events.push_back(*ev);
    if (stop.kind == StopCondition::Kind::total_events &&
        engine.emitted_count() >= stop.count) {
      break;
    }
    if (stop.kind == StopCondition::Kind::neuron_events &&
        ev->source == stop.neuron && ++per_neuron >= stop.count) {
      break;
    }
  }
  return trace;
}

void assign_random_oscillators(Network& network, double freq_lo, double freq_hi,
                               OscMode mode, std::uint64_t seed) {
  if (!(freq_lo > 0.0) || freq_hi < freq_lo) {
    throw std::invalid_argument("invalid frequency range");
  }
  RngStream rng(mix_seed(seed, 0x05C111A70ULL));
  for (auto& n : network.neurons) {
    for (auto& osc : n.oscillators) {
      osc.frequency = freq_lo == freq_hi ? freq_lo : rng.uniform(freq_lo, freq_hi);
      osc.initial_phase = rng.uniform_closed();
      osc.mode = mode;
    }
  }
}

}  // namespace qpsim
