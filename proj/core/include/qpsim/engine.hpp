#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qpsim/fsm.hpp"
#include "qpsim/rng.hpp"

namespace qpsim {

enum class OscMode { periodic, poisson };

/// Event source internal to a neuron. In periodic mode the k-th event time is
/// computed closed-form as (initial_phase + k) / frequency, never by
/// accumulating deltas.
struct OscillatorSpec {
  double frequency = 1.0;      // Hz, > 0
  double initial_phase = 1.0;  // fraction of a period, in (0, 1]
  OscMode mode = OscMode::periodic;
};

/// k-th event time of an oscillator (k = 0, 1, 2, ...). Poisson mode draws
/// k+1 exponential inter-arrival gaps from the given stream.
double next_event_time(const OscillatorSpec& osc, std::uint64_t k, RngStream& rng);

struct Event {
  double time = 0.0;
  std::uint32_t source = 0;  // neuron id
  std::uint16_t stream = 0;  // oscillator index within the source
  std::uint8_t bit = 0;
};

/// Strict total order used by the event queue: (time, source, stream).
inline bool event_before(const Event& a, const Event& b) {
  if (a.time != b.time) return a.time < b.time;
  if (a.source != b.source) return a.source < b.source;
  return a.stream < b.stream;
}

struct WireTarget {
  std::uint32_t target = 0;
  std::uint8_t symbol = 0;
};

struct NeuronInstance {
  std::uint32_t id = 0;
  std::uint32_t fsm = 0;  // index into Network::fsms
  int state = 0;
  std::vector<OscillatorSpec> oscillators;
  bool active = true;
};

enum class ControlAction : std::uint8_t {
  deactivate,      // clear the active gate of the targets
  activate_reset,  // set the gate and reset targets to their initial state
};

/// Side effect attached to a source neuron's emitted events, applied after
/// normal wiring delivery whenever the emitted bit matches trigger_bit.
struct ControlRule {
  std::uint32_t source = 0;
  std::uint8_t trigger_bit = 1;
  ControlAction action = ControlAction::deactivate;
  std::vector<std::uint32_t> targets;
};

class Network {
 public:
  std::vector<FsmSpec> fsms;
  std::vector<NeuronInstance> neurons;
  std::vector<ControlRule> control_rules;

  /// Adds a neuron with the given FSM index and oscillators; returns its id.
  std::uint32_t add_neuron(std::uint32_t fsm_index,
                           std::vector<OscillatorSpec> oscillators);

  void wire(std::uint32_t source, std::uint16_t stream, std::uint8_t bit,
            std::uint32_t target, std::uint8_t symbol);

  const std::vector<WireTarget>& targets(std::uint32_t source,
                                         std::uint16_t stream,
                                         std::uint8_t bit) const {
    return wiring_[source][stream][bit];
  }

  /// Flat (source, stream, bit, target, symbol) view of the wiring.
  std::vector<std::array<std::uint32_t, 5>> wiring_triples() const;

  std::size_t total_streams() const;

  /// One message per violated invariant; empty means valid.
  std::vector<std::string> validate() const;

 private:
  // wiring_[neuron][stream][bit] -> targets
  std::vector<std::vector<std::array<std::vector<WireTarget>, 2>>> wiring_;
};

struct StopCondition {
  enum class Kind { duration, total_events, neuron_events };
  Kind kind = Kind::duration;
  double seconds = 0.0;
  std::uint64_t count = 0;
  std::uint32_t neuron = 0;

  static StopCondition duration(double seconds);
  static StopCondition total_events(std::uint64_t n);
  static StopCondition neuron_events(std::uint32_t neuron, std::uint64_t n);
};

struct Trace {
  std::vector<Event> events;
};

/// Serial event-driven simulation over a network. Oscillator firings are kept
/// in a min-heap keyed by (time, neuron, stream); each step processes exactly
/// one firing and schedules that stream's next one. A firing of an inactive
/// neuron advances the stream but emits nothing.
class Engine {
 public:
  Engine(const Network& network, std::uint64_t seed);

  /// Time of the next pending firing.
  double next_time() const { return queue_.front().time; }

  /// Processes the earliest firing. Returns the emitted event, or nullopt if
  /// the source neuron is inactive.
  std::optional<Event> step();

  std::uint64_t emitted_count() const { return emitted_; }
  const Network& network() const { return net_; }

 private:
  struct Firing {
    double time;
    std::uint32_t neuron;
    std::uint16_t stream;
    std::uint64_t k;
  };
  struct StreamState {
    double clock = 0.0;  // accumulated time, poisson mode
    RngStream rng;
  };

  void push(Firing f);
  Firing pop();
  void schedule(std::uint32_t neuron, std::uint16_t stream, std::uint64_t k);

  Network net_;
  std::vector<Firing> queue_;  // binary heap
  std::vector<std::vector<StreamState>> streams_;
  std::vector<std::vector<std::uint32_t>> rules_by_source_;
  std::uint64_t emitted_ = 0;
};

/// Runs the network to the stop condition and records every emitted event.
/// Pure function of (network, stop, seed). Throws if the network is invalid.
Trace run(const Network& network, const StopCondition& stop, std::uint64_t seed);

/// Draws frequency (uniform [lo, hi]) and initial phase (uniform (0, 1]) for
/// every oscillator in the network, deterministically from the seed.
void assign_random_oscillators(Network& network, double freq_lo, double freq_hi,
                               OscMode mode, std::uint64_t seed);

}  // namespace qpsim
