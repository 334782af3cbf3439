#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qpsim/engine.hpp"

namespace qpsim {

/// Restricted Boltzmann machine with integer weights and biases.
/// E(v, h) = -x.v - y.h - v W h; P(v, h) = exp(-E/T) / Z.
struct RbmModel {
  int nv = 0;
  int nh = 0;
  std::vector<std::vector<int>> weights;  // nv rows of nh entries
  std::vector<int> visible_bias;
  std::vector<int> hidden_bias;
  double temperature = 1.0;
};

/// Weights and biases i.i.d. uniform on the integers {-wmax, ..., wmax}.
RbmModel random_rbm(int nv, int nh, int wmax, std::uint64_t seed);

double energy(const RbmModel& model, std::span<const std::uint8_t> v,
              std::span<const std::uint8_t> h);

/// Dense distribution over all 2^(nv+nh) configurations. Configuration index:
/// bit i is v_i for i < nv, bit nv+j is h_j.
struct ConfigDistribution {
  int nv = 0;
  int nh = 0;
  std::vector<double> prob;
  double log_z = 0.0;
};

/// Exhaustive enumeration with log-sum-exp stabilization. Refuses models
/// with more than cap_bits total units.
ConfigDistribution exact_distribution(const RbmModel& model, int cap_bits = 24);

struct SampleRecord {
  int nv = 0;
  int nh = 0;
  struct Entry {
    double time = 0.0;        // seconds, or sweep index for Gibbs samples
    std::uint32_t config = 0; // same bit layout as ConfigDistribution
  };
  std::vector<Entry> entries;
};

/// Block Gibbs sampler: all hidden given visible, then all visible given
/// hidden, one recorded configuration per full sweep. Units start at 0.
SampleRecord gibbs_sample(const RbmModel& model, std::uint64_t n_sweeps,
                          std::uint64_t seed);

/// The event-driven realization of an RBM: one depth-3 counter neuron with K
/// streams per unit, plus one always-1 bias neuron per side. Oscillator
/// frequencies/phases are placeholders until assign_random_oscillators runs.
struct CompiledRbm {
  Network network;
  std::vector<std::uint32_t> visible;
  std::vector<std::uint32_t> hidden;
  std::uint32_t visible_bias_neuron = 0;  // always-1 source feeding the visible side
  std::uint32_t hidden_bias_neuron = 0;   // always-1 source feeding the hidden side
  int streams_per_neuron = 0;
  int counter_depth = 3;
};

/// Wires the integer-weight connection scheme: per source->target weight w,
/// the K 0-bit streams split evenly between the target's ports and the K
/// 1-bit streams send K/2 + w to the 1-port and K/2 - w to the 0-port, in
/// both directions; biases come from the always-1 neurons. Requires K even
/// and all |weights|, |biases| <= K/2.
CompiledRbm compile_network(const RbmModel& model, int streams_per_neuron);

/// Incoming stream count N at a unit (K * (fan-in + 1)); averaged over the
/// two sides when nv != nh.
double stream_count(const CompiledRbm& compiled);

/// N / (4 d): the temperature whose logistic conditionals the compiled
/// network's depth-d activation matches to first order.
double effective_temperature(const CompiledRbm& compiled);

/// Online decentralized sample extraction: the latest bit of each unit is
/// the unit's value, and a sample is recorded each time every unit oscillator
/// has fired at least once since the previous sample.
class SampleRecorder {
 public:
  explicit SampleRecorder(const CompiledRbm& compiled);

  void observe(const Event& ev);
  const SampleRecord& record() const { return record_; }
  SampleRecord take() { return std::move(record_); }

 private:
  SampleRecord record_;
  std::vector<int> unit_of_neuron_;       // -1 for non-unit neurons
  std::vector<std::uint8_t> last_bit_;
  std::vector<std::vector<char>> fired_;
  std::size_t remaining_ = 0;
  std::size_t total_ = 0;
  int nv_ = 0;
};

/// Post-hoc version of SampleRecorder over a recorded trace.
SampleRecord record_samples(const Trace& trace, const CompiledRbm& compiled);

/// KL(empirical || exact) in nats, summed over observed configurations.
double kl_divergence(const SampleRecord& samples, const ConfigDistribution& exact);

}  // namespace qpsim
