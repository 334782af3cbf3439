#include "qpsim/rbm.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "qpsim/fsm.hpp"
#include "qpsim/rng.hpp"

namespace qpsim {

namespace {

void check_model(const RbmModel& model) {
  if (model.nv < 1 || model.nh < 1) {
    throw std::invalid_argument("rbm must have at least one unit per side");
  }
  if (!(model.temperature > 0.0)) {
    throw std::invalid_argument("rbm temperature must be positive");
  }
  if (model.weights.size() != static_cast<std::size_t>(model.nv) ||
      model.visible_bias.size() != static_cast<std::size_t>(model.nv) ||
      model.hidden_bias.size() != static_cast<std::size_t>(model.nh)) {
    throw std::invalid_argument("rbm parameter dimensions inconsistent");
  }
  for (const auto& row : model.weights) {
    if (row.size() != static_cast<std::size_t>(model.nh)) {
      throw std::invalid_argument("rbm weight row has wrong length");
    }
  }
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

RbmModel random_rbm(int nv, int nh, int wmax, std::uint64_t seed) {
  if (nv < 1 || nh < 1 || wmax < 0) {
    throw std::invalid_argument("bad random rbm parameters");
  }
  RngStream rng(mix_seed(seed, 0x5BA4D0DELL));
  RbmModel model;
  model.nv = nv;
  model.nh = nh;
  model.weights.assign(nv, std::vector<int>(nh));
  model.visible_bias.resize(nv);
  model.hidden_bias.resize(nh);
  for (auto& row : model.weights) {
    for (auto& w : row) w = static_cast<int>(rng.integer(-wmax, wmax));
  }
  for (auto& b : model.visible_bias) b = static_cast<int>(rng.integer(-wmax, wmax));
  for (auto& b : model.hidden_bias) b = static_cast<int>(rng.integer(-wmax, wmax));
  return model;
}

double energy(const RbmModel& model, std::span<const std::uint8_t> v,
              std::span<const std::uint8_t> h) {
  check_model(model);
  if (v.size() != static_cast<std::size_t>(model.nv) ||
      h.size() != static_cast<std::size_t>(model.nh)) {
    throw std::invalid_argument("configuration dimensions do not match the model");
  }
  double e = 0.0;
  for (int i = 0; i < model.nv; ++i) {
    if (!v[i]) continue;
    e -= model.visible_bias[i];
    for (int j = 0; j < model.nh; ++j) {
      if (h[j]) e -= model.weights[i][j];
    }
  }
  for (int j = 0; j < model.nh; ++j) {
    if (h[j]) e -= model.hidden_bias[j];
  }
  return e;
}

ConfigDistribution exact_distribution(const RbmModel& model, int cap_bits) {
  check_model(model);
  const int bits = model.nv + model.nh;
  if (bits > cap_bits) {
    throw std::invalid_argument("model too large for exact enumeration (" +
                                std::to_string(bits) + " > " +
                                std::to_string(cap_bits) + " bits)");
  }

  const std::uint32_t n_v = 1u << model.nv;
  const std::uint32_t n_h = 1u << model.nh;
  ConfigDistribution dist;
  dist.nv = model.nv;
  dist.nh = model.nh;
  dist.prob.resize(static_cast<std::size_t>(n_v) * n_h);

  // -E = x.v + y.h + v W h; sweep v in gray-code order per h so each step is
  // a single-unit update.
  std::vector<double> wh(model.nv);
  for (std::uint32_t hc = 0; hc < n_h; ++hc) {
    double hterm = 0.0;
    for (int j = 0; j < model.nh; ++j) {
      if (hc >> j & 1u) hterm += model.hidden_bias[j];
    }
    for (int i = 0; i < model.nv; ++i) {
      double acc = 0.0;
      for (int j = 0; j < model.nh; ++j) {
        if (hc >> j & 1u) acc += model.weights[i][j];
      }
      wh[i] = acc + model.visible_bias[i];
    }
    double vterm = 0.0;
    std::uint32_t gray_prev = 0;
    for (std::uint32_t k = 0; k < n_v; ++k) {
      const std::uint32_t gray = k ^ (k >> 1);
      if (k > 0) {
        const std::uint32_t diff = gray ^ gray_prev;
        const int i = std::countr_zero(diff);
        vterm += (gray >> i & 1u) ? wh[i] : -wh[i];
      }
      gray_prev = gray;
      dist.prob[(static_cast<std::size_t>(hc) << model.nv) | gray] =
          (vterm + hterm) / model.temperature;  // log-weight for now
    }
  }

  const double max_log = *std::max_element(dist.prob.begin(), dist.prob.end());
  double z = 0.0;
  for (auto& p : dist.prob) {
    p = std::exp(p - max_log);
    z += p;
  }
  for (auto& p : dist.prob) p /= z;
  dist.log_z = std::log(z) + max_log;
  return dist;
}

SampleRecord gibbs_sample(const RbmModel& model, std::uint64_t n_sweeps,
                          std::uint64_t seed) {
  check_model(model);
  if (n_sweeps < 1) {
    throw std::invalid_argument("need at least one sweep");
  }
  RngStream rng(mix_seed(seed, 0x61BB5ULL));
  std::vector<std::uint8_t> v(model.nv, 0), h(model.nh, 0);
  SampleRecord record;
  record.nv = model.nv;
  record.nh = model.nh;
  record.entries.reserve(n_sweeps);
  const double t = model.temperature;
  for (std::uint64_t sweep = 0; sweep < n_sweeps; ++sweep) {
    for (int j = 0; j < model.nh; ++j) {
      double field = model.hidden_bias[j];
      for (int i = 0; i < model.nv; ++i) {
        if (v[i]) field += model.weights[i][j];
      }
      h[j] = rng.bernoulli(sigmoid(field / t)) ? 1 : 0;
    }
    for (int i = 0; i < model.nv; ++i) {
      double field = model.visible_bias[i];
      for (int j = 0; j < model.nh; ++j) {
        if (h[j]) field += model.weights[i][j];
      }
      v[i] = rng.bernoulli(sigmoid(field / t)) ? 1 : 0;
    }
    std::uint32_t config = 0;
    for (int i = 0; i < model.nv; ++i) config |= static_cast<std::uint32_t>(v[i]) << i;
    for (int j = 0; j < model.nh; ++j) {
      config |= static_cast<std::uint32_t>(h[j]) << (model.nv + j);
    }
    record.entries.push_back({static_cast<double>(sweep), config});
  }
  return record;
}

namespace {

// Streams 0..K-1 of `source`, carrying bit b, deliver symbol 1 to `target`
// on K/2 streams for b=0 and on K/2 + w streams for b=1; the rest deliver 0.
void wire_weight(Network& net, std::uint32_t source, std::uint32_t target,
                 int weight, int k) {
  for (int s = 0; s < k; ++s) {
    net.wire(source, static_cast<std::uint16_t>(s), 0, target,
             s < k / 2 ? 1 : 0);
    net.wire(source, static_cast<std::uint16_t>(s), 1, target,
             s < k / 2 + weight ? 1 : 0);
  }
}

}  // namespace

CompiledRbm compile_network(const RbmModel& model, int streams_per_neuron) {
  check_model(model);
  const int k = streams_per_neuron;
  if (k < 2 || k % 2 != 0) {
    throw std::invalid_argument("streams per neuron must be even and >= 2");
  }
  auto in_range = [k](int w) { return std::abs(w) <= k / 2; };
  for (const auto& row : model.weights) {
    for (int w : row) {
      if (!in_range(w)) throw std::invalid_argument("weight exceeds K/2");
    }
  }
  for (int b : model.visible_bias) {
    if (!in_range(b)) throw std::invalid_argument("visible bias exceeds K/2");
  }
  for (int b : model.hidden_bias) {
    if (!in_range(b)) throw std::invalid_argument("hidden bias exceeds K/2");
  }

  CompiledRbm compiled;
  compiled.streams_per_neuron = k;
  Network& net = compiled.network;
  net.fsms.push_back(counter_fsm(compiled.counter_depth));  // fsm 0: units
  net.fsms.push_back(constant_fsm(1));                      // fsm 1: bias sources

  const std::vector<OscillatorSpec> oscs(static_cast<std::size_t>(k));
  for (int i = 0; i < model.nv; ++i) {
    compiled.visible.push_back(net.add_neuron(0, oscs));
  }
  for (int j = 0; j < model.nh; ++j) {
    compiled.hidden.push_back(net.add_neuron(0, oscs));
  }
  compiled.visible_bias_neuron = net.add_neuron(1, oscs);
  compiled.hidden_bias_neuron = net.add_neuron(1, oscs);

  for (int i = 0; i < model.nv; ++i) {
    for (int j = 0; j < model.nh; ++j) {
      wire_weight(net, compiled.visible[i], compiled.hidden[j],
                  model.weights[i][j], k);
      wire_weight(net, compiled.hidden[j], compiled.visible[i],
                  model.weights[i][j], k);
    }
  }
  for (int j = 0; j < model.nh; ++j) {
    wire_weight(net, compiled.hidden_bias_neuron, compiled.hidden[j],
                model.hidden_bias[j], k);
  }
  for (int i = 0; i < model.nv; ++i) {
    wire_weight(net, compiled.visible_bias_neuron, compiled.visible[i],
                model.visible_bias[i], k);
  }
  return compiled;
}

double stream_count(const CompiledRbm& compiled) {
  const double k = compiled.streams_per_neuron;
  const double n_at_hidden = k * (static_cast<double>(compiled.visible.size()) + 1);
  const double n_at_visible = k * (static_cast<double>(compiled.hidden.size()) + 1);
  return 0.5 * (n_at_hidden + n_at_visible);
}

double effective_temperature(const CompiledRbm& compiled) {
  return stream_count(compiled) / (4.0 * compiled.counter_depth);
}

SampleRecorder::SampleRecorder(const CompiledRbm& compiled) {
  record_.nv = static_cast<int>(compiled.visible.size());
  record_.nh = static_cast<int>(compiled.hidden.size());
  nv_ = record_.nv;
  unit_of_neuron_.assign(compiled.network.neurons.size(), -1);
  int unit = 0;
  for (auto id : compiled.visible) unit_of_neuron_[id] = unit++;
  for (auto id : compiled.hidden) unit_of_neuron_[id] = unit++;
  last_bit_.assign(static_cast<std::size_t>(unit), 0);
  fired_.resize(unit);
  for (auto& f : fired_) {
    f.assign(static_cast<std::size_t>(compiled.streams_per_neuron), 0);
    total_ += f.size();
  }
  remaining_ = total_;
}

void SampleRecorder::observe(const Event& ev) {
  const int unit = unit_of_neuron_[ev.source];
  if (unit < 0) return;
  last_bit_[unit] = ev.bit;
  auto& flag = fired_[unit][ev.stream];
  if (!flag) {
    flag = 1;
    if (--remaining_ == 0) {
      std::uint32_t config = 0;
      for (std::size_t u = 0; u < last_bit_.size(); ++u) {
        config |= static_cast<std::uint32_t>(last_bit_[u]) << u;
      }
      record_.entries.push_back({ev.time, config});
      for (auto& f : fired_) std::fill(f.begin(), f.end(), 0);
      remaining_ = total_;
    }
  }
}

SampleRecord record_samples(const Trace& trace, const CompiledRbm& compiled) {
  SampleRecorder recorder(compiled);
  for (const auto& ev : trace.events) recorder.observe(ev);
  return recorder.take();
}

double kl_divergence(const SampleRecord& samples, const ConfigDistribution& exact) {
  if (samples.entries.empty()) {
    throw std::invalid_argument("empty sample record");
  }
  if (samples.nv != exact.nv || samples.nh != exact.nh) {
    throw std::invalid_argument("sample and distribution dimensions differ");
  }
  std::vector<std::uint32_t> counts(exact.prob.size(), 0);
  for (const auto& e : samples.entries) ++counts[e.config];
  const auto n = static_cast<double>(samples.entries.size());
  double kl = 0.0;
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] == 0) continue;
    const double q = counts[c] / n;
    kl += q * std::log(q / exact.prob[c]);
  }
  return kl;
}

}  // namespace qpsim
