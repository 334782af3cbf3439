#include "qpsim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qpsim {

BitSequence bit_sequence(const Trace& trace, std::uint32_t neuron) {
  BitSequence seq;
  for (const auto& ev : trace.events) {
    if (ev.source == neuron) {
      seq.times.push_back(ev.time);
      seq.bits.push_back(ev.bit);
    }
  }
  return seq;
}

double empirical_activation(const BitSequence& seq) {
  if (seq.bits.empty()) {
    throw std::invalid_argument("empty bit sequence");
  }
  double sum = 0.0;
  for (auto b : seq.bits) sum += b;
  return sum / static_cast<double>(seq.bits.size());
}

namespace {

struct Moments {
  double mean;
  double sd;  // biased (divide by n)
};

Moments moments(const std::vector<std::uint8_t>& x) {
  const auto n = static_cast<double>(x.size());
  double sum = 0.0;
  for (auto v : x) sum += v;
  const double mean = sum / n;
  double var = 0.0;
  for (auto v : x) var += (v - mean) * (v - mean);
  return {mean, std::sqrt(var / n)};
}

}  // namespace

CorrelationSeries autocorrelation(const BitSequence& seq, int max_lag) {
  const auto n = static_cast<std::int64_t>(seq.bits.size());
  if (max_lag < 0 || n <= max_lag) {
    throw std::invalid_argument("sequence shorter than max_lag");
  }
  CorrelationSeries series;
  series.min_lag = 0;
  series.null_band = 3.0 / std::sqrt(static_cast<double>(n));
  const auto [mean, sd] = moments(seq.bits);
  if (sd == 0.0) {
    series.zero_variance = true;
    series.r.assign(static_cast<std::size_t>(max_lag) + 1, 0.0);
    return series;
  }
  for (int lag = 0; lag <= max_lag; ++lag) {
    double acc = 0.0;
    for (std::int64_t i = 0; i + lag < n; ++i) {
      acc += (seq.bits[i] - mean) * (seq.bits[i + lag] - mean);
    }
    series.r.push_back(acc / (static_cast<double>(n) * sd * sd));
  }
  return series;
}

namespace {

// Index of the element of `times` closest to t; earlier index wins ties.
std::size_t nearest(const std::vector<double>& times, double t) {
  const auto it = std::lower_bound(times.begin(), times.end(), t);
  if (it == times.begin()) return 0;
  if (it == times.end()) return times.size() - 1;
  const auto hi = static_cast<std::size_t>(it - times.begin());
  const auto lo = hi - 1;
  return (t - times[lo] <= times[hi] - t) ? lo : hi;
}

}  // namespace

AlignedBits align_sequences(const BitSequence& a, const BitSequence& b) {
  if (a.bits.empty() || b.bits.empty()) {
    throw std::invalid_argument("cannot align an empty sequence");
  }
  AlignedBits out;
  if (a.size() <= b.size()) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      out.a.push_back(a.bits[i]);
      out.b.push_back(b.bits[nearest(b.times, a.times[i])]);
    }
  } else {
    for (std::size_t i = 0; i < b.size(); ++i) {
      out.a.push_back(a.bits[nearest(a.times, b.times[i])]);
      out.b.push_back(b.bits[i]);
    }
  }
  return out;
}

CorrelationSeries crosscorrelation(const BitSequence& a, const BitSequence& b,
                                   int max_lag) {
  const auto pair = align_sequences(a, b);
  const auto n = static_cast<std::int64_t>(pair.a.size());
  if (max_lag < 0 || n <= max_lag) {
    throw std::invalid_argument("aligned sequences shorter than max_lag");
  }
  CorrelationSeries series;
  series.min_lag = -max_lag;
  series.null_band = 3.0 / std::sqrt(static_cast<double>(n));
  const auto [ma, sa] = moments(pair.a);
  const auto [mb, sb] = moments(pair.b);
  if (sa == 0.0 || sb == 0.0) {
    series.zero_variance = true;
    series.r.assign(2 * static_cast<std::size_t>(max_lag) + 1, 0.0);
    return series;
  }
  for (int lag = -max_lag; lag <= max_lag; ++lag) {
    double acc = 0.0;
    for (std::int64_t i = std::max<std::int64_t>(0, -lag);
         i < n && i + lag < n; ++i) {
      acc += (pair.a[i] - ma) * (pair.b[i + lag] - mb);
    }
    series.r.push_back(acc / (static_cast<double>(n) * sa * sb));
  }
  return series;
}

}  // namespace qpsim
