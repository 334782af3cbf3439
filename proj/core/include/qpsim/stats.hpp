#pragma once

#include <cstdint>
#include <vector>

#include "qpsim/engine.hpp"

namespace qpsim {

/// Timestamped output bits of one neuron, in time order.
struct BitSequence {
  std::vector<double> times;
  std::vector<std::uint8_t> bits;

  std::size_t size() const { return bits.size(); }
};

/// Extracts a neuron's (time, bit) sequence from a trace.
BitSequence bit_sequence(const Trace& trace, std::uint32_t neuron);

/// Mean of the bits. Throws on an empty sequence.
double empirical_activation(const BitSequence& seq);

struct CorrelationSeries {
  int min_lag = 0;
  std::vector<double> r;      // values for lags min_lag .. min_lag + r.size() - 1
  double null_band = 0.0;     // +-3/sqrt(n), the i.i.d. significance band
  bool zero_variance = false; // set instead of producing NaNs

  double at(int lag) const { return r[static_cast<std::size_t>(lag - min_lag)]; }
  int max_lag() const { return min_lag + static_cast<int>(r.size()) - 1; }
};

/// Pearson autocorrelation of the bit sequence with its lag-shifted self,
/// mean-centered and normalized by n (biased) for lags 0..max_lag.
CorrelationSeries autocorrelation(const BitSequence& seq, int max_lag);

/// Equal-length bit arrays pairing each event of the shorter sequence with
/// the temporally closest event of the other (ties broken toward the earlier
/// event). Arrays are returned in argument order.
struct AlignedBits {
  std::vector<std::uint8_t> a;
  std::vector<std::uint8_t> b;
};
AlignedBits align_sequences(const BitSequence& a, const BitSequence& b);

/// Pearson cross-correlation of the aligned arrays over lags -max_lag..max_lag.
CorrelationSeries crosscorrelation(const BitSequence& a, const BitSequence& b,
                                   int max_lag);

}  // namespace qpsim
