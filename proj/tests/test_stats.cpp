#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "qpsim/rng.hpp"
#include "qpsim/stats.hpp"

using namespace qpsim;

namespace {

BitSequence periodic_bits(double freq, double seconds,
                          const std::vector<std::uint8_t>& pattern) {
  BitSequence seq;
  std::size_t i = 0;
  for (int k = 0;; ++k) {
    const double t = (1.0 + k) / freq;
    if (t > seconds) break;
    seq.times.push_back(t);
    seq.bits.push_back(pattern[i++ % pattern.size()]);
  }
  return seq;
}

}  // namespace

TEST_CASE("empirical activation is the 1-fraction") {
  BitSequence seq;
  seq.times = {0.1, 0.2, 0.3, 0.4};
  seq.bits = {1, 0, 1, 1};
  CHECK(empirical_activation(seq) == 0.75);
  CHECK_THROWS_AS(empirical_activation(BitSequence{}), std::invalid_argument);
}

TEST_CASE("autocorrelation at lag zero is one") {
  BitSequence seq = periodic_bits(100.0, 50.0, {1, 0, 0, 1, 1, 0, 1});
  const auto series = autocorrelation(seq, 20);
  CHECK(series.min_lag == 0);
  CHECK(series.at(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(series.max_lag() == 20);
}

TEST_CASE("autocorrelation against a hand computation") {
  BitSequence seq;
  seq.bits = {1, 0, 1, 0};
  seq.times = {1, 2, 3, 4};
  const auto series = autocorrelation(seq, 1);
  // mean 0.5, centered {.5,-.5,.5,-.5}: lag-1 sum = -0.75, biased var = 0.25.
  CHECK(series.at(1) == doctest::Approx(-0.75).epsilon(1e-12));
}

TEST_CASE("alternating bits give strong oscillating autocorrelation") {
  BitSequence seq = periodic_bits(100.0, 100.0, {1, 0});
  const auto series = autocorrelation(seq, 6);
  for (int lag = 1; lag <= 6; ++lag) {
    CHECK(series.at(lag) * (lag % 2 ? -1.0 : 1.0) > 0.99);
  }
}

TEST_CASE("constant sequences set the zero-variance flag") {
  BitSequence seq = periodic_bits(100.0, 10.0, {1});
  const auto series = autocorrelation(seq, 5);
  CHECK(series.zero_variance);
  for (int lag = 0; lag <= 5; ++lag) CHECK(series.at(lag) == 0.0);
}

TEST_CASE("iid bits stay inside the three-sigma null band") {
  RngStream rng(31);
  BitSequence seq;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    seq.times.push_back(i * 0.01);
    seq.bits.push_back(rng.bernoulli(0.5) ? 1 : 0);
  }
  const auto series = autocorrelation(seq, 50);
  CHECK(series.null_band == doctest::Approx(3.0 / std::sqrt(n)));
  int inside = 0;
  for (int lag = 1; lag <= 50; ++lag) {
    if (std::fabs(series.at(lag)) < series.null_band) ++inside;
  }
  CHECK(inside >= 49);  // ~0.3% expected breach rate per lag
}

TEST_CASE("alignment picks the nearest event, earlier on ties") {
  BitSequence a;  // 2 events
  a.times = {1.0, 2.0};
  a.bits = {1, 0};
  BitSequence b;  // richer sequence
  b.times = {0.4, 1.1, 1.5, 2.6};
  b.bits = {0, 1, 0, 1};
  const auto pair = align_sequences(a, b);
  REQUIRE(pair.a.size() == 2);
  CHECK(pair.b[0] == 1);  // 1.0 -> 1.1
  CHECK(pair.b[1] == 0);  // 2.0 -> 1.5 (distance 0.5 vs 0.6)

  BitSequence c;
  c.times = {0.5, 1.5};
  c.bits = {1, 0};
  const auto tie = align_sequences(a, c);
  CHECK(tie.b[0] == 1);  // 1.0 is equidistant; earlier event wins
}

TEST_CASE("alignment matches a brute-force nearest search") {
  const auto a = periodic_bits(45.0, 10.0, {1, 0, 1, 1, 0});
  const auto b = periodic_bits(40.0, 10.0, {0, 1, 1, 0});
  const auto pair = align_sequences(a, b);
  REQUIRE(pair.a.size() == b.size());  // shorter side drives
  CHECK(b.size() == 400);
  for (std::size_t i = 0; i < b.size(); ++i) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < a.size(); ++j) {
      const double dj = std::fabs(a.times[j] - b.times[i]);
      const double db = std::fabs(a.times[best] - b.times[i]);
      if (dj < db) best = j;
    }
    CHECK(pair.a[i] == a.bits[best]);
    CHECK(std::fabs(a.times[best] - b.times[i]) <= 0.5 / 40.0 + 1e-12);
  }
}

TEST_CASE("crosscorrelation of a sequence with itself peaks at lag zero") {
  RngStream rng(5);
  BitSequence seq;
  for (int i = 0; i < 5000; ++i) {
    seq.times.push_back(i * 0.02);
    seq.bits.push_back(rng.bernoulli(0.4) ? 1 : 0);
  }
  const auto series = crosscorrelation(seq, seq, 10);
  CHECK(series.min_lag == -10);
  CHECK(series.at(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(series.r.size() == 21);
  for (int lag = 1; lag <= 10; ++lag) {
    CHECK(std::fabs(series.at(lag)) < 0.1);
    CHECK(std::fabs(series.at(-lag)) < 0.1);
  }
}

TEST_CASE("correlation inputs are validated") {
  BitSequence tiny;
  tiny.times = {0.1, 0.2};
  tiny.bits = {1, 0};
  CHECK_THROWS_AS(autocorrelation(tiny, 5), std::invalid_argument);
  CHECK_THROWS_AS(autocorrelation(tiny, -1), std::invalid_argument);
  CHECK_THROWS_AS(align_sequences(tiny, BitSequence{}), std::invalid_argument);
}
