#include "qpsim/markov.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace qpsim {

MarkovChain to_markov_chain(const FsmSpec& fsm, double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("input probability must be in [0, 1]");
  }
  if (fsm.alphabet_size != 2) {
    throw std::invalid_argument("markov reinterpretation requires a binary alphabet");
  }
  auto errors = validate(fsm);
  if (!errors.empty()) {
    throw std::invalid_argument("invalid fsm: " + errors.front());
  }

  MarkovChain chain;
  chain.state_count = fsm.state_count;
  chain.transition.assign(
      static_cast<std::size_t>(fsm.state_count) * fsm.state_count, 0.0);
  chain.output = fsm.output;
  chain.initial_state = fsm.initial_state;
  for (int s = 0; s < fsm.state_count; ++s) {
    chain.transition[static_cast<std::size_t>(s) * fsm.state_count +
                     fsm.next_state(s, 0)] += 1.0 - p;
    chain.transition[static_cast<std::size_t>(s) * fsm.state_count +
                     fsm.next_state(s, 1)] += p;
  }
  return chain;
}

namespace {

constexpr double kResidualTol = 1e-12;
constexpr int kDirectSolveLimit = 1000;

double residual(const MarkovChain& chain, const std::vector<double>& pi) {
  double worst = 0.0;
  for (int j = 0; j < chain.state_count; ++j) {
    double v = -pi[j];
    for (int i = 0; i < chain.state_count; ++i) {
      v += pi[i] * chain.at(i, j);
    }
    worst = std::max(worst, std::abs(v));
  }
  return worst;
}

bool deterministic(const MarkovChain& chain) {
  for (double v : chain.transition) {
    if (v != 0.0 && v != 1.0) return false;
  }
  return true;
}

// Walk the deterministic chain from the initial state and put uniform mass on
// the absorbed cycle.
std::vector<double> cycle_distribution(const MarkovChain& chain) {
  const int n = chain.state_count;
  std::vector<int> visit_order;
  std::vector<int> seen_at(n, -1);
  int s = chain.initial_state;
  while (seen_at[s] < 0) {
    seen_at[s] = static_cast<int>(visit_order.size());
    visit_order.push_back(s);
    for (int t = 0; t < n; ++t) {
      if (chain.at(s, t) == 1.0) {
        s = t;
        break;
      }
    }
  }
  std::vector<double> pi(n, 0.0);
  const int start = seen_at[s];
  const auto len = static_cast<double>(visit_order.size() - start);
  for (std::size_t i = start; i < visit_order.size(); ++i) {
    pi[visit_order[i]] = 1.0 / len;
  }
  return pi;
}

std::vector<double> solve_direct(const MarkovChain& chain) {
  const int n = chain.state_count;
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      a(i, j) = chain.at(j, i) - (i == j ? 1.0 : 0.0);
    }
  }
  a.row(n - 1).setOnes();  // normalization replaces one redundant equation
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(n - 1) = 1.0;
  Eigen::VectorXd x = a.fullPivLu().solve(b);
  return {x.data(), x.data() + n};
}

std::vector<double> solve_power(const MarkovChain& chain) {
  const int n = chain.state_count;
  std::vector<double> pi(n, 1.0 / n), next(n);
  for (int iter = 0; iter < 1000000; ++iter) {
    for (int j = 0; j < n; ++j) next[j] = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) next[j] += pi[i] * chain.at(i, j);
    }
    double delta = 0.0;
    for (int j = 0; j < n; ++j) {
      next[j] = 0.5 * (next[j] + pi[j]);  // damping handles periodic chains
      delta = std::max(delta, std::abs(next[j] - pi[j]));
    }
    pi.swap(next);
    if (delta < 1e-15) break;
  }
  return pi;
}

}  // namespace

std::vector<double> stationary(const MarkovChain& chain) {
  if (chain.state_count < 1) {
    throw std::invalid_argument("empty chain");
  }
  if (deterministic(chain)) {
    return cycle_distribution(chain);
  }

  auto pi = chain.state_count <= kDirectSolveLimit ? solve_direct(chain)
                                                   : solve_power(chain);
  double sum = 0.0;
  for (auto& v : pi) {
    if (std::abs(v) < 1e-14) v = 0.0;
    sum += v;
  }
  bool ok = std::abs(sum - 1.0) < 1e-9;
  for (double v : pi) ok = ok && v >= 0.0 && std::isfinite(v);
  ok = ok && residual(chain, pi) < kResidualTol;
  if (!ok) {
    throw std::runtime_error(
        "stationary distribution did not converge (reducible chain?)");
  }
  return pi;
}

ActivationCurve activation_curve(const FsmSpec& fsm, const std::vector<double>& p_grid) {
  ActivationCurve curve;
  curve.p.reserve(p_grid.size());
  curve.q.reserve(p_grid.size());
  for (double p : p_grid) {
    const auto pi = stationary(to_markov_chain(fsm, p));
    double q = 0.0;
    for (int s = 0; s < fsm.state_count; ++s) {
      if (fsm.output_bit(s)) q += pi[s];
    }
    curve.p.push_back(p);
    curve.q.push_back(q);
  }
  return curve;
}

}  // namespace qpsim
