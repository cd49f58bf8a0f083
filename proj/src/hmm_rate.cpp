#include "qmc/hmm_rate.hpp"

#include "qmc/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace qmc::hmm {

namespace {

// Neumaier-compensated running sum; block entropies add up to 2^24 terms.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

double neg_xlog2x(double v) { return v > 0.0 ? -v * std::log2(v) : 0.0; }

void check_length(int n, int min_n) {
  if (n < min_n || n > kMaxExactLength) {
    throw DimensionError("block length " + std::to_string(n) + " outside the exact range [" +
                         std::to_string(min_n) + ", " + std::to_string(kMaxExactLength) + "]");
  }
}

using Vec2 = std::array<double, 2>;

Vec2 predict(const MarkovMemory& mem, const Vec2& f) {
  return {f[0] * mem.p(0, 0) + f[1] * mem.p(1, 0), f[0] * mem.p(0, 1) + f[1] * mem.p(1, 1)};
}

// Per-length sums gathered by a single depth-first walk over flip prefixes.
struct BlockStats {
  std::vector<CompensatedSum> upper;    // sum_prefix P(prefix) h(next | prefix)
  std::vector<CompensatedSum> lower;    // same, also conditioned on S_1
  std::vector<CompensatedSum> entropy;  // H(X_1..X_m)
};

class BracketWalker {
 public:
  BracketWalker(const FlipProcess& process, int n)
      : process_(process), n_(n), gamma_(process.memory().stationary()) {
    stats_.upper.resize(n);
    stats_.lower.resize(n);
    stats_.entropy.resize(n);
  }

  BlockStats run() {
    // Hidden-state distribution at the next use, conditioned on S_1 = s.
    visit(0, {Vec2{1.0, 0.0}, Vec2{0.0, 1.0}});
    return std::move(stats_);
  }

 private:
  void visit(int depth, const std::array<Vec2, 2>& pred) {
    // q[s][k] = P(prefix, next = k | S_1 = s)
    double q[2][2];
    for (int s = 0; s < 2; ++s) {
      for (int k = 0; k < 2; ++k) {
        q[s][k] = pred[s][0] * process_.emission(0, k) + pred[s][1] * process_.emission(1, k);
      }
    }
    const double joint[2] = {gamma_[0] * q[0][0] + gamma_[1] * q[1][0],
                             gamma_[0] * q[0][1] + gamma_[1] * q[1][1]};
    const double prefix = joint[0] + joint[1];
    if (prefix <= 0.0) return;

    stats_.upper[depth].add(prefix * binary_entropy(joint[1] / prefix));
    for (int s = 0; s < 2; ++s) {
      const double ps = q[s][0] + q[s][1];
      if (ps > 0.0) stats_.lower[depth].add(gamma_[s] * ps * binary_entropy(q[s][1] / ps));
    }
    stats_.entropy[depth].add(neg_xlog2x(joint[0]));
    stats_.entropy[depth].add(neg_xlog2x(joint[1]));

    if (depth + 1 == n_) return;
    const MarkovMemory& mem = process_.memory();
    for (int k = 0; k < 2; ++k) {
      if (joint[k] <= 0.0) continue;
      std::array<Vec2, 2> next;
      for (int s = 0; s < 2; ++s) {
        const Vec2 f = {pred[s][0] * process_.emission(0, k), pred[s][1] * process_.emission(1, k)};
        next[s] = predict(mem, f);
      }
      visit(depth + 1, next);
    }
  }

  const FlipProcess& process_;
  int n_;
  Distribution2 gamma_;
  BlockStats stats_;
};

void fill_measure(const FlipProcess& process, const Vec2& pred, int depth, int n,
                  std::size_t index, std::vector<double>& out) {
  for (int k = 0; k < 2; ++k) {
    const Vec2 f = {pred[0] * process.emission(0, k), pred[1] * process.emission(1, k)};
    const std::size_t child = (index << 1) | static_cast<std::size_t>(k);
    if (depth + 1 == n) {
      out[child] = f[0] + f[1];
    } else if (f[0] + f[1] > 0.0) {
      fill_measure(process, predict(process.memory(), f), depth + 1, n, child, out);
    }
  }
}

}  // namespace

FlipProcess::FlipProcess(const ChannelParams& params)
    : FlipProcess(MarkovMemory::symmetric(params.mu()), params.x0(), params.x1()) {}

FlipProcess::FlipProcess(MarkovMemory memory, double x0, double x1) : memory_(std::move(memory)) {
  const double x[2] = {x0, x1};
  for (int i = 0; i < 2; ++i) {
    if (!(x[i] >= -1.0 - 1e-12 && x[i] <= 1.0 + 1e-12)) {
      throw ParameterError("branch parameter x" + std::to_string(i) +
                           " must lie in [-1, 1] for valid flip probabilities");
    }
    emission_[i][0] = std::clamp((1.0 + x[i]) / 2.0, 0.0, 1.0);
    emission_[i][1] = std::clamp((1.0 - x[i]) / 2.0, 0.0, 1.0);
  }
}

std::vector<double> path_measure(const FlipProcess& process, int n,
                                 std::optional<Distribution2> initial) {
  check_length(n, 1);
  const Distribution2 init = initial.value_or(process.memory().stationary());
  std::vector<double> out(std::size_t{1} << n, 0.0);
  fill_measure(process, {init[0], init[1]}, 0, n, 0, out);
  return out;
}

double block_entropy(const FlipProcess& process, int n) {
  check_length(n, 1);
  return BracketWalker(process, n).run().entropy[n - 1].value();
}

std::vector<EntropyRateBracket> entropy_rate_brackets(const FlipProcess& process, int n) {
  check_length(n, 1);
  const BlockStats stats = BracketWalker(process, n).run();
  std::vector<EntropyRateBracket> out(n);
  for (int m = 1; m <= n; ++m) {
    EntropyRateBracket& b = out[m - 1];
    b.block_length = m;
    b.upper = stats.upper[m - 1].value();
    b.lower = stats.lower[m - 1].value();
  }
  return out;
}

EntropyRateBracket entropy_rate_bracket(const FlipProcess& process, int n) {
  check_length(n, 1);
  return entropy_rate_brackets(process, n).back();
}

ProductCapacity product_state_capacity(const FlipProcess& process, int n_max, double tolerance) {
  check_length(n_max, 1);
  if (!(tolerance >= 0.0)) throw std::invalid_argument("tolerance must be non-negative");

  ProductCapacity out;
  int depth = std::min(n_max, 8);
  std::vector<EntropyRateBracket> brackets;
  for (;;) {
    brackets = entropy_rate_brackets(process, depth);
    const auto hit = std::find_if(brackets.begin(), brackets.end(), [&](const auto& b) {
      return 0.5 * b.width() <= tolerance;
    });
    if (hit != brackets.end()) {
      brackets.erase(std::next(hit), brackets.end());
      out.converged = true;
      break;
    }
    if (depth == n_max) break;
    depth = std::min(n_max, depth + 4);
  }
  const EntropyRateBracket& last = brackets.back();
  out.n_used = last.block_length;
  out.capacity = 1.0 - last.estimate();
  out.lower = 1.0 - last.upper;
  out.upper = 1.0 - last.lower;
  out.history = std::move(brackets);
  return out;
}

double markov_entropy_rate(const MarkovMemory& memory) {
  const Distribution2& g = memory.stationary();
  return g[0] * binary_entropy(memory.p(0, 1)) + g[1] * binary_entropy(memory.p(1, 0));
}

double capacity_upper_bound(const FlipProcess& process, int n_max, double tolerance) {
  const ProductCapacity pc = product_state_capacity(process, n_max, tolerance);
  return std::min(1.0, pc.upper + markov_entropy_rate(process.memory()));
}

}  // namespace qmc::hmm
