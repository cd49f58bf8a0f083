#pragma once

// The flip process of the memory channel as a hidden Markov model.
//
// Feed computational-basis inputs through the channel and record, per use,
// whether the output bit was flipped. The hidden state is the memory (which
// depolarizing branch acted); branch i flips with probability (1 - x_i)/2.
// The block measure of flip strings is exactly the spectrum of the n-use
// output on a basis input, so the product-state capacity is one minus the
// entropy rate of this process.
//
// Flip strings are indexed with the first use as the most significant bit.

#include "qmc/channel.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace qmc::hmm {

// Largest block length handled by exact enumeration.
inline constexpr int kMaxExactLength = 24;

class FlipProcess {
 public:
  explicit FlipProcess(const ChannelParams& params);
  FlipProcess(MarkovMemory memory, double x0, double x1);

  const MarkovMemory& memory() const { return memory_; }
  // P(flip symbol = k | hidden state = i).
  double emission(int state, int symbol) const { return emission_[state][symbol]; }

 private:
  MarkovMemory memory_;
  double emission_[2][2];
};

struct EntropyRateBracket {
  double lower = 0.0;  // H(X_n | X_1..X_{n-1}, S_1)
  double upper = 0.0;  // H(X_n | X_1..X_{n-1})
  int block_length = 0;
  double estimate() const { return 0.5 * (lower + upper); }
  double width() const { return upper - lower; }
};

// Probability of every flip string of length n, by the forward algorithm.
// initial overrides the distribution of the hidden state at the first use.
std::vector<double> path_measure(const FlipProcess& process, int n,
                                 std::optional<Distribution2> initial = std::nullopt);

// H(X_1..X_n) in bits.
double block_entropy(const FlipProcess& process, int n);

// Brackets for block lengths 1..n in one pass; element m-1 holds length m.
// Length 1 is the trivial bracket H(X_1 | S_1) <= rate <= H(X_1).
std::vector<EntropyRateBracket> entropy_rate_brackets(const FlipProcess& process, int n);

EntropyRateBracket entropy_rate_bracket(const FlipProcess& process, int n);

struct ProductCapacity {
  double capacity = 0.0;  // 1 - midpoint of the entropy-rate bracket
  double lower = 0.0;     // 1 - upper entropy-rate bound
  double upper = 0.0;     // 1 - lower entropy-rate bound
  int n_used = 0;
  bool converged = false;
  // Brackets for every block length examined, in increasing order.
  std::vector<EntropyRateBracket> history;
};

// Grows the block length until the half-width of the bracket is at most
// tolerance or n_max is reached. Not reaching the tolerance is reported
// through `converged`, not as an error.
ProductCapacity product_state_capacity(const FlipProcess& process, int n_max, double tolerance);

// sum_i g_i H(row i of E), in bits per symbol.
double markov_entropy_rate(const MarkovMemory& memory);

// min(1, upper product-capacity bound + memory entropy rate).
double capacity_upper_bound(const FlipProcess& process, int n_max, double tolerance);

}  // namespace qmc::hmm
