#pragma once

// The Markov-switched depolarizing memory channel.
//
// A classical two-state memory picks, for every channel use, which of two
// depolarizing maps  rho -> x_i rho + (1 - x_i) I/2  acts on the current
// qubit. The n-use channel is the mixture over memory paths i_0..i_{n-1}
// weighted by  w(path) = g_{i_0} p_{i_0 i_1} ... p_{i_{n-2} i_{n-1}},  with
// the memory marginalized out at the end of each block.

#include "qmc/linalg.hpp"

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qmc {

// Branch-parameter range enforced by ChannelParams and MemoryChannel.
enum class ParamDomain {
  // x in [-1/3, 1]: the depolarizing map is completely positive.
  completely_positive,
  // x in [-1, 1]: positive and trace preserving on a single qubit only.
  // Entangled inputs may then produce non-positive outputs, which surface as
  // InvalidStateError when their spectrum is taken.
  positive_map,
};

double min_branch_parameter(ParamDomain domain);

// Symmetric-memory parameterization (mu, a, d) with a = x0 + x1, d = x0 - x1.
class ChannelParams {
 public:
  static ChannelParams make(double mu, double a, double d,
                            ParamDomain domain = ParamDomain::completely_positive);
  static ChannelParams from_branches(double mu, double x0, double x1,
                                     ParamDomain domain = ParamDomain::completely_positive);

  // Human-readable description of the first violated bound, if any.
  static std::optional<std::string> violation(double mu, double a, double d,
                                              ParamDomain domain = ParamDomain::completely_positive);

  double mu() const { return mu_; }
  double a() const { return a_; }
  double d() const { return d_; }
  double x0() const { return 0.5 * (a_ + d_); }
  double x1() const { return 0.5 * (a_ - d_); }
  ParamDomain domain() const { return domain_; }

 private:
  ChannelParams(double mu, double a, double d, ParamDomain domain)
      : mu_(mu), a_(a), d_(d), domain_(domain) {}

  double mu_;
  double a_;
  double d_;
  ParamDomain domain_;
};

using Distribution2 = std::array<double, 2>;

// Ergodic two-state Markov chain. transition(i, j) = P(next = j | current = i).
class MarkovMemory {
 public:
  explicit MarkovMemory(const Eigen::Matrix2d& transition);
  // ((1+mu)/2, (1-mu)/2; (1-mu)/2, (1+mu)/2), mu in (-1, 1).
  static MarkovMemory symmetric(double mu);

  const Eigen::Matrix2d& transition() const { return transition_; }
  double p(int from, int to) const { return transition_(from, to); }
  const Distribution2& stationary() const { return stationary_; }
  // The non-unit eigenvalue, trace(E) - 1.
  double second_eigenvalue() const { return transition_.trace() - 1.0; }

  Distribution2 step(const Distribution2& dist) const;

 private:
  Eigen::Matrix2d transition_;
  Distribution2 stationary_;
};

struct ChannelOptions {
  int max_qubits = 10;
};

class MemoryChannel {
 public:
  explicit MemoryChannel(const ChannelParams& params, ChannelOptions options = {});
  MemoryChannel(MarkovMemory memory, double x0, double x1,
                ParamDomain domain = ParamDomain::completely_positive,
                ChannelOptions options = {});

  const MarkovMemory& memory() const { return memory_; }
  double x(int branch) const { return x_[branch]; }
  ParamDomain domain() const { return domain_; }
  const ChannelOptions& options() const { return options_; }

 private:
  MarkovMemory memory_;
  std::array<double, 2> x_;
  ParamDomain domain_;
  ChannelOptions options_;
};

// x*rho + (1-x)*I/2 on a single qubit; x must lie in [-1/3, 1].
DensityMatrix depolarize(const DensityMatrix& rho, double x);

// Applies branch path[k] to qubit k for every k.
DensityMatrix apply_branch(const DensityMatrix& rho, std::span<const int> path,
                           const MemoryChannel& channel);

// Weights of all 2^n memory paths, indexed with path[0] as the most
// significant bit. initial is the distribution of the branch used on the
// first qubit (defaults to the stationary distribution).
std::vector<double> path_weights(const MarkovMemory& memory, int n,
                                 std::optional<Distribution2> initial = std::nullopt);

// The n-use channel by explicit enumeration of every memory path.
DensityMatrix apply_gamma_n(const DensityMatrix& rho, const MemoryChannel& channel,
                            std::optional<Distribution2> initial = std::nullopt);

// Same map via a forward pass over the memory state: two operator
// accumulators, one per current memory state, folded qubit by qubit.
DensityMatrix apply_gamma_n_fast(const DensityMatrix& rho, const MemoryChannel& channel,
                                 std::optional<Distribution2> initial = std::nullopt);

// Trace distance between the n-use outputs for the two extreme initial
// memories (1,0) and (0,1). The memory state is updated before it selects the
// first branch, so the first-use branch distributions are the rows of E.
//
// rho may cover m <= n qubits; it is fed to the last m uses, preceded by
// n - m maximally mixed inputs. Growing n for a fixed rho therefore delays
// the informative uses and the gap shrinks by |second eigenvalue| per step.
double forgetfulness_gap(const MemoryChannel& channel, int n, const DensityMatrix& rho);

// Path-averaged entropy of the individual branch outputs,
// sum_path w(path) S(branch_path(rho)).
double branch_averaged_entropy(const DensityMatrix& rho, const MemoryChannel& channel);

// Shannon entropy of the path distribution over n uses.
double path_entropy(const MarkovMemory& memory, int n);

}  // namespace qmc
