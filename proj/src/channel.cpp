#include "qmc/channel.hpp"

#include "qmc/errors.hpp"

#include <cmath>
#include <sstream>

namespace qmc {

namespace {

// Slack on range boundaries so that e.g. a = 2/3, d = -4/3 (x0 = -1/3 up to
// rounding) stays admissible.
constexpr double kBoundarySlack = 1e-12;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

std::optional<std::string> branch_violation(const char* name, double x, ParamDomain domain) {
  const double lo = min_branch_parameter(domain);
  if (!std::isfinite(x) || x < lo - kBoundarySlack || x > 1.0 + kBoundarySlack) {
    return std::string(name) + " = " + fmt(x) + " outside [" + fmt(lo) + ", 1]" +
           (domain == ParamDomain::completely_positive ? " (complete positivity)"
                                                       : " (positivity)");
  }
  return std::nullopt;
}

void check_initial(const Distribution2& init) {
  if (!(init[0] >= 0.0 && init[1] >= 0.0) || std::abs(init[0] + init[1] - 1.0) > 1e-12) {
    throw ParameterError("initial memory must be a probability pair");
  }
}

int checked_qubits(const DensityMatrix& rho, const MemoryChannel& channel) {
  const int n = rho.num_qubits();
  if (n < 1) throw DimensionError("channel input must have at least one qubit");
  if (n > channel.options().max_qubits) {
    throw DimensionError("input has " + std::to_string(n) + " qubits, limit is " +
                         std::to_string(channel.options().max_qubits));
  }
  return n;
}

}  // namespace

double min_branch_parameter(ParamDomain domain) {
  return domain == ParamDomain::completely_positive ? -1.0 / 3.0 : -1.0;
}

std::optional<std::string> ChannelParams::violation(double mu, double a, double d,
                                                    ParamDomain domain) {
  if (!std::isfinite(mu) || !(mu > -1.0 && mu < 1.0)) {
    return "mu = " + fmt(mu) + " outside (-1, 1)";
  }
  if (!std::isfinite(a) || !std::isfinite(d)) return std::string("a and d must be finite");
  if (auto v = branch_violation("x0", 0.5 * (a + d), domain)) return v;
  if (auto v = branch_violation("x1", 0.5 * (a - d), domain)) return v;
  return std::nullopt;
}

ChannelParams ChannelParams::make(double mu, double a, double d, ParamDomain domain) {
  if (auto v = violation(mu, a, d, domain)) throw ParameterError(*v);
  return ChannelParams(mu, a, d, domain);
}

ChannelParams ChannelParams::from_branches(double mu, double x0, double x1, ParamDomain domain) {
  return make(mu, x0 + x1, x0 - x1, domain);
}

MarkovMemory::MarkovMemory(const Eigen::Matrix2d& transition) : transition_(transition) {
  if (!transition_.allFinite() || (transition_.array() < 0.0).any()) {
    throw ParameterError("transition matrix entries must be finite and non-negative");
  }
  for (int i = 0; i < 2; ++i) {
    if (std::abs(transition_.row(i).sum() - 1.0) > 1e-14) {
      throw ParameterError("transition matrix row " + std::to_string(i) + " does not sum to 1");
    }
  }
  if (!(std::abs(second_eigenvalue()) < 1.0)) {
    throw ParameterError("transition matrix is not ergodic (second eigenvalue " +
                         fmt(second_eigenvalue()) + ")");
  }
  // Left eigenvector for eigenvalue 1: proportional to (p10, p01).
  const double p01 = transition_(0, 1);
  const double p10 = transition_(1, 0);
  stationary_ = {p10 / (p01 + p10), p01 / (p01 + p10)};
  const Distribution2 next = step(stationary_);
  if (std::abs(next[0] - stationary_[0]) > 1e-12) {
    throw ParameterError("stationary distribution did not converge");
  }
}

MarkovMemory MarkovMemory::symmetric(double mu) {
  if (!std::isfinite(mu) || !(mu > -1.0 && mu < 1.0)) {
    throw ParameterError("mu = " + fmt(mu) + " outside (-1, 1)");
  }
  Eigen::Matrix2d e;
  e << (1.0 + mu) / 2.0, (1.0 - mu) / 2.0, (1.0 - mu) / 2.0, (1.0 + mu) / 2.0;
  return MarkovMemory(e);
}

Distribution2 MarkovMemory::step(const Distribution2& dist) const {
  return {dist[0] * transition_(0, 0) + dist[1] * transition_(1, 0),
          dist[0] * transition_(0, 1) + dist[1] * transition_(1, 1)};
}

MemoryChannel::MemoryChannel(const ChannelParams& params, ChannelOptions options)
    : MemoryChannel(MarkovMemory::symmetric(params.mu()), params.x0(), params.x1(),
                    params.domain(), options) {}

MemoryChannel::MemoryChannel(MarkovMemory memory, double x0, double x1, ParamDomain domain,
                             ChannelOptions options)
    : memory_(std::move(memory)), x_{x0, x1}, domain_(domain), options_(options) {
  if (auto v = branch_violation("x0", x0, domain)) throw ParameterError(*v);
  if (auto v = branch_violation("x1", x1, domain)) throw ParameterError(*v);
  if (options_.max_qubits < 1) throw ParameterError("max_qubits must be positive");
}

DensityMatrix depolarize(const DensityMatrix& rho, double x) {
  if (rho.num_qubits() != 1) throw DimensionError("depolarize acts on a single qubit");
  if (auto v = branch_violation("x", x, ParamDomain::completely_positive)) {
    throw ParameterError(*v);
  }
  CMatrix m = rho.matrix();
  kernel::depolarize_qubit(m, 1, 0, x);
  return DensityMatrix(std::move(m));
}

DensityMatrix apply_branch(const DensityMatrix& rho, std::span<const int> path,
                           const MemoryChannel& channel) {
  const int n = rho.num_qubits();
  if (static_cast<int>(path.size()) != n) {
    throw DimensionError("path length " + std::to_string(path.size()) + " does not match " +
                         std::to_string(n) + " qubits");
  }
  CMatrix m = rho.matrix();
  for (int k = 0; k < n; ++k) {
    if (path[k] != 0 && path[k] != 1) throw std::invalid_argument("path entries must be 0 or 1");
    kernel::depolarize_qubit(m, n, k, channel.x(path[k]));
  }
  return DensityMatrix(std::move(m));
}

std::vector<double> path_weights(const MarkovMemory& memory, int n,
                                 std::optional<Distribution2> initial) {
  if (n < 1 || n > 30) throw DimensionError("path_weights: n out of range");
  const Distribution2 init = initial.value_or(memory.stationary());
  check_initial(init);
  const std::size_t count = std::size_t{1} << n;
  std::vector<double> w(count);
  for (std::size_t path = 0; path < count; ++path) {
    int prev = static_cast<int>((path >> (n - 1)) & 1);
    double weight = init[prev];
    for (int k = 1; k < n; ++k) {
      const int cur = static_cast<int>((path >> (n - 1 - k)) & 1);
      weight *= memory.p(prev, cur);
      prev = cur;
    }
    w[path] = weight;
  }
  return w;
}

DensityMatrix apply_gamma_n(const DensityMatrix& rho, const MemoryChannel& channel,
                            std::optional<Distribution2> initial) {
  const int n = checked_qubits(rho, channel);
  const std::vector<double> weights = path_weights(channel.memory(), n, initial);
  CMatrix out = CMatrix::Zero(rho.dim(), rho.dim());
  std::vector<int> path(n);
  for (std::size_t idx = 0; idx < weights.size(); ++idx) {
    if (weights[idx] == 0.0) continue;
    for (int k = 0; k < n; ++k) path[k] = static_cast<int>((idx >> (n - 1 - k)) & 1);
    out += weights[idx] * apply_branch(rho, path, channel).matrix();
  }
  return DensityMatrix(std::move(out));
}

DensityMatrix apply_gamma_n_fast(const DensityMatrix& rho, const MemoryChannel& channel,
                                 std::optional<Distribution2> initial) {
  const int n = checked_qubits(rho, channel);
  const Distribution2 init = initial.value_or(channel.memory().stationary());
  check_initial(init);
  const MarkovMemory& mem = channel.memory();

  std::array<CMatrix, 2> acc;
  for (int s = 0; s < 2; ++s) {
    acc[s] = init[s] * rho.matrix();
    kernel::depolarize_qubit(acc[s], n, 0, channel.x(s));
  }
  for (int k = 1; k < n; ++k) {
    std::array<CMatrix, 2> next;
    for (int s = 0; s < 2; ++s) {
      next[s] = mem.p(0, s) * acc[0] + mem.p(1, s) * acc[1];
      kernel::depolarize_qubit(next[s], n, k, channel.x(s));
    }
    acc = std::move(next);
  }
  return DensityMatrix(acc[0] + acc[1]);
}

double forgetfulness_gap(const MemoryChannel& channel, int n, const DensityMatrix& rho) {
  const int m = rho.num_qubits();
  if (n < m) {
    throw DimensionError("forgetfulness_gap: n = " + std::to_string(n) + " is smaller than the " +
                         std::to_string(m) + "-qubit input");
  }
  const DensityMatrix input =
      n == m ? rho : tensor(DensityMatrix::maximally_mixed(n - m), rho);
  const MarkovMemory& mem = channel.memory();
  const Distribution2 from0 = mem.step({1.0, 0.0});
  const Distribution2 from1 = mem.step({0.0, 1.0});
  return trace_distance(apply_gamma_n_fast(input, channel, from0),
                        apply_gamma_n_fast(input, channel, from1));
}

double branch_averaged_entropy(const DensityMatrix& rho, const MemoryChannel& channel) {
  const int n = checked_qubits(rho, channel);
  const std::vector<double> weights = path_weights(channel.memory(), n);
  std::vector<int> path(n);
  double total = 0.0;
  for (std::size_t idx = 0; idx < weights.size(); ++idx) {
    if (weights[idx] == 0.0) continue;
    for (int k = 0; k < n; ++k) path[k] = static_cast<int>((idx >> (n - 1 - k)) & 1);
    total += weights[idx] * von_neumann_entropy(apply_branch(rho, path, channel));
  }
  return total;
}

double path_entropy(const MarkovMemory& memory, int n) {
  const std::vector<double> w = path_weights(memory, n);
  return shannon_entropy(w);
}

}  // namespace qmc
