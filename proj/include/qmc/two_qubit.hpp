#pragma once

// Closed-form two-use analysis for the symmetric memory channel.
//
// For the Schmidt-diagonal inputs |psi> = cos(theta)|00> + e^{i phi} sin(theta)|11>
// the two-use output is
//
//   ( alpha  0      0      delta )
//   ( 0      gamma  0      0     )
//   ( 0      0      gamma  0     )
//   ( delta* 0      0      beta  )
//
// with alpha, beta built from the flip-pair probabilities lambda_00 and
// lambda_11, gamma = lambda_01 and delta = <00|out|11> = c e^{-i phi} sin(2 theta) / 2
// (the conjugate phase of the input amplitude on |11>).
// The sign of f = |a^2 + mu d^2| - 2|a| decides whether theta = pi/4
// (maximally entangled, f >= 0) or theta = 0 (product) minimizes the output
// entropy. Capacities are reported in bits per channel use.

#include "qmc/channel.hpp"
#include "qmc/linalg.hpp"

#include <array>
#include <numbers>

namespace qmc::two_qubit {

struct TwoUseSpectrum {
  double lambda00 = 0.0;
  double lambda01 = 0.0;  // equals lambda10
  double lambda11 = 0.0;
  double c = 0.0;         // coherence factor multiplying |00><11|
};

class InputAngle {
 public:
  InputAngle(double theta, double phi);
  double theta() const { return theta_; }
  double phi() const { return phi_; }

 private:
  double theta_;
  double phi_;
};

struct OutputElements {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  Complex delta{0.0, 0.0};
};

enum class OptimalInput { product, max_entangled };

const char* to_string(OptimalInput input);

struct TwoUseCapacity {
  double capacity_bits_per_use = 0.0;
  OptimalInput optimal_family = OptimalInput::product;
  double theta_star = 0.0;
  double product_branch = 0.0;    // 1 - S(theta = 0) / 2
  double entangled_branch = 0.0;  // 1 - S(theta = pi/4) / 2
};

TwoUseSpectrum lambda_pair(const ChannelParams& params);

double threshold_f(const ChannelParams& params);

OutputElements output_elements(const ChannelParams& params, const InputAngle& angle);

// cos(theta)|00> + e^{i phi} sin(theta)|11>, unit norm.
DensityMatrix input_state(const InputAngle& angle);

DensityMatrix output_state(const ChannelParams& params, const InputAngle& angle);

// Closed-form spectrum of output_state, sorted descending.
std::array<double, 4> output_eigenvalues(const ChannelParams& params, const InputAngle& angle);

// Entropy (bits) of output_state from the closed-form spectrum.
double output_entropy(const ChannelParams& params, const InputAngle& angle);

double product_branch_capacity(const TwoUseSpectrum& spectrum);
double entangled_branch_capacity(const TwoUseSpectrum& spectrum);

TwoUseCapacity two_use_capacity(const ChannelParams& params);

// Minimizer over theta in [0, pi/4] of the output entropy: a uniform grid of
// grid_size points followed by golden-section refinement around the best
// grid point. Ties resolve to the smaller theta.
double numeric_theta_scan(const ChannelParams& params, int grid_size = 33);

}  // namespace qmc::two_qubit
