#include "qmc/two_qubit.hpp"

#include "qmc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace qmc::two_qubit {

namespace {

constexpr double kQuarterPi = std::numbers::pi / 4.0;

double xlog2x(double v) { return v > 0.0 ? v * std::log2(v) : 0.0; }

double scan_entropy(const ChannelParams& params, double theta) {
  return von_neumann_entropy(output_state(params, InputAngle(theta, 0.0)));
}

}  // namespace

InputAngle::InputAngle(double theta, double phi) : theta_(theta), phi_(phi) {
  if (!(theta >= 0.0 && theta <= std::numbers::pi / 2.0)) {
    throw std::out_of_range("theta must lie in [0, pi/2], got " + std::to_string(theta));
  }
  if (!(phi >= 0.0 && phi < 2.0 * std::numbers::pi)) {
    throw std::out_of_range("phi must lie in [0, 2 pi), got " + std::to_string(phi));
  }
}

const char* to_string(OptimalInput input) {
  return input == OptimalInput::product ? "product" : "max_entangled";
}

TwoUseSpectrum lambda_pair(const ChannelParams& params) {
  const double mu = params.mu();
  const double x0 = params.x0();
  const double x1 = params.x1();
  const double same = (1.0 + mu) / 4.0;
  const double diff = (1.0 - mu) / 4.0;

  TwoUseSpectrum s;
  s.lambda00 = same * ((1 + x0) * (1 + x0) / 4.0 + (1 + x1) * (1 + x1) / 4.0) +
               diff * (2.0 * (1 + x0) * (1 + x1) / 4.0);
  s.lambda01 = same * ((1 + x0) * (1 - x0) / 4.0 + (1 + x1) * (1 - x1) / 4.0) +
               diff * ((1 + x0) * (1 - x1) / 4.0 + (1 - x0) * (1 + x1) / 4.0);
  s.lambda11 = same * ((1 - x0) * (1 - x0) / 4.0 + (1 - x1) * (1 - x1) / 4.0) +
               diff * (2.0 * (1 - x0) * (1 - x1) / 4.0);
  s.c = 0.25 * ((1 + mu) * x0 * x0 + (1 + mu) * x1 * x1 + 2.0 * (1 - mu) * x0 * x1);
  return s;
}

double threshold_f(const ChannelParams& params) {
  const double a = params.a();
  const double d = params.d();
  return std::abs(a * a + params.mu() * d * d) - 2.0 * std::abs(a);
}

OutputElements output_elements(const ChannelParams& params, const InputAngle& angle) {
  const TwoUseSpectrum s = lambda_pair(params);
  const double cos2 = std::cos(angle.theta()) * std::cos(angle.theta());
  const double sin2 = std::sin(angle.theta()) * std::sin(angle.theta());
  OutputElements e;
  e.alpha = cos2 * s.lambda00 + sin2 * s.lambda11;
  e.beta = sin2 * s.lambda00 + cos2 * s.lambda11;
  e.gamma = s.lambda01;
  e.delta = std::polar(s.c * std::sin(2.0 * angle.theta()) / 2.0, -angle.phi());
  return e;
}

DensityMatrix input_state(const InputAngle& angle) {
  CVector psi = CVector::Zero(4);
  psi(0) = std::cos(angle.theta());
  psi(3) = std::polar(std::sin(angle.theta()), angle.phi());
  return DensityMatrix::from_pure(psi);
}

DensityMatrix output_state(const ChannelParams& params, const InputAngle& angle) {
  const OutputElements e = output_elements(params, angle);
  CMatrix m = CMatrix::Zero(4, 4);
  m(0, 0) = e.alpha;
  m(1, 1) = e.gamma;
  m(2, 2) = e.gamma;
  m(3, 3) = e.beta;
  m(0, 3) = e.delta;
  m(3, 0) = std::conj(e.delta);
  return DensityMatrix(std::move(m));
}

std::array<double, 4> output_eigenvalues(const ChannelParams& params, const InputAngle& angle) {
  const OutputElements e = output_elements(params, angle);
  const double sum = e.alpha + e.beta;
  const double root =
      std::sqrt((e.alpha - e.beta) * (e.alpha - e.beta) + 4.0 * std::norm(e.delta));
  std::array<double, 4> ev = {(sum + root) / 2.0, e.gamma, e.gamma, (sum - root) / 2.0};
  std::sort(ev.begin(), ev.end(), std::greater<>());
  return ev;
}

double output_entropy(const ChannelParams& params, const InputAngle& angle) {
  const auto ev = output_eigenvalues(params, angle);
  RVector v(4);
  for (int i = 0; i < 4; ++i) v(i) = ev[i];
  return spectrum_entropy(v);
}

double product_branch_capacity(const TwoUseSpectrum& s) {
  return 1.0 + (xlog2x(s.lambda00) + 2.0 * xlog2x(s.lambda01) + xlog2x(s.lambda11)) / 2.0;
}

double entangled_branch_capacity(const TwoUseSpectrum& s) {
  return 1.0 + (xlog2x(1.0 - 3.0 * s.lambda01) + 3.0 * xlog2x(s.lambda01)) / 2.0;
}

TwoUseCapacity two_use_capacity(const ChannelParams& params) {
  const TwoUseSpectrum s = lambda_pair(params);
  TwoUseCapacity out;
  out.product_branch = product_branch_capacity(s);
  out.entangled_branch = entangled_branch_capacity(s);
  if (threshold_f(params) >= 0.0) {
    out.optimal_family = OptimalInput::max_entangled;
    out.theta_star = kQuarterPi;
    out.capacity_bits_per_use = out.entangled_branch;
  } else {
    out.optimal_family = OptimalInput::product;
    out.theta_star = 0.0;
    out.capacity_bits_per_use = out.product_branch;
  }
  return out;
}

// Entropy differences below this are treated as ties, resolved toward the
// smaller theta.
constexpr double kScanTieTolerance = 1e-12;

double numeric_theta_scan(const ChannelParams& params, int grid_size) {
  if (grid_size < 3) throw std::invalid_argument("numeric_theta_scan: grid_size must be >= 3");
  const double step = kQuarterPi / (grid_size - 1);
  auto grid_theta = [&](int i) { return i == grid_size - 1 ? kQuarterPi : i * step; };

  std::vector<double> values(grid_size);
  int best = 0;
  for (int i = 0; i < grid_size; ++i) {
    values[i] = scan_entropy(params, grid_theta(i));
    if (values[i] < values[best] - kScanTieTolerance) best = i;
  }

  double lo = grid_theta(std::max(best - 1, 0));
  double hi = grid_theta(std::min(best + 1, grid_size - 1));
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = scan_entropy(params, x1);
  double f2 = scan_entropy(params, x2);
  while (hi - lo > 1e-9) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = scan_entropy(params, x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = scan_entropy(params, x2);
    }
  }
  const double refined = 0.5 * (lo + hi);

  // The golden-section point only replaces the grid minimizer (or a bracket
  // endpoint) when it is better by more than eigensolver noise.
  double theta = grid_theta(best);
  double value = values[best];
  for (double candidate : {lo, hi, refined}) {
    const double v = scan_entropy(params, candidate);
    if (v < value - kScanTieTolerance) {
      value = v;
      theta = candidate;
    }
  }
  return theta;
}

}  // namespace qmc::two_qubit
