#include "qmc/ensembles.hpp"

#include "qmc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qmc::ensembles {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

CVector normalized(CVector v) { return v / v.norm(); }

constexpr double kTieResolution = 1e-12;

}  // namespace

InputFamily::InputFamily(FamilyKind kind, int qubits) : kind_(std::move(kind)), qubits_(qubits) {
  if (qubits < 1 || qubits > 16) throw DimensionError("family qubit count out of range");
  std::visit(Overloaded{
                 [&](const BasisProduct& p) {
                   if (static_cast<int>(p.bits.size()) != qubits) {
                     throw DimensionError("basis product needs one bit per qubit");
                   }
                   for (int b : p.bits) {
                     if (b != 0 && b != 1) throw std::invalid_argument("bits must be 0 or 1");
                   }
                 },
                 [&](const Ghz&) {},
                 [&](const WState&) {
                   if (qubits < 2) throw DimensionError("W state needs at least 2 qubits");
                 },
                 [&](const MaxEntangledHalves&) {
                   if (qubits % 2 != 0) {
                     throw DimensionError("half-chain maximally entangled state needs even n");
                   }
                 },
                 [&](const SchmidtPair& s) {
                   if (qubits != 2) throw DimensionError("Schmidt pair is a two-qubit state");
                   if (!(s.theta >= 0.0 && s.theta <= std::numbers::pi / 2.0)) {
                     throw std::out_of_range("theta must lie in [0, pi/2]");
                   }
                 },
             },
             kind_);
}

InputFamily InputFamily::product(int qubits) {
  return InputFamily(BasisProduct{std::vector<int>(std::max(qubits, 0), 0)}, qubits);
}
InputFamily InputFamily::ghz(int qubits) { return InputFamily(Ghz{}, qubits); }
InputFamily InputFamily::w(int qubits) { return InputFamily(WState{}, qubits); }
InputFamily InputFamily::max_entangled_halves(int qubits) {
  return InputFamily(MaxEntangledHalves{}, qubits);
}
InputFamily InputFamily::schmidt_pair(double theta, double phi) {
  return InputFamily(SchmidtPair{theta, phi}, 2);
}

std::string InputFamily::name() const {
  return std::visit(Overloaded{
                        [](const BasisProduct&) { return std::string("product"); },
                        [](const Ghz&) { return std::string("ghz"); },
                        [](const WState&) { return std::string("w"); },
                        [](const MaxEntangledHalves&) { return std::string("max_entangled"); },
                        [](const SchmidtPair&) { return std::string("schmidt"); },
                    },
                    kind_);
}

InputFamily family_from_name(const std::string& name, int qubits) {
  if (name == "product") return InputFamily::product(qubits);
  if (name == "ghz") return InputFamily::ghz(qubits);
  if (name == "w") return InputFamily::w(qubits);
  if (name == "max_entangled") return InputFamily::max_entangled_halves(qubits);
  throw std::invalid_argument("unknown input family '" + name +
                              "' (expected product, ghz, w or max_entangled)");
}

HolevoEnsemble::HolevoEnsemble(std::vector<DensityMatrix> states, std::vector<double> probs)
    : states_(std::move(states)), probs_(std::move(probs)) {
  if (states_.empty() || states_.size() != probs_.size()) {
    throw std::invalid_argument("ensemble needs one probability per state");
  }
  double total = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0)) throw std::invalid_argument("ensemble probabilities must be non-negative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("probabilities must sum to 1");
  for (const auto& s : states_) {
    if (s.dim() != states_.front().dim()) throw DimensionError("ensemble states differ in size");
  }
}

DensityMatrix generate(const InputFamily& family) {
  const int n = family.qubits();
  const Eigen::Index dim = Eigen::Index{1} << n;
  CVector psi = CVector::Zero(dim);
  std::visit(Overloaded{
                 [&](const BasisProduct& p) {
                   Eigen::Index idx = 0;
                   for (int b : p.bits) idx = (idx << 1) | b;
                   psi(idx) = 1.0;
                 },
                 [&](const Ghz&) {
                   psi(0) = 1.0;
                   psi(dim - 1) = 1.0;
                 },
                 [&](const WState&) {
                   for (int k = 0; k < n; ++k) psi(Eigen::Index{1} << k) = 1.0;
                 },
                 [&](const MaxEntangledHalves&) {
                   const int half = n / 2;
                   for (Eigen::Index j = 0; j < (Eigen::Index{1} << half); ++j) {
                     psi((j << half) | j) = 1.0;
                   }
                 },
                 [&](const SchmidtPair& s) {
                   psi(0) = std::cos(s.theta);
                   psi(3) = std::polar(std::sin(s.theta), s.phi);
                 },
             },
             family.kind());
  return DensityMatrix::from_pure(normalized(std::move(psi)));
}

double holevo_quantity(const HolevoEnsemble& ensemble, const MemoryChannel& channel) {
  const Eigen::Index dim = ensemble.states().front().dim();
  CMatrix average = CMatrix::Zero(dim, dim);
  double mean_entropy = 0.0;
  for (std::size_t i = 0; i < ensemble.states().size(); ++i) {
    const double p = ensemble.probs()[i];
    if (p == 0.0) continue;
    const DensityMatrix out = apply_gamma_n_fast(ensemble.states()[i], channel);
    average += p * out.matrix();
    mean_entropy += p * von_neumann_entropy(out);
  }
  return von_neumann_entropy(DensityMatrix(std::move(average))) - mean_entropy;
}

HolevoEnsemble pauli_orbit(const DensityMatrix& rho) {
  const int n = rho.num_qubits();
  const std::size_t count = std::size_t{1} << (2 * n);
  std::vector<DensityMatrix> states;
  states.reserve(count);
  std::vector<PauliIndex> indices;
  for (std::size_t code = 0; code < count; ++code) {
    indices.clear();
    for (int k = 0; k < n; ++k) {
      indices.emplace_back(static_cast<int>((code >> (2 * (n - 1 - k))) & 3));
    }
    states.push_back(pauli_conjugate(rho, indices));
  }
  return HolevoEnsemble(std::move(states),
                        std::vector<double>(count, 1.0 / static_cast<double>(count)));
}

MutualInformation orbit_mutual_information(const InputFamily& family,
                                           const MemoryChannel& channel) {
  const int n = family.qubits();
  const double out_entropy = von_neumann_entropy(apply_gamma_n_fast(generate(family), channel));
  MutualInformation mi;
  mi.raw = n - out_entropy;
  mi.per_use = mi.raw / n;
  return mi;
}

std::vector<FamilyRow> family_comparison(const MemoryChannel& channel, int n,
                                         const std::vector<std::string>& families) {
  std::vector<FamilyRow> rows;
  rows.reserve(families.size());
  for (const auto& name : families) {
    rows.push_back({name, orbit_mutual_information(family_from_name(name, n), channel)});
  }
  // Keys are quantized so values that differ only by eigensolver noise tie
  // and keep their input order; rounding keeps the ordering transitive.
  auto key = [](const FamilyRow& r) { return std::round(r.info.per_use / kTieResolution); };
  std::stable_sort(rows.begin(), rows.end(),
                   [&](const FamilyRow& x, const FamilyRow& y) { return key(x) > key(y); });
  return rows;
}

}  // namespace qmc::ensembles
