#pragma once

// Input-state families and Holevo quantities of their Pauli-orbit ensembles.
//
// The n-use channel commutes with conjugation by any Pauli string, and the
// uniform average of a state's 4^n Pauli conjugates is I/2^n. The Holevo
// quantity of that equiprobable orbit is therefore n - S(Gamma_n(rho)), which
// is what orbit_mutual_information evaluates without building the orbit.

#include "qmc/channel.hpp"
#include "qmc/linalg.hpp"

#include <string>
#include <variant>
#include <vector>

namespace qmc::ensembles {

struct BasisProduct {
  std::vector<int> bits;  // one bit per qubit
};
struct Ghz {};
struct WState {};
// Maximal entanglement across the half-chain cut: qubits 0..n/2-1 vs n/2..n-1.
struct MaxEntangledHalves {};
struct SchmidtPair {
  double theta = 0.0;
  double phi = 0.0;
};

using FamilyKind = std::variant<BasisProduct, Ghz, WState, MaxEntangledHalves, SchmidtPair>;

class InputFamily {
 public:
  InputFamily(FamilyKind kind, int qubits);

  static InputFamily product(int qubits);  // |0...0>
  static InputFamily ghz(int qubits);
  static InputFamily w(int qubits);
  static InputFamily max_entangled_halves(int qubits);
  static InputFamily schmidt_pair(double theta, double phi);

  const FamilyKind& kind() const { return kind_; }
  int qubits() const { return qubits_; }
  // Short identifier used in tables: product, ghz, w, max_entangled, schmidt.
  std::string name() const;

 private:
  FamilyKind kind_;
  int qubits_;
};

// Parses product | ghz | w | max_entangled; throws std::invalid_argument.
InputFamily family_from_name(const std::string& name, int qubits);

class HolevoEnsemble {
 public:
  HolevoEnsemble(std::vector<DensityMatrix> states, std::vector<double> probs);

  const std::vector<DensityMatrix>& states() const { return states_; }
  const std::vector<double>& probs() const { return probs_; }

 private:
  std::vector<DensityMatrix> states_;
  std::vector<double> probs_;
};

DensityMatrix generate(const InputFamily& family);

// S(sum_i p_i Gamma_n(rho_i)) - sum_i p_i S(Gamma_n(rho_i)), in bits.
double holevo_quantity(const HolevoEnsemble& ensemble, const MemoryChannel& channel);

// The equiprobable ensemble of all 4^n Pauli-string conjugates of rho.
HolevoEnsemble pauli_orbit(const DensityMatrix& rho);

struct MutualInformation {
  double raw = 0.0;      // I_n, bits per block
  double per_use = 0.0;  // I_n / n
};

MutualInformation orbit_mutual_information(const InputFamily& family,
                                           const MemoryChannel& channel);

struct FamilyRow {
  std::string family;
  MutualInformation info;
};

// One row per family, sorted by per-use value (descending). Values within
// about 1e-12 bits of each other keep the order in which they were requested.
std::vector<FamilyRow> family_comparison(const MemoryChannel& channel, int n,
                                         const std::vector<std::string>& families);

}  // namespace qmc::ensembles
