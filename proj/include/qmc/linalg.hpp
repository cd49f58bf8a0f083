#pragma once

// Dense complex linear algebra and entropy primitives for small multi-qubit
// registers (up to a few hundred rows).
//
// Qubit convention: qubit 0 is the most significant bit of a basis index, so
// a register built as rho_0 (x) rho_1 (x) ... (x) rho_{n-1} stores qubit 0 in
// the leading Kronecker factor. All logarithms are base 2.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace qmc {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kTraceTolerance = 1e-12;
// Eigenvalues in [-kEigenvalueFloor, 0) are treated as zero; anything more
// negative marks the matrix as not positive semidefinite.
inline constexpr double kEigenvalueFloor = 1e-10;

// Selects one of sigma_0 (identity), sigma_1 (X), sigma_2 (Y), sigma_3 (Z).
class PauliIndex {
 public:
  explicit PauliIndex(int value);
  int value() const { return value_; }
  Eigen::Matrix2cd matrix() const;

 private:
  int value_;
};

// Number of qubits n for a dimension 2^n; throws DimensionError otherwise.
int qubits_for_dimension(Eigen::Index dim);

// A Hermitian, unit-trace matrix on n qubits.
//
// Construction checks shape, Hermiticity and trace. Positivity is enforced
// where the spectrum is computed anyway (entropy, validate_positive) since a
// full eigendecomposition on every construction would dominate channel cost.
class DensityMatrix {
 public:
  explicit DensityMatrix(CMatrix m);

  static DensityMatrix from_pure(const CVector& psi);
  static DensityMatrix maximally_mixed(int qubits);
  // |b_0 ... b_{n-1}><b_0 ... b_{n-1}| for a bitstring over qubits 0..n-1.
  static DensityMatrix basis_state(std::span<const int> bits);

  const CMatrix& matrix() const { return m_; }
  int num_qubits() const { return qubits_; }
  Eigen::Index dim() const { return m_.rows(); }

  // Throws InvalidStateError if an eigenvalue falls below -kEigenvalueFloor.
  void validate_positive() const;

 private:
  CMatrix m_;
  int qubits_ = 0;
};

// Ascending eigenvalues of a Hermitian matrix (only the lower triangle is read).
RVector hermitian_eigenvalues(const CMatrix& m);

double shannon_entropy(std::span<const double> probs);
double binary_entropy(double p);

double von_neumann_entropy(const DensityMatrix& rho);
// Entropy of an explicit non-negative spectrum, with the same floor rules.
double spectrum_entropy(const RVector& eigenvalues);

double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

DensityMatrix pauli_conjugate(const DensityMatrix& rho, std::span<const PauliIndex> indices);

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);
// Traces out the listed qubits; the survivors keep their relative order.
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> traced_qubits);

namespace kernel {

// In-place x*m + (1-x)*(I/2 on qubit k (x) Tr_k m). Valid for any operator m,
// not only states; no range check on x.
void depolarize_qubit(CMatrix& m, int qubits, int k, double x);

// In-place m -> U_k m U_k^dagger with U acting on qubit k.
void conjugate_qubit(CMatrix& m, int qubits, int k, const Eigen::Matrix2cd& u);

double max_hermitian_defect(const CMatrix& m);

}  // namespace kernel

}  // namespace qmc
