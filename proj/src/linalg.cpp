#include "qmc/linalg.hpp"

#include "qmc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qmc {

namespace {

Eigen::Index bit_mask(int qubits, int k) { return Eigen::Index{1} << (qubits - 1 - k); }

void check_qubit(int qubits, int k) {
  if (k < 0 || k >= qubits) {
    throw DimensionError("qubit index " + std::to_string(k) + " out of range for " +
                         std::to_string(qubits) + " qubits");
  }
}

}  // namespace

PauliIndex::PauliIndex(int value) : value_(value) {
  if (value < 0 || value > 3) {
    throw std::out_of_range("Pauli index must be in {0,1,2,3}, got " + std::to_string(value));
  }
}

Eigen::Matrix2cd PauliIndex::matrix() const {
  const Complex i{0.0, 1.0};
  Eigen::Matrix2cd s;
  switch (value_) {
    case 0: s << 1, 0, 0, 1; break;
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, -i, i, 0; break;
    default: s << 1, 0, 0, -1; break;
  }
  return s;
}

int qubits_for_dimension(Eigen::Index dim) {
  if (dim < 1 || (dim & (dim - 1)) != 0) {
    throw DimensionError("dimension " + std::to_string(dim) + " is not a power of two");
  }
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  return n;
}

DensityMatrix::DensityMatrix(CMatrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw DimensionError("density matrix must be square");
  qubits_ = qubits_for_dimension(m_.rows());
  if (!m_.allFinite()) throw InvalidStateError("matrix has non-finite entries");
  const double defect = kernel::max_hermitian_defect(m_);
  if (!(defect <= kHermitianTolerance)) {
    throw InvalidStateError("matrix is not Hermitian (max |A - A^dagger| = " +
                            std::to_string(defect) + ")");
  }
  const Complex tr = m_.trace();
  if (!(std::abs(tr - Complex{1.0, 0.0}) <= kTraceTolerance)) {
    throw InvalidStateError("trace " + std::to_string(tr.real()) + " is not 1");
  }
}

DensityMatrix DensityMatrix::from_pure(const CVector& psi) {
  const double norm = psi.norm();
  if (!(std::abs(norm - 1.0) <= 1e-13)) {
    throw InvalidStateError("state vector is not normalized (norm " + std::to_string(norm) + ")");
  }
  return DensityMatrix(psi * psi.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(int qubits) {
  const Eigen::Index dim = Eigen::Index{1} << qubits;
  return DensityMatrix(CMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::basis_state(std::span<const int> bits) {
  const int n = static_cast<int>(bits.size());
  Eigen::Index index = 0;
  for (int b : bits) {
    if (b != 0 && b != 1) throw std::invalid_argument("basis bits must be 0 or 1");
    index = (index << 1) | b;
  }
  const Eigen::Index dim = Eigen::Index{1} << n;
  CMatrix m = CMatrix::Zero(dim, dim);
  m(index, index) = 1.0;
  return DensityMatrix(std::move(m));
}

void DensityMatrix::validate_positive() const {
  const RVector ev = hermitian_eigenvalues(m_);
  if (ev.size() > 0 && ev(0) < -kEigenvalueFloor) {
    throw InvalidStateError("matrix has negative eigenvalue " + std::to_string(ev(0)));
  }
}

RVector hermitian_eigenvalues(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("Hermitian eigensolver did not converge");
  }
  return solver.eigenvalues();
}

double shannon_entropy(std::span<const double> probs) {
  double h = 0.0;
  for (double p : probs) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

double binary_entropy(double p) {
  const double pq[2] = {p, 1.0 - p};
  return shannon_entropy(pq);
}

double spectrum_entropy(const RVector& eigenvalues) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    const double lam = eigenvalues(i);
    if (lam < -kEigenvalueFloor) {
      throw InvalidStateError("negative eigenvalue " + std::to_string(lam) +
                              " below the positivity floor");
    }
    if (lam > 0.0) h -= lam * std::log2(lam);
  }
  return h;
}

double von_neumann_entropy(const DensityMatrix& rho) {
  return spectrum_entropy(hermitian_eigenvalues(rho.matrix()));
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionError("trace_distance: dimension mismatch");
  const RVector ev = hermitian_eigenvalues(a.matrix() - b.matrix());
  return 0.5 * ev.cwiseAbs().sum();
}

DensityMatrix pauli_conjugate(const DensityMatrix& rho, std::span<const PauliIndex> indices) {
  const int n = rho.num_qubits();
  if (static_cast<int>(indices.size()) != n) {
    throw DimensionError("pauli_conjugate: expected " + std::to_string(n) + " indices, got " +
                         std::to_string(indices.size()));
  }
  CMatrix m = rho.matrix();
  for (int k = 0; k < n; ++k) {
    if (indices[k].value() != 0) kernel::conjugate_qubit(m, n, k, indices[k].matrix());
  }
  return DensityMatrix(std::move(m));
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  const CMatrix& x = a.matrix();
  const CMatrix& y = b.matrix();
  CMatrix out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
    }
  }
  return DensityMatrix(std::move(out));
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> traced_qubits) {
  const int n = rho.num_qubits();
  std::vector<bool> traced(n, false);
  for (int q : traced_qubits) {
    check_qubit(n, q);
    if (traced[q]) throw std::invalid_argument("partial_trace: qubit listed twice");
    traced[q] = true;
  }
  std::vector<Eigen::Index> kept_masks;
  std::vector<Eigen::Index> traced_masks;
  for (int q = 0; q < n; ++q) (traced[q] ? traced_masks : kept_masks).push_back(bit_mask(n, q));

  // Scatter the bits of a compact index onto the given full-register masks,
  // most significant first.
  auto scatter = [](Eigen::Index compact, const std::vector<Eigen::Index>& masks) {
    Eigen::Index full = 0;
    const auto m = masks.size();
    for (std::size_t j = 0; j < m; ++j) {
      if ((compact >> (m - 1 - j)) & 1) full |= masks[j];
    }
    return full;
  };

  const Eigen::Index out_dim = Eigen::Index{1} << kept_masks.size();
  const Eigen::Index env_dim = Eigen::Index{1} << traced_masks.size();
  std::vector<Eigen::Index> env(env_dim);
  for (Eigen::Index t = 0; t < env_dim; ++t) env[t] = scatter(t, traced_masks);

  const CMatrix& m = rho.matrix();
  CMatrix out = CMatrix::Zero(out_dim, out_dim);
  for (Eigen::Index c = 0; c < out_dim; ++c) {
    const Eigen::Index cf = scatter(c, kept_masks);
    for (Eigen::Index r = 0; r < out_dim; ++r) {
      const Eigen::Index rf = scatter(r, kept_masks);
      Complex acc{0.0, 0.0};
      for (Eigen::Index e : env) acc += m(rf | e, cf | e);
      out(r, c) = acc;
    }
  }
  return DensityMatrix(std::move(out));
}

namespace kernel {

void depolarize_qubit(CMatrix& m, int qubits, int k, double x) {
  check_qubit(qubits, k);
  const Eigen::Index mask = bit_mask(qubits, k);
  const Eigen::Index dim = m.rows();
  const double keep = x;
  const double spread = 0.5 * (1.0 - x);
  for (Eigen::Index c = 0; c < dim; ++c) {
    for (Eigen::Index r = 0; r < dim; ++r) {
      if ((r ^ c) & mask) {
        m(r, c) *= keep;
      } else if (!(r & mask)) {
        const Complex v0 = m(r, c);
        const Complex v1 = m(r | mask, c | mask);
        const Complex mix = spread * (v0 + v1);
        m(r, c) = keep * v0 + mix;
        m(r | mask, c | mask) = keep * v1 + mix;
      }
    }
  }
}

void conjugate_qubit(CMatrix& m, int qubits, int k, const Eigen::Matrix2cd& u) {
  check_qubit(qubits, k);
  const Eigen::Index mask = bit_mask(qubits, k);
  const Eigen::Index dim = m.rows();
  for (Eigen::Index r0 = 0; r0 < dim; ++r0) {
    if (r0 & mask) continue;
    const Eigen::Index r1 = r0 | mask;
    for (Eigen::Index c = 0; c < dim; ++c) {
      const Complex a = m(r0, c);
      const Complex b = m(r1, c);
      m(r0, c) = u(0, 0) * a + u(0, 1) * b;
      m(r1, c) = u(1, 0) * a + u(1, 1) * b;
    }
  }
  for (Eigen::Index c0 = 0; c0 < dim; ++c0) {
    if (c0 & mask) continue;
    const Eigen::Index c1 = c0 | mask;
    for (Eigen::Index r = 0; r < dim; ++r) {
      const Complex a = m(r, c0);
      const Complex b = m(r, c1);
      m(r, c0) = a * std::conj(u(0, 0)) + b * std::conj(u(0, 1));
      m(r, c1) = a * std::conj(u(1, 0)) + b * std::conj(u(1, 1));
    }
  }
}

double max_hermitian_defect(const CMatrix& m) {
  double worst = 0.0;
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r <= c; ++r) {
      worst = std::max(worst, std::abs(m(r, c) - std::conj(m(c, r))));
    }
  }
  return worst;
}

}  // namespace kernel

}  // namespace qmc
