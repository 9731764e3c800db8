#pragma once

// Reference computations used only by tests. Nothing here goes through the
// library's optimizers or its Σ|λ| trace-norm path.

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "minkit/matcore.hpp"

namespace minkit::oracle {

/// Schatten-1 norm as the sum of singular values.
inline double trace_norm(const ComplexMatrix& m) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues().sum();
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index k = 0; k < b.rows(); ++k)
        for (Eigen::Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

/// ‖ρ − Σ_k (P_k⊗I) ρ (P_k⊗I)‖₁ with P_± = (I ± ê·σ)/2, built from scratch.
inline double qubit_disturbance(const ComplexMatrix& rho, int db, const Vec3& e) {
  using C = std::complex<double>;
  ComplexMatrix es(2, 2);
  es << C(e(2), 0), C(e(0), -e(1)), C(e(0), e(1)), C(-e(2), 0);
  const ComplexMatrix id2 = ComplexMatrix::Identity(2, 2);
  const ComplexMatrix idb = ComplexMatrix::Identity(db, db);
  ComplexMatrix post = ComplexMatrix::Zero(rho.rows(), rho.cols());
  for (double s : {1.0, -1.0}) {
    const ComplexMatrix p = kron(0.5 * (id2 + s * es), idb);
    post += p * rho * p;
  }
  return trace_norm(rho - post);
}

/// Maximum of qubit_disturbance over a Fibonacci lattice of `points`
/// directions on the upper hemisphere (ê and −ê give the same measurement).
inline double brute_force_qubit_n1(const ComplexMatrix& rho, int db, int points = 20000) {
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  double best = 0.0;
  for (int k = 0; k < points; ++k) {
    const double z = 1.0 - (k + 0.5) / points;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * k;
    best = std::max(best, qubit_disturbance(rho, db, Vec3(r * std::cos(phi), r * std::sin(phi), z)));
  }
  return best;
}

/// Haar-ish random unitary by Gram-Schmidt on Gaussian columns.
inline ComplexMatrix haar_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix m(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) m(i, j) = std::complex<double>(g(rng), g(rng));
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < j; ++k) m.col(j) -= m.col(k).dot(m.col(j)) * m.col(k);
    m.col(j).normalize();
  }
  return m;
}

/// Rank-1 measurement disturbance in an arbitrary basis of A, from scratch.
inline double basis_disturbance(const ComplexMatrix& rho, int da, int db, const ComplexMatrix& basis) {
  const ComplexMatrix idb = ComplexMatrix::Identity(db, db);
  ComplexMatrix post = ComplexMatrix::Zero(rho.rows(), rho.cols());
  for (int k = 0; k < da; ++k) {
    const ComplexMatrix p = kron(basis.col(k) * basis.col(k).adjoint(), idb);
    post += p * rho * p;
  }
  return trace_norm(rho - post);
}

/// Pauli expectation Tr ρ (σ_i⊗σ_j) written out by index.
inline double pauli_expectation(const ComplexMatrix& rho, int i, int j) {
  using C = std::complex<double>;
  auto sigma = [](int k) {
    ComplexMatrix s(2, 2);
    switch (k) {
      case 0: s << 1, 0, 0, 1; break;
      case 1: s << 0, 1, 1, 0; break;
      case 2: s << 0, C(0, -1), C(0, 1), 0; break;
      default: s << 1, 0, 0, -1; break;
    }
    return s;
  };
  return (rho * kron(sigma(i), sigma(j))).trace().real();
}

}  // namespace minkit::oracle
