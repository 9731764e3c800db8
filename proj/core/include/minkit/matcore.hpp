#pragma once

// Dense complex linear algebra shared by every other module. Matrices are
// Eigen::MatrixXcd; all functions here are pure.

#include <complex>

#include <Eigen/Dense>

namespace minkit {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Local dimensions of a bipartite system A⊗B.
struct Dims {
  int a = 0;
  int b = 0;

  constexpr int total() const { return a * b; }
  friend constexpr bool operator==(Dims, Dims) = default;
};

enum class Party { A, B };

/// Spectral decomposition of a Hermitian matrix. Eigenvalues are descending;
/// each eigenvector column has its first non-negligible component real and
/// positive.
struct HermEig {
  RealVector values;
  ComplexMatrix vectors;
};

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kEigenClamp = 1e-10;

ComplexMatrix identity(int n);

/// Pauli matrices: 0 → I, 1 → σx, 2 → σy, 3 → σz.
ComplexMatrix pauli(int index);

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);

/// Traces out `traced` from an operator on A⊗B.
ComplexMatrix partial_trace(const ComplexMatrix& m, Dims dims, Party traced);

bool is_hermitian(const ComplexMatrix& m, double tol = kHermitianTol);
bool all_finite(const ComplexMatrix& m);
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

HermEig hermitian_eig(const ComplexMatrix& m);

/// Eigenvalues only, descending. No Hermiticity check: the input is
/// symmetrized first.
RealVector hermitian_eigenvalues(const ComplexMatrix& m);

/// Schatten-1 norm. Hermitian inputs go through Σ|λ|; others through SVD.
double trace_norm(const ComplexMatrix& m);
double trace_norm_hermitian(const ComplexMatrix& m);
double trace_norm_svd(const ComplexMatrix& m);

/// Schatten-2 (Frobenius) norm.
double hs_norm(const ComplexMatrix& m);

/// Square root of a positive semidefinite matrix. Eigenvalues in
/// (-kEigenClamp, 0) are clamped to zero; anything more negative throws.
ComplexMatrix psd_sqrt(const ComplexMatrix& m);

/// Uhlmann fidelity [Tr √(√ρ σ √ρ)]², clamped to [0, 1].
double fidelity(const ComplexMatrix& rho, const ComplexMatrix& sigma);

/// exp(iH) for Hermitian H.
ComplexMatrix expi_hermitian(const ComplexMatrix& h);

}  // namespace minkit
