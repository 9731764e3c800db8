#pragma once

#include <array>
#include <cstdint>
#include <random>

#include "minkit/matcore.hpp"

namespace minkit {

/// Validated bipartite density matrix: (dA·dB)-square, Hermitian, unit trace
/// and positive semidefinite up to the eigenvalue clamp.
class DensityMatrix {
 public:
  /// Throws DimensionError on shape mismatch and InvariantError naming the
  /// first failed invariant otherwise.
  static DensityMatrix validate(const ComplexMatrix& raw, Dims dims);

  const ComplexMatrix& matrix() const noexcept { return mat_; }
  Dims dims() const noexcept { return dims_; }

  ComplexMatrix reduced_a() const;
  ComplexMatrix reduced_b() const;

 private:
  DensityMatrix(ComplexMatrix mat, Dims dims) : mat_(std::move(mat)), dims_(dims) {}

  ComplexMatrix mat_;
  Dims dims_;
};

/// Unit vector in C^{dA} ⊗ C^{dB}; amplitude index is i·dB + j.
class PureState {
 public:
  PureState(ComplexVector amplitudes, Dims dims);
  static PureState normalized(ComplexVector amplitudes, Dims dims);

  const ComplexVector& amplitudes() const noexcept { return amps_; }
  Dims dims() const noexcept { return dims_; }
  DensityMatrix density() const;

 private:
  ComplexVector amps_;
  Dims dims_;
};

/// |ψ⟩ = Σ_k √λ_k |a_k⟩⊗|b_k⟩ with λ descending. Holds min(dA, dB) terms,
/// including zero coefficients.
struct SchmidtForm {
  RealVector coefficients;
  ComplexMatrix basis_a;
  ComplexMatrix basis_b;
  Dims dims;

  ComplexVector reconstruct() const;
  int rank(double tol = 1e-12) const;
};

/// Two-qubit Pauli expansion
///   ρ = ¼(I⊗I + x·σ⊗I + I⊗y·σ + Σ_ij T_ij σ_i⊗σ_j),
/// with c = diag(T).
struct BlochForm {
  Vec3 x = Vec3::Zero();
  Vec3 y = Vec3::Zero();
  Mat3 t = Mat3::Zero();
  Vec3 c = Vec3::Zero();

  ComplexMatrix reconstruct() const;
};

/// Result of rotating a two-qubit state to diagonal correlation tensor.
/// state = (U_A⊗U_B) ρ (U_A⊗U_B)†, with U σ_i U† = Σ_j R_ji σ_j for the
/// rotation R attached to each unitary.
struct CanonicalForm {
  DensityMatrix state;
  BlochForm bloch;
  ComplexMatrix unitary_a;
  ComplexMatrix unitary_b;
  Mat3 rotation_a;
  Mat3 rotation_b;
};

DensityMatrix validate(const ComplexMatrix& raw, Dims dims);

SchmidtForm schmidt(const PureState& psi);

/// Entanglement of formation of a pure state, base-2 logarithm.
double eof_pure(const SchmidtForm& s);

ComplexMatrix bloch_matrix(const Vec3& x, const Vec3& y, const Mat3& t);
BlochForm bloch_decompose(const DensityMatrix& rho);

/// SU(2) lift of a proper rotation: U (a·σ) U† = (R a)·σ.
ComplexMatrix su2_from_rotation(const Mat3& rotation);

CanonicalForm canonicalize(const DensityMatrix& rho);

/// The four Bell-basis eigenvalues of ¼(I + Σ c_i σ_i⊗σ_i).
std::array<double, 4> bell_eigenvalues(const Vec3& c);
bool in_tetrahedron(const Vec3& c, double tol = 1e-12);

DensityMatrix make_bell_diagonal(const Vec3& c);

ComplexMatrix swap_operator(int d);
ComplexVector maximally_entangled(int d);

DensityMatrix make_werner(int d, double x);
DensityMatrix make_isotropic(int d, double x);

// Seeded generators. Each takes its own engine; nothing global.
ComplexMatrix ginibre(int rows, int cols, std::mt19937_64& rng);
ComplexMatrix random_unitary(int n, std::mt19937_64& rng);
Vec3 random_unit_vector(std::mt19937_64& rng);
/// Uniform point of the Bell-diagonal tetrahedron.
Vec3 random_tetrahedron_point(std::mt19937_64& rng);

PureState random_pure(Dims dims, std::uint64_t seed);
PureState random_pure(Dims dims, std::mt19937_64& rng);
DensityMatrix random_density(Dims dims, int rank, std::uint64_t seed);
DensityMatrix random_density(Dims dims, int rank, std::mt19937_64& rng);

}  // namespace minkit
