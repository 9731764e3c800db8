#pragma once

#include <span>
#include <vector>

#include "minkit/matcore.hpp"
#include "minkit/states.hpp"

namespace minkit {

/// Complete set of mutually orthogonal projectors on party A.
class LocalMeasurement {
 public:
  /// Validates Hermiticity, idempotence, orthogonality and completeness
  /// (each within 1e-10); throws InvariantError otherwise.
  explicit LocalMeasurement(std::vector<ComplexMatrix> projectors);

  /// Rank-1 projectors onto the columns of a unitary.
  static LocalMeasurement from_basis(const ComplexMatrix& basis);

  const std::vector<ComplexMatrix>& projectors() const noexcept { return projectors_; }
  int dim() const noexcept { return dim_; }

 private:
  std::vector<ComplexMatrix> projectors_;
  int dim_ = 0;
};

enum class FamilyKind { Unique, QubitSphere, BlockDegenerate };

const char* to_string(FamilyKind kind);

/// Locally invariant measurements of a reduced state ρ_A: spectral projectors
/// refined by an arbitrary unitary inside each degenerate eigenspace.
struct MeasurementFamily {
  FamilyKind kind = FamilyKind::Unique;
  /// Eigenvectors of ρ_A, descending eigenvalue, as columns.
  ComplexMatrix basis;
  RealVector eigenvalues;
  /// Sizes of the eigenvalue clusters, in column order of `basis`.
  std::vector<int> block_sizes;

  /// The spectral measurement itself (the only member when kind is Unique).
  LocalMeasurement fixed() const;

  /// Number of real parameters of a block-unitary refinement: Σ k² over
  /// blocks of size k ≥ 2.
  int parameter_count() const;

  /// Measurement basis basis·⊕_b exp(i H_b(params)).
  ComplexMatrix member_basis(std::span<const double> params) const;
  LocalMeasurement member(std::span<const double> params) const;
};

/// Block-diagonal unitary ⊕_b exp(i H_b) where each k×k Hermitian generator
/// takes k diagonal entries followed by (re, im) pairs of its upper triangle.
ComplexMatrix block_unitary(const std::vector<int>& block_sizes, std::span<const double> params);

/// Post-measurement operator Σ_k (Π_k⊗I) m (Π_k⊗I), without validation.
ComplexMatrix measure_operator(const ComplexMatrix& m, Dims dims, const LocalMeasurement& meas);

DensityMatrix apply_measurement(const DensityMatrix& rho, const LocalMeasurement& meas);

inline constexpr double kDefaultDegeneracyTol = 1e-8;

MeasurementFamily invariant_family(const ComplexMatrix& rho_a, double degeneracy_tol = kDefaultDegeneracyTol);

/// ‖Σ_k Π_k ρ_A Π_k − ρ_A‖₂ ≤ 1e-9.
bool is_invariant(const LocalMeasurement& meas, const ComplexMatrix& rho_a);

/// Eigenbasis of ê·σ: columns |+ê⟩, |−ê⟩.
ComplexMatrix sphere_basis(double theta, double phi);
Vec3 sphere_direction(double theta, double phi);

/// {(I + ê·σ)/2, (I − ê·σ)/2}. Throws DomainError unless ‖ê‖ = 1 within 1e-10.
LocalMeasurement sphere_measurement(const Vec3& e_hat);

}  // namespace minkit
