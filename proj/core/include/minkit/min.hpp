#pragma once

// Measurement-induced nonlocality (MIN): closed-form evaluators and the
// brute-force optimizers over locally invariant measurements that act as
// their oracles.
//
//   N1(ρ) = max_Π ‖ρ − Π(ρ)‖₁            (trace norm, unsquared)
//   N2(ρ) = max_Π ‖ρ − Π(ρ)‖₂²           (Hilbert-Schmidt, squared)
//   NB(ρ) = 2 max_Π {1 − √F(ρ, Π(ρ))}    (Bures)
//
// with Π ranging over projective measurements on A that leave ρ_A invariant.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "minkit/matcore.hpp"
#include "minkit/measure.hpp"
#include "minkit/states.hpp"

namespace minkit {

enum class Measure { N1, N2, NB };
enum class Method { ClosedForm, NumericUnique, NumericSphere, NumericBlock };

const char* to_string(Measure m);
const char* to_string(Method m);

struct MinResult {
  double value = 0.0;
  Method method = Method::ClosedForm;
  /// Basis (columns) of the rank-1 measurement attaining `value`, if known.
  std::optional<ComplexMatrix> optimal_basis;
  /// Bloch direction of the optimal qubit measurement, if it is one.
  std::optional<Vec3> optimal_direction;
  /// Objective evaluations spent (1 for closed forms).
  int iterations = 1;
};

struct OptimizerConfig {
  int sphere_grid = 64;
  int refine_iters = 20;
  int restarts = 4;
  double tol = 1e-10;
  std::uint64_t seed = 0;
  /// Adjacent eigenvalue gap of ρ_A at or below which it is treated as
  /// degenerate.
  double degeneracy_tol = kDefaultDegeneracyTol;
  /// ‖x‖ below which the two-qubit closed form takes its x = 0 branch.
  double branch_threshold = 1e-8;

  /// Throws DomainError when sphere_grid < 8, tol ≤ 0 or counts are negative.
  void validate() const;
};

/// Largest dA·dB accepted by the numeric optimizers.
inline constexpr int kMaxNumericDimension = 64;

// ---- closed forms

/// 2√(λ1λ2) for a pure state with at most two nonzero Schmidt coefficients.
double n1_pure_2xn(const SchmidtForm& s);

/// 2λ1λ2, the matching Hilbert-Schmidt value.
double n2_pure_2xn(const SchmidtForm& s);

/// 2(m−1)/m for the maximally entangled state of Schmidt rank m.
double n1_pure_degenerate_mxm(int m);

/// Which length the two-qubit formula divides by. Only Euclidean yields a
/// projector; Manhattan is kept for audit comparisons.
enum class XNorm { Euclidean, Manhattan };

/// (√χ₊ + √χ₋)/(2‖x‖) from canonical c and local Bloch vector x (x ≠ 0).
double n1_two_qubit_formula(const Vec3& c, const Vec3& x, XNorm norm = XNorm::Euclidean);

MinResult n1_two_qubit(const DensityMatrix& rho, double branch_threshold = 1e-8);
MinResult n2_two_qubit(const DensityMatrix& rho, double branch_threshold = 1e-8);

double n1_werner(int d, double x);
double n1_isotropic(int d, double x);

/// h(ê) = Q + √H for a Bell-diagonal correlation triple c. ê and c share the
/// same axes; sorting into c₊ ≥ c₀ ≥ c₋ (by modulus) happens internally.
double h_of_e(const Vec3& e_hat, const Vec3& c);

/// h in the sorted frame: θ, φ measured with axis 1 ↔ c₊, 2 ↔ c₀, 3 ↔ c₋.
double h_sorted(double theta, double phi, double c_plus, double c_zero, double c_minus);

/// |c| sorted descending: (c₊, c₀, c₋).
Vec3 sorted_abs(const Vec3& c);

// ---- direct evaluation

/// Objective of `measure` at one measurement (any rank).
double disturbance(const DensityMatrix& rho, const LocalMeasurement& meas, Measure measure);

// ---- numeric optimizers

/// Dispatches on invariant_family(ρ_A): exact evaluation when the invariant
/// measurement is unique, sphere search for a degenerate qubit, block-unitary
/// hill climbing otherwise. Throws DimensionError when dA·dB exceeds
/// kMaxNumericDimension.
MinResult numeric_min(const DensityMatrix& rho, Measure measure, const OptimizerConfig& cfg = {});

MinResult n1_numeric(const DensityMatrix& rho, const OptimizerConfig& cfg = {});
MinResult n2_numeric(const DensityMatrix& rho, const OptimizerConfig& cfg = {});
MinResult nb_numeric(const DensityMatrix& rho, const OptimizerConfig& cfg = {});

// ---- identities linking N1 and N2

struct RelationCheck {
  std::string identity;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
};

/// N1 = √(4 N2 − c₀²) for Bell-diagonal states (both sides closed form).
RelationCheck relation_bell_diagonal(const Vec3& c);
/// N1 = √(d(d−1) N2) for Werner states (N1 closed form, N2 numeric).
RelationCheck relation_werner(int d, double x, const OptimizerConfig& cfg = {});
/// N1 = 2√((d−1) N2 / d) for isotropic states (N1 closed form, N2 numeric).
RelationCheck relation_isotropic(int d, double x, const OptimizerConfig& cfg = {});
/// N1 = √(2 N2) for pure states of Schmidt rank ≤ 2 (N1 closed, N2 numeric).
RelationCheck relation_pure(const PureState& psi, const OptimizerConfig& cfg = {});

}  // namespace minkit
