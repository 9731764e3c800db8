#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "minkit/matcore.hpp"
#include "minkit/min.hpp"
#include "minkit/states.hpp"

namespace minkit {

/// CPTP map in Kraus form; Σ K†K = I within 1e-10.
class KrausChannel {
 public:
  KrausChannel(std::vector<ComplexMatrix> ops, std::string label);
  static KrausChannel identity(int d);

  int dim() const noexcept { return dim_; }
  const std::vector<ComplexMatrix>& ops() const noexcept { return ops_; }
  const std::string& label() const noexcept { return label_; }

 private:
  std::vector<ComplexMatrix> ops_;
  std::string label_;
  int dim_ = 0;
};

DensityMatrix apply_channel_B(const DensityMatrix& rho, const KrausChannel& ch);
DensityMatrix apply_channel_A(const DensityMatrix& rho, const KrausChannel& ch);

/// Bit flip (axis 1), bit-phase flip (2) or phase flip (3):
/// {√((1+p)/2) I, √((1−p)/2) σ_axis}. Bloch components orthogonal to the
/// axis are multiplied by p.
KrausChannel flip_channel(int axis, double p);

/// ρ ↦ Tr(ρ) I/d.
KrausChannel completely_depolarizing(int d);

/// Kraus operators cut from a seeded random isometry C^d → C^{k·d}.
KrausChannel random_channel(int d, int kraus_count, std::uint64_t seed);

/// ρ_AB ⊗ ρ_C on dims (dA, dB·dC).
DensityMatrix attach_ancilla(const DensityMatrix& rho, const ComplexMatrix& rho_c);

// ---- flip-channel dynamics of Bell-diagonal states

enum class Sided { One, Two };
const char* to_string(Sided s);

/// p(t) = e^{−γt} one-sided, e^{−2γt} two-sided.
double flip_multiplier(Sided sided, double gamma_t);

/// c_axis unchanged, the other two components scaled by `multiplier`.
Vec3 evolve_bell_diagonal(const Vec3& c0, int axis, double multiplier);

std::vector<double> linear_grid(double lo, double hi, int points);

struct DynamicsTrace {
  std::vector<double> times;  // in units of 1/γ
  std::vector<Vec3> c_t;
  std::vector<double> n1_t;
  std::vector<double> n2_t;
  std::string channel;
  Sided sided = Sided::One;
  /// Largest deviation between the explicit Kraus evolution and the analytic
  /// rule over the grid (Bloch components, max-abs).
  double max_evolution_residual = 0.0;
};

DynamicsTrace dynamics_sweep(const Vec3& c0, int axis, Sided sided, std::span<const double> gamma_t_grid);

// ---- freezing region: |c_axis| = max_i |c_i| inside the tetrahedron

enum class RegionFlag { Inside, Boundary, Outside };
const char* to_string(RegionFlag f);

RegionFlag freezing_membership(const Vec3& c, int axis, double tol = 1e-12);

/// Vertices of the two convex pieces of the freezing region (c_axis ≥ 0 and
/// c_axis ≤ 0), found by intersecting its bounding planes. Each list is sorted
/// lexicographically.
std::array<std::vector<Vec3>, 2> freezing_vertices(int axis);

// ---- monotonicity under channels on B

inline constexpr double kMonotonicityTol = 1e-8;
inline constexpr double kNumericSlack = 2e-4;

struct MonotonicityCase {
  int state_index = 0;
  int channel_index = 0;
  int kraus_count = 0;
  double before = 0.0;
  double after = 0.0;
  double allowed = 0.0;
  Method method_before = Method::NumericUnique;
  Method method_after = Method::NumericUnique;
  bool violation = false;
};

struct MonotonicityReport {
  std::vector<MonotonicityCase> cases;
  int violations = 0;
  /// max(after − before) over all cases; ≤ 0 when N1 never increased.
  double max_increase = 0.0;
};

/// Two-qubit states (every fifth one Bell-diagonal) against random channels on
/// B with 1–4 Kraus operators; n_states × n_channels pairs.
MonotonicityReport monotonicity_audit(int n_states, int n_channels, std::uint64_t seed,
                                      const OptimizerConfig& cfg = {});

/// Slack allowed for one pair given the methods used on each side.
double monotonicity_allowance(Method before, Method after);

}  // namespace minkit
