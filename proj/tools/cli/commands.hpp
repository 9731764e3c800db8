#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "minkit/channels.hpp"
#include "minkit/min.hpp"
#include "minkit/states.hpp"

namespace minkit::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitAuditFailed = 1;
inline constexpr int kExitBadInput = 2;
inline constexpr int kExitInvariant = 3;
inline constexpr int kExitDimension = 4;
inline constexpr int kExitNoClosedForm = 5;
inline constexpr int kExitInternal = 70;

/// Thrown when --method closed is requested for a state without one.
class NoClosedForm : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Json = nlohmann::ordered_json;

enum class Family { Pure, BellDiagonal, Werner, Isotropic, TwoQubit, Generic };
const char* to_string(Family f);

struct Detection {
  Family family = Family::Generic;
  Vec3 c = Vec3::Zero();  // Bell-diagonal
  int d = 0;              // Werner / isotropic
  double x = 0.0;         // Werner / isotropic parameter
  double residual = 0.0;  // defining residual of the detected family
};

inline constexpr double kDetectionTol = 1e-9;

/// First match in the order pure, Bell-diagonal, Werner, isotropic, two-qubit.
Detection detect_family(const DensityMatrix& rho, double tol = kDetectionTol);

enum class MethodChoice { Auto, Closed, Numeric };

Json compute_report(const DensityMatrix& rho, Measure measure, MethodChoice method, const OptimizerConfig& cfg);

/// CSV rows (c1,c2,c3,face_id) on the faces max|c_i| = level inside the tetrahedron.
std::string surface_csv(double level, int resolution);

/// CSV rows (c1,c2,c3,flag) over a cubic grid restricted to the tetrahedron.
std::string region_csv(int axis, int resolution);
Json region_vertices_json(int axis);

std::string sweep_csv(const Vec3& c0, int axis, Sided sided, double tmax, int points);

struct AuditOptions {
  std::string kind;
  int count = 50;
  int channels = 4;
  std::uint64_t seed = 0;
};

/// Audit report; "passed" is false when any case fails.
Json run_audit(const AuditOptions& opts, const OptimizerConfig& cfg);

/// Formats a double with 12 significant digits.
std::string fmt12(double v);

std::string sha256_hex(const std::string& bytes);

/// Full command-line entry point; returns the exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace minkit::cli
