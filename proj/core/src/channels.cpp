#include "minkit/channels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "minkit/error.hpp"
#include "minkit/parallel.hpp"

namespace minkit {

namespace {

void require_axis(int axis, const char* what) {
  if (axis < 1 || axis > 3) throw DomainError(std::string(what) + ": axis must be 1, 2 or 3");
}

DensityMatrix apply_lifted(const DensityMatrix& rho, const KrausChannel& ch, Party party) {
  const Dims d = rho.dims();
  const int target = party == Party::A ? d.a : d.b;
  if (ch.dim() != target)
    throw DimensionError("apply_channel: channel dimension " + std::to_string(ch.dim()) + " does not match party dimension " +
                         std::to_string(target));
  ComplexMatrix out = ComplexMatrix::Zero(rho.matrix().rows(), rho.matrix().cols());
  for (const ComplexMatrix& k : ch.ops()) {
    const ComplexMatrix lifted = party == Party::A ? tensor_product(k, identity(d.b)) : tensor_product(identity(d.a), k);
    out += lifted * rho.matrix() * lifted.adjoint();
  }
  return DensityMatrix::validate(out, d);
}

}  // namespace

KrausChannel::KrausChannel(std::vector<ComplexMatrix> ops, std::string label)
    : ops_(std::move(ops)), label_(std::move(label)) {
  if (ops_.empty()) throw InvariantError("KrausChannel: no Kraus operators");
  dim_ = static_cast<int>(ops_.front().cols());
  ComplexMatrix sum = ComplexMatrix::Zero(dim_, dim_);
  for (const ComplexMatrix& k : ops_) {
    if (k.rows() != dim_ || k.cols() != dim_) throw DimensionError("KrausChannel: operators must be square and equal-sized");
    sum += k.adjoint() * k;
  }
  if (max_abs_diff(sum, minkit::identity(dim_)) > 1e-10)
    throw InvariantError("KrausChannel: operators violate completeness");
}

KrausChannel KrausChannel::identity(int d) { return KrausChannel({minkit::identity(d)}, "identity"); }

DensityMatrix apply_channel_B(const DensityMatrix& rho, const KrausChannel& ch) { return apply_lifted(rho, ch, Party::B); }
DensityMatrix apply_channel_A(const DensityMatrix& rho, const KrausChannel& ch) { return apply_lifted(rho, ch, Party::A); }

KrausChannel flip_channel(int axis, double p) {
  require_axis(axis, "flip_channel");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("flip_channel: p must lie in [0, 1]");
  static const char* names[] = {"", "bit_flip", "bit_phase_flip", "phase_flip"};
  return KrausChannel({std::sqrt((1.0 + p) / 2.0) * pauli(0), std::sqrt((1.0 - p) / 2.0) * pauli(axis)}, names[axis]);
}

KrausChannel completely_depolarizing(int d) {
  if (d < 1) throw DomainError("completely_depolarizing: d must be positive");
  std::vector<ComplexMatrix> ops;
  const double w = 1.0 / std::sqrt(static_cast<double>(d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      ComplexMatrix k = ComplexMatrix::Zero(d, d);
      k(i, j) = w;
      ops.push_back(std::move(k));
    }
  return KrausChannel(std::move(ops), "completely_depolarizing");
}

KrausChannel random_channel(int d, int kraus_count, std::uint64_t seed) {
  if (d < 1) throw DomainError("random_channel: d must be positive");
  if (kraus_count < 1) throw DomainError("random_channel: kraus_count must be at least 1");
  std::mt19937_64 rng(seed);
  const int rows = kraus_count * d;
  Eigen::HouseholderQR<ComplexMatrix> qr(ginibre(rows, d, rng));
  const ComplexMatrix isometry = qr.householderQ() * ComplexMatrix::Identity(rows, d);
  std::vector<ComplexMatrix> ops;
  for (int j = 0; j < kraus_count; ++j) ops.push_back(isometry.block(j * d, 0, d, d));
  return KrausChannel(std::move(ops), "random(d=" + std::to_string(d) + ",k=" + std::to_string(kraus_count) + ")");
}

DensityMatrix attach_ancilla(const DensityMatrix& rho, const ComplexMatrix& rho_c) {
  DensityMatrix ancilla = [&] {
    try {
      return DensityMatrix::validate(rho_c, {static_cast<int>(rho_c.rows()), 1});
    } catch (const DimensionError& e) {
      throw InvariantError(std::string("attach_ancilla: invalid ancilla: ") + e.what());
    } catch (const InvariantError& e) {
      throw InvariantError(std::string("attach_ancilla: invalid ancilla: ") + e.what());
    }
  }();
  const Dims d = rho.dims();
  return DensityMatrix::validate(tensor_product(rho.matrix(), ancilla.matrix()),
                                 {d.a, d.b * static_cast<int>(rho_c.rows())});
}

// ---------------------------------------------------------------- dynamics

const char* to_string(Sided s) { return s == Sided::One ? "one" : "two"; }

double flip_multiplier(Sided sided, double gamma_t) {
  return std::exp(-(sided == Sided::One ? 1.0 : 2.0) * gamma_t);
}

Vec3 evolve_bell_diagonal(const Vec3& c0, int axis, double multiplier) {
  require_axis(axis, "evolve_bell_diagonal");
  Vec3 c = c0 * multiplier;
  c(axis - 1) = c0(axis - 1);
  return c;
}

std::vector<double> linear_grid(double lo, double hi, int points) {
  if (points < 1) throw DomainError("linear_grid: need at least one point");
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i) g[i] = points == 1 ? lo : lo + (hi - lo) * i / (points - 1);
  return g;
}

DynamicsTrace dynamics_sweep(const Vec3& c0, int axis, Sided sided, std::span<const double> gamma_t_grid) {
  require_axis(axis, "dynamics_sweep");
  const DensityMatrix rho0 = make_bell_diagonal(c0);
  const std::size_t n = gamma_t_grid.size();
  DynamicsTrace tr;
  tr.times.assign(gamma_t_grid.begin(), gamma_t_grid.end());
  tr.c_t.resize(n);
  tr.n1_t.resize(n);
  tr.n2_t.resize(n);
  tr.sided = sided;
  tr.channel = flip_channel(axis, 1.0).label();
  std::vector<double> residual(n, 0.0);

  parallel_for(n, [&](std::size_t i) {
    const double gt = gamma_t_grid[i];
    if (!(gt >= 0.0)) throw DomainError("dynamics_sweep: times must be non-negative");
    const KrausChannel ch = flip_channel(axis, std::exp(-gt));
    DensityMatrix rho = apply_channel_B(rho0, ch);
    if (sided == Sided::Two) rho = apply_channel_A(rho, ch);

    const Vec3 expected = evolve_bell_diagonal(c0, axis, flip_multiplier(sided, gt));
    const BlochForm b = bloch_decompose(rho);
    const Mat3 t_expected = expected.asDiagonal();
    residual[i] = std::max({(b.t - t_expected).cwiseAbs().maxCoeff(), b.x.cwiseAbs().maxCoeff(), b.y.cwiseAbs().maxCoeff()});

    tr.c_t[i] = b.c;
    tr.n1_t[i] = n1_two_qubit(rho).value;
    tr.n2_t[i] = n2_two_qubit(rho).value;
  });
  tr.max_evolution_residual = n ? *std::max_element(residual.begin(), residual.end()) : 0.0;
  return tr;
}

// ---------------------------------------------------------------- freezing region

const char* to_string(RegionFlag f) {
  switch (f) {
    case RegionFlag::Inside: return "inside";
    case RegionFlag::Boundary: return "boundary";
    case RegionFlag::Outside: return "outside";
  }
  return "?";
}

RegionFlag freezing_membership(const Vec3& c, int axis, double tol) {
  require_axis(axis, "freezing_membership");
  if (!in_tetrahedron(c, tol)) return RegionFlag::Outside;
  const int i = axis - 1;
  const double others = std::max(std::abs(c((i + 1) % 3)), std::abs(c((i + 2) % 3)));
  const double margin = std::abs(c(i)) - others;
  if (margin < -tol) return RegionFlag::Outside;
  const auto ev = bell_eigenvalues(c);
  const double face = 4.0 * *std::min_element(ev.begin(), ev.end());
  if (margin <= tol || face <= tol) return RegionFlag::Boundary;
  return RegionFlag::Inside;
}

std::array<std::vector<Vec3>, 2> freezing_vertices(int axis) {
  require_axis(axis, "freezing_vertices");
  const int i = axis - 1, j = (axis) % 3, k = (axis + 1) % 3;

  // Half-spaces n·c + b ≥ 0. Tetrahedron faces first, then the cone.
  struct Plane {
    Vec3 n;
    double b;
  };
  std::vector<Plane> tetra;
  for (const Vec3& s : {Vec3(1, -1, 1), Vec3(-1, 1, 1), Vec3(1, 1, -1), Vec3(-1, -1, -1)}) tetra.push_back({s, 1.0});

  std::array<std::vector<Vec3>, 2> pieces;
  for (int piece = 0; piece < 2; ++piece) {
    const double sign = piece == 0 ? 1.0 : -1.0;
    std::vector<Plane> planes = tetra;
    for (int other : {j, k})
      for (double s : {1.0, -1.0}) {
        Vec3 n = Vec3::Zero();
        n(i) = sign;
        n(other) = -s;
        planes.push_back({n, 0.0});
      }

    std::vector<Vec3> verts;
    const std::size_t m = planes.size();
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = a + 1; b < m; ++b)
        for (std::size_t c = b + 1; c < m; ++c) {
          Mat3 lhs;
          lhs.row(0) = planes[a].n.transpose();
          lhs.row(1) = planes[b].n.transpose();
          lhs.row(2) = planes[c].n.transpose();
          if (std::abs(lhs.determinant()) < 1e-12) continue;
          const Vec3 p = lhs.fullPivLu().solve(Vec3(-planes[a].b, -planes[b].b, -planes[c].b));
          const bool feasible = std::all_of(planes.begin(), planes.end(),
                                            [&](const Plane& pl) { return pl.n.dot(p) + pl.b >= -1e-12; });
          if (!feasible) continue;
          const bool seen = std::any_of(verts.begin(), verts.end(), [&](const Vec3& v) { return (v - p).norm() < 1e-9; });
          if (!seen) verts.push_back(p);
        }
    std::sort(verts.begin(), verts.end(), [](const Vec3& l, const Vec3& r) {
      return std::lexicographical_compare(l.data(), l.data() + 3, r.data(), r.data() + 3);
    });
    pieces[piece] = std::move(verts);
  }
  return pieces;
}

// ---------------------------------------------------------------- monotonicity

double monotonicity_allowance(Method before, Method after) {
  const bool numeric = before == Method::NumericSphere || before == Method::NumericBlock ||
                       after == Method::NumericSphere || after == Method::NumericBlock;
  return kMonotonicityTol + (numeric ? kNumericSlack : 0.0);
}

MonotonicityReport monotonicity_audit(int n_states, int n_channels, std::uint64_t seed, const OptimizerConfig& cfg) {
  if (n_states < 1 || n_channels < 1) throw DomainError("monotonicity_audit: counts must be at least 1");
  std::mt19937_64 master(seed);
  std::vector<std::uint64_t> state_seeds(n_states), channel_seeds(static_cast<std::size_t>(n_states) * n_channels);
  for (auto& s : state_seeds) s = master();
  for (auto& s : channel_seeds) s = master();

  std::vector<DensityMatrix> states;
  states.reserve(n_states);
  for (int s = 0; s < n_states; ++s) {
    std::mt19937_64 rng(state_seeds[s]);
    if (s % 5 == 4)
      states.push_back(make_bell_diagonal(random_tetrahedron_point(rng)));
    else
      states.push_back(random_density({2, 2}, 1 + s % 4, rng));
  }

  std::vector<MinResult> before(n_states);
  parallel_for(static_cast<std::size_t>(n_states), [&](std::size_t s) { before[s] = n1_numeric(states[s], cfg); });

  MonotonicityReport report;
  report.cases.resize(channel_seeds.size());
  parallel_for(channel_seeds.size(), [&](std::size_t idx) {
    const int s = static_cast<int>(idx) / n_channels;
    const int k = static_cast<int>(idx) % n_channels;
    const int kraus = 1 + k % 4;
    const KrausChannel ch = random_channel(2, kraus, channel_seeds[idx]);
    const MinResult after = n1_numeric(apply_channel_B(states[s], ch), cfg);
    MonotonicityCase& c = report.cases[idx];
    c.state_index = s;
    c.channel_index = k;
    c.kraus_count = kraus;
    c.before = before[s].value;
    c.after = after.value;
    c.method_before = before[s].method;
    c.method_after = after.method;
    c.allowed = monotonicity_allowance(c.method_before, c.method_after);
    c.violation = c.after > c.before + c.allowed;
  });

  report.max_increase = -std::numeric_limits<double>::infinity();
  for (const auto& c : report.cases) {
    report.violations += c.violation ? 1 : 0;
    report.max_increase = std::max(report.max_increase, c.after - c.before);
  }
  return report;
}

}  // namespace minkit
