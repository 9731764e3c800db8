#include "minkit/min.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "minkit/error.hpp"
#include "minkit/parallel.hpp"

namespace minkit {

const char* to_string(Measure m) {
  switch (m) {
    case Measure::N1: return "n1";
    case Measure::N2: return "n2";
    case Measure::NB: return "nb";
  }
  return "?";
}

const char* to_string(Method m) {
  switch (m) {
    case Method::ClosedForm: return "ClosedForm";
    case Method::NumericUnique: return "NumericUnique";
    case Method::NumericSphere: return "NumericSphere";
    case Method::NumericBlock: return "NumericBlock";
  }
  return "?";
}

void OptimizerConfig::validate() const {
  if (sphere_grid < 8) throw DomainError("OptimizerConfig: sphere_grid must be at least 8");
  if (!(tol > 0.0)) throw DomainError("OptimizerConfig: tol must be positive");
  if (refine_iters < 0 || restarts < 0) throw DomainError("OptimizerConfig: counts must be non-negative");
  if (!(degeneracy_tol >= 0.0) || !(branch_threshold >= 0.0))
    throw DomainError("OptimizerConfig: tolerances must be non-negative");
}

namespace {

void require_two_qubit(const DensityMatrix& rho, const char* what) {
  if (rho.dims() != Dims{2, 2}) throw DimensionError(std::string(what) + ": requires dims (2,2)");
}

std::pair<double, double> angles_of(const Vec3& e) {
  return {std::acos(std::clamp(e(2), -1.0, 1.0)), std::atan2(e(1), e(0))};
}

ComplexMatrix basis_for_direction(const Vec3& e) {
  auto [theta, phi] = angles_of(e);
  return sphere_basis(theta, phi);
}

// Objective of one measure, evaluated on rank-1 measurement bases of A.
// Working in the rotated frame U†ρU with U = B⊗I, the post-measurement state
// is the block-diagonal part and the disturbance is the off-diagonal part.
class Objective {
 public:
  Objective(const DensityMatrix& rho, Measure measure)
      : rho_(rho.matrix()), dims_(rho.dims()), measure_(measure) {
    if (measure_ == Measure::NB) sqrt_rho_ = psd_sqrt(rho_);
  }

  double operator()(const ComplexMatrix& basis) const {
    const ComplexMatrix u = tensor_product(basis, identity(dims_.b));
    const ComplexMatrix rotated = u.adjoint() * rho_ * u;
    ComplexMatrix off = rotated;
    for (int k = 0; k < dims_.a; ++k) off.block(k * dims_.b, k * dims_.b, dims_.b, dims_.b).setZero();
    switch (measure_) {
      case Measure::N1: return trace_norm_hermitian(off);
      case Measure::N2: return off.squaredNorm();
      case Measure::NB: {
        const ComplexMatrix post = rotated - off;
        const ComplexMatrix root = u.adjoint() * sqrt_rho_ * u;
        const RealVector ev = hermitian_eigenvalues(root * post * root);
        double s = 0.0;
        for (Eigen::Index k = 0; k < ev.size(); ++k) s += std::sqrt(std::max(ev(k), 0.0));
        return std::max(0.0, 2.0 * (1.0 - std::min(s, 1.0)));
      }
    }
    return 0.0;
  }

 private:
  ComplexMatrix rho_;
  Dims dims_;
  Measure measure_;
  ComplexMatrix sqrt_rho_;
};

struct Golden {
  double x;
  double f;
  int evals;
};

// Maximizes f on [lo, hi] by golden-section search.
template <class F>
Golden golden_max(F&& f, double lo, double hi, double width_tol = 1e-10, int max_iter = 100) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  int evals = 2;
  for (int it = 0; it < max_iter && (b - a) > width_tol; ++it) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
    ++evals;
  }
  return f1 >= f2 ? Golden{x1, f1, evals} : Golden{x2, f2, evals};
}

MinResult sphere_search(const Objective& f, const OptimizerConfig& cfg) {
  const int g = cfg.sphere_grid;
  const int n_theta = g + 1;
  const int n_phi = g;
  const double d_theta = std::numbers::pi / g;
  const double d_phi = 2.0 * std::numbers::pi / g;
  std::vector<double> grid(static_cast<std::size_t>(n_theta) * n_phi);
  parallel_for(grid.size(), [&](std::size_t idx) {
    const int i = static_cast<int>(idx) / n_phi;
    const int j = static_cast<int>(idx) % n_phi;
    grid[idx] = f(sphere_basis(i * d_theta, j * d_phi));
  });

  // Best cells first; ties resolve to the lexicographically first (θ, φ).
  std::vector<std::size_t> order(grid.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t starts = std::min<std::size_t>(std::max(cfg.restarts, 1), order.size());
  std::partial_sort(order.begin(), order.begin() + starts, order.end(),
                    [&](std::size_t l, std::size_t r) { return grid[l] > grid[r] || (grid[l] == grid[r] && l < r); });

  struct Local {
    double theta, phi, value;
    int evals;
  };
  std::vector<Local> locals(starts);
  parallel_for(starts, [&](std::size_t s) {
    const std::size_t idx = order[s];
    double theta = static_cast<double>(idx / n_phi) * d_theta;
    double phi = static_cast<double>(idx % n_phi) * d_phi;
    double value = grid[idx];
    int evals = 0;
    for (int round = 0; round < cfg.refine_iters; ++round) {
      const double before = value;
      Golden gt = golden_max([&](double t) { return f(sphere_basis(t, phi)); }, theta - d_theta, theta + d_theta);
      evals += gt.evals;
      if (gt.f > value) {
        theta = gt.x;
        value = gt.f;
      }
      Golden gp = golden_max([&](double p) { return f(sphere_basis(theta, p)); }, phi - d_phi, phi + d_phi);
      evals += gp.evals;
      if (gp.f > value) {
        phi = gp.x;
        value = gp.f;
      }
      if (value - before < cfg.tol) break;
    }
    locals[s] = Local{theta, phi, value, evals};
  });

  MinResult r;
  r.method = Method::NumericSphere;
  r.iterations = static_cast<int>(grid.size());
  std::size_t best = 0;
  for (std::size_t s = 0; s < starts; ++s) {
    r.iterations += locals[s].evals;
    if (locals[s].value > locals[best].value) best = s;
  }
  r.value = locals[best].value;
  r.optimal_basis = sphere_basis(locals[best].theta, locals[best].phi);
  r.optimal_direction = sphere_direction(locals[best].theta, locals[best].phi);
  return r;
}

MinResult block_search(const Objective& f, const MeasurementFamily& fam, const OptimizerConfig& cfg) {
  const int n_params = fam.parameter_count();
  const int starts = std::max(cfg.restarts, 1);
  constexpr double kInitialStep = 0.5;
  constexpr double kFinalStep = 1e-7;
  constexpr int kMaxEvalsPerStart = 40000;

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::vector<double>> initial(starts, std::vector<double>(n_params, 0.0));
  for (int s = 1; s < starts; ++s)
    for (double& p : initial[s]) p = normal(rng);

  struct Local {
    std::vector<double> params;
    double value;
    int evals;
  };
  std::vector<Local> locals(starts);
  parallel_for(static_cast<std::size_t>(starts), [&](std::size_t s) {
    std::vector<double> params = initial[s];
    double value = f(fam.member_basis(params));
    int evals = 1;
    double step = kInitialStep;
    while (step > kFinalStep && evals < kMaxEvalsPerStart) {
      const double sweep_start = value;
      for (int p = 0; p < n_params; ++p) {
        for (double sign : {1.0, -1.0}) {
          std::vector<double> trial = params;
          trial[p] += sign * step;
          const double tv = f(fam.member_basis(trial));
          ++evals;
          if (tv > value) {
            value = tv;
            params = std::move(trial);
            break;
          }
        }
      }
      if (value - sweep_start <= cfg.tol) step *= 0.5;
    }
    locals[s] = Local{std::move(params), value, evals};
  });

  MinResult r;
  r.method = Method::NumericBlock;
  r.iterations = 0;
  std::size_t best = 0;
  for (std::size_t s = 0; s < locals.size(); ++s) {
    r.iterations += locals[s].evals;
    if (locals[s].value > locals[best].value) best = s;
  }
  r.value = locals[best].value;
  r.optimal_basis = fam.member_basis(locals[best].params);
  return r;
}

}  // namespace

// ---------------------------------------------------------------- closed forms

double n1_pure_2xn(const SchmidtForm& s) {
  if (s.rank() > 2) throw DomainError("n1_pure_2xn: state has more than two nonzero Schmidt coefficients");
  const double l1 = s.coefficients.size() > 0 ? std::max(s.coefficients(0), 0.0) : 0.0;
  const double l2 = s.coefficients.size() > 1 ? std::max(s.coefficients(1), 0.0) : 0.0;
  if (std::abs(l1 - l2) <= 1e-12 && std::abs(l1 - 0.5) <= 1e-12) return 1.0;
  return 2.0 * std::sqrt(l1 * l2);
}

double n2_pure_2xn(const SchmidtForm& s) {
  if (s.rank() > 2) throw DomainError("n2_pure_2xn: state has more than two nonzero Schmidt coefficients");
  const double l1 = s.coefficients.size() > 0 ? s.coefficients(0) : 0.0;
  const double l2 = s.coefficients.size() > 1 ? s.coefficients(1) : 0.0;
  return 2.0 * std::max(l1, 0.0) * std::max(l2, 0.0);
}

double n1_pure_degenerate_mxm(int m) {
  if (m < 1) throw DomainError("n1_pure_degenerate_mxm: m must be positive");
  return 2.0 * (m - 1) / m;
}

double n1_two_qubit_formula(const Vec3& c, const Vec3& x, XNorm norm) {
  const double xn = norm == XNorm::Euclidean ? x.norm() : x.lpNorm<1>();
  const double cn = norm == XNorm::Euclidean ? c.norm() : c.lpNorm<1>();
  if (!(xn > 0.0)) throw DomainError("n1_two_qubit_formula: requires x != 0");
  const Vec3 c2 = c.array().square();
  const Vec3 x2 = x.array().square();
  const double alpha = cn * cn * xn * xn - c2.dot(x2);
  const double beta = x2(0) * c2(1) * c2(2) + x2(1) * c2(2) * c2(0) + x2(2) * c2(0) * c2(1);
  const double root = 2.0 * std::sqrt(std::max(beta, 0.0)) * xn;
  const double chi_plus = alpha + root;
  double chi_minus = alpha - root;
  if (norm == XNorm::Euclidean && chi_plus > 0.0) {
    // alpha - root cancels when chi_minus is small. Use chi_plus * chi_minus
    // = |x|^4 disc, with disc the squared eigenvalue gap of the correlation
    // Gram matrix on the plane orthogonal to x, written as a sum of squares.
    const Vec3 xh = x / xn;
    const Vec3 u = xh.unitOrthogonal();
    const Vec3 v = xh.cross(u);
    const double g11 = (c2.array() * u.array().square()).sum();
    const double g22 = (c2.array() * v.array().square()).sum();
    const double g12 = (c2.array() * u.array() * v.array()).sum();
    const double disc = (g11 - g22) * (g11 - g22) + 4.0 * g12 * g12;
    chi_minus = xn * xn * xn * xn * disc / chi_plus;
  }
  return (std::sqrt(std::max(chi_plus, 0.0)) + std::sqrt(std::max(chi_minus, 0.0))) / (2.0 * xn);
}

MinResult n1_two_qubit(const DensityMatrix& rho, double branch_threshold) {
  require_two_qubit(rho, "n1_two_qubit");
  const CanonicalForm cf = canonicalize(rho);
  const Vec3& c = cf.bloch.c;
  const Vec3& x = cf.bloch.x;
  MinResult r;
  r.method = Method::ClosedForm;
  Vec3 direction;
  if (x.norm() < branch_threshold) {
    Eigen::Index weakest = 0;
    c.cwiseAbs().minCoeff(&weakest);
    r.value = c.cwiseAbs().maxCoeff();
    // Measuring along the weakest axis keeps the two larger correlations.
    direction = cf.rotation_a.transpose() * Vec3::Unit(weakest);
  } else {
    r.value = n1_two_qubit_formula(c, x);
    direction = cf.rotation_a.transpose() * x.normalized();
  }
  r.optimal_direction = direction;
  r.optimal_basis = basis_for_direction(direction);
  return r;
}

MinResult n2_two_qubit(const DensityMatrix& rho, double branch_threshold) {
  require_two_qubit(rho, "n2_two_qubit");
  const CanonicalForm cf = canonicalize(rho);
  MinResult r;
  if (cf.bloch.x.norm() < branch_threshold) {
    const Vec3 s = sorted_abs(cf.bloch.c);
    Eigen::Index weakest = 0;
    cf.bloch.c.cwiseAbs().minCoeff(&weakest);
    r.value = (s(0) * s(0) + s(1) * s(1)) / 4.0;
    r.method = Method::ClosedForm;
    r.optimal_direction = cf.rotation_a.transpose() * Vec3::Unit(weakest);
    r.optimal_basis = basis_for_direction(*r.optimal_direction);
    return r;
  }
  const Vec3 x = bloch_decompose(rho).x;
  const Vec3 e = x.normalized();
  r.value = disturbance(rho, sphere_measurement(e), Measure::N2);
  r.method = Method::NumericUnique;
  r.optimal_direction = e;
  r.optimal_basis = basis_for_direction(e);
  return r;
}

double n1_werner(int d, double x) {
  if (d < 2) throw DomainError("n1_werner: d must be at least 2");
  if (!(x >= -1.0 && x <= 1.0)) throw DomainError("n1_werner: x must lie in [-1, 1]");
  return std::abs(d * x - 1.0) / (d + 1.0);
}

double n1_isotropic(int d, double x) {
  if (d < 2) throw DomainError("n1_isotropic: d must be at least 2");
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("n1_isotropic: x must lie in [0, 1]");
  const double dd = d;
  return 2.0 * std::abs(dd * dd * x - 1.0) / (dd * (dd + 1.0));
}

Vec3 sorted_abs(const Vec3& c) {
  Vec3 a = c.cwiseAbs();
  std::sort(a.data(), a.data() + 3, std::greater<>());
  return a;
}

double h_sorted(double theta, double phi, double c_plus, double c_zero, double c_minus) {
  const double p2 = c_plus * c_plus, z2 = c_zero * c_zero, m2 = c_minus * c_minus;
  const double st2 = std::pow(std::sin(theta), 2);
  const double st4 = st2 * st2;
  const double cp2 = std::pow(std::cos(phi), 2);
  const double sp2 = std::pow(std::sin(phi), 2);

  const double q = p2 + z2 - st2 * (z2 - m2 + cp2 * (p2 - z2));
  const double a = st4 * (p2 - z2) * (p2 - z2);
  const double b = 2.0 * (p2 - z2) * (st2 * (p2 + z2 - 2.0 * m2) - st4 * (p2 - m2));
  const double c = std::pow(p2 - z2 - st2 * (p2 - m2), 2);
  const double h = a * sp2 * sp2 + b * sp2 + c;
  return q + std::sqrt(std::max(h, 0.0));
}

double h_of_e(const Vec3& e_hat, const Vec3& c) {
  if (!e_hat.allFinite() || std::abs(e_hat.norm() - 1.0) > 1e-10)
    throw DomainError("h_of_e: direction must be a unit vector");
  std::array<int, 3> perm{0, 1, 2};
  std::stable_sort(perm.begin(), perm.end(), [&](int l, int r) { return std::abs(c(l)) > std::abs(c(r)); });
  const Vec3 e(e_hat(perm[0]), e_hat(perm[1]), e_hat(perm[2]));
  auto [theta, phi] = angles_of(e);
  return h_sorted(theta, phi, std::abs(c(perm[0])), std::abs(c(perm[1])), std::abs(c(perm[2])));
}

// ---------------------------------------------------------------- evaluation

double disturbance(const DensityMatrix& rho, const LocalMeasurement& meas, Measure measure) {
  const ComplexMatrix post = measure_operator(rho.matrix(), rho.dims(), meas);
  const ComplexMatrix diff = rho.matrix() - post;
  switch (measure) {
    case Measure::N1: return trace_norm(diff);
    case Measure::N2: return diff.squaredNorm();
    case Measure::NB: return std::max(0.0, 2.0 * (1.0 - std::sqrt(fidelity(rho.matrix(), post))));
  }
  return 0.0;
}

MinResult numeric_min(const DensityMatrix& rho, Measure measure, const OptimizerConfig& cfg) {
  cfg.validate();
  if (rho.dims().total() > kMaxNumericDimension)
    throw DimensionError("numeric optimizer: dA*dB = " + std::to_string(rho.dims().total()) + " exceeds " +
                         std::to_string(kMaxNumericDimension));
  const MeasurementFamily fam = invariant_family(rho.reduced_a(), cfg.degeneracy_tol);
  const Objective f(rho, measure);
  switch (fam.kind) {
    case FamilyKind::Unique: {
      MinResult r;
      r.method = Method::NumericUnique;
      r.value = f(fam.basis);
      r.optimal_basis = fam.basis;
      r.iterations = 1;
      return r;
    }
    case FamilyKind::QubitSphere: return sphere_search(f, cfg);
    case FamilyKind::BlockDegenerate: return block_search(f, fam, cfg);
  }
  throw InvariantError("numeric_min: unknown family kind");
}

MinResult n1_numeric(const DensityMatrix& rho, const OptimizerConfig& cfg) { return numeric_min(rho, Measure::N1, cfg); }
MinResult n2_numeric(const DensityMatrix& rho, const OptimizerConfig& cfg) { return numeric_min(rho, Measure::N2, cfg); }
MinResult nb_numeric(const DensityMatrix& rho, const OptimizerConfig& cfg) { return numeric_min(rho, Measure::NB, cfg); }

// ---------------------------------------------------------------- relations

namespace {
RelationCheck make_relation(std::string identity, double lhs, double rhs) {
  return RelationCheck{std::move(identity), lhs, rhs, std::abs(lhs - rhs)};
}
}  // namespace

RelationCheck relation_bell_diagonal(const Vec3& c) {
  const DensityMatrix rho = make_bell_diagonal(c);
  const double n1 = n1_two_qubit(rho).value;
  const double n2 = n2_two_qubit(rho).value;
  const double c0 = sorted_abs(c)(1);
  return make_relation("N1 = sqrt(4 N2 - c0^2)", n1, std::sqrt(std::max(4.0 * n2 - c0 * c0, 0.0)));
}

RelationCheck relation_werner(int d, double x, const OptimizerConfig& cfg) {
  const double n1 = n1_werner(d, x);
  const double n2 = n2_numeric(make_werner(d, x), cfg).value;
  return make_relation("N1 = sqrt(d(d-1) N2)", n1, std::sqrt(d * (d - 1.0) * n2));
}

RelationCheck relation_isotropic(int d, double x, const OptimizerConfig& cfg) {
  const double n1 = n1_isotropic(d, x);
  const double n2 = n2_numeric(make_isotropic(d, x), cfg).value;
  return make_relation("N1 = 2 sqrt((d-1) N2 / d)", n1, 2.0 * std::sqrt((d - 1.0) * n2 / d));
}

RelationCheck relation_pure(const PureState& psi, const OptimizerConfig& cfg) {
  const double n1 = n1_pure_2xn(schmidt(psi));
  const double n2 = n2_numeric(psi.density(), cfg).value;
  return make_relation("N1 = sqrt(2 N2)", n1, std::sqrt(2.0 * n2));
}

}  // namespace minkit
