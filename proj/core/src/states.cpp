#include "minkit/states.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "minkit/error.hpp"

namespace minkit {

namespace {

std::string dims_str(Dims d) { return "(" + std::to_string(d.a) + "," + std::to_string(d.b) + ")"; }

void require_two_qubit(Dims dims, const char* what) {
  if (dims.a != 2 || dims.b != 2)
    throw DimensionError(std::string(what) + ": requires dims (2,2), got " + dims_str(dims));
}

ComplexMatrix sigma_ab(int i, int j) { return tensor_product(pauli(i), pauli(j)); }

}  // namespace

// ---------------------------------------------------------------- DensityMatrix

DensityMatrix DensityMatrix::validate(const ComplexMatrix& raw, Dims dims) {
  if (dims.a < 1 || dims.b < 1) throw DimensionError("validate: dims must be positive, got " + dims_str(dims));
  if (raw.rows() != dims.total() || raw.cols() != dims.total())
    throw DimensionError("validate: matrix is " + std::to_string(raw.rows()) + "x" +
                         std::to_string(raw.cols()) + " but dims " + dims_str(dims) + " need " +
                         std::to_string(dims.total()) + "x" + std::to_string(dims.total()));
  if (!all_finite(raw)) throw InvariantError("validate: matrix has non-finite entries");
  if (!is_hermitian(raw, kHermitianTol)) throw InvariantError("validate: matrix is not Hermitian");
  const Complex tr = raw.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > 1e-10)
    throw InvariantError("validate: trace is " + std::to_string(tr.real()) + ", expected 1");
  ComplexMatrix sym = 0.5 * (raw + raw.adjoint());
  const double lowest = hermitian_eigenvalues(sym).minCoeff();
  if (lowest < -kEigenClamp)
    throw InvariantError("validate: negative eigenvalue " + std::to_string(lowest));
  return DensityMatrix(std::move(sym), dims);
}

ComplexMatrix DensityMatrix::reduced_a() const { return partial_trace(mat_, dims_, Party::B); }
ComplexMatrix DensityMatrix::reduced_b() const { return partial_trace(mat_, dims_, Party::A); }

DensityMatrix validate(const ComplexMatrix& raw, Dims dims) { return DensityMatrix::validate(raw, dims); }

// ---------------------------------------------------------------- PureState

PureState::PureState(ComplexVector amplitudes, Dims dims) : amps_(std::move(amplitudes)), dims_(dims) {
  if (dims.a < 1 || dims.b < 1 || amps_.size() != dims.total())
    throw DimensionError("PureState: " + std::to_string(amps_.size()) + " amplitudes for dims " + dims_str(dims));
  if (std::abs(amps_.norm() - 1.0) > 1e-12) throw InvariantError("PureState: amplitudes are not normalized");
}

PureState PureState::normalized(ComplexVector amplitudes, Dims dims) {
  const double n = amplitudes.norm();
  if (!(n > 0.0)) throw InvariantError("PureState: zero vector");
  return PureState(amplitudes / n, dims);
}

DensityMatrix PureState::density() const {
  return DensityMatrix::validate(amps_ * amps_.adjoint(), dims_);
}

// ---------------------------------------------------------------- Schmidt

ComplexVector SchmidtForm::reconstruct() const {
  ComplexVector psi = ComplexVector::Zero(dims.total());
  for (Eigen::Index k = 0; k < coefficients.size(); ++k) {
    const double w = std::sqrt(std::max(coefficients(k), 0.0));
    for (int i = 0; i < dims.a; ++i)
      for (int j = 0; j < dims.b; ++j) psi(i * dims.b + j) += w * basis_a(i, k) * basis_b(j, k);
  }
  return psi;
}

int SchmidtForm::rank(double tol) const {
  return static_cast<int>((coefficients.array() > tol).count());
}

SchmidtForm schmidt(const PureState& psi) {
  const Dims d = psi.dims();
  ComplexMatrix coeff(d.a, d.b);
  for (int i = 0; i < d.a; ++i)
    for (int j = 0; j < d.b; ++j) coeff(i, j) = psi.amplitudes()(i * d.b + j);
  Eigen::JacobiSVD<ComplexMatrix> svd(coeff, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SchmidtForm out;
  out.coefficients = svd.singularValues().array().square();
  out.basis_a = svd.matrixU();
  out.basis_b = svd.matrixV().conjugate();
  out.dims = d;
  return out;
}

double eof_pure(const SchmidtForm& s) {
  double e = 0.0;
  for (Eigen::Index k = 0; k < s.coefficients.size(); ++k) {
    const double l = s.coefficients(k);
    if (l > 0.0) e -= l * std::log2(l);
  }
  return std::max(e, 0.0);
}

// ---------------------------------------------------------------- Bloch form

ComplexMatrix bloch_matrix(const Vec3& x, const Vec3& y, const Mat3& t) {
  ComplexMatrix m = identity(4);
  for (int i = 0; i < 3; ++i) {
    m += x(i) * sigma_ab(i + 1, 0);
    m += y(i) * sigma_ab(0, i + 1);
    for (int j = 0; j < 3; ++j) m += t(i, j) * sigma_ab(i + 1, j + 1);
  }
  return 0.25 * m;
}

ComplexMatrix BlochForm::reconstruct() const { return bloch_matrix(x, y, t); }

BlochForm bloch_decompose(const DensityMatrix& rho) {
  require_two_qubit(rho.dims(), "bloch_decompose");
  const ComplexMatrix& m = rho.matrix();
  auto expect = [&](int i, int j) { return (m * sigma_ab(i, j)).trace().real(); };
  BlochForm b;
  for (int i = 0; i < 3; ++i) {
    b.x(i) = expect(i + 1, 0);
    b.y(i) = expect(0, i + 1);
    for (int j = 0; j < 3; ++j) b.t(i, j) = expect(i + 1, j + 1);
  }
  b.c = b.t.diagonal();
  return b;
}

ComplexMatrix su2_from_rotation(const Mat3& rotation) {
  Eigen::Quaterniond q(rotation);
  q.normalize();
  const Complex i(0.0, 1.0);
  return q.w() * pauli(0) - i * (q.x() * pauli(1) + q.y() * pauli(2) + q.z() * pauli(3));
}

CanonicalForm canonicalize(const DensityMatrix& rho) {
  const BlochForm b = bloch_decompose(rho);
  Eigen::JacobiSVD<Mat3> svd(b.t, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 u = svd.matrixU();
  Mat3 v = svd.matrixV();
  // Keep both factors in SO(3); the sign moves onto the smallest entry.
  if (u.determinant() < 0) u.col(2) *= -1.0;
  if (v.determinant() < 0) v.col(2) *= -1.0;

  const Mat3 rot_a = u.transpose();
  const Mat3 rot_b = v.transpose();
  const ComplexMatrix ua = su2_from_rotation(rot_a);
  const ComplexMatrix ub = su2_from_rotation(rot_b);
  const ComplexMatrix local = tensor_product(ua, ub);
  DensityMatrix out = DensityMatrix::validate(local * rho.matrix() * local.adjoint(), rho.dims());
  BlochForm ob = bloch_decompose(out);
  return CanonicalForm{std::move(out), ob, ua, ub, rot_a, rot_b};
}

// ---------------------------------------------------------------- Bell-diagonal

std::array<double, 4> bell_eigenvalues(const Vec3& c) {
  // Order: Φ+, Φ−, Ψ+, Ψ−.
  return {0.25 * (1 + c(0) - c(1) + c(2)), 0.25 * (1 - c(0) + c(1) + c(2)),
          0.25 * (1 + c(0) + c(1) - c(2)), 0.25 * (1 - c(0) - c(1) - c(2))};
}

bool in_tetrahedron(const Vec3& c, double tol) {
  const auto ev = bell_eigenvalues(c);
  return std::all_of(ev.begin(), ev.end(), [tol](double v) { return v >= -tol; });
}

DensityMatrix make_bell_diagonal(const Vec3& c) {
  if (!c.allFinite() || !in_tetrahedron(c, 1e-12))
    throw DomainError("make_bell_diagonal: (" + std::to_string(c(0)) + ", " + std::to_string(c(1)) + ", " +
                      std::to_string(c(2)) + ") lies outside the physical tetrahedron");
  Mat3 t = c.asDiagonal();
  return DensityMatrix::validate(bloch_matrix(Vec3::Zero(), Vec3::Zero(), t), {2, 2});
}

// ---------------------------------------------------------------- symmetric families

ComplexMatrix swap_operator(int d) {
  ComplexMatrix f = ComplexMatrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) f(i * d + j, j * d + i) = 1.0;
  return f;
}

ComplexVector maximally_entangled(int d) {
  ComplexVector phi = ComplexVector::Zero(d * d);
  for (int i = 0; i < d; ++i) phi(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
  return phi;
}

DensityMatrix make_werner(int d, double x) {
  if (d < 2) throw DomainError("make_werner: d must be at least 2");
  if (!(x >= -1.0 && x <= 1.0)) throw DomainError("make_werner: x must lie in [-1, 1]");
  const double dd = d;
  const double norm = dd * dd * dd - dd;
  ComplexMatrix m = ((dd - x) / norm) * identity(d * d) + ((dd * x - 1.0) / norm) * swap_operator(d);
  return DensityMatrix::validate(m, {d, d});
}

DensityMatrix make_isotropic(int d, double x) {
  if (d < 2) throw DomainError("make_isotropic: d must be at least 2");
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("make_isotropic: x must lie in [0, 1]");
  const double d2 = static_cast<double>(d) * d;
  const ComplexVector phi = maximally_entangled(d);
  ComplexMatrix m = ((1.0 - x) / (d2 - 1.0)) * identity(d * d) + ((d2 * x - 1.0) / (d2 - 1.0)) * (phi * phi.adjoint());
  return DensityMatrix::validate(m, {d, d});
}

// ---------------------------------------------------------------- random

ComplexMatrix ginibre(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  return g;
}

ComplexMatrix random_unitary(int n, std::mt19937_64& rng) {
  const ComplexMatrix g = ginibre(n, n, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * identity(n);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < n; ++k) {
    const double mod = std::abs(r(k, k));
    if (mod > 0.0) q.col(k) *= r(k, k) / mod;
  }
  return q;
}

Vec3 random_unit_vector(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec3 v;
  do {
    v = Vec3(normal(rng), normal(rng), normal(rng));
  } while (v.norm() < 1e-8);
  return v.normalized();
}

Vec3 random_tetrahedron_point(std::mt19937_64& rng) {
  static const std::array<Vec3, 4> vertices{Vec3(1, -1, 1), Vec3(-1, 1, 1), Vec3(1, 1, -1), Vec3(-1, -1, -1)};
  std::exponential_distribution<double> expo(1.0);
  std::array<double, 4> w{};
  double total = 0.0;
  for (double& wi : w) total += (wi = expo(rng));
  Vec3 c = Vec3::Zero();
  for (int k = 0; k < 4; ++k) c += (w[k] / total) * vertices[k];
  return c;
}

PureState random_pure(Dims dims, std::mt19937_64& rng) {
  if (dims.a < 1 || dims.b < 1) throw DimensionError("random_pure: dims must be positive");
  ComplexVector v = ginibre(dims.total(), 1, rng).col(0);
  return PureState::normalized(std::move(v), dims);
}

PureState random_pure(Dims dims, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_pure(dims, rng);
}

DensityMatrix random_density(Dims dims, int rank, std::mt19937_64& rng) {
  if (dims.a < 1 || dims.b < 1) throw DimensionError("random_density: dims must be positive");
  if (rank < 1 || rank > dims.total())
    throw DomainError("random_density: rank must lie in [1, " + std::to_string(dims.total()) + "]");
  const ComplexMatrix g = ginibre(dims.total(), rank, rng);
  ComplexMatrix m = g * g.adjoint();
  m /= m.trace().real();
  return DensityMatrix::validate(m, dims);
}

DensityMatrix random_density(Dims dims, int rank, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_density(dims, rank, rng);
}

}  // namespace minkit
