#include "minkit/measure.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "minkit/error.hpp"

namespace minkit {

namespace {
constexpr double kProjectorTol = 1e-10;
}

LocalMeasurement::LocalMeasurement(std::vector<ComplexMatrix> projectors) : projectors_(std::move(projectors)) {
  if (projectors_.empty()) throw InvariantError("LocalMeasurement: no projectors");
  dim_ = static_cast<int>(projectors_.front().rows());
  ComplexMatrix total = ComplexMatrix::Zero(dim_, dim_);
  for (std::size_t k = 0; k < projectors_.size(); ++k) {
    const ComplexMatrix& p = projectors_[k];
    if (p.rows() != dim_ || p.cols() != dim_) throw DimensionError("LocalMeasurement: projector shapes differ");
    if (!is_hermitian(p, kProjectorTol))
      throw InvariantError("LocalMeasurement: projector " + std::to_string(k) + " is not Hermitian");
    if (max_abs_diff(p * p, p) > kProjectorTol)
      throw InvariantError("LocalMeasurement: projector " + std::to_string(k) + " is not idempotent");
    for (std::size_t l = 0; l < k; ++l)
      if ((p * projectors_[l]).cwiseAbs().maxCoeff() > kProjectorTol)
        throw InvariantError("LocalMeasurement: projectors " + std::to_string(l) + " and " + std::to_string(k) +
                             " are not orthogonal");
    total += p;
  }
  if (max_abs_diff(total, identity(dim_)) > kProjectorTol)
    throw InvariantError("LocalMeasurement: projectors do not sum to identity");
}

LocalMeasurement LocalMeasurement::from_basis(const ComplexMatrix& basis) {
  std::vector<ComplexMatrix> ps;
  ps.reserve(basis.cols());
  for (Eigen::Index k = 0; k < basis.cols(); ++k) ps.push_back(basis.col(k) * basis.col(k).adjoint());
  return LocalMeasurement(std::move(ps));
}

const char* to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::Unique: return "Unique";
    case FamilyKind::QubitSphere: return "QubitSphere";
    case FamilyKind::BlockDegenerate: return "BlockDegenerate";
  }
  return "?";
}

ComplexMatrix block_unitary(const std::vector<int>& block_sizes, std::span<const double> params) {
  int n = 0;
  for (int k : block_sizes) n += k;
  ComplexMatrix u = identity(n);
  std::size_t idx = 0;
  int offset = 0;
  for (int k : block_sizes) {
    if (k >= 2) {
      if (idx + static_cast<std::size_t>(k * k) > params.size())
        throw DimensionError("block_unitary: too few parameters");
      ComplexMatrix h = ComplexMatrix::Zero(k, k);
      for (int i = 0; i < k; ++i) h(i, i) = params[idx++];
      for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) {
          h(i, j) = Complex(params[idx], params[idx + 1]);
          h(j, i) = std::conj(h(i, j));
          idx += 2;
        }
      u.block(offset, offset, k, k) = expi_hermitian(h);
    }
    offset += k;
  }
  return u;
}

LocalMeasurement MeasurementFamily::fixed() const { return LocalMeasurement::from_basis(basis); }

int MeasurementFamily::parameter_count() const {
  int count = 0;
  for (int k : block_sizes)
    if (k >= 2) count += k * k;
  return count;
}

ComplexMatrix MeasurementFamily::member_basis(std::span<const double> params) const {
  if (parameter_count() == 0) return basis;
  return basis * block_unitary(block_sizes, params);
}

LocalMeasurement MeasurementFamily::member(std::span<const double> params) const {
  return LocalMeasurement::from_basis(member_basis(params));
}

ComplexMatrix measure_operator(const ComplexMatrix& m, Dims dims, const LocalMeasurement& meas) {
  if (meas.dim() != dims.a)
    throw DimensionError("apply_measurement: projector dimension " + std::to_string(meas.dim()) +
                         " does not match dA = " + std::to_string(dims.a));
  ComplexMatrix out = ComplexMatrix::Zero(m.rows(), m.cols());
  const ComplexMatrix id_b = identity(dims.b);
  for (const ComplexMatrix& p : meas.projectors()) {
    const ComplexMatrix lifted = tensor_product(p, id_b);
    out += lifted * m * lifted;
  }
  return out;
}

DensityMatrix apply_measurement(const DensityMatrix& rho, const LocalMeasurement& meas) {
  return DensityMatrix::validate(measure_operator(rho.matrix(), rho.dims(), meas), rho.dims());
}

MeasurementFamily invariant_family(const ComplexMatrix& rho_a, double degeneracy_tol) {
  HermEig eig = hermitian_eig(rho_a);
  MeasurementFamily fam;
  fam.basis = eig.vectors;
  fam.eigenvalues = eig.values;
  const Eigen::Index n = eig.values.size();
  int run = 1;
  for (Eigen::Index k = 1; k < n; ++k) {
    if (eig.values(k - 1) - eig.values(k) <= degeneracy_tol) {
      ++run;
    } else {
      fam.block_sizes.push_back(run);
      run = 1;
    }
  }
  if (n > 0) fam.block_sizes.push_back(run);

  const bool degenerate = std::any_of(fam.block_sizes.begin(), fam.block_sizes.end(), [](int k) { return k > 1; });
  if (!degenerate)
    fam.kind = FamilyKind::Unique;
  else if (n == 2)
    fam.kind = FamilyKind::QubitSphere;
  else
    fam.kind = FamilyKind::BlockDegenerate;
  return fam;
}

bool is_invariant(const LocalMeasurement& meas, const ComplexMatrix& rho_a) {
  if (meas.dim() != rho_a.rows()) throw DimensionError("is_invariant: dimension mismatch");
  ComplexMatrix out = ComplexMatrix::Zero(rho_a.rows(), rho_a.cols());
  for (const ComplexMatrix& p : meas.projectors()) out += p * rho_a * p;
  return hs_norm(out - rho_a) <= 1e-9;
}

Vec3 sphere_direction(double theta, double phi) {
  return Vec3(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta));
}

ComplexMatrix sphere_basis(double theta, double phi) {
  const double ch = std::cos(0.5 * theta), sh = std::sin(0.5 * theta);
  const Complex e = std::polar(1.0, phi);
  ComplexMatrix b(2, 2);
  b << ch, -std::conj(e) * sh,
       e * sh, ch;
  return b;
}

LocalMeasurement sphere_measurement(const Vec3& e_hat) {
  if (!e_hat.allFinite() || std::abs(e_hat.norm() - 1.0) > 1e-10)
    throw DomainError("sphere_measurement: direction must be a unit vector");
  ComplexMatrix es = e_hat(0) * pauli(1) + e_hat(1) * pauli(2) + e_hat(2) * pauli(3);
  return LocalMeasurement({0.5 * (pauli(0) + es), 0.5 * (pauli(0) - es)});
}

}  // namespace minkit
