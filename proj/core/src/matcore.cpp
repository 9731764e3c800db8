#include "minkit/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "minkit/error.hpp"

namespace minkit {

namespace {

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols())
    throw DimensionError(std::string(what) + ": matrix must be square, got " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
}

// Descending order; phase of each column fixed so that its first component
// with modulus above 1e-12 is real positive.
void sort_and_fix_phase(RealVector& values, ComplexMatrix* vectors) {
  const Eigen::Index n = values.size();
  values.reverseInPlace();
  if (!vectors) return;
  *vectors = vectors->rowwise().reverse().eval();
  for (Eigen::Index k = 0; k < n; ++k) {
    auto col = vectors->col(k);
    for (Eigen::Index i = 0; i < col.size(); ++i) {
      double mod = std::abs(col(i));
      if (mod > 1e-12) {
        col *= std::conj(col(i)) / mod;
        break;
      }
    }
  }
}

}  // namespace

ComplexMatrix identity(int n) { return ComplexMatrix::Identity(n, n); }

ComplexMatrix pauli(int index) {
  const Complex i(0.0, 1.0);
  ComplexMatrix p(2, 2);
  switch (index) {
    case 0: p << 1, 0, 0, 1; break;
    case 1: p << 0, 1, 1, 0; break;
    case 2: p << 0, -i, i, 0; break;
    case 3: p << 1, 0, 0, -1; break;
    default: throw DomainError("pauli: index must be in 0..3");
  }
  return p;
}

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  const Eigen::Index br = b.rows(), bc = b.cols();
  ComplexMatrix out(a.rows() * br, a.cols() * bc);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * br, j * bc, br, bc) = a(i, j) * b;
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, Dims dims, Party traced) {
  if (dims.a < 1 || dims.b < 1 || m.rows() != dims.total() || m.cols() != dims.total())
    throw DimensionError("partial_trace: matrix is " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + ", dims (" + std::to_string(dims.a) + "," +
                         std::to_string(dims.b) + ")");
  const int da = dims.a, db = dims.b;
  if (traced == Party::B) {
    ComplexMatrix out = ComplexMatrix::Zero(da, da);
    for (int i = 0; i < da; ++i)
      for (int k = 0; k < da; ++k)
        for (int j = 0; j < db; ++j) out(i, k) += m(i * db + j, k * db + j);
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(db, db);
  for (int j = 0; j < db; ++j)
    for (int l = 0; l < db; ++l)
      for (int i = 0; i < da; ++i) out(j, l) += m(i * db + j, i * db + l);
  return out;
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const Complex z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("max_abs_diff: shape mismatch");
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

HermEig hermitian_eig(const ComplexMatrix& m) {
  require_square(m, "hermitian_eig");
  if (!is_hermitian(m, kHermitianTol)) throw InvariantError("hermitian_eig: matrix is not Hermitian");
  const ComplexMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  HermEig out{solver.eigenvalues(), solver.eigenvectors()};
  sort_and_fix_phase(out.values, &out.vectors);
  return out;
}

RealVector hermitian_eigenvalues(const ComplexMatrix& m) {
  const ComplexMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym, Eigen::EigenvaluesOnly);
  RealVector values = solver.eigenvalues();
  sort_and_fix_phase(values, nullptr);
  return values;
}

double trace_norm_hermitian(const ComplexMatrix& m) {
  require_square(m, "trace_norm");
  return hermitian_eigenvalues(m).cwiseAbs().sum();
}

double trace_norm_svd(const ComplexMatrix& m) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues().sum();
}

double trace_norm(const ComplexMatrix& m) {
  require_square(m, "trace_norm");
  if (m.size() == 0) return 0.0;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (is_hermitian(m, 1e-12 * scale)) return trace_norm_hermitian(m);
  return trace_norm_svd(m);
}

double hs_norm(const ComplexMatrix& m) { return m.norm(); }

ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
  HermEig eig = hermitian_eig(m);
  RealVector roots(eig.values.size());
  for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
    double v = eig.values(k);
    if (v < -kEigenClamp)
      throw InvariantError("psd_sqrt: negative eigenvalue " + std::to_string(v));
    roots(k) = std::sqrt(std::max(v, 0.0));
  }
  return eig.vectors * roots.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
}

double fidelity(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
  require_square(rho, "fidelity");
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
    throw DimensionError("fidelity: operands have different dimensions");
  // Tr √(√ρ σ √ρ) = ‖√ρ √σ‖₁, which avoids a square root of a near-singular
  // product.
  const double s = trace_norm_svd(psd_sqrt(rho) * psd_sqrt(sigma));
  return std::clamp(s * s, 0.0, 1.0);
}

ComplexMatrix expi_hermitian(const ComplexMatrix& h) {
  require_square(h, "expi_hermitian");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (h + h.adjoint()));
  const RealVector& lam = solver.eigenvalues();
  ComplexVector phases(lam.size());
  for (Eigen::Index k = 0; k < lam.size(); ++k) phases(k) = std::polar(1.0, lam(k));
  return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

}  // namespace minkit
