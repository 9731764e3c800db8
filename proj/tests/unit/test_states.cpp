#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "minkit/error.hpp"
#include "minkit/states.hpp"
#include "../support/oracles.hpp"

using namespace minkit;

namespace {

ComplexVector bell_phi_plus() {
  ComplexVector v = ComplexVector::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return v;
}

Mat3 random_rotation(std::mt19937_64& rng) {
  Eigen::Quaterniond q(Eigen::Vector4d::NullaryExpr([&](Eigen::Index) { return std::normal_distribution<double>()(rng); }));
  q.normalize();
  return q.toRotationMatrix();
}

}  // namespace

TEST_CASE("validate accepts states and rejects broken matrices") {
  CHECK_NOTHROW(validate(identity(4) / 4.0, {2, 2}));
  CHECK_NOTHROW(validate(identity(6) / 6.0, {2, 3}));

  CHECK_THROWS_AS(validate(identity(4) / 4.0, {2, 3}), DimensionError);
  CHECK_THROWS_AS(validate(identity(4) / 2.0, {2, 2}), InvariantError);

  ComplexMatrix negative = ComplexMatrix::Zero(4, 4);
  negative(0, 0) = 1.5;
  negative(1, 1) = -0.5;
  CHECK_THROWS_AS(validate(negative, {2, 2}), InvariantError);

  ComplexMatrix skew = identity(4) / 4.0;
  skew(0, 1) = 0.1;
  CHECK_THROWS_AS(validate(skew, {2, 2}), InvariantError);

  ComplexMatrix nan = identity(4) / 4.0;
  nan(2, 2) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(validate(nan, {2, 2}), InvariantError);

  // A tiny negative eigenvalue inside the clamp is still a state.
  ComplexMatrix near = ComplexMatrix::Zero(4, 4);
  near(0, 0) = 1.0 + 5e-11;
  near(1, 1) = -5e-11;
  CHECK_NOTHROW(validate(near, {2, 2}));
}

TEST_CASE("reduced states of a maximally entangled pair") {
  const DensityMatrix rho = PureState(bell_phi_plus(), {2, 2}).density();
  CHECK(max_abs_diff(rho.reduced_a(), identity(2) / 2.0) < 1e-15);
  CHECK(max_abs_diff(rho.reduced_b(), identity(2) / 2.0) < 1e-15);
}

TEST_CASE("pure states") {
  CHECK_THROWS_AS(PureState(ComplexVector::Ones(4), {2, 2}), InvariantError);
  CHECK_THROWS_AS(PureState(bell_phi_plus(), {2, 3}), DimensionError);
  const PureState p = PureState::normalized(ComplexVector::Ones(4), {2, 2});
  CHECK(p.amplitudes().norm() == doctest::Approx(1.0));
  CHECK_THROWS_AS(PureState::normalized(ComplexVector::Zero(4), {2, 2}), InvariantError);
}

TEST_CASE("schmidt decomposition") {
  const SchmidtForm product = schmidt(PureState(ComplexVector::Unit(4, 0), {2, 2}));
  CHECK(product.coefficients(0) == doctest::Approx(1.0));
  CHECK(product.coefficients(1) == doctest::Approx(0.0));
  CHECK(product.rank() == 1);

  const SchmidtForm bell = schmidt(PureState(bell_phi_plus(), {2, 2}));
  CHECK(bell.coefficients(0) == doctest::Approx(0.5));
  CHECK(bell.coefficients(1) == doctest::Approx(0.5));

  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Dims dims{2 + static_cast<int>(seed % 3), 2 + static_cast<int>(seed / 3 % 3)};
    const PureState psi = random_pure(dims, seed);
    const SchmidtForm s = schmidt(psi);
    CHECK(s.coefficients.size() == std::min(dims.a, dims.b));
    CHECK(s.coefficients.sum() == doctest::Approx(1.0).epsilon(1e-12));
    for (Eigen::Index k = 1; k < s.coefficients.size(); ++k) CHECK(s.coefficients(k - 1) >= s.coefficients(k));
    CHECK((s.reconstruct() - psi.amplitudes()).norm() < 1e-10);
    // Coefficients are the spectrum of ρ_A.
    const RealVector spectrum = hermitian_eigenvalues(psi.density().reduced_a());
    for (Eigen::Index k = 0; k < s.coefficients.size(); ++k) CHECK(std::abs(spectrum(k) - s.coefficients(k)) < 1e-10);
  }
}

TEST_CASE("entanglement of formation of pure states") {
  CHECK(eof_pure(schmidt(PureState(bell_phi_plus(), {2, 2}))) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(eof_pure(schmidt(PureState(ComplexVector::Unit(4, 0), {2, 2}))) == doctest::Approx(0.0));

  ComplexVector v = ComplexVector::Zero(4);
  v(0) = std::sqrt(0.9);
  v(3) = std::sqrt(0.1);
  // −0.9 log2 0.9 − 0.1 log2 0.1
  CHECK(eof_pure(schmidt(PureState(v, {2, 2}))) == doctest::Approx(0.4689955935892812).epsilon(1e-12));

  ComplexVector w = maximally_entangled(3);
  CHECK(eof_pure(schmidt(PureState(w, {3, 3}))) == doctest::Approx(std::log2(3.0)).epsilon(1e-12));
}

TEST_CASE("bloch decomposition matches Pauli expectations") {
  const BlochForm bell = bloch_decompose(PureState(bell_phi_plus(), {2, 2}).density());
  CHECK(bell.x.norm() < 1e-15);
  CHECK(bell.y.norm() < 1e-15);
  CHECK((bell.c - Vec3(1, -1, 1)).norm() < 1e-14);

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const DensityMatrix rho = random_density({2, 2}, 1 + seed % 4, seed);
    const BlochForm b = bloch_decompose(rho);
    for (int i = 1; i <= 3; ++i) {
      CHECK(std::abs(b.x(i - 1) - oracle::pauli_expectation(rho.matrix(), i, 0)) < 1e-12);
      CHECK(std::abs(b.y(i - 1) - oracle::pauli_expectation(rho.matrix(), 0, i)) < 1e-12);
      for (int j = 1; j <= 3; ++j) CHECK(std::abs(b.t(i - 1, j - 1) - oracle::pauli_expectation(rho.matrix(), i, j)) < 1e-12);
    }
    CHECK(max_abs_diff(b.reconstruct(), rho.matrix()) < 1e-12);
  }
  CHECK_THROWS_AS(bloch_decompose(validate(identity(6) / 6.0, {2, 3})), DimensionError);
}

TEST_CASE("su2 lift conjugates Pauli vectors by the rotation") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const Mat3 r = random_rotation(rng);
    const ComplexMatrix u = su2_from_rotation(r);
    CHECK(max_abs_diff(u.adjoint() * u, identity(2)) < 1e-12);
    const Vec3 a = random_unit_vector(rng);
    const ComplexMatrix lhs = u * (a(0) * pauli(1) + a(1) * pauli(2) + a(2) * pauli(3)) * u.adjoint();
    const Vec3 ra = r * a;
    const ComplexMatrix rhs = ra(0) * pauli(1) + ra(1) * pauli(2) + ra(2) * pauli(3);
    CHECK(max_abs_diff(lhs, rhs) < 1e-12);
  }
}

TEST_CASE("canonicalize diagonalizes T and preserves the state up to local unitaries") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const DensityMatrix rho = random_density({2, 2}, 1 + seed % 4, seed + 1000);
    const CanonicalForm cf = canonicalize(rho);
    const Mat3& t = cf.bloch.t;
    CHECK((t - Mat3(t.diagonal().asDiagonal())).norm() < 1e-10);
    CHECK((cf.bloch.c - t.diagonal()).norm() < 1e-14);

    const ComplexMatrix u = tensor_product(cf.unitary_a, cf.unitary_b);
    CHECK(max_abs_diff(u * rho.matrix() * u.adjoint(), cf.state.matrix()) < 1e-10);

    // Local Bloch vectors move rigidly; singular values of T are kept.
    const BlochForm orig = bloch_decompose(rho);
    CHECK(std::abs(orig.x.norm() - cf.bloch.x.norm()) < 1e-10);
    CHECK((cf.rotation_a * orig.x - cf.bloch.x).norm() < 1e-10);
    Eigen::JacobiSVD<Mat3> svd(orig.t);
    Vec3 abs_c = cf.bloch.c.cwiseAbs();
    std::sort(abs_c.data(), abs_c.data() + 3, std::greater<>());
    CHECK((svd.singularValues() - abs_c).norm() < 1e-10);
    CHECK(cf.rotation_a.determinant() == doctest::Approx(1.0));
    CHECK(cf.rotation_b.determinant() == doctest::Approx(1.0));
  }
}

TEST_CASE("bell-diagonal states") {
  const auto ev = bell_eigenvalues(Vec3(1, -1, 1));
  CHECK(ev[0] == doctest::Approx(1.0));
  CHECK(ev[1] == doctest::Approx(0.0));
  CHECK(ev[2] == doctest::Approx(0.0));
  CHECK(ev[3] == doctest::Approx(0.0));

  const DensityMatrix bell = make_bell_diagonal(Vec3(1, -1, 1));
  CHECK(max_abs_diff(bell.matrix(), PureState(bell_phi_plus(), {2, 2}).density().matrix()) < 1e-15);
  CHECK(max_abs_diff(make_bell_diagonal(Vec3::Zero()).matrix(), identity(4) / 4.0) == 0.0);

  CHECK(in_tetrahedron(Vec3(-1, -1, -1)));
  CHECK(in_tetrahedron(Vec3(1.0 / 3, 1.0 / 3, 1.0 / 3)));
  CHECK_FALSE(in_tetrahedron(Vec3(1, 1, 1)));
  CHECK_FALSE(in_tetrahedron(Vec3(0.5, 0.5, 0.5)));
  CHECK_THROWS_AS(make_bell_diagonal(Vec3(0.5, 0.5, 0.5)), DomainError);

  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const Vec3 c = random_tetrahedron_point(rng);
    CHECK(in_tetrahedron(c));
    const BlochForm b = bloch_decompose(make_bell_diagonal(c));
    CHECK((b.c - c).norm() < 1e-14);
    CHECK(b.x.norm() < 1e-15);
    const auto e = bell_eigenvalues(c);
    CHECK(e[0] + e[1] + e[2] + e[3] == doctest::Approx(1.0));
  }
}

TEST_CASE("werner and isotropic families") {
  // x = ⟨F⟩ is the swap expectation.
  for (int d : {2, 3, 4}) {
    for (double x : {-1.0, -0.3, 0.0, 0.5, 1.0}) {
      const DensityMatrix w = make_werner(d, x);
      CHECK((w.matrix() * swap_operator(d)).trace().real() == doctest::Approx(x).epsilon(1e-12));
      CHECK(max_abs_diff(w.reduced_a(), identity(d) / d) < 1e-12);
    }
  }
  for (int d : {2, 3}) {
    const ComplexVector phi = maximally_entangled(d);
    for (double x : {0.0, 0.4, 1.0}) {
      const DensityMatrix iso = make_isotropic(d, x);
      CHECK((phi.adjoint() * iso.matrix() * phi)(0, 0).real() == doctest::Approx(x).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(make_werner(3, 1.5), DomainError);
  CHECK_THROWS_AS(make_isotropic(2, -0.1), DomainError);
}

TEST_CASE("seeded generators are reproducible") {
  const DensityMatrix a = random_density({2, 3}, 2, 123), b = random_density({2, 3}, 2, 123);
  CHECK(max_abs_diff(a.matrix(), b.matrix()) == 0.0);
  const DensityMatrix c = random_density({2, 3}, 2, 124);
  CHECK(max_abs_diff(a.matrix(), c.matrix()) > 1e-3);

  // Requested rank is respected.
  const RealVector spectrum = hermitian_eigenvalues(a.matrix());
  CHECK(spectrum(1) > 1e-6);
  CHECK(std::abs(spectrum(2)) < 1e-12);

  std::mt19937_64 rng(3);
  const ComplexMatrix u = random_unitary(5, rng);
  CHECK(max_abs_diff(u.adjoint() * u, identity(5)) < 1e-12);
  CHECK_THROWS_AS(random_density({2, 2}, 5, 1), DomainError);
}
