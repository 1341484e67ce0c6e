// Matrix kernel tests: construction contracts, norms and predicates, the
// deterministic Hermitian eigendecomposition, pseudo-inverse identities,
// Kronecker/partial-trace algebra, and PSD square roots.

#include <cmath>
#include <limits>

#include "doctest.h"
#include "opalg/numerics.hpp"
#include "opalg/rng.hpp"
#include "support/generators.hpp"

using namespace opalg;

namespace {
const Tolerance kTol{};
}  // namespace

TEST_SUITE_BEGIN("numerics");

TEST_CASE("tolerance validation rejects non-positive and inverted fields") {
  CHECK_NOTHROW(kTol.validate());
  Tolerance bad = kTol;
  bad.abs_eq = 0.0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = kTol;
  bad.psd_floor = 1.0;  // exceeds abs_eq
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = kTol;
  bad.rank_cut = -1e-12;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("constructors enforce shape and finiteness") {
  CHECK_THROWS_AS(CMatrix(2, 2, {Cplx(1, 0)}), DimensionMismatch);
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(CMatrix(1, 1, {Cplx(inf, 0)}), ValidationError);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  Eigen::MatrixXcd m(1, 1);
  m(0, 0) = Cplx(0, nan);
  CHECK_THROWS_AS(CMatrix::from_eigen(m), ValidationError);

  const CMatrix id = CMatrix::identity(3);
  CHECK(id.rows() == 3);
  CHECK(id(0, 0) == Cplx(1, 0));
  CHECK(id(0, 1) == Cplx(0, 0));
  CHECK(CMatrix::zero(2, 5).max_abs() == 0.0);
}

TEST_CASE("norms and involutions on a fixed matrix") {
  const CMatrix a(2, 2, {Cplx(1, 1), Cplx(0, -2), Cplx(3, 0), Cplx(0, 0)});
  CHECK(a.max_abs() == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(a.fro_norm() ==
        doctest::Approx(std::sqrt(1 + 1 + 4 + 9)).epsilon(1e-15));
  CHECK(a.adjoint()(1, 0) == Cplx(0, 2));
  CHECK(a.transpose()(1, 0) == Cplx(0, -2));
  CHECK(a.conjugate()(0, 0) == Cplx(1, -1));
  CHECK(a.trace() == Cplx(1, 1));

  // Operator norm of a rank-1 matrix is the product of the factor norms.
  const CMatrix v(2, 1, {Cplx(3, 0), Cplx(4, 0)});
  CHECK((v * v.adjoint()).op_norm() == doctest::Approx(25.0).epsilon(1e-12));
}

TEST_CASE("hermitian / psd / unitary / isometry predicates") {
  const CMatrix x(2, 2, {Cplx(0, 0), Cplx(1, 0), Cplx(1, 0), Cplx(0, 0)});
  CHECK(x.is_hermitian(kTol));
  CHECK_FALSE(x.is_psd(kTol));  // spectrum {1, -1}
  CHECK(x.is_unitary(kTol));

  Rng rng(11);
  const CMatrix u = rng.haar_unitary(4);
  CHECK(u.is_unitary(kTol));
  const CMatrix rect = CMatrix::from_eigen(u.eigen().leftCols(2));
  CHECK(rect.is_isometry(kTol));
  CHECK_FALSE(rect.is_unitary(kTol));

  const CMatrix rho = rng.density_matrix(3);
  CHECK(rho.is_psd(kTol));
  CHECK(rho.trace().real() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("kron matches the handmade 2x2 block formula and mixed products") {
  const CMatrix a(2, 2, {Cplx(1, 0), Cplx(2, 0), Cplx(3, 0), Cplx(4, 0)});
  const CMatrix b(2, 2, {Cplx(0, 1), Cplx(0, 0), Cplx(0, 0), Cplx(0, -1)});
  const CMatrix k = kron(a, b);
  CHECK(k.rows() == 4);
  CHECK(k(0, 0) == Cplx(0, 1));
  CHECK(k(1, 1) == Cplx(0, -1));
  CHECK(k(2, 0) == Cplx(0, 3));
  CHECK(k(3, 3) == Cplx(0, -4));

  Rng rng(12);
  const CMatrix c = rng.ginibre(2, 2);
  const CMatrix d = rng.ginibre(2, 2);
  // Mixed product rule (A (x) B)(C (x) D) = AC (x) BD.
  CHECK((kron(a, b) * kron(c, d) - kron(a * c, b * d)).max_abs() <= 1e-13);
  // Associativity is exact by construction.
  CHECK((kron(kron(a, b), c) - kron(a, kron(b, c))).max_abs() == 0.0);
}

TEST_CASE("eig_hermitian: descending values, reconstruction, determinism") {
  const CMatrix a(2, 2, {Cplx(2, 0), Cplx(1, 0), Cplx(1, 0), Cplx(2, 0)});
  const EigResult e = eig_hermitian(a, kTol);
  REQUIRE(e.values.size() == 2);
  CHECK(e.values[0] == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(e.values[1] == doctest::Approx(1.0).epsilon(1e-14));

  Rng rng(13);
  const CMatrix h =
      CMatrix::from_eigen(rng.ginibre(5, 5).eigen() +
                          Eigen::MatrixXcd(rng.ginibre(5, 5).eigen().adjoint()));
  const CMatrix herm = CMatrix::from_eigen(
      0.5 * (h.eigen() + Eigen::MatrixXcd(h.eigen().adjoint())));
  const EigResult f = eig_hermitian(herm, kTol);
  Eigen::MatrixXcd rec = Eigen::MatrixXcd::Zero(5, 5);
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    const Eigen::VectorXcd v =
        f.vectors.eigen().col(static_cast<Eigen::Index>(i));
    rec += f.values[i] * (v * v.adjoint());
  }
  CHECK((CMatrix::from_eigen(rec) - herm).max_abs() <= 1e-12);
  for (std::size_t i = 0; i + 1 < f.values.size(); ++i) {
    CHECK(f.values[i] >= f.values[i + 1]);
  }

  // Same input, same output, bit for bit.
  const EigResult g = eig_hermitian(herm, kTol);
  CHECK((f.vectors - g.vectors).max_abs() == 0.0);

  CHECK_THROWS_AS(
      eig_hermitian(CMatrix(2, 2, {Cplx(0, 0), Cplx(1, 0), Cplx(2, 0),
                                   Cplx(0, 0)}),
                    kTol),
      NotHermitian);
}

TEST_CASE("pinv satisfies the Moore-Penrose identities") {
  Rng rng(14);
  const CMatrix a = rng.ginibre(3, 5);
  const CMatrix p = pinv(a, kTol);
  CHECK((a * p * a - a).max_abs() <= 1e-12);
  CHECK((p * a * p - p).max_abs() <= 1e-12);
  CHECK(((a * p) - (a * p).adjoint()).max_abs() <= 1e-12);
  CHECK(((p * a) - (p * a).adjoint()).max_abs() <= 1e-12);

  // Rank-deficient input: pinv of a rank-1 projector is itself.
  const CMatrix v = rng.unit_vector(4);
  const CMatrix proj = v * v.adjoint();
  CHECK((pinv(proj, kTol) - proj).max_abs() <= 1e-12);
}

TEST_CASE("partial_trace contracts the right slots") {
  Rng rng(15);
  const CMatrix a = rng.density_matrix(2);
  const CMatrix b = rng.density_matrix(3);
  const CMatrix ab = kron(a, b);
  CHECK((partial_trace(ab, {2, 3}, {0}) - a).max_abs() <= 1e-13);
  CHECK((partial_trace(ab, {2, 3}, {1}) - b).max_abs() <= 1e-13);
  CHECK((partial_trace(ab, {2, 3}, {0, 1}) - ab).max_abs() == 0.0);
  const CMatrix scalar = partial_trace(ab, {2, 3}, {});
  CHECK(scalar.rows() == 1);
  CHECK(scalar(0, 0).real() == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(partial_trace(ab, {2, 2}, {0}), DimensionMismatch);
}

TEST_CASE("sqrt_psd squares back and rejects indefinite input") {
  Rng rng(16);
  const CMatrix rho = rng.density_matrix(4);
  const CMatrix r = sqrt_psd(rho, kTol);
  CHECK((r * r - rho).max_abs() <= 1e-12);
  CHECK(r.is_hermitian(kTol));

  const CMatrix x(2, 2, {Cplx(0, 0), Cplx(1, 0), Cplx(1, 0), Cplx(0, 0)});
  CHECK_THROWS_AS(sqrt_psd(x, kTol), RangeViolation);
}

TEST_CASE("rng streams are deterministic and independent") {
  Rng a(42), b(42);
  CHECK(a.next_u64() == b.next_u64());
  Rng s0(42, 0), s1(42, 1);
  CHECK(s0.next_u64() != s1.next_u64());

  Rng rng(17);
  const CMatrix u = rng.unit_vector(5);
  CHECK(u.cols() == 1);
  CHECK(u.fro_norm() == doctest::Approx(1.0).epsilon(1e-12));
  for (int i = 0; i < 50; ++i) {
    const std::int64_t k = rng.uniform_int(7);
    CHECK(k >= 0);
    CHECK(k < 7);
  }
}

TEST_SUITE_END();
