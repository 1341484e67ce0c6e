// Derivative / decomposition / lifting / chaining tests: recovery of a known
// commutant operator, decomposition into a commutant POVM summing to the
// identity, the structure-preserving properties of lifting, and the
// commuting representation produced by chaining dominated families.

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "doctest.h"
#include "opalg/cpmaps.hpp"
#include "opalg/dilation.hpp"
#include "opalg/numerics.hpp"
#include "opalg/radon_nikodym.hpp"
#include "opalg/rng.hpp"
#include "support/generators.hpp"

using namespace opalg;

namespace {
const Tolerance kTol{};

// Builds the dominated map a -> v* P pi(a) v from a commutant operator P.
CpMap dominated_from_commutant(const Dilation& dil, const CMatrix& p) {
  const std::int64_t n = dil.algebra_dim;
  const std::int64_t m = dil.v.cols();
  CMatrix choi = CMatrix::zero(n * m, n * m);
  for (std::int64_t i = 0; i < n; ++i) {
    for (std::int64_t j = 0; j < n; ++j) {
      const CMatrix img = dil.v.adjoint() * p * dil.rep_unit(i, j) * dil.v;
      for (std::int64_t r = 0; r < m; ++r) {
        for (std::int64_t c = 0; c < m; ++c) {
          choi.at(i * m + r, j * m + c) = img(r, c);
        }
      }
    }
  }
  return CpMap::from_choi(n, m, choi, kTol);
}

std::vector<CMatrix> rep_generators(const Dilation& dil) {
  std::vector<CMatrix> gens;
  for (std::int64_t i = 0; i < dil.algebra_dim; ++i) {
    for (std::int64_t j = 0; j < dil.algebra_dim; ++j) {
      gens.push_back(dil.rep_unit(i, j));
    }
  }
  return gens;
}
}  // namespace

TEST_SUITE_BEGIN("radon_nikodym");

TEST_CASE("derivative recovers the commutant operator it was built from") {
  Rng rng(41);
  const CpMap dominant = testgen::random_channel(rng, 2, 2, 2);
  const Dilation dil = stinespring_minimal(dominant, kTol);
  const Eigen::MatrixXcd kernel =
      testgen::commutant_kernel(rep_generators(dil), dil.dil_dim);
  CHECK(kernel.cols() >= 2);  // two Kraus directions: commutant is 2x2

  const CMatrix p =
      testgen::random_commutant_contraction(rng, kernel, dil.dil_dim);
  const CpMap s = dominated_from_commutant(dil, p);
  const RnDerivative d = rn_derivative(s, dil, kTol);
  CHECK((d.d - p).op_norm() <= 1e-9);

  // Spectrum within [0, 1] and commutation with the representation.
  const EigResult e = eig_hermitian(d.d, kTol);
  CHECK(e.values.front() <= 1.0 + 1e-12);
  CHECK(e.values.back() >= -1e-12);
  for (const CMatrix& g : rep_generators(dil)) {
    CHECK((d.d * g - g * d.d).max_abs() <= 1e-10);
  }

  // Reconstruction: s(a) = v* D pi(a) v.
  for (std::int64_t i = 0; i < 2; ++i) {
    for (std::int64_t j = 0; j < 2; ++j) {
      const CMatrix rec =
          dil.v.adjoint() * d.d * dil.rep_unit(i, j) * dil.v;
      CHECK((rec - s.apply_unit(i, j)).max_abs() <= 1e-10);
    }
  }
}

TEST_CASE("derivative rejects maps the dominant does not dominate") {
  Rng rng(42);
  const CpMap dominant = testgen::random_channel(rng, 2, 2, 2);
  const Dilation dil = stinespring_minimal(dominant, kTol);
  const CpMap too_big =
      CpMap::from_choi(2, 2, dominant.choi() * Cplx(1.5, 0.0), kTol);
  CHECK_THROWS_AS(rn_derivative(too_big, dil, kTol), NotDominated);
}

TEST_CASE("decomposition yields a commutant POVM summing to the identity") {
  Rng rng(43);
  const CpMap total = testgen::random_channel(rng, 2, 2, 3);
  const Dilation dil = stinespring_minimal(total, kTol);
  // Split the Kraus list: {K0} and {K1, K2}.
  const CpMap part0(2, 2, {total.kraus()[0]});
  const CpMap part1(2, 2, {total.kraus()[1], total.kraus()[2]});
  const std::vector<CMatrix> ds =
      rn_decomposition({part0, part1}, dil, kTol);
  REQUIRE(ds.size() == 2);
  CMatrix sum = CMatrix::zero(dil.dil_dim, dil.dil_dim);
  for (const CMatrix& d : ds) {
    sum += d;
    CHECK(d.is_psd(kTol));
    for (const CMatrix& g : rep_generators(dil)) {
      CHECK((d * g - g * d).max_abs() <= 1e-10);
    }
  }
  CHECK((sum - CMatrix::identity(dil.dil_dim)).max_abs() <= 1e-12);

  CHECK_THROWS_AS(rn_decomposition({part0, part0}, dil, kTol), SumMismatch);
}

TEST_CASE("lift intertwines, preserves norm and structure, fixes identity") {
  Rng rng(44);
  const CpMap t = testgen::random_padded_embedding(rng, 2, 2, kTol);
  const Dilation dil = stinespring_minimal(t, kTol);
  const Eigen::MatrixXcd range_kernel = testgen::commutant_kernel(
      testgen::range_generators(t), t.out_dim());
  CHECK(range_kernel.cols() >= 2);

  const CMatrix m =
      testgen::random_commutant_hermitian(rng, range_kernel, t.out_dim());
  const CMatrix lifted = lift(m, dil, kTol);
  CHECK((lifted * dil.v - dil.v * m).max_abs() <= 1e-10);
  CHECK(std::abs(lifted.op_norm() - m.op_norm()) <= 1e-9);
  CHECK((lift(m.adjoint(), dil, kTol) - lifted.adjoint()).max_abs() <= 1e-10);
  CHECK((lift(m * m, dil, kTol) - lifted * lifted).max_abs() <= 1e-9);
  CHECK((lift(CMatrix::identity(t.out_dim()), dil, kTol) -
         CMatrix::identity(dil.dil_dim))
            .max_abs() <= 1e-12);

  // Positivity both ways: squares lift to PSD operators, and an operator
  // with a negative eigenvalue lifts to one with a negative eigenvalue.
  CHECK(lift(m * m, dil, kTol).is_psd(kTol));
  const CMatrix shifted = CMatrix::from_eigen(
      m.eigen() - (m.op_norm() + 0.5) *
                      Eigen::MatrixXcd::Identity(t.out_dim(), t.out_dim()));
  const EigResult neg = eig_hermitian(lift(shifted, dil, kTol), kTol);
  CHECK(neg.values.back() < -0.4);

  // Lifting a commutant POVM keeps the closure.
  const std::vector<CMatrix> povm =
      testgen::random_commutant_povm(rng, range_kernel, t.out_dim(), 3);
  CMatrix closure = CMatrix::zero(dil.dil_dim, dil.dil_dim);
  for (const CMatrix& el : povm) closure += lift(el, dil, kTol);
  CHECK((closure - CMatrix::identity(dil.dil_dim)).max_abs() <= 1e-9);

  // Operators outside the range commutant are rejected: the identity map's
  // range is everything, so only scalars lift.
  const Dilation id_dil =
      stinespring_minimal(CpMap(2, 2, {CMatrix::identity(2)}), kTol);
  CMatrix x = CMatrix::zero(2, 2);
  x.at(0, 1) = Cplx(1, 0);
  x.at(1, 0) = Cplx(1, 0);
  CHECK_THROWS_AS(lift(x, id_dil, kTol), NotInCommutant);
}

TEST_CASE("chaining a qubit measurement pair commutes and reconstructs") {
  // Stage 1: trace functionals of the computational-basis effects.
  CMatrix p0 = CMatrix::zero(2, 2);
  p0.at(0, 0) = Cplx(1, 0);
  CMatrix p1 = CMatrix::zero(2, 2);
  p1.at(1, 1) = Cplx(1, 0);

  ChainStage stage1;
  stage1.dominant = CpMap::from_choi(2, 1, CMatrix::identity(2), kTol);
  stage1.families["0"]["0"] = CpMap::from_choi(2, 1, p0.transpose(), kTol);
  stage1.families["0"]["1"] = CpMap::from_choi(2, 1, p1.transpose(), kTol);

  ChainStage stage2;
  stage2.dominant = CpMap(2, 2, {p0, p1});  // dephasing
  stage2.families["0"]["0"] = CpMap(2, 2, {p0});
  stage2.families["0"]["1"] = CpMap(2, 2, {p1});

  const std::vector<ChainStage> stages = {stage1, stage2};
  const CommutingRepresentation cr = chain_k(stages, kTol);
  CHECK(cr.dim_k == 8);
  const ChainReport report = verify_chain(cr, stages, kTol);
  CHECK(report.family_min_eig >= -1e-12);
  CHECK(report.closure_residual <= 1e-12);
  CHECK(report.cross_commutation <= 1e-12);
  CHECK(report.rep_commutation <= 1e-12);
  CHECK(report.reconstruction_residual <= 1e-12);
  CHECK(report.ok(kTol));

  // chain2 and chain_k agree on two stages.
  const CommutingRepresentation cr2 = chain2(stage1, stage2, kTol);
  CHECK(cr2.dim_k == cr.dim_k);
  CHECK((cr2.v - cr.v).max_abs() <= 1e-12);

  // The generalized mode accepts everything the strict mode accepts.
  const CommutingRepresentation crg = chain_k(stages, kTol, true);
  CHECK(verify_chain(crg, stages, kTol).ok(kTol));
}

TEST_CASE("chain rejects family members the dominant does not dominate") {
  CMatrix p0 = CMatrix::zero(2, 2);
  p0.at(0, 0) = Cplx(1, 0);
  ChainStage bad;
  bad.dominant = CpMap(2, 2, {p0});  // too small to dominate the identity
  bad.families["0"]["0"] = CpMap(2, 2, {CMatrix::identity(2)});
  CHECK_THROWS_AS(chain_k({bad}, kTol), NotDominated);
}

TEST_SUITE_END();
