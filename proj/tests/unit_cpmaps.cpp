// CP map tests: Kraus/Choi consistency, duals, composition, the domination
// order, the four-term decomposition of two-sided multiplications, unitary
// dilation of contractions, instruments, and circuit-compiled instruments
// with their purified adjoints.

#include <array>
#include <cmath>
#include <map>

#include "doctest.h"
#include "opalg/cpmaps.hpp"
#include "opalg/numerics.hpp"
#include "opalg/rng.hpp"
#include "support/generators.hpp"

using namespace opalg;

namespace {
const Tolerance kTol{};

CpMap depolarizing2() {
  std::vector<CMatrix> kraus;
  const double s = 1.0 / std::sqrt(2.0);
  for (std::int64_t i = 0; i < 2; ++i) {
    for (std::int64_t j = 0; j < 2; ++j) {
      CMatrix k = CMatrix::zero(2, 2);
      k.at(i, j) = Cplx(s, 0.0);
      kraus.push_back(k);
    }
  }
  return CpMap(2, 2, kraus);
}

CpMap identity2() { return CpMap(2, 2, {CMatrix::identity(2)}); }
}  // namespace

TEST_SUITE_BEGIN("cpmaps");

TEST_CASE("kraus construction, apply, and apply_unit agree") {
  Rng rng(21);
  const CpMap t = testgen::random_cpmap(rng, 3, 2, 2);
  for (std::int64_t i = 0; i < 3; ++i) {
    for (std::int64_t j = 0; j < 3; ++j) {
      CMatrix e = CMatrix::zero(3, 3);
      e.at(i, j) = Cplx(1, 0);
      CHECK((t.apply(e) - t.apply_unit(i, j)).max_abs() <= 1e-14);
    }
  }
  CHECK_THROWS_AS(CpMap(2, 2, {CMatrix::zero(3, 2)}), DimensionMismatch);
  CHECK_THROWS_AS(t.apply(CMatrix::identity(2)), DimensionMismatch);
}

TEST_CASE("choi round-trip through from_choi preserves the map") {
  Rng rng(22);
  const CpMap t = testgen::random_channel(rng, 2, 3, 2);
  const CpMap back = CpMap::from_choi(2, 3, t.choi(), kTol);
  for (std::int64_t i = 0; i < 2; ++i) {
    for (std::int64_t j = 0; j < 2; ++j) {
      CHECK((t.apply_unit(i, j) - back.apply_unit(i, j)).max_abs() <= 1e-12);
    }
  }
  // A Choi matrix with a clearly negative eigenvalue is rejected.
  CMatrix bad = CMatrix::identity(4);
  bad.at(0, 0) = Cplx(-1.0, 0.0);
  CHECK_THROWS_AS(CpMap::from_choi(2, 2, bad, kTol), NotCP);
}

TEST_CASE("adjoint is the trace dual") {
  Rng rng(23);
  const CpMap t = testgen::random_cpmap(rng, 2, 3, 2);
  const CpMap td = t.adjoint();
  const CMatrix rho = rng.density_matrix(2);
  const CMatrix m = CMatrix::from_eigen(
      0.5 * (rng.ginibre(3, 3).eigen() +
             Eigen::MatrixXcd(rng.ginibre(3, 3).eigen().adjoint())));
  const Cplx lhs = (td.apply(m) * rho).trace();
  const Cplx rhs = (m * t.apply(rho)).trace();
  CHECK(std::abs(lhs - rhs) <= 1e-12);
}

TEST_CASE("composition multiplies Kraus lists in the right order") {
  Rng rng(24);
  const CpMap s2 = testgen::random_channel(rng, 2, 3, 2);
  const CpMap s1 = testgen::random_channel(rng, 3, 2, 2);
  const CpMap c = compose(s1, s2);
  CHECK(c.in_dim() == 2);
  CHECK(c.out_dim() == 2);
  const CMatrix rho = rng.density_matrix(2);
  CHECK((c.apply(rho) - s1.apply(s2.apply(rho))).max_abs() <= 1e-13);
  CHECK_THROWS_AS(compose(s2, s2), DimensionMismatch);
}

TEST_CASE("trace preservation and unitality flags") {
  CHECK(identity2().is_trace_preserving(kTol));
  CHECK(identity2().is_unital(kTol));
  CHECK(depolarizing2().is_trace_preserving(kTol));
  CHECK(depolarizing2().is_unital(kTol));
  Rng rng(25);
  const CpMap t = testgen::random_cpmap(rng, 2, 2, 2);
  CHECK_FALSE(t.is_trace_preserving(kTol));
}

TEST_CASE("domination order: scaling works, identity vs depolarizing fails") {
  const CpMap depol = depolarizing2();
  const CpMap half = CpMap::from_choi(
      2, 2, depol.choi() * Cplx(0.5, 0.0), kTol);
  CHECK(dominates(depol, half, kTol));
  CHECK_FALSE(dominates(half, depol, kTol));

  // The identity map is not dominated by the depolarizing channel: the Choi
  // difference has the frozen eigenvalue -3/2.
  CHECK_FALSE(dominates(depolarizing2(), identity2(), kTol));
  CHECK(domination_margin(depolarizing2(), identity2(), kTol) ==
        doctest::Approx(-1.5).epsilon(1e-12));
  CHECK(domination_margin(depolarizing2(), half, kTol) >= -1e-12);

  Rng rng(1);
  CHECK_THROWS_AS(dominates(depol, testgen::random_cpmap(rng, 3, 3, 1), kTol),
                  DimensionMismatch);
}

TEST_CASE("two-sided multiplications decompose into four CP conjugations") {
  Rng rng(26);
  for (int rep = 0; rep < 5; ++rep) {
    const CMatrix l = rng.ginibre(3, 2);
    const CMatrix r = rng.ginibre(3, 2);
    const CMatrix b = rng.ginibre(3, 3);
    const std::array<CMatrix, 4> v = wittstock_decompose(l, r);
    // l* b r = (1/4) sum_{j=1..4} i^j v_j* b v_j.
    CMatrix sum = CMatrix::zero(2, 2);
    const Cplx i_unit(0.0, 1.0);
    Cplx phase = i_unit;
    for (int j = 0; j < 4; ++j) {
      sum += phase * (v[static_cast<std::size_t>(j)].adjoint() * b *
                      v[static_cast<std::size_t>(j)]);
      phase *= i_unit;
    }
    CHECK((sum * Cplx(0.25, 0.0) - l.adjoint() * b * r).max_abs() <= 1e-12);
  }
  CHECK_THROWS_AS(wittstock_decompose(CMatrix::zero(2, 2), CMatrix::zero(3, 2)),
                  DimensionMismatch);
}

TEST_CASE("unitary dilation keeps the contraction as its exact corner") {
  Rng rng(27);
  const CMatrix g = rng.ginibre(3, 3);
  const CMatrix d = g * Cplx(0.95 / g.op_norm(), 0.0);
  const CMatrix w = egervary_unitary_dilation(d, kTol);
  CHECK(w.rows() == 6);
  CHECK(w.is_unitary(kTol));
  CHECK((w.adjoint() * w - CMatrix::identity(6)).max_abs() <= 1e-12);
  double corner = 0.0;
  for (std::int64_t i = 0; i < 3; ++i) {
    for (std::int64_t j = 0; j < 3; ++j) {
      corner = std::max(corner, std::abs(w(i, j) - d(i, j)));
    }
  }
  CHECK(corner == 0.0);

  CHECK_THROWS_AS(
      egervary_unitary_dilation(CMatrix::identity(2) * Cplx(1.5, 0.0), kTol),
      NotContraction);
}

TEST_CASE("instruments demand a trace-preserving sum") {
  Rng rng(28);
  const CpMap base = testgen::random_channel(rng, 2, 2, 2);
  std::map<std::string, CpMap> arms;
  arms.emplace("0", CpMap(2, 2, {base.kraus()[0]}));
  arms.emplace("1", CpMap(2, 2, {base.kraus()[1]}));
  const Instrument inst(arms, kTol);
  CHECK(inst.in_dim() == 2);
  CHECK(inst.summed().is_trace_preserving(kTol));
  CHECK((inst.arm("0").choi() - arms.at("0").choi()).max_abs() == 0.0);

  std::map<std::string, CpMap> short_arms;
  short_arms.emplace("0", CpMap(2, 2, {base.kraus()[0]}));
  CHECK_THROWS_AS(Instrument(short_arms, kTol), SumMismatch);
}

TEST_CASE("circuit instruments match their hand-built Kraus form") {
  // u = CNOT with the carried qubit as control and the outcome register as
  // target measures the carried qubit in the computational basis. Basis
  // order is (outcome register (x) carried system): |o,s> -> |o xor s, s>.
  CMatrix u = CMatrix::zero(4, 4);
  u.at(0, 0) = Cplx(1, 0);  // (0,0) -> (0,0)
  u.at(3, 1) = Cplx(1, 0);  // (0,1) -> (1,1)
  u.at(2, 2) = Cplx(1, 0);  // (1,0) -> (1,0)
  u.at(1, 3) = Cplx(1, 0);  // (1,1) -> (0,1)
  std::map<std::string, CMatrix> corrections;
  corrections.emplace("0", CMatrix::identity(2));
  corrections.emplace("1", CMatrix::identity(2));
  const Instrument inst = instrument_from_circuit(u, 2, corrections, kTol);
  CMatrix p0 = CMatrix::zero(2, 2);
  p0.at(0, 0) = Cplx(1, 0);
  CMatrix p1 = CMatrix::zero(2, 2);
  p1.at(1, 1) = Cplx(1, 0);
  CHECK((inst.arm("0").choi() - CpMap(2, 2, {p0}).choi()).max_abs() <= 1e-14);
  CHECK((inst.arm("1").choi() - CpMap(2, 2, {p1}).choi()).max_abs() <= 1e-14);

  CHECK_THROWS_AS(instrument_from_circuit(CMatrix::zero(4, 4), 2, corrections,
                                          kTol),
                  NotUnitary);
}

TEST_CASE("circuit adjoints are linear, star-preserving, multiplicative") {
  Rng rng(29);
  const CMatrix u = rng.haar_unitary(6);  // outcome register 3, carried dim 2
  const CMatrix corr = rng.haar_unitary(2);
  const CMatrix m1 = rng.ginibre(2, 2);
  const CMatrix m2 = rng.ginibre(2, 2);

  const auto adj = [&](const CMatrix& m) {
    return circuit_adjoint(u, 3, 1, corr, m, kTol);
  };
  CHECK((adj(m1 + m2) - (adj(m1) + adj(m2))).max_abs() <= 1e-12);
  CHECK((adj(m1.adjoint()) - adj(m1).adjoint()).max_abs() <= 1e-12);
  CHECK((adj(m1 * m2) - adj(m1) * adj(m2)).max_abs() <= 1e-12);

  CHECK_THROWS_AS(circuit_adjoint(CMatrix::zero(6, 6), 3, 1, corr, m1, kTol),
                  NotUnitary);
  CHECK_THROWS_AS(circuit_adjoint(u, 3, 3, corr, m1, kTol),
                  DimensionMismatch);
}

TEST_SUITE_END();
