// Sequential strategy tests: evaluation of the reference strategies, the
// one-system no-signalling check, conversion into commuting-operator form
// (dimensions frozen, residuals at floating-point level), the rejection of
// signalling input, and randomized conversions with exactly-balanced
// instruments.

#include <cmath>
#include <string>

#include "doctest.h"
#include "opalg/catalog.hpp"
#include "opalg/games.hpp"
#include "opalg/numerics.hpp"
#include "opalg/rng.hpp"
#include "opalg/sequential.hpp"
#include "support/generators.hpp"

using namespace opalg;

namespace {
const Tolerance kTol{};
const double kTsirelson = 0.25 * (2.0 + std::sqrt(2.0));
}  // namespace

TEST_SUITE_BEGIN("sequential");

TEST_CASE("two-player steering strategy reproduces the Tsirelson value") {
  const SequentialStrategy s = chsh_steering_strategy();
  CHECK(s.players() == 2);
  CHECK_NOTHROW(s.validate(kTol));
  const Correlation c = eval_sequential(s, kTol);
  CHECK(score(chsh_game(), c, kTol) ==
        doctest::Approx(kTsirelson).epsilon(1e-12));
}

TEST_CASE("three-player parity strategy wins sequentially with certainty") {
  const SequentialStrategy s = mermin_ghz_strategy();
  CHECK(s.players() == 3);
  const Correlation c = eval_sequential(s, kTol);
  CHECK(score(mermin_game(), c, kTol) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ons_check measures state and instrument defects") {
  const OnsReport good = ons_check(mermin_ghz_strategy(), 1e-9);
  CHECK(good.pass());
  CHECK(good.state_defect <= 1e-14);
  for (double d : good.instrument_defects) CHECK(d <= 1e-14);

  const OnsReport bad = ons_check(signalling_strategy(), 1e-9);
  CHECK_FALSE(bad.pass());
  CHECK(bad.state_defect == 1.0);
}

TEST_CASE("conversion of the steering strategy: dimension 4, exact match") {
  const ConversionResult r = to_commuting(chsh_steering_strategy(), kTol);
  CHECK(r.strategy.dim == 4);
  CHECK(r.eval_residual <= 1e-12);
  CHECK(r.chain.closure_residual <= 1e-12);
  CHECK(r.chain.cross_commutation <= 1e-12);
  CHECK(r.chain.rep_commutation <= 1e-12);
  CHECK(r.chain.family_min_eig >= -1e-12);
  CHECK(r.chain.ok(kTol));

  // The commuting strategy itself evaluates to the same correlation.
  const Correlation direct = eval_sequential(chsh_steering_strategy(), kTol);
  const Correlation via = eval_commuting(r.strategy, kTol);
  for (std::size_t i = 0; i < direct.p.size(); ++i) {
    CHECK(std::abs(direct.p[i] - via.p[i]) <= 1e-10);
  }
}

TEST_CASE("conversion of the three-player strategies has frozen dimensions") {
  const ConversionResult mermin = to_commuting(mermin_ghz_strategy(), kTol);
  CHECK(mermin.strategy.dim == 16);
  CHECK(mermin.eval_residual <= 1e-12);
  CHECK(mermin.chain.ok(kTol));

  const ConversionResult uniform = to_commuting(uniform_3p_strategy(), kTol);
  CHECK(uniform.strategy.dim == 1);
  CHECK(uniform.chain.cross_commutation == 0.0);  // scalars commute exactly
  CHECK(uniform.eval_residual <= 1e-15);
}

TEST_CASE("conversion rejects a signalling strategy") {
  CHECK_THROWS_AS(to_commuting(signalling_strategy(), kTol), NotOns);
  CHECK_THROWS_WITH_AS(to_commuting(signalling_strategy(), kTol),
                       doctest::Contains("1"), NotOns);
}

TEST_CASE("validation rejects malformed strategies") {
  SequentialStrategy s = chsh_steering_strategy();
  s.assemblage["0"].erase("1");  // assemblage no longer sums to a state
  CHECK_THROWS_AS(s.validate(kTol), InvalidStrategy);

  SequentialStrategy t = chsh_steering_strategy();
  t.final_povm["0"]["0"] = CMatrix::identity(2);  // POVM sum exceeds 1
  CHECK_THROWS_AS(t.validate(kTol), InvalidStrategy);
}

TEST_CASE("randomized balanced strategies convert with tiny residuals") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    Rng rng(900 + seed);
    const SequentialStrategy s = testgen::random_ons_strategy(rng, 3, kTol);
    const OnsReport ons = ons_check(s, 1e-9);
    CHECK(ons.pass());

    const ConversionResult r = to_commuting(s, kTol);
    CHECK(r.chain.cross_commutation <= 1e-8);
    CHECK(r.chain.rep_commutation <= 1e-8);
    CHECK(r.chain.closure_residual <= 1e-9);
    CHECK(r.eval_residual <= 1e-7);
  }
}

TEST_SUITE_END();
