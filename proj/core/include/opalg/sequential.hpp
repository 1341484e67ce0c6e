#pragma once

// Sequential (one-system) strategies: player 1 prepares a labeled family of
// subnormalized states (an assemblage), the middle players act with
// instruments on the same system, and the last player measures a POVM. The
// conversion to a commuting-operator strategy chains the Heisenberg-picture
// adjoints through the derivative/lifting machinery; it applies when the
// strategy does not signal from later choices to earlier marginals.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "opalg/cpmaps.hpp"
#include "opalg/games.hpp"
#include "opalg/numerics.hpp"
#include "opalg/radon_nikodym.hpp"

namespace opalg {

// k-player sequential strategy on a d-dimensional system:
//   assemblage[x][a]      subnormalized states of player 1 (d x d PSD),
//                         sum_a trace = 1 for every x
//   instruments[i][y]     instrument of player i+2 for input y (arms d -> d)
//   final_povm[z][c]      POVM of player k for input z (sums to 1)
struct SequentialStrategy {
  std::int64_t dim = 0;
  std::map<std::string, std::map<std::string, CMatrix>> assemblage;
  std::vector<std::map<std::string, Instrument>> instruments;
  std::map<std::string, std::map<std::string, CMatrix>> final_povm;

  std::int64_t players() const {
    return static_cast<std::int64_t>(instruments.size()) + 2;
  }

  // Shape and positivity checks; throws InvalidStrategy.
  void validate(const Tolerance& tol) const;
};

// Residuals of the one-system no-signalling conditions: how much the summed
// assemblage depends on x and each summed instrument on its input.
struct OnsReport {
  double state_defect = 0.0;
  std::vector<double> instrument_defects;
  double pass_threshold = 0.0;

  bool pass() const;
};

// Conversion output: the commuting strategy, the chaining residuals, and the
// worst difference between the two evaluations.
struct ConversionResult {
  CommutingStrategy strategy;
  ChainReport chain;
  double eval_residual = 0.0;
};

// Correlation p(a_1 ... a_k | x_1 ... x_k) of the sequential strategy, with
// player 1's labels first. Throws InvalidStrategy on malformed input.
Correlation eval_sequential(const SequentialStrategy& s, const Tolerance& tol);

// Measures the one-system no-signalling defects against threshold eps.
OnsReport ons_check(const SequentialStrategy& s, double eps);

// Converts a sequential strategy into a commuting-operator strategy with the
// same correlation. Requires ons_check to pass at 100 * tol.abs_eq (NotOns
// otherwise) and re-verifies domination by the averaged dominants, aborting
// with NotDominated if averaging does not resolve the defects.
ConversionResult to_commuting(const SequentialStrategy& s,
                              const Tolerance& tol);

}  // namespace opalg
