#pragma once

// Multiplayer nonlocal games over finite input/output label sets, their
// correlations, and strategy evaluation: exhaustive deterministic (classical)
// optimization, tensor-product and single-space commuting quantum strategies,
// an alternating-optimization lower bound on the quantum value, and
// no-signalling checks on raw correlations.

#include <cstdint>
#include <utility>
#include <vector>

#include "opalg/numerics.hpp"
#include "opalg/rng.hpp"

namespace opalg {

// A k-player game: input/output alphabet sizes per player, the question
// distribution q over input tuples, and a 0/1 winning predicate.
//
// Flattening convention (used for q, predicate, and Correlation::p): a tuple
// (t_1, ..., t_k) flattens row-major with player 1 most significant. The
// predicate and correlation tables are indexed by output tuple first, input
// tuple second: index = flat(a) * num_inputs + flat(x).
struct Game {
  std::int64_t players = 0;
  std::vector<std::int64_t> inputs;
  std::vector<std::int64_t> outputs;
  std::vector<double> q;
  std::vector<double> predicate;

  std::int64_t num_inputs() const;
  std::int64_t num_outputs() const;

  // Throws ShapeMismatch / ValidationError unless the table sizes match the
  // alphabets, q is a distribution within tol.abs_eq, and the predicate is
  // exactly 0/1 valued.
  void validate(const Tolerance& tol) const;
};

// Conditional distribution p(a | x) with the same flattening as Game.
struct Correlation {
  std::vector<std::int64_t> inputs;
  std::vector<std::int64_t> outputs;
  std::vector<double> p;

  std::int64_t num_inputs() const;
  std::int64_t num_outputs() const;

  // Entries within [-abs_eq, 1 + abs_eq] and unit sums per input tuple.
  void validate(const Tolerance& tol) const;
};

// Tensor-product strategy: per-player local dimensions and POVMs
// povms[player][input][outcome], plus a shared unit vector on the tensor
// product of the local spaces.
struct TensorStrategy {
  std::vector<std::int64_t> dims;
  std::vector<std::vector<std::vector<CMatrix>>> povms;
  CMatrix psi;
};

// Commuting-operator strategy: one space, per-player POVM families whose
// elements commute across players, and a unit vector.
struct CommutingStrategy {
  std::int64_t dim = 0;
  std::vector<std::vector<std::vector<CMatrix>>> povms;
  CMatrix psi;
};

// Per-player no-signalling defects of a correlation: how strongly the joint
// marginal of the other players' answers depends on this player's input.
struct NsReport {
  std::vector<double> defects;
  double eps = 0.0;
  bool pass = false;
};

// Expected winning probability of c in g. Throws ShapeMismatch if the
// alphabets disagree.
double score(const Game& g, const Correlation& c, const Tolerance& tol);

// Exact optimum over deterministic strategies, with the lexicographically
// first maximizing assignment (assignment[i][x] = a). The search space
// prod_i |O_i|^{|I_i|} is capped at cap (TooLarge beyond), default 2^24.
std::pair<double, std::vector<std::vector<std::int64_t>>> classical_value(
    const Game& g, const Tolerance& tol,
    std::int64_t cap = std::int64_t{1} << 24);

// Correlation of a tensor-product strategy. Throws InvalidStrategy unless
// the POVMs are PSD and complete and psi is a unit vector of the product
// dimension.
Correlation eval_tensor(const TensorStrategy& s, const Tolerance& tol);

// Correlation of a commuting-operator strategy; additionally requires all
// cross-player commutators below abs_eq (NotCommuting otherwise).
Correlation eval_commuting(const CommutingStrategy& s, const Tolerance& tol);

// Alternating-optimization lower bound on the quantum value over tensor
// strategies with the given local dimensions. Best effort: monotone per
// iteration and over restarts, never throws on valid input. Restart r uses
// the random stream (rng_seed, r).
std::pair<double, TensorStrategy> seesaw_quantum_value(
    const Game& g, const std::vector<std::int64_t>& dims,
    std::int64_t restarts, std::uint64_t rng_seed, const Tolerance& tol);

// No-signalling audit of a correlation at threshold eps.
NsReport ns_check(const Correlation& c, double eps);

// Tuple flattening helpers shared by the game modules (row-major, first
// coordinate most significant).
std::int64_t flatten_tuple(const std::vector<std::int64_t>& tuple,
                           const std::vector<std::int64_t>& sizes);
std::vector<std::int64_t> unflatten_tuple(std::int64_t flat,
                                          const std::vector<std::int64_t>& sizes);

}  // namespace opalg
