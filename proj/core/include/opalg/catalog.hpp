#pragma once

// Reference games, strategies, and prover programs with known exact values.
// These back the bundled JSON data (written once by the data generator) and
// give the tests closed-form oracles: the parity game's classical optimum is
// 3/4 and its quantum optimum (2+sqrt(2))/4; the three-player parity-vs-OR
// game has classical optimum 3/4 and a perfect quantum strategy.

#include "opalg/compiled.hpp"
#include "opalg/games.hpp"
#include "opalg/sequential.hpp"

namespace opalg {

// Two-player binary game: win iff a xor b == x and y, uniform questions.
Game chsh_game();

// Three-player binary game: questions uniform over the even-parity triples,
// win iff a xor b xor c == (x or y or z).
Game mermin_game();

// Optimal tensor strategy for chsh_game: maximally entangled state, Z/X
// measurements against the two diagonal bases; value (2+sqrt(2))/4.
TensorStrategy chsh_optimal_tensor();

// Perfect tensor strategy for mermin_game: GHZ state, X/Y measurements;
// value exactly 1.
TensorStrategy mermin_ghz_tensor();

// Sequential (steering) form of chsh_optimal_tensor: the first player's
// measurements become an assemblage on one qubit, the second player keeps the
// optimal measurements. Exactly operationally no-signalling; same value.
SequentialStrategy chsh_steering_strategy();

// Sequential form of mermin_ghz_tensor on two carried qubits: the middle
// player measures-and-resets its qubit, the last player measures the other.
// Exactly operationally no-signalling; value exactly 1.
SequentialStrategy mermin_ghz_strategy();

// Three players, one-dimensional carried system, every branch weight 1/2:
// the correlation is uniform and every derived operator is a scalar, so all
// commutators vanish identically.
SequentialStrategy uniform_3p_strategy();

// Two-player strategy whose assemblage signals maximally: the summed
// assemblage for x=0 and x=1 differ by a full projector (defect exactly 1).
// Passes shape validation; ons_check reports the defect and to_commuting
// refuses it.
SequentialStrategy signalling_strategy();

// Prover that answers every round with the label it received. Requires
// inputs[i] == outputs[i] for every player.
ProverProgram echo_prover(const Game& g);

// Two-player prover that stores the first received label and answers it in
// the last round (its first answer is always 0). Under a transparent scheme
// this copies x_1 into the last answer, a maximal no-signalling violation.
// Requires outputs[k-1] >= inputs[0].
ProverProgram copying_prover(const Game& g);

}  // namespace opalg
