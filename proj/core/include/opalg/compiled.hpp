#pragma once

// Round-based simulator of the compiled (single-prover) form of a k-player
// game: the verifier sends the first k-1 questions through a toy encryption
// scheme and the last one in plaintext; the prover is a quantum program that
// reacts to each received label with an instrument. Correlations are
// recovered by exact enumeration over questions, keys, and measurement
// branches — no sampling anywhere.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "opalg/cpmaps.hpp"
#include "opalg/games.hpp"
#include "opalg/numerics.hpp"
#include "opalg/sequential.hpp"

namespace opalg {

// Toy encryption. Both shipped schemes are deterministic given the round
// key, so the key doubles as the encryption randomness:
//   identity - one key, ciphertext = plaintext (a transparent channel);
//   xorpad   - two fresh uniform pads per round (the bit-flip pad when a
//              space has two labels): one pads the question modulo the
//              input space, an independent one pads the answer modulo the
//              output space. The round key packs them in mixed radix as
//              key = answer_pad * in_space + question_pad.
struct EncryptionScheme {
  enum class Kind { Identity, XorPad };
  Kind kind = Kind::Identity;

  static EncryptionScheme identity();
  static EncryptionScheme xorpad();

  // Number of round keys for a round with the given plaintext spaces
  // (identity: 1, xorpad: in_space * out_space).
  std::int64_t key_count(std::int64_t in_space, std::int64_t out_space) const;
  // The two pad components of a round key.
  std::int64_t question_pad(std::int64_t key, std::int64_t in_space) const;
  std::int64_t answer_pad(std::int64_t key, std::int64_t in_space) const;
  // (plain + pad) mod space.
  std::int64_t enc(std::int64_t pad, std::int64_t plain,
                   std::int64_t space) const;
  // (cipher - pad) mod space; inverse of enc on every space.
  std::int64_t dec(std::int64_t pad, std::int64_t cipher,
                   std::int64_t space) const;
};

// A quantum prover: an initial density matrix and, per round, an instrument
// for every label the verifier may send. Round i arms are labeled by the
// answer labels "0".."n-1" of player i's output alphabet, and the instrument
// map must carry exactly the labels "0".."m-1" of the possible received
// labels; instrument output dimensions chain from round to round.
struct ProverProgram {
  CMatrix initial;
  std::vector<std::map<std::string, Instrument>> rounds;

  // Checks alphabets, labels, dimension chaining, and that the initial
  // state is a density matrix. Throws InvalidStrategy.
  void validate(const Game& g, const Tolerance& tol) const;
};

// One enumerated protocol branch. weight is the joint probability including
// the question distribution; cond_weight is the probability given the
// question tuple (kept separately so zero-probability questions still carry
// well-defined statistics). keys records the per-round keys (packed pad
// pairs) that produced the branch.
struct Transcript {
  std::vector<std::int64_t> inputs;   // plaintext questions
  std::vector<std::int64_t> sent;     // labels sent (last one plaintext)
  std::vector<std::int64_t> answers;  // labels answered (last one plaintext)
  std::vector<std::int64_t> keys;     // one per encrypted round
  double weight = 0.0;
  double cond_weight = 0.0;
};

// Directional no-signalling audit of a correlation: the plain per-player
// defects plus, per player, how much its input moves the joint marginal of
// the earlier players (future_to_past) and of the later players
// (past_to_future). encrypted_defect is the worst past_to_future defect
// among the players whose questions the protocol encrypts (all but the
// last).
struct CompiledNsReport {
  NsReport ns;
  std::vector<double> past_to_future;
  std::vector<double> future_to_past;
  double encrypted_defect = 0.0;
  bool pass = false;
};

// Runs the protocol by exact enumeration: every question tuple (including
// zero-probability ones), every key tuple, every instrument branch. The
// first k-1 rounds send the question padded by the key's question
// component; the last round sends x_k in plaintext. Throws TooLarge if the
// enumeration exceeds 2^16 branches.
std::vector<Transcript> run_protocol(const Game& g, const ProverProgram& p,
                                     const EncryptionScheme& e,
                                     const Tolerance& tol);

// Decrypted correlation: answers of the encrypted rounds are decrypted with
// the branch's keys, conditional weights are accumulated per question tuple
// and normalized exactly, averaging over the encryption randomness.
Correlation decrypted_correlation(const std::vector<Transcript>& ts,
                                  const EncryptionScheme& e, const Game& g);

// Score of the decrypted correlation; identical contract to games score.
double compiled_score(const Game& g, const Correlation& c,
                      const Tolerance& tol);

// No-signalling audit with directional reporting; pass reflects the plain
// per-player check at threshold eps.
CompiledNsReport eps_ns_audit(const Correlation& c, double eps);

// The honest prover induced by a sequential strategy: round 1 prepares the
// assemblage member for the received label, middle rounds apply the
// strategy's instruments, and the last round measures the final POVM as a
// family of trace functionals. Labels are the canonical indices of the
// strategy's label sets in sorted order.
ProverProgram prover_from_sequential(const SequentialStrategy& s,
                                     const Tolerance& tol);

}  // namespace opalg
