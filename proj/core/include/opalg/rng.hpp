#pragma once

// Deterministic random sources for tests, search heuristics, and data
// generators. The engine is std::mt19937_64 (bit-exact by specification); the
// distributions (uniform, Box-Muller gaussians, Ginibre + QR for Haar
// unitaries) are written out by hand because the standard library's
// distribution objects are implementation-defined and would break
// reproducibility across toolchains.

#include <cstdint>
#include <random>

#include "opalg/numerics.hpp"

namespace opalg {

class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  // Independent stream derived from (seed, stream index); used to give each
  // restart / prover / round its own reproducible source.
  Rng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64() { return engine_(); }
  // Uniform in [0, 1) with 53 random bits.
  double uniform();
  // Uniform integer in [0, n); rejection sampled, n > 0.
  std::int64_t uniform_int(std::int64_t n);
  // Standard normal via Box-Muller.
  double gaussian();
  // Complex gaussian with i.i.d. standard normal real and imaginary parts.
  Cplx gaussian_cplx();

  // Matrix with i.i.d. complex gaussian entries.
  CMatrix ginibre(std::int64_t rows, std::int64_t cols);
  // Haar-distributed unitary via QR of a Ginibre matrix, phases fixed by a
  // positive real diagonal of R.
  CMatrix haar_unitary(std::int64_t n);
  // Haar-random unit column vector (n x 1).
  CMatrix unit_vector(std::int64_t n);
  // Random full-rank density matrix (normalized G G* for Ginibre G).
  CMatrix density_matrix(std::int64_t n);

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace opalg
