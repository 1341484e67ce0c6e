#include "opalg/catalog.hpp"

#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "opalg/cpmaps.hpp"
#include "opalg/errors.hpp"
#include "opalg/numerics.hpp"

namespace opalg {

namespace {

const Cplx kI(0.0, 1.0);

// Qubit projector (1 + (-1)^outcome * (nz Z + nx X + ny Y)) / 2.
CMatrix bloch_projector(std::int64_t outcome, double nz, double nx,
                        double ny) {
  const double s = (outcome == 0) ? 1.0 : -1.0;
  Eigen::MatrixXcd m(2, 2);
  m(0, 0) = Cplx(0.5 * (1.0 + s * nz), 0.0);
  m(1, 1) = Cplx(0.5 * (1.0 - s * nz), 0.0);
  m(0, 1) = 0.5 * s * Cplx(nx, -ny);
  m(1, 0) = 0.5 * s * Cplx(nx, ny);
  return CMatrix::from_eigen(m);
}

// +1/-1 eigenvector of X (basis == 0) or Y (basis == 1).
Eigen::VectorXcd pauli_eigvec(std::int64_t basis, std::int64_t outcome) {
  Eigen::VectorXcd v(2);
  const double inv = 1.0 / std::sqrt(2.0);
  v(0) = Cplx(inv, 0.0);
  const Cplx phase = (basis == 0) ? Cplx(1.0, 0.0) : kI;
  v(1) = phase * ((outcome == 0) ? inv : -inv) * Cplx(1.0, 0.0);
  return v;
}

CpMap zero_map(std::int64_t in_dim, std::int64_t out_dim) {
  return CpMap(in_dim, out_dim, {CMatrix::zero(out_dim, in_dim)});
}

}  // namespace

Game chsh_game() {
  Game g;
  g.players = 2;
  g.inputs = {2, 2};
  g.outputs = {2, 2};
  g.q.assign(4, 0.25);
  g.predicate.assign(16, 0.0);
  for (std::int64_t a = 0; a < 2; ++a) {
    for (std::int64_t b = 0; b < 2; ++b) {
      for (std::int64_t x = 0; x < 2; ++x) {
        for (std::int64_t y = 0; y < 2; ++y) {
          const bool win = ((a + b) % 2) == (x * y);
          g.predicate[static_cast<std::size_t>((a * 2 + b) * 4 + (x * 2 + y))] =
              win ? 1.0 : 0.0;
        }
      }
    }
  }
  return g;
}

Game mermin_game() {
  Game g;
  g.players = 3;
  g.inputs = {2, 2, 2};
  g.outputs = {2, 2, 2};
  g.q.assign(8, 0.0);
  g.predicate.assign(64, 0.0);
  for (std::int64_t x = 0; x < 2; ++x) {
    for (std::int64_t y = 0; y < 2; ++y) {
      for (std::int64_t z = 0; z < 2; ++z) {
        const std::int64_t xf = x * 4 + y * 2 + z;
        if ((x + y + z) % 2 == 0) g.q[static_cast<std::size_t>(xf)] = 0.25;
        const std::int64_t want = (x | y | z);
        for (std::int64_t a = 0; a < 2; ++a) {
          for (std::int64_t b = 0; b < 2; ++b) {
            for (std::int64_t c = 0; c < 2; ++c) {
              const bool win = ((a + b + c) % 2) == want;
              g.predicate[static_cast<std::size_t>((a * 4 + b * 2 + c) * 8 +
                                                   xf)] = win ? 1.0 : 0.0;
            }
          }
        }
      }
    }
  }
  return g;
}

TensorStrategy chsh_optimal_tensor() {
  const double inv = 1.0 / std::sqrt(2.0);
  TensorStrategy s;
  s.dims = {2, 2};
  s.povms.resize(2);
  // Player 1: Z for x=0, X for x=1.
  s.povms[0] = {{bloch_projector(0, 1, 0, 0), bloch_projector(1, 1, 0, 0)},
                {bloch_projector(0, 0, 1, 0), bloch_projector(1, 0, 1, 0)}};
  // Player 2: (Z+X)/sqrt(2) for y=0, (Z-X)/sqrt(2) for y=1.
  s.povms[1] = {{bloch_projector(0, inv, inv, 0),
                 bloch_projector(1, inv, inv, 0)},
                {bloch_projector(0, inv, -inv, 0),
                 bloch_projector(1, inv, -inv, 0)}};
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
  psi(0) = Cplx(inv, 0.0);
  psi(3) = Cplx(inv, 0.0);
  s.psi = CMatrix::from_eigen(psi);
  return s;
}

TensorStrategy mermin_ghz_tensor() {
  TensorStrategy s;
  s.dims = {2, 2, 2};
  s.povms.resize(3);
  for (std::size_t i = 0; i < 3; ++i) {
    // X measurement for input 0, Y measurement for input 1.
    s.povms[i] = {{bloch_projector(0, 0, 1, 0), bloch_projector(1, 0, 1, 0)},
                  {bloch_projector(0, 0, 0, 1), bloch_projector(1, 0, 0, 1)}};
  }
  const double inv = 1.0 / std::sqrt(2.0);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(8);
  psi(0) = Cplx(inv, 0.0);
  psi(7) = Cplx(inv, 0.0);
  s.psi = CMatrix::from_eigen(psi);
  return s;
}

SequentialStrategy chsh_steering_strategy() {
  const double inv = 1.0 / std::sqrt(2.0);
  SequentialStrategy s;
  s.dim = 2;
  // Measuring Z (x=0) or X (x=1) on one half of the maximally entangled pair
  // steers the other half to half the transposed projector; both observables
  // are real, so the transpose is the projector itself.
  for (std::int64_t x = 0; x < 2; ++x) {
    for (std::int64_t a = 0; a < 2; ++a) {
      const CMatrix p = (x == 0) ? bloch_projector(a, 1, 0, 0)
                                 : bloch_projector(a, 0, 1, 0);
      s.assemblage[std::to_string(x)][std::to_string(a)] = 0.5 * p;
    }
  }
  for (std::int64_t z = 0; z < 2; ++z) {
    const double sign = (z == 0) ? 1.0 : -1.0;
    for (std::int64_t c = 0; c < 2; ++c) {
      s.final_povm[std::to_string(z)][std::to_string(c)] =
          bloch_projector(c, inv, sign * inv, 0);
    }
  }
  return s;
}

SequentialStrategy mermin_ghz_strategy() {
  SequentialStrategy s;
  s.dim = 4;
  // First player measures X (x=0) or Y (x=1) on its GHZ qubit; the steered
  // state of the remaining two qubits is the rank-one matrix of
  // (|00> + phase * |11>) / 2 with phase (-1)^a for X and -i(-1)^a for Y.
  for (std::int64_t x = 0; x < 2; ++x) {
    for (std::int64_t a = 0; a < 2; ++a) {
      const double sign = (a == 0) ? 1.0 : -1.0;
      const Cplx phase =
          (x == 0) ? Cplx(sign, 0.0) : Cplx(0.0, -sign);
      Eigen::VectorXcd u = Eigen::VectorXcd::Zero(4);
      u(0) = Cplx(0.5, 0.0);
      u(3) = 0.5 * phase;
      s.assemblage[std::to_string(x)][std::to_string(a)] =
          CMatrix::from_eigen(Eigen::MatrixXcd(u * u.adjoint()));
    }
  }
  // Middle player: measure its qubit in the X (y=0) or Y (y=1) basis and
  // reset it to |0>; the summed arm is basis-independent (reset tensor
  // partial trace), so the strategy is exactly operationally no-signalling.
  s.instruments.resize(1);
  for (std::int64_t y = 0; y < 2; ++y) {
    std::map<std::string, CpMap> arms;
    for (std::int64_t b = 0; b < 2; ++b) {
      const Eigen::VectorXcd v = pauli_eigvec(y, b);
      Eigen::MatrixXcd k = Eigen::MatrixXcd::Zero(4, 4);
      // |0><v| on the first qubit, identity on the second.
      for (std::int64_t j = 0; j < 2; ++j) {
        for (std::int64_t col = 0; col < 2; ++col) {
          k(j, col * 2 + j) = std::conj(v(col));
        }
      }
      arms.emplace(std::to_string(b),
                   CpMap(4, 4, {CMatrix::from_eigen(k)}));
    }
    s.instruments[0].emplace(std::to_string(y),
                             Instrument(std::move(arms), Tolerance{}));
  }
  // Last player: measure the second qubit in the X (z=0) or Y (z=1) basis.
  for (std::int64_t z = 0; z < 2; ++z) {
    for (std::int64_t c = 0; c < 2; ++c) {
      const Eigen::VectorXcd v = pauli_eigvec(z, c);
      const Eigen::MatrixXcd proj = v * v.adjoint();
      s.final_povm[std::to_string(z)][std::to_string(c)] =
          kron(CMatrix::identity(2), CMatrix::from_eigen(proj));
    }
  }
  return s;
}

SequentialStrategy uniform_3p_strategy() {
  SequentialStrategy s;
  s.dim = 1;
  const CMatrix half(1, 1, {Cplx(0.5, 0.0)});
  const CMatrix root_half(1, 1, {Cplx(1.0 / std::sqrt(2.0), 0.0)});
  for (std::int64_t x = 0; x < 2; ++x) {
    for (std::int64_t a = 0; a < 2; ++a) {
      s.assemblage[std::to_string(x)][std::to_string(a)] = half;
    }
  }
  s.instruments.resize(1);
  for (std::int64_t y = 0; y < 2; ++y) {
    std::map<std::string, CpMap> arms;
    for (std::int64_t b = 0; b < 2; ++b) {
      arms.emplace(std::to_string(b), CpMap(1, 1, {root_half}));
    }
    s.instruments[0].emplace(std::to_string(y),
                             Instrument(std::move(arms), Tolerance{}));
  }
  for (std::int64_t z = 0; z < 2; ++z) {
    for (std::int64_t c = 0; c < 2; ++c) {
      s.final_povm[std::to_string(z)][std::to_string(c)] = half;
    }
  }
  return s;
}

SequentialStrategy signalling_strategy() {
  SequentialStrategy s;
  s.dim = 2;
  // The whole steered state follows x: outcome 0 carries |x><x|, outcome 1
  // nothing, so the summed assemblages for x=0 and x=1 differ by a full
  // projector.
  for (std::int64_t x = 0; x < 2; ++x) {
    CMatrix state = CMatrix::zero(2, 2);
    state.at(x, x) = Cplx(1.0, 0.0);
    s.assemblage[std::to_string(x)]["0"] = state;
    s.assemblage[std::to_string(x)]["1"] = CMatrix::zero(2, 2);
  }
  for (std::int64_t z = 0; z < 2; ++z) {
    for (std::int64_t c = 0; c < 2; ++c) {
      s.final_povm[std::to_string(z)][std::to_string(c)] =
          bloch_projector(c, 1, 0, 0);
    }
  }
  return s;
}

ProverProgram echo_prover(const Game& g) {
  for (std::int64_t i = 0; i < g.players; ++i) {
    if (g.inputs[i] != g.outputs[i]) {
      throw InvalidStrategy(
          "echo prover needs matching input and output alphabets");
    }
  }
  ProverProgram p;
  p.initial = CMatrix::identity(1);
  p.rounds.resize(static_cast<std::size_t>(g.players));
  for (std::int64_t i = 0; i < g.players; ++i) {
    for (std::int64_t r = 0; r < g.inputs[i]; ++r) {
      std::map<std::string, CpMap> arms;
      for (std::int64_t a = 0; a < g.outputs[i]; ++a) {
        arms.emplace(std::to_string(a), a == r
                                            ? CpMap(1, 1, {CMatrix::identity(1)})
                                            : zero_map(1, 1));
      }
      p.rounds[static_cast<std::size_t>(i)].emplace(
          std::to_string(r), Instrument(std::move(arms), Tolerance{}));
    }
  }
  return p;
}

ProverProgram copying_prover(const Game& g) {
  if (g.players != 2 || g.outputs[1] < g.inputs[0]) {
    throw InvalidStrategy(
        "copying prover needs two players and a last output alphabet at "
        "least as large as the first input alphabet");
  }
  const std::int64_t n = g.inputs[0];
  ProverProgram p;
  p.initial = CMatrix::identity(1);
  p.rounds.resize(2);
  // Round 1: always answer 0 and store the received label in the carried
  // state.
  for (std::int64_t r = 0; r < n; ++r) {
    std::map<std::string, CpMap> arms;
    for (std::int64_t a = 0; a < g.outputs[0]; ++a) {
      if (a == 0) {
        CMatrix k = CMatrix::zero(n, 1);
        k.at(r, 0) = Cplx(1.0, 0.0);
        arms.emplace("0", CpMap(1, n, {k}));
      } else {
        arms.emplace(std::to_string(a), zero_map(1, n));
      }
    }
    p.rounds[0].emplace(std::to_string(r),
                        Instrument(std::move(arms), Tolerance{}));
  }
  // Round 2: measure the stored label and answer it, whatever was received.
  for (std::int64_t r = 0; r < g.inputs[1]; ++r) {
    std::map<std::string, CpMap> arms;
    for (std::int64_t a = 0; a < g.outputs[1]; ++a) {
      if (a < n) {
        CMatrix k = CMatrix::zero(1, n);
        k.at(0, a) = Cplx(1.0, 0.0);
        arms.emplace(std::to_string(a), CpMap(n, 1, {k}));
      } else {
        arms.emplace(std::to_string(a), zero_map(n, 1));
      }
    }
    p.rounds[1].emplace(std::to_string(r),
                        Instrument(std::move(arms), Tolerance{}));
  }
  return p;
}

}  // namespace opalg
