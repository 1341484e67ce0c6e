#pragma once

// Seeded generators shared by the unit and acceptance tests. Everything is
// driven by opalg::Rng, so a fixed seed reproduces the same case bit for bit.
//
// The commutant helpers solve the linear system [M, A] = 0 (over all listed
// generators and their adjoints) by an SVD null space; that keeps the tests
// independent of the library's own derivative/lifting machinery, which is
// exactly what they are meant to check.

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "opalg/cpmaps.hpp"
#include "opalg/dilation.hpp"
#include "opalg/games.hpp"
#include "opalg/numerics.hpp"
#include "opalg/rng.hpp"
#include "opalg/sequential.hpp"
#include "opalg/compiled.hpp"

namespace opalg::testgen {

// CP map with Ginibre Kraus operators, scaled to keep norms O(1).
inline CpMap random_cpmap(Rng& rng, std::int64_t in_dim, std::int64_t out_dim,
                          std::int64_t kraus_count) {
  std::vector<CMatrix> kraus;
  const double scale =
      1.0 / std::sqrt(static_cast<double>(kraus_count * in_dim));
  for (std::int64_t k = 0; k < kraus_count; ++k) {
    kraus.push_back(rng.ginibre(out_dim, in_dim) * Cplx(scale, 0.0));
  }
  return CpMap(in_dim, out_dim, std::move(kraus));
}

// Trace-preserving CP map: Ginibre Kraus list renormalized by
// (sum_k G_k* G_k)^(-1/2), which is almost surely invertible.
inline CpMap random_channel(Rng& rng, std::int64_t in_dim,
                            std::int64_t out_dim, std::int64_t kraus_count) {
  std::vector<Eigen::MatrixXcd> g;
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(in_dim, in_dim);
  for (std::int64_t k = 0; k < kraus_count; ++k) {
    g.push_back(rng.ginibre(out_dim, in_dim).eigen());
    s += g.back().adjoint() * g.back();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(s);
  const Eigen::MatrixXcd s_inv_sqrt =
      es.eigenvectors() *
      es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
      es.eigenvectors().adjoint();
  std::vector<CMatrix> kraus;
  for (const auto& gk : g) {
    kraus.push_back(CMatrix::from_eigen(gk * s_inv_sqrt));
  }
  return CpMap(in_dim, out_dim, std::move(kraus));
}

// Orthonormal basis (as vectorized columns) of { M : [M, A] = 0 for every
// generator A and its adjoint }, computed as the SVD null space of the
// stacked commutator constraints. Column-major vectorization:
// vec(AM - MA) = (I (x) A - A^T (x) I) vec(M).
inline Eigen::MatrixXcd commutant_kernel(
    const std::vector<CMatrix>& generators, std::int64_t dim) {
  const std::int64_t d2 = dim * dim;
  std::vector<Eigen::MatrixXcd> gens;
  for (const auto& a : generators) {
    gens.push_back(a.eigen());
    gens.push_back(a.eigen().adjoint());
  }
  Eigen::MatrixXcd c(static_cast<std::int64_t>(gens.size()) * d2, d2);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(dim, dim);
  std::int64_t row = 0;
  for (const auto& a : gens) {
    const Eigen::MatrixXcd block =
        kron(CMatrix::from_eigen(id), CMatrix::from_eigen(a)).eigen() -
        kron(CMatrix::from_eigen(a.transpose()), CMatrix::from_eigen(id))
            .eigen();
    c.block(row, 0, d2, d2) = block;
    row += d2;
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(c, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cut = std::max(1.0, sv.size() > 0 ? sv(0) : 0.0) * 1e-10;
  std::int64_t rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cut) ++rank;
  }
  return svd.matrixV().rightCols(d2 - rank);
}

// Random Hermitian element of the commutant described by `kernel` (columns =
// vectorized basis). The identity is always in the commutant, so the kernel
// is never empty.
inline CMatrix random_commutant_hermitian(Rng& rng,
                                          const Eigen::MatrixXcd& kernel,
                                          std::int64_t dim) {
  if (kernel.cols() == 0) {
    throw std::logic_error("commutant kernel is empty");
  }
  Eigen::VectorXcd coeff(kernel.cols());
  for (Eigen::Index i = 0; i < coeff.size(); ++i) {
    coeff(i) = rng.gaussian_cplx();
  }
  const Eigen::VectorXcd v = kernel * coeff;
  Eigen::MatrixXcd m(dim, dim);
  for (std::int64_t j = 0; j < dim; ++j) {
    m.col(j) = v.segment(j * dim, dim);
  }
  return CMatrix::from_eigen(0.5 * (m + Eigen::MatrixXcd(m.adjoint())));
}

// Random commutant element with spectrum inside [0.05, 0.95]; affine images
// of commutant elements stay in the commutant because the identity does.
inline CMatrix random_commutant_contraction(Rng& rng,
                                            const Eigen::MatrixXcd& kernel,
                                            std::int64_t dim) {
  const CMatrix h = random_commutant_hermitian(rng, kernel, dim);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.eigen());
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(dim, dim);
  if (hi - lo < 1e-8) {
    return CMatrix::from_eigen(0.5 * id);
  }
  const Eigen::MatrixXcd p =
      0.05 * id + (0.9 / (hi - lo)) * (h.eigen() - lo * id);
  return CMatrix::from_eigen(p);
}

// POVM inside the commutant: elements m_i = S^(-1/2) P_i S^(-1/2) where the
// P_i are squares of commutant Hermitians plus one identity summand and
// S = sum_i P_i. Functions of commutant elements stay in the commutant.
inline std::vector<CMatrix> random_commutant_povm(
    Rng& rng, const Eigen::MatrixXcd& kernel, std::int64_t dim,
    std::int64_t count) {
  std::vector<Eigen::MatrixXcd> parts;
  parts.push_back(Eigen::MatrixXcd::Identity(dim, dim));
  for (std::int64_t i = 1; i < count; ++i) {
    const Eigen::MatrixXcd h =
        random_commutant_hermitian(rng, kernel, dim).eigen();
    parts.push_back(h * h);
  }
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& p : parts) s += p;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(s);
  const Eigen::MatrixXcd s_inv_sqrt =
      es.eigenvectors() *
      es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
      es.eigenvectors().adjoint();
  std::vector<CMatrix> povm;
  for (const auto& p : parts) {
    const Eigen::MatrixXcd m = s_inv_sqrt * p * s_inv_sqrt;
    povm.push_back(CMatrix::from_eigen(0.5 * (m + Eigen::MatrixXcd(m.adjoint()))));
  }
  return povm;
}

// CP map M_n -> M_{n+pad} of the form a -> W (a (+) tr(a) I_pad / pad) W*
// for a Haar unitary W. Its range has a commutant of dimension pad^2 + 1,
// which makes it a good source of nontrivial lifting inputs.
inline CpMap random_padded_embedding(Rng& rng, std::int64_t n,
                                     std::int64_t pad, const Tolerance& tol) {
  const std::int64_t m = n + pad;
  const Eigen::MatrixXcd w = rng.haar_unitary(m).eigen();
  CMatrix choi = CMatrix::zero(n * m, n * m);
  for (std::int64_t i = 0; i < n; ++i) {
    for (std::int64_t j = 0; j < n; ++j) {
      Eigen::MatrixXcd block = Eigen::MatrixXcd::Zero(m, m);
      block.block(0, 0, n, n)(i, j) = 1.0;
      if (i == j && pad > 0) {
        block.block(n, n, pad, pad) =
            Eigen::MatrixXcd::Identity(pad, pad) / static_cast<double>(pad);
      }
      const Eigen::MatrixXcd image = w * block * w.adjoint();
      for (std::int64_t r = 0; r < m; ++r) {
        for (std::int64_t c = 0; c < m; ++c) {
          choi.at(i * m + r, j * m + c) = image(r, c);
        }
      }
    }
  }
  return CpMap::from_choi(n, m, choi, tol);
}

// Images of the matrix units under a CP map, as commutant-constraint
// generators for the range algebra.
inline std::vector<CMatrix> range_generators(const CpMap& t) {
  std::vector<CMatrix> gens;
  for (std::int64_t i = 0; i < t.in_dim(); ++i) {
    for (std::int64_t j = 0; j < t.in_dim(); ++j) {
      gens.push_back(t.apply_unit(i, j));
    }
  }
  return gens;
}

// Random rank-1 projective qubit measurement {P_0, P_1}.
inline std::vector<CMatrix> random_projective_qubit(Rng& rng) {
  const Eigen::MatrixXcd u = rng.haar_unitary(2).eigen();
  std::vector<CMatrix> povm;
  for (std::int64_t a = 0; a < 2; ++a) {
    const Eigen::VectorXcd col = u.col(a);
    povm.push_back(CMatrix::from_eigen(col * col.adjoint()));
  }
  return povm;
}

// Sequential strategy on a qubit whose one-system no-signalling defects are
// at floating-point level by construction:
//   - the assemblage steers a random two-qubit pure state, so the summed
//     assemblage member is the reduced state for every input;
//   - every middle instrument splits one fixed base channel by mixing its
//     Kraus operators with a unitary matrix per input, so the summed arm is
//     the base channel for every input;
//   - the final POVMs are random projective measurements.
// All label sets are binary.
inline SequentialStrategy random_ons_strategy(Rng& rng, std::int64_t players,
                                              const Tolerance& tol) {
  SequentialStrategy s;
  s.dim = 2;
  const CMatrix id2 = CMatrix::identity(2);

  const CMatrix psi = rng.unit_vector(4);
  const CMatrix rho = psi * psi.adjoint();
  for (std::int64_t x = 0; x < 2; ++x) {
    const std::vector<CMatrix> meas = random_projective_qubit(rng);
    for (std::int64_t a = 0; a < 2; ++a) {
      const CMatrix sigma =
          partial_trace(kron(meas[static_cast<std::size_t>(a)], id2) * rho,
                        {2, 2}, {1});
      s.assemblage[std::to_string(x)][std::to_string(a)] =
          CMatrix::from_eigen(
              0.5 * (sigma.eigen() + Eigen::MatrixXcd(sigma.eigen().adjoint())));
    }
  }

  for (std::int64_t middle = 0; middle < players - 2; ++middle) {
    const CpMap base = random_channel(rng, 2, 2, 2);
    std::map<std::string, Instrument> by_input;
    for (std::int64_t y = 0; y < 2; ++y) {
      const Eigen::MatrixXcd mix = rng.haar_unitary(2).eigen();
      std::map<std::string, CpMap> arms;
      for (std::int64_t b = 0; b < 2; ++b) {
        Eigen::MatrixXcd k = Eigen::MatrixXcd::Zero(2, 2);
        for (std::int64_t c = 0; c < 2; ++c) {
          k += mix(b, c) * base.kraus()[static_cast<std::size_t>(c)].eigen();
        }
        arms.emplace(std::to_string(b),
                     CpMap(2, 2, {CMatrix::from_eigen(k)}));
      }
      by_input.emplace(std::to_string(y), Instrument(std::move(arms), tol));
    }
    s.instruments.push_back(std::move(by_input));
  }

  for (std::int64_t z = 0; z < 2; ++z) {
    const std::vector<CMatrix> meas = random_projective_qubit(rng);
    for (std::int64_t c = 0; c < 2; ++c) {
      s.final_povm[std::to_string(z)][std::to_string(c)] =
          meas[static_cast<std::size_t>(c)];
    }
  }
  return s;
}

// Arbitrary (generically dishonest) prover for a two-player binary game:
// round one prepares a random label-dependent qubit assemblage, round two
// measures a random label-dependent POVM. Any such prover is a valid
// protocol participant; nothing ties it to the game's predicate.
inline ProverProgram random_prover(Rng& rng, const Game& g,
                                   const Tolerance& tol) {
  if (g.players != 2 || g.outputs[1] != 2) {
    throw std::logic_error(
        "random_prover expects a two-player game with a binary last answer");
  }
  ProverProgram p;
  p.initial = CMatrix::identity(1);

  std::map<std::string, Instrument> round1;
  for (std::int64_t recv = 0; recv < g.inputs[0]; ++recv) {
    std::vector<Eigen::MatrixXcd> parts;
    double total = 0.0;
    for (std::int64_t a = 0; a < g.outputs[0]; ++a) {
      const Eigen::MatrixXcd gm = rng.ginibre(2, 2).eigen();
      parts.push_back(gm * gm.adjoint());
      total += parts.back().real().trace();
    }
    std::map<std::string, CpMap> arms;
    for (std::int64_t a = 0; a < g.outputs[0]; ++a) {
      arms.emplace(std::to_string(a),
                   CpMap::from_choi(1, 2,
                                    CMatrix::from_eigen(
                                        parts[static_cast<std::size_t>(a)] /
                                        total),
                                    tol));
    }
    round1.emplace(std::to_string(recv), Instrument(std::move(arms), tol));
  }
  p.rounds.push_back(std::move(round1));

  std::map<std::string, Instrument> round2;
  for (std::int64_t recv = 0; recv < g.inputs[1]; ++recv) {
    const Eigen::MatrixXcd u = rng.haar_unitary(2).eigen();
    Eigen::VectorXd diag(2);
    diag << rng.uniform(), rng.uniform();
    const Eigen::MatrixXcd f0 = u * diag.asDiagonal() * u.adjoint();
    const Eigen::MatrixXcd f1 = Eigen::MatrixXcd::Identity(2, 2) - f0;
    std::map<std::string, CpMap> arms;
    arms.emplace("0", CpMap::from_choi(2, 1,
                                       CMatrix::from_eigen(f0.transpose()),
                                       tol));
    arms.emplace("1", CpMap::from_choi(2, 1,
                                       CMatrix::from_eigen(f1.transpose()),
                                       tol));
    round2.emplace(std::to_string(recv), Instrument(std::move(arms), tol));
  }
  p.rounds.push_back(std::move(round2));
  return p;
}

}  // namespace opalg::testgen
