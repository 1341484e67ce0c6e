#pragma once

// Minimal dilations of CP maps: a representation pi of the input matrix
// algebra on an auxiliary space K together with an intertwiner V such that
// T(a) = V* pi(a) V, built as the quotient of the free module (algebra (x)
// output space) by the null space of the induced Gram form. The GNS
// construction is the special case of a state (a CP functional into the
// scalars), where V is the cyclic unit vector.

#include <cstdint>
#include <vector>

#include "opalg/cpmaps.hpp"
#include "opalg/numerics.hpp"

namespace opalg {

// A dilation (K, pi, V) of `source`. rep holds pi(E_ij) for the matrix units
// of the in_dim x in_dim algebra, row-major; v is dil_dim x out_dim.
struct Dilation {
  std::int64_t dil_dim = 0;
  std::int64_t algebra_dim = 0;          // n: source acts on the n x n matrices
  std::vector<CMatrix> rep;              // pi(E_ij) at index i*n + j
  CMatrix v;
  CpMap source;

  const CMatrix& rep_unit(std::int64_t i, std::int64_t j) const {
    return rep[static_cast<std::size_t>(i * algebra_dim + j)];
  }

  // pi extended linearly to an arbitrary algebra element.
  CMatrix rep_apply(const CMatrix& a) const;

  // pi as a CP map from the n x n matrices into the dil_dim x dil_dim ones
  // (Kraus form recovered from the representation's Choi matrix).
  CpMap rep_as_cpmap(const Tolerance& tol) const;
};

// Residual report for verify_dilation. All residuals are entrywise max
// moduli; minimality_defect counts missing spanning directions.
struct DilationReport {
  double product_residual = 0.0;        // pi(E_ij) pi(E_kl) vs delta_jk pi(E_il)
  double star_residual = 0.0;           // pi(E_ij)* vs pi(E_ji)
  double reconstruction_residual = 0.0; // V* pi(E_ij) V vs source(E_ij)
  double norm_residual = 0.0;           // | ||V||^2 - ||source(1)|| |
  std::int64_t minimality_defect = 0;   // dil_dim - rank(span pi(E_ij) V e_k)

  bool ok(const Tolerance& tol) const;
};

// Minimal dilation of a CP map. Throws NotCP if the Choi matrix of t has an
// eigenvalue below -psd_floor. The dilation dimension is the rank of the
// Gram form under the rank_cut policy; minimality holds by construction.
Dilation stinespring_minimal(const CpMap& t, const Tolerance& tol);

// GNS construction for a density matrix rho (Hermitian, PSD, unit trace
// within tolerance; NotState otherwise): the dilation of the CP functional
// a -> tr(rho a) into the scalars. v is a unit cyclic vector.
Dilation gns(const CMatrix& rho, const Tolerance& tol);

// Checks all dilation invariants and reports the worst residuals.
DilationReport verify_dilation(const Dilation& d, const Tolerance& tol);

// Spanning matrix whose column (i*n + j)*m + k is pi(E_ij) V e_k. Its rank
// witnesses minimality, and its pseudo-inverse is the workhorse for the
// derivative and lifting constructions.
CMatrix spanning_matrix(const Dilation& d);

}  // namespace opalg
