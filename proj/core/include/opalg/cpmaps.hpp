#pragma once

// Completely positive maps between full matrix algebras, in Kraus form with a
// cached Choi matrix, plus the operator-dilation toolbox used downstream:
// composition, duals, the domination order (Choi difference PSD), the
// four-term decomposition of two-sided multiplications, unitary dilation of a
// contraction, and measure-and-continue instruments compiled from a circuit.

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "opalg/numerics.hpp"

namespace opalg {

// CP map from the n x n matrices to the m x m matrices, stored as a list of
// m x n Kraus operators. The Choi matrix sum_ij E_ij (x) T(E_ij) is computed
// once at construction.
class CpMap {
 public:
  // Empty placeholder (dims 0); every shaped operation on it fails its
  // dimension check. Exists so maps and aggregates can hold CpMap values.
  CpMap() = default;

  // Throws DimensionMismatch if a Kraus operator is not out_dim x in_dim.
  // The Kraus form guarantees complete positivity, so no check is needed.
  CpMap(std::int64_t in_dim, std::int64_t out_dim, std::vector<CMatrix> kraus);

  // Recovers a Kraus form from a Choi matrix by Hermitian eigendecomposition.
  // Eigenvalues in (-psd_floor, 0) are clipped to zero; anything more
  // negative throws NotCP. Directions below rank_cut * lambda_max are
  // dropped.
  static CpMap from_choi(std::int64_t in_dim, std::int64_t out_dim,
                         const CMatrix& choi, const Tolerance& tol);

  std::int64_t in_dim() const { return in_dim_; }
  std::int64_t out_dim() const { return out_dim_; }
  const std::vector<CMatrix>& kraus() const { return kraus_; }
  const CMatrix& choi() const { return choi_; }

  // T(a) = sum_k K_k a K_k*. Throws DimensionMismatch unless a is
  // in_dim x in_dim.
  CMatrix apply(const CMatrix& a) const;

  // Image of the matrix unit E_ij (column products; no matrix multiply).
  CMatrix apply_unit(std::int64_t i, std::int64_t j) const;

  // Trace dual: tr(adjoint().apply(m) rho) = tr(m apply(rho)). Kraus
  // operators are the adjoints of this map's.
  CpMap adjoint() const;

  // True if the map is trace preserving within tol.abs_eq
  // (sum_k K_k* K_k = 1), resp. unital (sum_k K_k K_k* = 1).
  bool is_trace_preserving(const Tolerance& tol) const;
  bool is_unital(const Tolerance& tol) const;

 private:
  std::int64_t in_dim_ = 0;
  std::int64_t out_dim_ = 0;
  std::vector<CMatrix> kraus_;
  CMatrix choi_;
};

// Composition s1 after s2 (algebra-to-algebra direction): requires
// s2.out_dim == s1.in_dim; the Kraus list is all pairwise products.
CpMap compose(const CpMap& s1, const CpMap& s2);

// Domination order: r dominates s iff choi(r) - choi(s) is PSD within
// tol.psd_floor. Throws DimensionMismatch if the maps have different shapes.
bool dominates(const CpMap& r, const CpMap& s, const Tolerance& tol);

// Smallest eigenvalue of choi(r) - choi(s); negative values witness failure
// of domination.
double domination_margin(const CpMap& r, const CpMap& s, const Tolerance& tol);

// Decomposes the two-sided multiplication b -> l* b r into four CP pieces:
// returns (v1..v4) with l* b r = (1/4) sum_j i^j vj* b vj for every b.
// l and r must have identical shape (DimensionMismatch otherwise).
std::array<CMatrix, 4> wittstock_decompose(const CMatrix& l, const CMatrix& r);

// Unitary dilation of a contraction d (operator norm <= 1 + tol.abs_eq,
// NotContraction otherwise): returns a unitary of twice the dimension whose
// top-left block is exactly d.
CMatrix egervary_unitary_dilation(const CMatrix& d, const Tolerance& tol);

// Finite instrument: outcome label -> CP arm. All arms must share one
// in_dim/out_dim pair and the summed arm must be trace preserving within
// tol.abs_eq (SumMismatch otherwise). Labels iterate lexicographically.
class Instrument {
 public:
  Instrument(std::map<std::string, CpMap> arms, const Tolerance& tol);

  const std::map<std::string, CpMap>& arms() const { return arms_; }
  const CpMap& arm(const std::string& label) const;
  std::int64_t in_dim() const { return in_dim_; }
  std::int64_t out_dim() const { return out_dim_; }

  // Sum of all arms (the unconditional channel).
  CpMap summed() const;

 private:
  std::map<std::string, CpMap> arms_;
  std::int64_t in_dim_;
  std::int64_t out_dim_;
};

// Measure-and-continue instrument compiled from a circuit: u acts on
// (outcome register (x) carried system), the outcome register starts in |0>,
// u is applied, the outcome register is measured in the computational basis,
// and the correction unitary for the observed outcome is applied to the
// carried system. Arm a has the single Kraus
//   E_a = V_a (<a| (x) 1) u (|0> (x) 1).
// u must be unitary of dimension outcome_dim * d and every correction
// unitary of dimension d (NotUnitary otherwise); outcome labels are
// "0", "1", ... in decimal.
Instrument instrument_from_circuit(const CMatrix& u, std::int64_t outcome_dim,
                                   const std::map<std::string, CMatrix>& corrections,
                                   const Tolerance& tol);

// Purified adjoint of arm a of the circuit above, as an operator on the full
// circuit space: m -> u* (P_a (x) V_a m V_a*) u. Unlike the compressed arm
// dual, this assignment is linear, *-preserving, and multiplicative in m,
// which is what makes circuit instruments composable algebraically.
CMatrix circuit_adjoint(const CMatrix& u, std::int64_t outcome_dim,
                        std::int64_t outcome, const CMatrix& correction,
                        const CMatrix& m, const Tolerance& tol);

}  // namespace opalg
