#pragma once

// Derivatives of dominated CP maps with respect to a dilation of their
// dominant: for S dominated by R with dilation (K, pi, V) of R, the
// derivative is the unique D in the commutant of pi with 0 <= D <= 1 and
// S(a) = V* D pi(a) V. On top of that sit decompositions of a map into CP
// parts (yielding a POVM in the commutant), the lifting of commutant
// operators through a further dilation, and the chaining construction that
// turns a sequence of dominated families into one representation with
// pairwise commuting outcome operators.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "opalg/cpmaps.hpp"
#include "opalg/dilation.hpp"
#include "opalg/numerics.hpp"

namespace opalg {

// Derivative of a dominated map with respect to a dilation of the dominant.
struct RnDerivative {
  CMatrix d;          // on the dilation space, 0 <= d <= 1, in pi's commutant
  Dilation dilation;  // the dilation it lives on
};

// One stage of a chain: per input label, a family of dominated CP maps (one
// per outcome label), together with the stage dominant. All maps of a stage
// share the dominant's shape.
struct ChainStage {
  std::map<std::string, std::map<std::string, CpMap>> families;
  CpMap dominant;
};

// Result of chaining: a single representation pi of the final stage algebra
// on K, the total intertwiner V, and for every stage a family of outcome
// operators on K that commute across stages and with the image of pi.
struct CommutingRepresentation {
  std::int64_t dim_k = 0;
  std::int64_t algebra_dim = 0;  // final stage algebra size
  std::vector<CMatrix> rep;      // pi(E_ij) at index i*algebra_dim + j
  CMatrix v;
  // families[stage][input label][outcome label] -> operator on K
  std::vector<std::map<std::string, std::map<std::string, CMatrix>>> families;

  const CMatrix& rep_unit(std::int64_t i, std::int64_t j) const {
    return rep[static_cast<std::size_t>(i * algebra_dim + j)];
  }
};

// Residuals of the chaining invariants, reported as entrywise max moduli
// (family_min_eig is the most negative eigenvalue across outcome operators).
struct ChainReport {
  double family_min_eig = 0.0;
  double closure_residual = 0.0;        // sum_a F_{a|x} vs 1, per (stage, x)
  double cross_commutation = 0.0;       // [F, F'] across stages
  double rep_commutation = 0.0;         // [F, pi(E_ij)]
  double reconstruction_residual = 0.0; // V* F... pi(a) V vs composed maps

  bool ok(const Tolerance& tol) const;
};

// Derivative of s with respect to dil (a dilation of a dominant of s).
// Throws NotDominated if dil.source does not dominate s, and RangeViolation
// if the recovered operator's spectrum leaves [-psd_floor, 1 + psd_floor];
// inside that margin the spectrum is clipped to [0, 1] exactly.
RnDerivative rn_derivative(const CpMap& s, const Dilation& dil,
                           const Tolerance& tol);

// Derivatives of a decomposition: parts must be CP (NotCP) and sum to
// dil.source within abs_eq (SumMismatch). The returned operators sum to the
// identity on the dilation space.
std::vector<CMatrix> rn_decomposition(const std::vector<CpMap>& parts,
                                      const Dilation& dil,
                                      const Tolerance& tol);

// Lifts an operator m on the dilated map's output space to the dilation
// space: the unique extension with lift(m) V = V m that commutes with pi's
// image. m must commute with every source(E_ij) and its adjoint within
// 100 * abs_eq (NotInCommutant otherwise). Preserves operator norm,
// adjoints, products, positivity, and the identity.
CMatrix lift(const CMatrix& m, const Dilation& dil, const Tolerance& tol);

// Chains two stages: dilate the first dominant, take derivatives of the
// first families, dilate the composition of pi with the second dominant,
// take derivatives of the composed second families, and lift the first
// ones through. With generalized = false every family member must be
// dominated by its stage dominant outright; with generalized = true only
// the composed (image-side) domination is required.
CommutingRepresentation chain2(const ChainStage& stage1,
                               const ChainStage& stage2, const Tolerance& tol,
                               bool generalized = false);

// Chains any number of stages by induction; a single stage is a dilation
// plus derivatives, two stages reduce exactly to chain2.
CommutingRepresentation chain_k(const std::vector<ChainStage>& stages,
                                const Tolerance& tol,
                                bool generalized = false);

// Verifies the chaining invariants of cr against the stages it was built
// from and reports worst-case residuals.
ChainReport verify_chain(const CommutingRepresentation& cr,
                         const std::vector<ChainStage>& stages,
                         const Tolerance& tol);

}  // namespace opalg
