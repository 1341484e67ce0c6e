#pragma once

// Dense complex matrices plus the handful of numeric kernels everything else
// is built on: Kronecker products, Hermitian eigendecomposition with a
// deterministic ordering, Moore-Penrose pseudo-inverse with an explicit rank
// policy, and partial traces over tensor factors.
//
// All operations are pure: inputs are never mutated and no global state is
// read or written.

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <vector>

#include <Eigen/Dense>

#include "opalg/errors.hpp"

namespace opalg {

using Cplx = std::complex<double>;

// Comparison thresholds used across the library.
//   abs_eq    - entrywise/operator-norm tolerance for equality checks
//   psd_floor - how far below zero an eigenvalue may dip and still count as >= 0
//   rank_cut  - relative cutoff (vs the largest singular/eigen value) below
//               which directions are treated as null
struct Tolerance {
  double abs_eq = 1e-9;
  double psd_floor = 1e-9;
  double rank_cut = 1e-10;

  // Throws ValidationError unless all fields are positive and
  // psd_floor <= abs_eq.
  void validate() const;
};

// Dense complex matrix with row-major JSON serialization. The backing store is
// an Eigen matrix, exposed read-only for callers that need numerics beyond
// this interface.
class CMatrix {
 public:
  CMatrix() : m_(0, 0) {}
  CMatrix(std::int64_t rows, std::int64_t cols);  // zero-filled
  // Row-major entry list; throws DimensionMismatch if sizes disagree and
  // ValidationError if any entry is non-finite.
  CMatrix(std::int64_t rows, std::int64_t cols, const std::vector<Cplx>& entries);

  static CMatrix identity(std::int64_t n);
  static CMatrix zero(std::int64_t rows, std::int64_t cols);
  // Wraps an Eigen matrix; throws ValidationError on non-finite entries.
  static CMatrix from_eigen(const Eigen::MatrixXcd& m);

  std::int64_t rows() const { return m_.rows(); }
  std::int64_t cols() const { return m_.cols(); }
  bool is_square() const { return m_.rows() == m_.cols(); }

  Cplx operator()(std::int64_t i, std::int64_t j) const { return m_(i, j); }
  Cplx& at(std::int64_t i, std::int64_t j) { return m_(i, j); }

  const Eigen::MatrixXcd& eigen() const { return m_; }

  CMatrix adjoint() const { return CMatrix(m_.adjoint()); }
  CMatrix transpose() const { return CMatrix(m_.transpose()); }
  CMatrix conjugate() const { return CMatrix(m_.conjugate()); }
  Cplx trace() const { return m_.trace(); }

  double max_abs() const;   // entrywise max modulus
  double fro_norm() const { return m_.norm(); }
  double op_norm() const;   // largest singular value

  bool is_finite() const;
  bool is_hermitian(const Tolerance& tol) const;
  bool is_psd(const Tolerance& tol) const;      // Hermitian and spectrum >= -psd_floor
  bool is_unitary(const Tolerance& tol) const;  // square and a*a = aa* = 1
  bool is_isometry(const Tolerance& tol) const; // a*a = 1

  CMatrix operator+(const CMatrix& o) const;
  CMatrix operator-(const CMatrix& o) const;
  CMatrix operator*(const CMatrix& o) const;
  CMatrix operator*(Cplx s) const { return CMatrix(Eigen::MatrixXcd(s * m_)); }
  CMatrix& operator+=(const CMatrix& o);

 private:
  explicit CMatrix(Eigen::MatrixXcd m) : m_(std::move(m)) {}

  Eigen::MatrixXcd m_;
};

inline CMatrix operator*(Cplx s, const CMatrix& a) { return a * s; }

// Result of eig_hermitian: eigenvalues in descending order, vectors(:, i) the
// unit eigenvector for values[i], phase-fixed so the first component of
// non-negligible modulus is real positive.
struct EigResult {
  std::vector<double> values;
  CMatrix vectors;
};

// Kronecker product. Bilinear; exactly associative on the nose because each
// output entry is a single scalar product per factor pair.
CMatrix kron(const CMatrix& a, const CMatrix& b);

// Hermitian eigendecomposition with deterministic ordering. Throws
// NotHermitian if max|a - a*| exceeds tol.abs_eq; the decomposition itself is
// taken on the Hermitian part (a + a*)/2. Numerically equal eigenvalues
// (within tol.abs_eq) are ordered by lexicographic comparison of the
// phase-fixed eigenvectors.
EigResult eig_hermitian(const CMatrix& a, const Tolerance& tol);

// Moore-Penrose pseudo-inverse via SVD; singular values below
// tol.rank_cut * sigma_max are treated as zero.
CMatrix pinv(const CMatrix& a, const Tolerance& tol);

// Partial trace of a square matrix over the tensor factors NOT listed in
// `keep`. `dims` are the factor dimensions in slot order and must multiply to
// the matrix dimension; `keep` holds distinct slot indices in increasing
// order. The result is indexed by the kept slots in their original order.
CMatrix partial_trace(const CMatrix& a, const std::vector<std::int64_t>& dims,
                      const std::vector<std::int64_t>& keep);

// Hermitian square root of a PSD matrix (eigenvalues clamped at zero from
// below). Throws NotHermitian / RangeViolation if a is not PSD within the
// tolerance.
CMatrix sqrt_psd(const CMatrix& a, const Tolerance& tol);

}  // namespace opalg
