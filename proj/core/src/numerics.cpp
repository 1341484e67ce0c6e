#include "opalg/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace opalg {

void Tolerance::validate() const {
  if (!(abs_eq > 0.0) || !(psd_floor > 0.0) || !(rank_cut > 0.0)) {
    throw ValidationError("InvalidTolerance",
                          "all tolerance fields must be positive");
  }
  if (psd_floor > abs_eq) {
    throw ValidationError("InvalidTolerance",
                          "psd_floor must not exceed abs_eq");
  }
}

namespace {

void check_finite(const Eigen::MatrixXcd& m) {
  if (!m.allFinite()) {
    throw ValidationError("NonFiniteEntry",
                          "matrix entries must be finite (no NaN/Inf)");
  }
}

}  // namespace

CMatrix::CMatrix(std::int64_t rows, std::int64_t cols)
    : m_(Eigen::MatrixXcd::Zero(rows, cols)) {
  if (rows < 0 || cols < 0) {
    throw DimensionMismatch("matrix dimensions must be non-negative");
  }
}

CMatrix::CMatrix(std::int64_t rows, std::int64_t cols,
                 const std::vector<Cplx>& entries)
    : m_(rows, cols) {
  if (rows < 0 || cols < 0 ||
      static_cast<std::size_t>(rows * cols) != entries.size()) {
    throw DimensionMismatch("entry list size does not match rows*cols");
  }
  for (std::int64_t i = 0; i < rows; ++i) {
    for (std::int64_t j = 0; j < cols; ++j) {
      m_(i, j) = entries[static_cast<std::size_t>(i * cols + j)];
    }
  }
  check_finite(m_);
}

CMatrix CMatrix::identity(std::int64_t n) {
  return CMatrix(Eigen::MatrixXcd(Eigen::MatrixXcd::Identity(n, n)));
}

CMatrix CMatrix::zero(std::int64_t rows, std::int64_t cols) {
  return CMatrix(rows, cols);
}

CMatrix CMatrix::from_eigen(const Eigen::MatrixXcd& m) {
  check_finite(m);
  return CMatrix(m);
}

double CMatrix::max_abs() const {
  if (m_.size() == 0) return 0.0;
  return m_.cwiseAbs().maxCoeff();
}

double CMatrix::op_norm() const {
  if (m_.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m_);
  return svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
}

bool CMatrix::is_finite() const { return m_.allFinite(); }

bool CMatrix::is_hermitian(const Tolerance& tol) const {
  if (!is_square()) return false;
  return (m_ - m_.adjoint()).cwiseAbs().maxCoeff() <= tol.abs_eq;
}

bool CMatrix::is_psd(const Tolerance& tol) const {
  if (!is_hermitian(tol)) return false;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
      0.5 * (m_ + m_.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol.psd_floor;
}

bool CMatrix::is_unitary(const Tolerance& tol) const {
  if (!is_square()) return false;
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(m_.rows(), m_.cols());
  return (m_.adjoint() * m_ - id).cwiseAbs().maxCoeff() <= tol.abs_eq &&
         (m_ * m_.adjoint() - id).cwiseAbs().maxCoeff() <= tol.abs_eq;
}

bool CMatrix::is_isometry(const Tolerance& tol) const {
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(m_.cols(), m_.cols());
  return (m_.adjoint() * m_ - id).cwiseAbs().maxCoeff() <= tol.abs_eq;
}

CMatrix CMatrix::operator+(const CMatrix& o) const {
  if (rows() != o.rows() || cols() != o.cols()) {
    throw DimensionMismatch("matrix addition shape mismatch");
  }
  return CMatrix(Eigen::MatrixXcd(m_ + o.m_));
}

CMatrix CMatrix::operator-(const CMatrix& o) const {
  if (rows() != o.rows() || cols() != o.cols()) {
    throw DimensionMismatch("matrix subtraction shape mismatch");
  }
  return CMatrix(Eigen::MatrixXcd(m_ - o.m_));
}

CMatrix CMatrix::operator*(const CMatrix& o) const {
  if (cols() != o.rows()) {
    throw DimensionMismatch("matrix product shape mismatch");
  }
  return CMatrix(Eigen::MatrixXcd(m_ * o.m_));
}

CMatrix& CMatrix::operator+=(const CMatrix& o) {
  if (rows() != o.rows() || cols() != o.cols()) {
    throw DimensionMismatch("matrix addition shape mismatch");
  }
  m_ += o.m_;
  return *this;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  const std::int64_t ar = a.rows(), ac = a.cols();
  const std::int64_t br = b.rows(), bc = b.cols();
  Eigen::MatrixXcd out(ar * br, ac * bc);
  for (std::int64_t i = 0; i < ar; ++i) {
    for (std::int64_t j = 0; j < ac; ++j) {
      out.block(i * br, j * bc, br, bc) = a(i, j) * b.eigen();
    }
  }
  return CMatrix::from_eigen(out);
}

namespace {

// Phase-fix a unit vector in place: rotate so the first component whose
// modulus clears a small floor becomes real positive.
void phase_fix(Eigen::VectorXcd& v) {
  constexpr double kFloor = 1e-12;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    if (mag > kFloor) {
      const Cplx phase = v(i) / mag;
      v *= std::conj(phase);
      // Clean the pivot's imaginary dust so comparisons are stable.
      v(i) = Cplx(std::abs(v(i)), 0.0);
      return;
    }
  }
}

// Lexicographic order on phase-fixed vectors: compare (re, im) per component.
bool lex_less(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i).real() != b(i).real()) return a(i).real() < b(i).real();
    if (a(i).imag() != b(i).imag()) return a(i).imag() < b(i).imag();
  }
  return false;
}

}  // namespace

EigResult eig_hermitian(const CMatrix& a, const Tolerance& tol) {
  if (!a.is_square()) {
    throw DimensionMismatch("eig_hermitian requires a square matrix");
  }
  const Eigen::MatrixXcd& m = a.eigen();
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol.abs_eq) {
    throw NotHermitian("matrix is not Hermitian within abs_eq");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (m + m.adjoint()));
  if (es.info() != Eigen::Success) {
    throw ContractError("EigenFailure", "eigendecomposition did not converge");
  }

  const Eigen::Index n = m.rows();
  std::vector<Eigen::VectorXcd> vecs(static_cast<std::size_t>(n));
  std::vector<double> vals(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    vals[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
    Eigen::VectorXcd v = es.eigenvectors().col(i);
    phase_fix(v);
    vecs[static_cast<std::size_t>(i)] = std::move(v);
  }

  std::vector<std::size_t> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) {
                     return vals[x] > vals[y];
                   });
  // Within groups of numerically equal eigenvalues, order deterministically
  // by the phase-fixed eigenvectors.
  std::size_t lo = 0;
  while (lo < order.size()) {
    std::size_t hi = lo + 1;
    while (hi < order.size() &&
           std::abs(vals[order[hi]] - vals[order[lo]]) <= tol.abs_eq) {
      ++hi;
    }
    std::sort(order.begin() + static_cast<std::ptrdiff_t>(lo),
              order.begin() + static_cast<std::ptrdiff_t>(hi),
              [&](std::size_t x, std::size_t y) {
                return lex_less(vecs[x], vecs[y]);
              });
    lo = hi;
  }

  EigResult out;
  out.values.resize(static_cast<std::size_t>(n));
  Eigen::MatrixXcd vmat(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values[static_cast<std::size_t>(i)] = vals[order[static_cast<std::size_t>(i)]];
    vmat.col(i) = vecs[order[static_cast<std::size_t>(i)]];
  }
  out.vectors = CMatrix::from_eigen(vmat);
  return out;
}

CMatrix pinv(const CMatrix& a, const Tolerance& tol) {
  if (a.rows() == 0 || a.cols() == 0) {
    return CMatrix(a.cols(), a.rows());
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
      a.eigen(), Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cutoff = sv.size() > 0 ? tol.rank_cut * sv(0) : 0.0;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff && sv(i) > 0.0) inv(i) = 1.0 / sv(i);
  }
  return CMatrix::from_eigen(svd.matrixV() * inv.asDiagonal() *
                             svd.matrixU().adjoint());
}

CMatrix partial_trace(const CMatrix& a, const std::vector<std::int64_t>& dims,
                      const std::vector<std::int64_t>& keep) {
  if (!a.is_square()) {
    throw DimensionMismatch("partial_trace requires a square matrix");
  }
  std::int64_t total = 1;
  for (std::int64_t d : dims) {
    if (d <= 0) throw DimensionMismatch("factor dimensions must be positive");
    total *= d;
  }
  if (total != a.rows()) {
    throw DimensionMismatch("product of factor dimensions (" +
                            std::to_string(total) +
                            ") does not match matrix dimension (" +
                            std::to_string(a.rows()) + ")");
  }
  const std::int64_t nslots = static_cast<std::int64_t>(dims.size());
  std::vector<bool> kept(dims.size(), false);
  std::int64_t prev = -1;
  for (std::int64_t s : keep) {
    if (s < 0 || s >= nslots || s <= prev) {
      throw DimensionMismatch(
          "keep must list distinct slot indices in increasing order");
    }
    kept[static_cast<std::size_t>(s)] = true;
    prev = s;
  }

  std::vector<std::int64_t> keep_dims, trace_dims;
  std::vector<std::int64_t> keep_slots, trace_slots;
  for (std::int64_t s = 0; s < nslots; ++s) {
    if (kept[static_cast<std::size_t>(s)]) {
      keep_dims.push_back(dims[static_cast<std::size_t>(s)]);
      keep_slots.push_back(s);
    } else {
      trace_dims.push_back(dims[static_cast<std::size_t>(s)]);
      trace_slots.push_back(s);
    }
  }
  const std::int64_t kd = std::accumulate(keep_dims.begin(), keep_dims.end(),
                                          std::int64_t{1}, std::multiplies<>());
  const std::int64_t td = std::accumulate(trace_dims.begin(), trace_dims.end(),
                                          std::int64_t{1}, std::multiplies<>());

  // Strides of each slot in the full row-major multi-index.
  std::vector<std::int64_t> stride(dims.size(), 1);
  for (std::int64_t s = nslots - 2; s >= 0; --s) {
    stride[static_cast<std::size_t>(s)] =
        stride[static_cast<std::size_t>(s + 1)] * dims[static_cast<std::size_t>(s + 1)];
  }

  auto offset_of = [&](const std::vector<std::int64_t>& slots,
                       std::int64_t flat,
                       const std::vector<std::int64_t>& sub_dims) {
    std::int64_t off = 0;
    for (std::int64_t s = static_cast<std::int64_t>(slots.size()) - 1; s >= 0;
         --s) {
      const std::int64_t d = sub_dims[static_cast<std::size_t>(s)];
      off += (flat % d) * stride[static_cast<std::size_t>(slots[static_cast<std::size_t>(s)])];
      flat /= d;
    }
    return off;
  };

  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(kd, kd);
  for (std::int64_t r = 0; r < kd; ++r) {
    const std::int64_t roff = offset_of(keep_slots, r, keep_dims);
    for (std::int64_t c = 0; c < kd; ++c) {
      const std::int64_t coff = offset_of(keep_slots, c, keep_dims);
      Cplx sum = 0.0;
      for (std::int64_t t = 0; t < td; ++t) {
        const std::int64_t toff = offset_of(trace_slots, t, trace_dims);
        sum += a(roff + toff, coff + toff);
      }
      out(r, c) = sum;
    }
  }
  return CMatrix::from_eigen(out);
}

CMatrix sqrt_psd(const CMatrix& a, const Tolerance& tol) {
  EigResult eig = eig_hermitian(a, tol);
  const std::int64_t n = a.rows();
  for (double v : eig.values) {
    if (v < -tol.psd_floor) {
      throw RangeViolation("sqrt_psd requires a PSD matrix; min eigenvalue " +
                           std::to_string(v));
    }
  }
  Eigen::VectorXd root(n);
  for (std::int64_t i = 0; i < n; ++i) {
    root(i) = std::sqrt(std::max(0.0, eig.values[static_cast<std::size_t>(i)]));
  }
  const Eigen::MatrixXcd& u = eig.vectors.eigen();
  return CMatrix::from_eigen(u * root.asDiagonal() * u.adjoint());
}

}  // namespace opalg
