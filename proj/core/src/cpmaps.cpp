#include "opalg/cpmaps.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

namespace opalg {

namespace {

CMatrix compute_choi(std::int64_t n, std::int64_t m,
                     const std::vector<CMatrix>& kraus) {
  // choi = sum_ij E_ij (x) T(E_ij); block (i, j) of size m x m equals
  // sum_k col_i(K_k) col_j(K_k)*.
  Eigen::MatrixXcd choi = Eigen::MatrixXcd::Zero(n * m, n * m);
  for (const CMatrix& k : kraus) {
    const Eigen::MatrixXcd& km = k.eigen();
    for (std::int64_t i = 0; i < n; ++i) {
      for (std::int64_t j = 0; j < n; ++j) {
        choi.block(i * m, j * m, m, m) += km.col(i) * km.col(j).adjoint();
      }
    }
  }
  return CMatrix::from_eigen(choi);
}

}  // namespace

CpMap::CpMap(std::int64_t in_dim, std::int64_t out_dim,
             std::vector<CMatrix> kraus)
    : in_dim_(in_dim), out_dim_(out_dim), kraus_(std::move(kraus)) {
  if (in_dim <= 0 || out_dim <= 0) {
    throw DimensionMismatch("CpMap dimensions must be positive");
  }
  for (const CMatrix& k : kraus_) {
    if (k.rows() != out_dim_ || k.cols() != in_dim_) {
      throw DimensionMismatch("Kraus operator must be out_dim x in_dim");
    }
  }
  choi_ = compute_choi(in_dim_, out_dim_, kraus_);
}

CpMap CpMap::from_choi(std::int64_t in_dim, std::int64_t out_dim,
                       const CMatrix& choi, const Tolerance& tol) {
  if (choi.rows() != in_dim * out_dim || choi.cols() != in_dim * out_dim) {
    throw DimensionMismatch("Choi matrix must be (in_dim*out_dim) square");
  }
  if (!choi.is_hermitian(Tolerance{tol.abs_eq * 10, tol.psd_floor, tol.rank_cut})) {
    throw NotCP("Choi matrix is not Hermitian");
  }
  EigResult eig = eig_hermitian(
      choi, Tolerance{tol.abs_eq * 10, tol.psd_floor, tol.rank_cut});
  const double lead = eig.values.empty() ? 0.0 : std::max(0.0, eig.values[0]);
  std::vector<CMatrix> kraus;
  for (std::size_t idx = 0; idx < eig.values.size(); ++idx) {
    double lambda = eig.values[idx];
    if (lambda < -tol.psd_floor) {
      throw NotCP("Choi matrix has eigenvalue " + std::to_string(lambda) +
                  " below -psd_floor");
    }
    if (lambda <= 0.0 || lambda <= tol.rank_cut * lead) continue;
    // Eigenvector v is indexed by (i, a) with i the input index and a the
    // output index; the Kraus operator is K[a, i] = sqrt(lambda) v[i*m + a].
    Eigen::MatrixXcd k(out_dim, in_dim);
    const double w = std::sqrt(lambda);
    for (std::int64_t i = 0; i < in_dim; ++i) {
      for (std::int64_t a = 0; a < out_dim; ++a) {
        k(a, i) = w * eig.vectors(i * out_dim + a, static_cast<std::int64_t>(idx));
      }
    }
    kraus.push_back(CMatrix::from_eigen(k));
  }
  return CpMap(in_dim, out_dim, std::move(kraus));
}

CMatrix CpMap::apply(const CMatrix& a) const {
  if (a.rows() != in_dim_ || a.cols() != in_dim_) {
    throw DimensionMismatch("apply expects an in_dim square argument");
  }
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(out_dim_, out_dim_);
  for (const CMatrix& k : kraus_) {
    out += k.eigen() * a.eigen() * k.eigen().adjoint();
  }
  return CMatrix::from_eigen(out);
}

CMatrix CpMap::apply_unit(std::int64_t i, std::int64_t j) const {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(out_dim_, out_dim_);
  for (const CMatrix& k : kraus_) {
    out += k.eigen().col(i) * k.eigen().col(j).adjoint();
  }
  return CMatrix::from_eigen(out);
}

CpMap CpMap::adjoint() const {
  std::vector<CMatrix> adj;
  adj.reserve(kraus_.size());
  for (const CMatrix& k : kraus_) adj.push_back(k.adjoint());
  return CpMap(out_dim_, in_dim_, std::move(adj));
}

bool CpMap::is_trace_preserving(const Tolerance& tol) const {
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(in_dim_, in_dim_);
  for (const CMatrix& k : kraus_) sum += k.eigen().adjoint() * k.eigen();
  return (sum - Eigen::MatrixXcd::Identity(in_dim_, in_dim_))
             .cwiseAbs()
             .maxCoeff() <= tol.abs_eq;
}

bool CpMap::is_unital(const Tolerance& tol) const {
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(out_dim_, out_dim_);
  for (const CMatrix& k : kraus_) sum += k.eigen() * k.eigen().adjoint();
  return (sum - Eigen::MatrixXcd::Identity(out_dim_, out_dim_))
             .cwiseAbs()
             .maxCoeff() <= tol.abs_eq;
}

CpMap compose(const CpMap& s1, const CpMap& s2) {
  if (s2.out_dim() != s1.in_dim()) {
    throw DimensionMismatch(
        "compose(s1, s2) requires s2.out_dim == s1.in_dim");
  }
  std::vector<CMatrix> kraus;
  kraus.reserve(s1.kraus().size() * s2.kraus().size());
  for (const CMatrix& k1 : s1.kraus()) {
    for (const CMatrix& k2 : s2.kraus()) {
      kraus.push_back(k1 * k2);
    }
  }
  return CpMap(s2.in_dim(), s1.out_dim(), std::move(kraus));
}

double domination_margin(const CpMap& r, const CpMap& s,
                         const Tolerance& tol) {
  (void)tol;
  if (r.in_dim() != s.in_dim() || r.out_dim() != s.out_dim()) {
    throw DimensionMismatch("domination compares maps of identical shape");
  }
  const Eigen::MatrixXcd diff = r.choi().eigen() - s.choi().eigen();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
      0.5 * (diff + diff.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool dominates(const CpMap& r, const CpMap& s, const Tolerance& tol) {
  return domination_margin(r, s, tol) >= -tol.psd_floor;
}

std::array<CMatrix, 4> wittstock_decompose(const CMatrix& l, const CMatrix& r) {
  if (l.rows() != r.rows() || l.cols() != r.cols()) {
    throw DimensionMismatch("wittstock_decompose requires equal shapes");
  }
  // Polarization of the sesquilinear map (l, r) -> l* b r:
  //   l* b r = (1/4) sum_{j=1..4} i^j (l + i^{-j} r)* b (l + i^{-j} r).
  const Cplx i(0.0, 1.0);
  std::array<CMatrix, 4> v = {
      l - i * r,  // j = 1: l + i^{-1} r = l - i r
      l - r,      // j = 2
      l + i * r,  // j = 3
      l + r,      // j = 4
  };
  return v;
}

CMatrix egervary_unitary_dilation(const CMatrix& d, const Tolerance& tol) {
  if (!d.is_square()) {
    throw DimensionMismatch("unitary dilation requires a square matrix");
  }
  const double norm = d.op_norm();
  if (norm > 1.0 + tol.abs_eq) {
    throw NotContraction("operator norm " + std::to_string(norm) +
                         " exceeds 1");
  }
  const std::int64_t n = d.rows();
  const Eigen::MatrixXcd dm = d.eigen();
  // Defect operators; clamp the tiny negative eigenvalues that appear when
  // the norm sits at 1 within tolerance.
  Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  const CMatrix dc_left = CMatrix::from_eigen(id - dm * dm.adjoint());
  const CMatrix dc_right = CMatrix::from_eigen(id - dm.adjoint() * dm);
  Tolerance loose = tol;
  loose.psd_floor = std::max(tol.psd_floor, 3.0 * tol.abs_eq);
  loose.abs_eq = std::max(tol.abs_eq, loose.psd_floor);
  const Eigen::MatrixXcd s_left = sqrt_psd(dc_left, loose).eigen();
  const Eigen::MatrixXcd s_right = sqrt_psd(dc_right, loose).eigen();

  // W = [ d, sqrt(1 - dd*); sqrt(1 - d*d), -d* ] is unitary thanks to the
  // intertwining d f(d*d) = f(dd*) d.
  Eigen::MatrixXcd w(2 * n, 2 * n);
  w.block(0, 0, n, n) = dm;
  w.block(0, n, n, n) = s_left;
  w.block(n, 0, n, n) = s_right;
  w.block(n, n, n, n) = -dm.adjoint();
  return CMatrix::from_eigen(w);
}

Instrument::Instrument(std::map<std::string, CpMap> arms, const Tolerance& tol)
    : arms_(std::move(arms)) {
  if (arms_.empty()) {
    throw DimensionMismatch("an instrument needs at least one arm");
  }
  in_dim_ = arms_.begin()->second.in_dim();
  out_dim_ = arms_.begin()->second.out_dim();
  Eigen::MatrixXcd ksum = Eigen::MatrixXcd::Zero(in_dim_, in_dim_);
  for (const auto& [label, arm] : arms_) {
    if (arm.in_dim() != in_dim_ || arm.out_dim() != out_dim_) {
      throw DimensionMismatch("instrument arms must share one shape");
    }
    for (const CMatrix& k : arm.kraus()) {
      ksum += k.eigen().adjoint() * k.eigen();
    }
  }
  if ((ksum - Eigen::MatrixXcd::Identity(in_dim_, in_dim_))
          .cwiseAbs()
          .maxCoeff() > tol.abs_eq) {
    throw SumMismatch("instrument arms do not sum to a trace preserving map");
  }
}

const CpMap& Instrument::arm(const std::string& label) const {
  auto it = arms_.find(label);
  if (it == arms_.end()) {
    throw ValidationError("UnknownLabel", "no instrument arm '" + label + "'");
  }
  return it->second;
}

CpMap Instrument::summed() const {
  std::vector<CMatrix> kraus;
  for (const auto& [label, arm] : arms_) {
    for (const CMatrix& k : arm.kraus()) kraus.push_back(k);
  }
  return CpMap(in_dim_, out_dim_, std::move(kraus));
}

Instrument instrument_from_circuit(
    const CMatrix& u, std::int64_t outcome_dim,
    const std::map<std::string, CMatrix>& corrections, const Tolerance& tol) {
  if (outcome_dim <= 0 || !u.is_square() || u.rows() % outcome_dim != 0) {
    throw DimensionMismatch(
        "circuit dimension must be a multiple of outcome_dim");
  }
  if (!u.is_unitary(tol)) {
    throw NotUnitary("circuit operator is not unitary within abs_eq");
  }
  const std::int64_t d = u.rows() / outcome_dim;
  if (static_cast<std::int64_t>(corrections.size()) != outcome_dim) {
    throw DimensionMismatch("need exactly one correction per outcome");
  }

  std::map<std::string, CpMap> arms;
  std::int64_t a = 0;
  for (const auto& [label, v] : corrections) {
    if (label != std::to_string(a)) {
      throw ValidationError("UnknownLabel",
                            "correction labels must be \"0\"..\"" +
                                std::to_string(outcome_dim - 1) + "\"");
    }
    if (v.rows() != d || v.cols() != d || !v.is_unitary(tol)) {
      throw NotUnitary("correction for outcome " + label +
                       " is not a d x d unitary");
    }
    // E_a = V_a (<a| (x) 1) u (|0> (x) 1): pick row-block a of u's column
    // block 0 (outcome register is the first tensor slot).
    const Eigen::MatrixXcd block =
        u.eigen().block(a * d, 0, d, d);
    arms.emplace(label, CpMap(d, d, {v * CMatrix::from_eigen(block)}));
    ++a;
  }
  return Instrument(std::move(arms), tol);
}

CMatrix circuit_adjoint(const CMatrix& u, std::int64_t outcome_dim,
                        std::int64_t outcome, const CMatrix& correction,
                        const CMatrix& m, const Tolerance& tol) {
  if (outcome_dim <= 0 || !u.is_square() || u.rows() % outcome_dim != 0 ||
      outcome < 0 || outcome >= outcome_dim) {
    throw DimensionMismatch("outcome index out of range for the circuit");
  }
  if (!u.is_unitary(tol)) {
    throw NotUnitary("circuit operator is not unitary within abs_eq");
  }
  const std::int64_t d = u.rows() / outcome_dim;
  if (m.rows() != d || m.cols() != d || correction.rows() != d ||
      correction.cols() != d) {
    throw DimensionMismatch("observable and correction must be d x d");
  }
  // u* (P_a (x) V m V*) u on the full circuit space.
  Eigen::MatrixXcd proj = Eigen::MatrixXcd::Zero(outcome_dim, outcome_dim);
  proj(outcome, outcome) = 1.0;
  const CMatrix inner =
      kron(CMatrix::from_eigen(proj),
           correction * m * correction.adjoint());
  return CMatrix::from_eigen(u.eigen().adjoint() * inner.eigen() * u.eigen());
}

}  // namespace opalg
