#include "opalg/dilation.hpp"

#include <cmath>
#include <string>

#include <Eigen/SVD>

namespace opalg {

CMatrix Dilation::rep_apply(const CMatrix& a) const {
  if (a.rows() != algebra_dim || a.cols() != algebra_dim) {
    throw DimensionMismatch("rep_apply expects an algebra-sized matrix");
  }
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dil_dim, dil_dim);
  for (std::int64_t i = 0; i < algebra_dim; ++i) {
    for (std::int64_t j = 0; j < algebra_dim; ++j) {
      out += a(i, j) * rep_unit(i, j).eigen();
    }
  }
  return CMatrix::from_eigen(out);
}

CpMap Dilation::rep_as_cpmap(const Tolerance& tol) const {
  Eigen::MatrixXcd choi =
      Eigen::MatrixXcd::Zero(algebra_dim * dil_dim, algebra_dim * dil_dim);
  for (std::int64_t i = 0; i < algebra_dim; ++i) {
    for (std::int64_t j = 0; j < algebra_dim; ++j) {
      choi.block(i * dil_dim, j * dil_dim, dil_dim, dil_dim) =
          rep_unit(i, j).eigen();
    }
  }
  return CpMap::from_choi(algebra_dim, dil_dim, CMatrix::from_eigen(choi),
                          tol);
}

namespace {

// Flat index of the free-module symbol E_ij (x) e_k over the n x n algebra
// and the m-dimensional carrier space.
inline std::int64_t symbol_index(std::int64_t i, std::int64_t j,
                                 std::int64_t k, std::int64_t n,
                                 std::int64_t m) {
  return (i * n + j) * m + k;
}

std::int64_t rank_of(const Eigen::MatrixXcd& w, double rank_cut) {
  if (w.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(w);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 0;
  const double cutoff = rank_cut * sv(0);
  std::int64_t r = 0;
  for (Eigen::Index t = 0; t < sv.size(); ++t) {
    if (sv(t) > cutoff && sv(t) > 0.0) ++r;
  }
  return r;
}

}  // namespace

Dilation stinespring_minimal(const CpMap& t, const Tolerance& tol) {
  tol.validate();
  const std::int64_t n = t.in_dim();
  const std::int64_t m = t.out_dim();
  const std::int64_t nsym = n * n * m;

  // Gram form of the semi-inner product on the free module:
  //   < E_ij (x) e_k , E_i'j' (x) e_k' > = delta_ii' T(E_jj')[k, k'].
  Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(nsym, nsym);
  for (std::int64_t j = 0; j < n; ++j) {
    for (std::int64_t jp = 0; jp < n; ++jp) {
      const CMatrix tjj = t.apply_unit(j, jp);
      for (std::int64_t i = 0; i < n; ++i) {
        for (std::int64_t k = 0; k < m; ++k) {
          for (std::int64_t kp = 0; kp < m; ++kp) {
            gram(symbol_index(i, j, k, n, m), symbol_index(i, jp, kp, n, m)) =
                tjj(k, kp);
          }
        }
      }
    }
  }
  gram = 0.5 * (gram + gram.adjoint()).eval();

  // The Gram form is PSD exactly when t is CP; a genuinely negative
  // eigenvalue is the same defect as a negative Choi eigenvalue.
  EigResult eig = eig_hermitian(CMatrix::from_eigen(gram), tol);
  const double lead = eig.values.empty() ? 0.0 : std::max(0.0, eig.values[0]);
  for (double lambda : eig.values) {
    if (lambda < -tol.psd_floor) {
      throw NotCP("Gram form has eigenvalue " + std::to_string(lambda) +
                  "; the map is not completely positive");
    }
  }

  std::vector<std::int64_t> kept;
  for (std::size_t idx = 0; idx < eig.values.size(); ++idx) {
    if (eig.values[idx] > tol.rank_cut * lead && eig.values[idx] > 0.0) {
      kept.push_back(static_cast<std::int64_t>(idx));
    }
  }
  const std::int64_t dim_k = static_cast<std::int64_t>(kept.size());

  // Quotient coordinates: coords = sqrt(Lambda) U*, so that K-space inner
  // products of symbol combinations reproduce the Gram form; pinv_coords
  // embeds K back into the free module.
  Eigen::MatrixXcd coords(dim_k, nsym);
  Eigen::MatrixXcd pinv_coords(nsym, dim_k);
  for (std::int64_t r = 0; r < dim_k; ++r) {
    const double w = std::sqrt(eig.values[static_cast<std::size_t>(kept[r])]);
    coords.row(r) = w * eig.vectors.eigen().col(kept[r]).adjoint();
    pinv_coords.col(r) = eig.vectors.eigen().col(kept[r]) / w;
  }

  // Left multiplication by E_st sends symbol (i, j, k) to delta_ti (s, j, k),
  // so pi(E_st) = C_s P_t with C_s the coords columns on block s and P_t the
  // embedding rows on block t.
  Dilation d{dim_k, n, {}, CMatrix(), t};
  d.rep.reserve(static_cast<std::size_t>(n * n));
  const std::int64_t block = n * m;
  for (std::int64_t s = 0; s < n; ++s) {
    for (std::int64_t tt = 0; tt < n; ++tt) {
      const Eigen::MatrixXcd cs = coords.block(0, s * block, dim_k, block);
      const Eigen::MatrixXcd pt = pinv_coords.block(tt * block, 0, block, dim_k);
      d.rep.push_back(CMatrix::from_eigen(cs * pt));
    }
  }

  // V e_k is the class of 1 (x) e_k = sum_i E_ii (x) e_k.
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(dim_k, m);
  for (std::int64_t k = 0; k < m; ++k) {
    for (std::int64_t i = 0; i < n; ++i) {
      v.col(k) += coords.col(symbol_index(i, i, k, n, m));
    }
  }
  d.v = CMatrix::from_eigen(v);
  return d;
}

Dilation gns(const CMatrix& rho, const Tolerance& tol) {
  tol.validate();
  if (!rho.is_square()) {
    throw NotState("a state must be a square matrix");
  }
  if (!rho.is_hermitian(tol)) {
    throw NotState("a state must be Hermitian within abs_eq");
  }
  if (!rho.is_psd(tol)) {
    throw NotState("a state must be PSD within psd_floor");
  }
  if (std::abs(rho.trace() - Cplx(1.0, 0.0)) > tol.abs_eq) {
    throw NotState("a state must have unit trace within abs_eq");
  }
  // The functional a -> tr(rho a) as a CP map into the scalars: its Choi
  // matrix (with 1 x 1 blocks) is rho transposed.
  const CpMap functional =
      CpMap::from_choi(rho.rows(), 1, rho.transpose(), tol);
  return stinespring_minimal(functional, tol);
}

CMatrix spanning_matrix(const Dilation& d) {
  const std::int64_t n = d.algebra_dim;
  const std::int64_t m = d.v.cols();
  Eigen::MatrixXcd w(d.dil_dim, n * n * m);
  for (std::int64_t i = 0; i < n; ++i) {
    for (std::int64_t j = 0; j < n; ++j) {
      w.block(0, (i * n + j) * m, d.dil_dim, m) =
          d.rep_unit(i, j).eigen() * d.v.eigen();
    }
  }
  return CMatrix::from_eigen(w);
}

DilationReport verify_dilation(const Dilation& d, const Tolerance& tol) {
  const std::int64_t n = d.algebra_dim;
  DilationReport rep;

  for (std::int64_t i = 0; i < n; ++i) {
    for (std::int64_t j = 0; j < n; ++j) {
      const Eigen::MatrixXcd& pij = d.rep_unit(i, j).eigen();
      rep.star_residual = std::max(
          rep.star_residual,
          (pij.adjoint() - d.rep_unit(j, i).eigen()).cwiseAbs().maxCoeff());
      for (std::int64_t k = 0; k < n; ++k) {
        for (std::int64_t l = 0; l < n; ++l) {
          Eigen::MatrixXcd prod = pij * d.rep_unit(k, l).eigen();
          if (j == k) prod -= d.rep_unit(i, l).eigen();
          rep.product_residual =
              std::max(rep.product_residual, prod.cwiseAbs().maxCoeff());
        }
      }
      const Eigen::MatrixXcd recon =
          d.v.eigen().adjoint() * pij * d.v.eigen();
      rep.reconstruction_residual =
          std::max(rep.reconstruction_residual,
                   (recon - d.source.apply_unit(i, j).eigen())
                       .cwiseAbs()
                       .maxCoeff());
    }
  }

  const double vnorm = d.v.op_norm();
  const double tnorm =
      d.source.apply(CMatrix::identity(n)).op_norm();
  rep.norm_residual = std::abs(vnorm * vnorm - tnorm);

  rep.minimality_defect =
      d.dil_dim - rank_of(spanning_matrix(d).eigen(), tol.rank_cut);
  return rep;
}

bool DilationReport::ok(const Tolerance& tol) const {
  return product_residual <= tol.abs_eq && star_residual <= tol.abs_eq &&
         reconstruction_residual <= tol.abs_eq && norm_residual <= tol.abs_eq &&
         minimality_defect == 0;
}

}  // namespace opalg
