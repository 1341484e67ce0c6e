#include "opalg/radon_nikodym.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

namespace opalg {

namespace {

// Shared pairing core: the operator X on the dilation space determined by
// < pi(a) V e_k , X pi(b) V e_l > = s(a* b)[k, l], recovered through the
// pseudo-inverse of the spanning matrix. For X = derivative of s this is
// exact because X lies in pi's commutant.
CMatrix recover_commutant_operator(const CpMap& s, const Dilation& dil,
                                   const CMatrix& w_pinv) {
  const std::int64_t n = dil.algebra_dim;
  const std::int64_t m = dil.v.cols();
  const std::int64_t nsym = n * n * m;

  // Pairing matrix over symbols: delta_ii' s(E_jj')[k, k'].
  Eigen::MatrixXcd pairing = Eigen::MatrixXcd::Zero(nsym, nsym);
  for (std::int64_t j = 0; j < n; ++j) {
    for (std::int64_t jp = 0; jp < n; ++jp) {
      const CMatrix sjj = s.apply_unit(j, jp);
      for (std::int64_t i = 0; i < n; ++i) {
        for (std::int64_t k = 0; k < m; ++k) {
          for (std::int64_t kp = 0; kp < m; ++kp) {
            pairing((i * n + j) * m + k, (i * n + jp) * m + kp) = sjj(k, kp);
          }
        }
      }
    }
  }

  const Eigen::MatrixXcd d_raw = w_pinv.eigen().adjoint() * pairing *
                                 w_pinv.eigen();
  return CMatrix::from_eigen(0.5 * (d_raw + d_raw.adjoint()));
}

// Clips a Hermitian operator's spectrum into [0, 1]; spectrum escaping
// [-psd_floor, 1 + psd_floor] is a contract failure.
CMatrix clip_to_unit_interval(const CMatrix& d, const Tolerance& tol) {
  EigResult eig = eig_hermitian(d, tol);
  for (double lambda : eig.values) {
    if (lambda < -tol.psd_floor || lambda > 1.0 + tol.psd_floor) {
      throw RangeViolation("derivative spectrum leaves [0, 1]: eigenvalue " +
                           std::to_string(lambda));
    }
  }
  Eigen::VectorXd clipped(static_cast<Eigen::Index>(eig.values.size()));
  for (std::size_t i = 0; i < eig.values.size(); ++i) {
    clipped(static_cast<Eigen::Index>(i)) =
        std::min(1.0, std::max(0.0, eig.values[i]));
  }
  const Eigen::MatrixXcd& u = eig.vectors.eigen();
  return CMatrix::from_eigen(u * clipped.asDiagonal() * u.adjoint());
}

}  // namespace

RnDerivative rn_derivative(const CpMap& s, const Dilation& dil,
                           const Tolerance& tol) {
  tol.validate();
  if (!dominates(dil.source, s, tol)) {
    throw NotDominated("the dilated map does not dominate s (margin " +
                       std::to_string(domination_margin(dil.source, s, tol)) +
                       ")");
  }
  const CMatrix w_pinv = pinv(spanning_matrix(dil), tol);
  const CMatrix d = recover_commutant_operator(s, dil, w_pinv);
  return RnDerivative{clip_to_unit_interval(d, tol), dil};
}

std::vector<CMatrix> rn_decomposition(const std::vector<CpMap>& parts,
                                      const Dilation& dil,
                                      const Tolerance& tol) {
  tol.validate();
  if (parts.empty()) {
    throw SumMismatch("a decomposition needs at least one part");
  }
  Eigen::MatrixXcd choi_sum = Eigen::MatrixXcd::Zero(
      dil.source.choi().rows(), dil.source.choi().cols());
  for (const CpMap& p : parts) {
    if (p.in_dim() != dil.source.in_dim() ||
        p.out_dim() != dil.source.out_dim()) {
      throw DimensionMismatch("decomposition parts must match the source");
    }
    if (!p.choi().is_psd(tol)) {
      throw NotCP("decomposition part is not completely positive");
    }
    choi_sum += p.choi().eigen();
  }
  if ((choi_sum - dil.source.choi().eigen()).cwiseAbs().maxCoeff() >
      tol.abs_eq) {
    throw SumMismatch("decomposition parts do not sum to the dilated map");
  }

  const CMatrix w_pinv = pinv(spanning_matrix(dil), tol);
  std::vector<CMatrix> out;
  out.reserve(parts.size());
  for (const CpMap& p : parts) {
    out.push_back(clip_to_unit_interval(
        recover_commutant_operator(p, dil, w_pinv), tol));
  }
  return out;
}

CMatrix lift(const CMatrix& m, const Dilation& dil, const Tolerance& tol) {
  tol.validate();
  const std::int64_t n = dil.algebra_dim;
  const std::int64_t h_dim = dil.v.cols();
  if (m.rows() != h_dim || m.cols() != h_dim) {
    throw DimensionMismatch("lift expects an operator on the dilated map's "
                            "output space");
  }
  // m must commute with the image of the dilated map and its adjoints; the
  // threshold is deliberately looser than abs_eq because the image is itself
  // a computed quantity.
  const double thresh = 100.0 * tol.abs_eq;
  for (std::int64_t i = 0; i < n; ++i) {
    for (std::int64_t j = 0; j < n; ++j) {
      const Eigen::MatrixXcd tij = dil.source.apply_unit(i, j).eigen();
      const double c1 =
          (m.eigen() * tij - tij * m.eigen()).cwiseAbs().maxCoeff();
      const double c2 = (m.eigen() * tij.adjoint() - tij.adjoint() * m.eigen())
                            .cwiseAbs()
                            .maxCoeff();
      if (c1 > thresh || c2 > thresh) {
        throw NotInCommutant(
            "operator does not commute with the dilated map's image "
            "(residual " +
            std::to_string(std::max(c1, c2)) + ")");
      }
    }
  }

  const CMatrix w = spanning_matrix(dil);
  const CMatrix w_pinv = pinv(w, tol);
  // The lift acts on quotient classes by m on the carrier slot:
  // class(a (x) h) -> class(a (x) m h).
  const CMatrix embedded = kron(CMatrix::identity(n * n), m);
  return CMatrix::from_eigen(w.eigen() * embedded.eigen() *
                             w_pinv.eigen());
}

namespace {

void check_stage_shapes(const ChainStage& stage) {
  if (stage.families.empty()) {
    throw DimensionMismatch("a chain stage needs at least one input family");
  }
  for (const auto& [x, family] : stage.families) {
    if (family.empty()) {
      throw DimensionMismatch("family '" + x + "' has no outcomes");
    }
    for (const auto& [a, s] : family) {
      if (s.in_dim() != stage.dominant.in_dim() ||
          s.out_dim() != stage.dominant.out_dim()) {
        throw DimensionMismatch("family member (" + x + ", " + a +
                                ") does not match the stage dominant's shape");
      }
    }
  }
}

}  // namespace

CommutingRepresentation chain_k(const std::vector<ChainStage>& stages,
                                const Tolerance& tol, bool generalized) {
  tol.validate();
  if (stages.empty()) {
    throw DimensionMismatch("chain_k needs at least one stage");
  }
  for (std::size_t i = 0; i + 1 < stages.size(); ++i) {
    if (stages[i].dominant.in_dim() != stages[i + 1].dominant.out_dim()) {
      throw DimensionMismatch(
          "stage " + std::to_string(i + 2) +
          " must map into the algebra of stage " + std::to_string(i + 1));
    }
  }

  CommutingRepresentation cr;
  Dilation dil;  // dilation of the current composed dominant
  // Accumulated outcome operators, lifted along as the space grows.
  std::vector<std::map<std::string, std::map<std::string, CMatrix>>> families;

  for (std::size_t i = 0; i < stages.size(); ++i) {
    const ChainStage& stage = stages[i];
    check_stage_shapes(stage);

    // In the base construction each family member must be dominated by its
    // stage dominant outright; the generalized variant only needs the
    // composed (image-side) domination checked below.
    if (!generalized) {
      for (const auto& [x, family] : stage.families) {
        for (const auto& [a, s] : family) {
          if (!dominates(stage.dominant, s, tol)) {
            throw NotDominated("family member (" + x + ", " + a +
                               ") of stage " + std::to_string(i + 1) +
                               " is not dominated by the stage dominant");
          }
        }
      }
    }

    // Compose with the representation built so far and dilate.
    CpMap composed_dominant =
        i == 0 ? stage.dominant
               : compose(dil.rep_as_cpmap(tol), stage.dominant);
    Dilation next = stinespring_minimal(composed_dominant, tol);

    // Lift the operators accumulated on the previous space through the new
    // dilation.
    for (auto& stage_family : families) {
      for (auto& [x, family] : stage_family) {
        for (auto& [a, f] : family) {
          f = lift(f, next, tol);
        }
      }
    }

    // Derivatives of this stage's (composed) family members.
    const CMatrix w_pinv = pinv(spanning_matrix(next), tol);
    std::map<std::string, std::map<std::string, CMatrix>> new_family;
    for (const auto& [x, family] : stage.families) {
      for (const auto& [a, s] : family) {
        const CpMap composed =
            i == 0 ? s : compose(dil.rep_as_cpmap(tol), s);
        if (!dominates(composed_dominant, composed, tol)) {
          throw NotDominated("composed family member (" + x + ", " + a +
                             ") of stage " + std::to_string(i + 1) +
                             " is not dominated by the composed dominant");
        }
        new_family[x].emplace(
            a, clip_to_unit_interval(
                   recover_commutant_operator(composed, next, w_pinv), tol));
      }
    }
    families.push_back(std::move(new_family));

    // Total intertwiner: V_total = V_i ... V_1.
    cr.v = i == 0 ? next.v : next.v * cr.v;
    dil = std::move(next);
  }

  cr.dim_k = dil.dil_dim;
  cr.algebra_dim = dil.algebra_dim;
  cr.rep = dil.rep;
  cr.families = std::move(families);
  return cr;
}

CommutingRepresentation chain2(const ChainStage& stage1,
                               const ChainStage& stage2, const Tolerance& tol,
                               bool generalized) {
  return chain_k({stage1, stage2}, tol, generalized);
}

ChainReport verify_chain(const CommutingRepresentation& cr,
                         const std::vector<ChainStage>& stages,
                         const Tolerance& tol) {
  tol.validate();
  ChainReport report;
  report.family_min_eig = 0.0;
  const std::int64_t n = cr.algebra_dim;
  const std::int64_t k = cr.dim_k;
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(k, k);

  // PSD, closure per (stage, input), commutation across stages and with pi.
  std::vector<const CMatrix*> all_ops;
  for (const auto& stage_family : cr.families) {
    for (const auto& [x, family] : stage_family) {
      Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(k, k);
      for (const auto& [a, f] : family) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
            0.5 * (f.eigen() + f.eigen().adjoint()), Eigen::EigenvaluesOnly);
        report.family_min_eig =
            std::min(report.family_min_eig, es.eigenvalues().minCoeff());
        sum += f.eigen();
        all_ops.push_back(&f);
      }
      report.closure_residual = std::max(
          report.closure_residual, (sum - id).cwiseAbs().maxCoeff());
    }
  }
  // Cross-stage commutators only: operators within one stage need not
  // commute with each other.
  std::vector<std::size_t> stage_sizes;
  for (const auto& stage_family : cr.families) {
    std::size_t count = 0;
    for (const auto& [x, family] : stage_family) count += family.size();
    stage_sizes.push_back(count);
  }
  std::vector<std::size_t> stage_start(stage_sizes.size(), 0);
  for (std::size_t s = 1; s < stage_sizes.size(); ++s) {
    stage_start[s] = stage_start[s - 1] + stage_sizes[s - 1];
  }
  for (std::size_t s = 0; s < stage_sizes.size(); ++s) {
    for (std::size_t sp = s + 1; sp < stage_sizes.size(); ++sp) {
      for (std::size_t p = stage_start[s]; p < stage_start[s] + stage_sizes[s];
           ++p) {
        for (std::size_t q = stage_start[sp];
             q < stage_start[sp] + stage_sizes[sp]; ++q) {
          const Eigen::MatrixXcd& f = all_ops[p]->eigen();
          const Eigen::MatrixXcd& g = all_ops[q]->eigen();
          report.cross_commutation = std::max(
              report.cross_commutation, (f * g - g * f).cwiseAbs().maxCoeff());
        }
      }
    }
  }
  for (const CMatrix* f : all_ops) {
    for (std::int64_t i = 0; i < n; ++i) {
      for (std::int64_t j = 0; j < n; ++j) {
        const Eigen::MatrixXcd& pij = cr.rep_unit(i, j).eigen();
        report.rep_commutation =
            std::max(report.rep_commutation,
                     (f->eigen() * pij - pij * f->eigen())
                         .cwiseAbs()
                         .maxCoeff());
      }
    }
  }

  // Reconstruction against the composed dominated maps, over every choice of
  // one (input, outcome) pair per stage.
  std::vector<std::vector<std::pair<const std::string*, const std::string*>>>
      choices(stages.size());
  for (std::size_t s = 0; s < stages.size(); ++s) {
    for (const auto& [x, family] : stages[s].families) {
      for (const auto& [a, sm] : family) {
        (void)sm;
        choices[s].push_back({&x, &a});
      }
    }
  }
  std::vector<std::size_t> pick(stages.size(), 0);
  while (true) {
    // Product of the chosen outcome operators, then pair against pi.
    Eigen::MatrixXcd prod = Eigen::MatrixXcd::Identity(k, k);
    for (std::size_t s = 0; s < stages.size(); ++s) {
      prod *= cr.families[s]
                  .at(*choices[s][pick[s]].first)
                  .at(*choices[s][pick[s]].second)
                  .eigen();
    }
    // Composed dominated map S^1 o S^2 o ... o S^last.
    const CpMap* composed = nullptr;
    CpMap tmp = stages[0]
                    .families.at(*choices[0][pick[0]].first)
                    .at(*choices[0][pick[0]].second);
    for (std::size_t s = 1; s < stages.size(); ++s) {
      tmp = compose(tmp, stages[s]
                             .families.at(*choices[s][pick[s]].first)
                             .at(*choices[s][pick[s]].second));
    }
    composed = &tmp;
    for (std::int64_t i = 0; i < n; ++i) {
      for (std::int64_t j = 0; j < n; ++j) {
        const Eigen::MatrixXcd lhs = cr.v.eigen().adjoint() * prod *
                                     cr.rep_unit(i, j).eigen() *
                                     cr.v.eigen();
        report.reconstruction_residual =
            std::max(report.reconstruction_residual,
                     (lhs - composed->apply_unit(i, j).eigen())
                         .cwiseAbs()
                         .maxCoeff());
      }
    }
    // Advance the mixed-radix picker.
    std::size_t s = 0;
    while (s < pick.size()) {
      if (++pick[s] < choices[s].size()) break;
      pick[s] = 0;
      ++s;
    }
    if (s == pick.size()) break;
  }
  return report;
}

bool ChainReport::ok(const Tolerance& tol) const {
  return family_min_eig >= -tol.psd_floor &&
         closure_residual <= tol.abs_eq &&
         cross_commutation <= tol.abs_eq && rep_commutation <= tol.abs_eq &&
         reconstruction_residual <= tol.abs_eq;
}

}  // namespace opalg
