#include "opalg/sequential.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "opalg/errors.hpp"

namespace opalg {

namespace {

std::vector<std::string> keys_of(
    const std::map<std::string, CMatrix>& m) {
  std::vector<std::string> out;
  out.reserve(m.size());
  for (const auto& [k, v] : m) out.push_back(k);
  return out;
}

template <typename T>
std::vector<std::string> keys_of(const std::map<std::string, T>& m) {
  std::vector<std::string> out;
  out.reserve(m.size());
  for (const auto& [k, v] : m) out.push_back(k);
  return out;
}

// Per-player input and outcome label vectors, in map-key (lexicographic)
// order; this fixes the flat index layout of the returned correlation.
struct LabelTable {
  std::vector<std::vector<std::string>> in_labels;
  std::vector<std::vector<std::string>> out_labels;
};

LabelTable label_table(const SequentialStrategy& s) {
  LabelTable t;
  t.in_labels.push_back(keys_of(s.assemblage));
  t.out_labels.push_back(keys_of(s.assemblage.begin()->second));
  for (const auto& per_input : s.instruments) {
    t.in_labels.push_back(keys_of(per_input));
    std::vector<std::string> arms;
    for (const auto& [b, arm] : per_input.begin()->second.arms()) {
      arms.push_back(b);
    }
    t.out_labels.push_back(arms);
  }
  t.in_labels.push_back(keys_of(s.final_povm));
  t.out_labels.push_back(keys_of(s.final_povm.begin()->second));
  return t;
}

void require_same_labels(const std::vector<std::string>& expected,
                         const std::vector<std::string>& got,
                         const std::string& what) {
  if (expected != got) {
    throw InvalidStrategy(what + " must use one common outcome label set");
  }
}

}  // namespace

void SequentialStrategy::validate(const Tolerance& tol) const {
  tol.validate();
  if (dim <= 0) {
    throw InvalidStrategy("sequential strategy needs a positive dimension");
  }
  if (assemblage.empty() || assemblage.begin()->second.empty()) {
    throw InvalidStrategy("assemblage needs at least one input and outcome");
  }
  const std::vector<std::string> out1 = keys_of(assemblage.begin()->second);
  for (const auto& [x, fam] : assemblage) {
    require_same_labels(out1, keys_of(fam), "assemblage inputs");
    double total = 0.0;
    for (const auto& [a, sigma] : fam) {
      if (sigma.rows() != dim || sigma.cols() != dim) {
        throw InvalidStrategy("assemblage member " + a + "|" + x +
                              " has the wrong dimension");
      }
      if (!sigma.is_psd(tol)) {
        throw InvalidStrategy("assemblage member " + a + "|" + x +
                              " is not PSD");
      }
      total += sigma.trace().real();
    }
    if (std::abs(total - 1.0) > tol.abs_eq) {
      throw InvalidStrategy("assemblage traces for input " + x +
                            " sum to " + std::to_string(total));
    }
  }
  for (std::size_t i = 0; i < instruments.size(); ++i) {
    const auto& per_input = instruments[i];
    if (per_input.empty()) {
      throw InvalidStrategy("middle player " + std::to_string(i + 2) +
                            " needs at least one input");
    }
    std::vector<std::string> arm_labels;
    for (const auto& [b, arm] :
         per_input.begin()->second.arms()) {
      arm_labels.push_back(b);
    }
    for (const auto& [y, inst] : per_input) {
      if (inst.in_dim() != dim || inst.out_dim() != dim) {
        throw InvalidStrategy("instrument for input " + y +
                              " must act on the shared system");
      }
      std::vector<std::string> got;
      for (const auto& [b, arm] : inst.arms()) got.push_back(b);
      require_same_labels(arm_labels, got,
                          "instruments of player " + std::to_string(i + 2));
    }
  }
  if (final_povm.empty() || final_povm.begin()->second.empty()) {
    throw InvalidStrategy("final measurement needs inputs and outcomes");
  }
  const std::vector<std::string> outk = keys_of(final_povm.begin()->second);
  for (const auto& [z, povm] : final_povm) {
    require_same_labels(outk, keys_of(povm), "final measurements");
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& [c, effect] : povm) {
      if (effect.rows() != dim || effect.cols() != dim) {
        throw InvalidStrategy("final effect " + c + "|" + z +
                              " has the wrong dimension");
      }
      if (!effect.is_psd(tol)) {
        throw InvalidStrategy("final effect " + c + "|" + z + " is not PSD");
      }
      sum += effect.eigen();
    }
    if ((sum - Eigen::MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff() >
        tol.abs_eq) {
      throw InvalidStrategy("final POVM for input " + z +
                            " does not sum to the identity");
    }
  }
}

Correlation eval_sequential(const SequentialStrategy& s,
                            const Tolerance& tol) {
  s.validate(tol);
  const LabelTable t = label_table(s);
  const std::size_t k = t.in_labels.size();

  Correlation c;
  for (std::size_t i = 0; i < k; ++i) {
    c.inputs.push_back(static_cast<std::int64_t>(t.in_labels[i].size()));
    c.outputs.push_back(static_cast<std::int64_t>(t.out_labels[i].size()));
  }
  const std::int64_t nx = c.num_inputs();
  const std::int64_t na = c.num_outputs();
  c.p.assign(static_cast<std::size_t>(na * nx), 0.0);

  for (std::int64_t x = 0; x < nx; ++x) {
    const std::vector<std::int64_t> xs = unflatten_tuple(x, c.inputs);
    for (std::int64_t a = 0; a < na; ++a) {
      const std::vector<std::int64_t> as = unflatten_tuple(a, c.outputs);
      // Player 1 prepares, the middle players transform, the last player
      // measures; each branch propagates an unnormalized state whose final
      // trace against the chosen effect is the joint probability.
      CMatrix state =
          s.assemblage.at(t.in_labels[0][static_cast<std::size_t>(xs[0])])
              .at(t.out_labels[0][static_cast<std::size_t>(as[0])]);
      for (std::size_t i = 0; i < s.instruments.size(); ++i) {
        const CpMap& arm =
            s.instruments[i]
                .at(t.in_labels[i + 1][static_cast<std::size_t>(xs[i + 1])])
                .arm(t.out_labels[i + 1][static_cast<std::size_t>(as[i + 1])]);
        state = arm.apply(state);
      }
      const CMatrix& effect =
          s.final_povm
              .at(t.in_labels[k - 1][static_cast<std::size_t>(xs[k - 1])])
              .at(t.out_labels[k - 1][static_cast<std::size_t>(as[k - 1])]);
      const double val = (effect.eigen() * state.eigen()).trace().real();
      c.p[static_cast<std::size_t>(a * nx + x)] = std::max(0.0, val);
    }
  }
  c.validate(tol);
  return c;
}

OnsReport ons_check(const SequentialStrategy& s, double eps) {
  Tolerance tol;
  s.validate(tol);
  OnsReport r;
  r.pass_threshold = eps;

  // How much the summed preparation depends on the first input.
  std::vector<CMatrix> sums;
  for (const auto& [x, fam] : s.assemblage) {
    CMatrix total = CMatrix::zero(s.dim, s.dim);
    for (const auto& [a, sigma] : fam) total += sigma;
    sums.push_back(total);
  }
  for (std::size_t i = 0; i < sums.size(); ++i) {
    for (std::size_t j = i + 1; j < sums.size(); ++j) {
      r.state_defect = std::max(r.state_defect, (sums[i] - sums[j]).max_abs());
    }
  }

  // How much each middle player's summed instrument depends on its input,
  // measured between the summed arms' Choi matrices.
  for (const auto& per_input : s.instruments) {
    std::vector<CMatrix> chois;
    for (const auto& [y, inst] : per_input) {
      chois.push_back(inst.summed().choi());
    }
    double defect = 0.0;
    for (std::size_t i = 0; i < chois.size(); ++i) {
      for (std::size_t j = i + 1; j < chois.size(); ++j) {
        defect = std::max(defect, (chois[i] - chois[j]).max_abs());
      }
    }
    r.instrument_defects.push_back(defect);
  }
  return r;
}

bool OnsReport::pass() const {
  if (state_defect > pass_threshold) return false;
  for (double d : instrument_defects) {
    if (d > pass_threshold) return false;
  }
  return true;
}

ConversionResult to_commuting(const SequentialStrategy& s,
                              const Tolerance& tol) {
  s.validate(tol);
  const OnsReport ons = ons_check(s, 100.0 * tol.abs_eq);
  if (!ons.pass()) {
    const auto fmt = [](double v) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.6g", v);
      return std::string(buf);
    };
    std::string msg = "strategy signals on the single system: state defect " +
                      fmt(ons.state_defect);
    for (std::size_t i = 0; i < ons.instrument_defects.size(); ++i) {
      msg += ", instrument defect " + fmt(ons.instrument_defects[i]);
    }
    throw NotOns(msg + " (threshold " + fmt(ons.pass_threshold) + ")");
  }

  const std::int64_t d = s.dim;
  std::vector<ChainStage> stages;

  // Stage 1: the preparations become functionals m -> tr(sigma m) with Choi
  // matrix sigma^T, dominated by the input-averaged total preparation.
  {
    ChainStage st;
    Eigen::MatrixXcd avg = Eigen::MatrixXcd::Zero(d, d);
    for (const auto& [x, fam] : s.assemblage) {
      for (const auto& [a, sigma] : fam) {
        st.families[x][a] = CpMap::from_choi(d, 1, sigma.transpose(), tol);
        avg += sigma.transpose().eigen();
      }
    }
    avg /= static_cast<double>(s.assemblage.size());
    st.dominant = CpMap::from_choi(d, 1, CMatrix::from_eigen(avg), tol);
    stages.push_back(std::move(st));
  }

  // Middle stages: the instrument arms act in the Heisenberg picture, so
  // each stage family is the set of arm adjoints and the dominant is the
  // input-averaged adjoint of the summed instrument.
  for (const auto& per_input : s.instruments) {
    ChainStage st;
    Eigen::MatrixXcd avg = Eigen::MatrixXcd::Zero(d * d, d * d);
    for (const auto& [y, inst] : per_input) {
      for (const auto& [b, arm] : inst.arms()) {
        st.families[y][b] = arm.adjoint();
      }
      avg += inst.summed().adjoint().choi().eigen();
    }
    avg /= static_cast<double>(per_input.size());
    st.dominant = CpMap::from_choi(d, d, CMatrix::from_eigen(avg), tol);
    stages.push_back(std::move(st));
  }

  // Chain the stages; this re-verifies domination by the averaged dominants
  // and throws NotDominated if averaging did not resolve the defects.
  CommutingRepresentation cr = chain_k(stages, tol);
  const ChainReport report = verify_chain(cr, stages, tol);

  const LabelTable t = label_table(s);
  const std::size_t k = t.in_labels.size();

  CommutingStrategy cs;
  cs.dim = cr.dim_k;
  {
    Eigen::VectorXcd psi = cr.v.eigen().col(0);
    psi /= psi.norm();
    Eigen::MatrixXcd m(psi.size(), 1);
    m.col(0) = psi;
    cs.psi = CMatrix::from_eigen(m);
  }
  cs.povms.resize(k);
  for (std::size_t i = 0; i + 1 < k; ++i) {
    for (const std::string& x : t.in_labels[i]) {
      std::vector<CMatrix> povm;
      for (const std::string& a : t.out_labels[i]) {
        povm.push_back(cr.families[i].at(x).at(a));
      }
      cs.povms[i].push_back(std::move(povm));
    }
  }
  // The last player's effects pass through the representation of the final
  // stage algebra.
  for (const std::string& z : t.in_labels[k - 1]) {
    std::vector<CMatrix> povm;
    for (const std::string& c : t.out_labels[k - 1]) {
      const CMatrix& effect = s.final_povm.at(z).at(c);
      Eigen::MatrixXcd img = Eigen::MatrixXcd::Zero(cr.dim_k, cr.dim_k);
      for (std::int64_t i = 0; i < d; ++i) {
        for (std::int64_t j = 0; j < d; ++j) {
          img += effect.eigen()(i, j) * cr.rep_unit(i, j).eigen();
        }
      }
      // Hermitize away multiplication dust so the effect is an exact POVM
      // element of the commuting strategy.
      img = 0.5 * (img + img.adjoint().eval());
      povm.push_back(CMatrix::from_eigen(img));
    }
    cs.povms[k - 1].push_back(std::move(povm));
  }

  // Worst difference between the sequential correlation and the commuting
  // evaluation of the converted strategy.
  const Correlation seq = eval_sequential(s, tol);
  double residual = 0.0;
  const std::int64_t nx = seq.num_inputs();
  const std::int64_t na = seq.num_outputs();
  for (std::int64_t x = 0; x < nx; ++x) {
    const std::vector<std::int64_t> xs = unflatten_tuple(x, seq.inputs);
    for (std::int64_t a = 0; a < na; ++a) {
      const std::vector<std::int64_t> as = unflatten_tuple(a, seq.outputs);
      Eigen::VectorXcd phi = cs.psi.eigen().col(0);
      for (std::size_t i = k; i-- > 0;) {
        phi = cs.povms[i][static_cast<std::size_t>(xs[i])]
                      [static_cast<std::size_t>(as[i])]
                  .eigen() *
              phi;
      }
      const double val = (cs.psi.eigen().adjoint() * phi)(0, 0).real();
      residual = std::max(
          residual,
          std::abs(val - seq.p[static_cast<std::size_t>(a * nx + x)]));
    }
  }

  ConversionResult out;
  out.strategy = std::move(cs);
  out.chain = report;
  out.eval_residual = residual;
  return out;
}

}  // namespace opalg
