#include "opalg/games.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

namespace opalg {

namespace {

std::int64_t product_of(const std::vector<std::int64_t>& sizes) {
  std::int64_t total = 1;
  for (std::int64_t s : sizes) total *= s;
  return total;
}

void check_alphabets(const std::vector<std::int64_t>& inputs,
                     const std::vector<std::int64_t>& outputs,
                     std::int64_t players) {
  if (players <= 0 ||
      static_cast<std::int64_t>(inputs.size()) != players ||
      static_cast<std::int64_t>(outputs.size()) != players) {
    throw ShapeMismatch("alphabet lists must have one entry per player");
  }
  for (std::int64_t s : inputs) {
    if (s <= 0) throw ShapeMismatch("input alphabet sizes must be positive");
  }
  for (std::int64_t s : outputs) {
    if (s <= 0) throw ShapeMismatch("output alphabet sizes must be positive");
  }
}

}  // namespace

std::int64_t flatten_tuple(const std::vector<std::int64_t>& tuple,
                           const std::vector<std::int64_t>& sizes) {
  std::int64_t flat = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    flat = flat * sizes[i] + tuple[i];
  }
  return flat;
}

std::vector<std::int64_t> unflatten_tuple(
    std::int64_t flat, const std::vector<std::int64_t>& sizes) {
  std::vector<std::int64_t> tuple(sizes.size(), 0);
  for (std::size_t i = sizes.size(); i-- > 0;) {
    tuple[i] = flat % sizes[i];
    flat /= sizes[i];
  }
  return tuple;
}

std::int64_t Game::num_inputs() const { return product_of(inputs); }
std::int64_t Game::num_outputs() const { return product_of(outputs); }

void Game::validate(const Tolerance& tol) const {
  check_alphabets(inputs, outputs, players);
  const std::int64_t nx = num_inputs();
  const std::int64_t na = num_outputs();
  if (static_cast<std::int64_t>(q.size()) != nx) {
    throw ShapeMismatch("q must have one entry per input tuple");
  }
  if (static_cast<std::int64_t>(predicate.size()) != na * nx) {
    throw ShapeMismatch("predicate must have num_outputs*num_inputs entries");
  }
  double total = 0.0;
  for (double w : q) {
    if (w < 0.0) {
      throw ValidationError("InvalidDistribution",
                            "q entries must be non-negative");
    }
    total += w;
  }
  if (std::abs(total - 1.0) > tol.abs_eq) {
    throw ValidationError("InvalidDistribution", "q must sum to 1");
  }
  for (double v : predicate) {
    if (v != 0.0 && v != 1.0) {
      throw ValidationError("InvalidPredicate",
                            "predicate entries must be exactly 0 or 1");
    }
  }
}

std::int64_t Correlation::num_inputs() const { return product_of(inputs); }
std::int64_t Correlation::num_outputs() const { return product_of(outputs); }

void Correlation::validate(const Tolerance& tol) const {
  check_alphabets(inputs, outputs,
                  static_cast<std::int64_t>(inputs.size()));
  const std::int64_t nx = num_inputs();
  const std::int64_t na = num_outputs();
  if (static_cast<std::int64_t>(p.size()) != na * nx) {
    throw ShapeMismatch("p must have num_outputs*num_inputs entries");
  }
  for (double v : p) {
    if (v < -tol.abs_eq || v > 1.0 + tol.abs_eq) {
      throw ValidationError("InvalidCorrelation",
                            "entries must lie in [0, 1] within abs_eq");
    }
  }
  for (std::int64_t x = 0; x < nx; ++x) {
    double sum = 0.0;
    for (std::int64_t a = 0; a < na; ++a) sum += p[a * nx + x];
    if (std::abs(sum - 1.0) > tol.abs_eq) {
      throw ValidationError("InvalidCorrelation",
                            "p must be normalized for every input tuple");
    }
  }
}

double score(const Game& g, const Correlation& c, const Tolerance& tol) {
  g.validate(tol);
  c.validate(tol);
  if (c.inputs != g.inputs || c.outputs != g.outputs) {
    throw ShapeMismatch("correlation alphabets do not match the game");
  }
  const std::int64_t nx = g.num_inputs();
  const std::int64_t na = g.num_outputs();
  double value = 0.0;
  for (std::int64_t a = 0; a < na; ++a) {
    for (std::int64_t x = 0; x < nx; ++x) {
      value += g.q[x] * g.predicate[a * nx + x] * c.p[a * nx + x];
    }
  }
  return value;
}

std::pair<double, std::vector<std::vector<std::int64_t>>> classical_value(
    const Game& g, const Tolerance& tol, std::int64_t cap) {
  g.validate(tol);
  if (cap <= 0) {
    throw ValidationError("InvalidTolerance", "enumeration cap must be positive");
  }
  // A deterministic strategy is one answer per (player, input); the joint
  // assignment tuple enumerates lexicographically with player 1's input 0
  // most significant.
  double log_count = 0.0;
  for (std::int64_t i = 0; i < g.players; ++i) {
    log_count += static_cast<double>(g.inputs[i]) *
                 std::log2(static_cast<double>(g.outputs[i]));
  }
  if (log_count > std::log2(static_cast<double>(cap))) {
    throw TooLarge("deterministic strategy space exceeds the cap of " +
                   std::to_string(cap) + " assignments");
  }
  std::int64_t count = 1;
  std::vector<std::int64_t> digit_sizes;  // output size per assignment slot
  for (std::int64_t i = 0; i < g.players; ++i) {
    for (std::int64_t x = 0; x < g.inputs[i]; ++x) {
      digit_sizes.push_back(g.outputs[i]);
      count *= g.outputs[i];
    }
  }

  const std::int64_t nx = g.num_inputs();
  double best = -1.0;
  std::vector<std::int64_t> best_digits;
  std::vector<std::int64_t> digits(digit_sizes.size(), 0);
  for (std::int64_t t = 0; t < count; ++t) {
    double value = 0.0;
    for (std::int64_t x = 0; x < nx; ++x) {
      if (g.q[x] == 0.0) continue;
      const std::vector<std::int64_t> xs = unflatten_tuple(x, g.inputs);
      std::vector<std::int64_t> as(static_cast<std::size_t>(g.players));
      std::int64_t slot = 0;
      for (std::int64_t i = 0; i < g.players; ++i) {
        as[static_cast<std::size_t>(i)] =
            digits[static_cast<std::size_t>(slot + xs[static_cast<std::size_t>(i)])];
        slot += g.inputs[i];
      }
      const std::int64_t a = flatten_tuple(as, g.outputs);
      value += g.q[x] * g.predicate[a * nx + x];
    }
    if (value > best) {
      best = value;
      best_digits = digits;
    }
    // Advance the assignment tuple lexicographically (last slot fastest).
    for (std::size_t s = digits.size(); s-- > 0;) {
      if (++digits[s] < digit_sizes[s]) break;
      digits[s] = 0;
    }
  }

  std::vector<std::vector<std::int64_t>> assignment(
      static_cast<std::size_t>(g.players));
  std::int64_t slot = 0;
  for (std::int64_t i = 0; i < g.players; ++i) {
    assignment[static_cast<std::size_t>(i)].assign(
        best_digits.begin() + slot, best_digits.begin() + slot + g.inputs[i]);
    slot += g.inputs[i];
  }
  return {best, assignment};
}

namespace {

void validate_povms(const std::vector<std::vector<std::vector<CMatrix>>>& povms,
                    const std::vector<std::int64_t>& dims,
                    const std::vector<std::int64_t>& inputs,
                    const std::vector<std::int64_t>& outputs,
                    const Tolerance& tol) {
  if (povms.size() != dims.size()) {
    throw InvalidStrategy("need one POVM family per player");
  }
  for (std::size_t i = 0; i < povms.size(); ++i) {
    if (static_cast<std::int64_t>(povms[i].size()) != inputs[i]) {
      throw InvalidStrategy("player " + std::to_string(i + 1) +
                            " needs one POVM per input");
    }
    for (std::size_t x = 0; x < povms[i].size(); ++x) {
      const auto& povm = povms[i][x];
      if (static_cast<std::int64_t>(povm.size()) != outputs[i]) {
        throw InvalidStrategy("POVM has the wrong number of outcomes");
      }
      Eigen::MatrixXcd sum =
          Eigen::MatrixXcd::Zero(dims[i], dims[i]);
      for (const CMatrix& m : povm) {
        if (m.rows() != dims[i] || m.cols() != dims[i]) {
          throw InvalidStrategy("POVM element has the wrong dimension");
        }
        if (!m.is_psd(tol)) {
          throw InvalidStrategy("POVM element is not PSD within psd_floor");
        }
        sum += m.eigen();
      }
      if ((sum - Eigen::MatrixXcd::Identity(dims[i], dims[i]))
              .cwiseAbs()
              .maxCoeff() > tol.abs_eq) {
        throw InvalidStrategy("POVM does not sum to the identity");
      }
    }
  }
}

}  // namespace

Correlation eval_tensor(const TensorStrategy& s, const Tolerance& tol) {
  if (s.dims.empty()) throw InvalidStrategy("strategy needs players");
  std::vector<std::int64_t> inputs, outputs;
  for (const auto& per_player : s.povms) {
    inputs.push_back(static_cast<std::int64_t>(per_player.size()));
    outputs.push_back(per_player.empty()
                          ? 0
                          : static_cast<std::int64_t>(per_player[0].size()));
  }
  validate_povms(s.povms, s.dims, inputs, outputs, tol);
  std::int64_t total_dim = 1;
  for (std::int64_t d : s.dims) total_dim *= d;
  if (s.psi.rows() != total_dim || s.psi.cols() != 1) {
    throw InvalidStrategy("psi must be a column vector on the product space");
  }
  if (std::abs(s.psi.eigen().norm() - 1.0) > tol.abs_eq) {
    throw InvalidStrategy("psi must be a unit vector");
  }

  Correlation c;
  c.inputs = inputs;
  c.outputs = outputs;
  const std::int64_t nx = c.num_inputs();
  const std::int64_t na = c.num_outputs();
  c.p.assign(static_cast<std::size_t>(na * nx), 0.0);
  for (std::int64_t x = 0; x < nx; ++x) {
    const std::vector<std::int64_t> xs = unflatten_tuple(x, inputs);
    for (std::int64_t a = 0; a < na; ++a) {
      const std::vector<std::int64_t> as = unflatten_tuple(a, outputs);
      CMatrix op = s.povms[0][static_cast<std::size_t>(xs[0])]
                            [static_cast<std::size_t>(as[0])];
      for (std::size_t i = 1; i < s.povms.size(); ++i) {
        op = kron(op, s.povms[i][static_cast<std::size_t>(xs[i])]
                              [static_cast<std::size_t>(as[i])]);
      }
      const Cplx val =
          (s.psi.eigen().adjoint() * op.eigen() * s.psi.eigen())(0, 0);
      c.p[static_cast<std::size_t>(a * nx + x)] = std::max(0.0, val.real());
    }
  }
  c.validate(tol);
  return c;
}

Correlation eval_commuting(const CommutingStrategy& s, const Tolerance& tol) {
  if (s.povms.empty()) throw InvalidStrategy("strategy needs players");
  std::vector<std::int64_t> inputs, outputs;
  std::vector<std::int64_t> dims;
  for (const auto& per_player : s.povms) {
    inputs.push_back(static_cast<std::int64_t>(per_player.size()));
    outputs.push_back(per_player.empty()
                          ? 0
                          : static_cast<std::int64_t>(per_player[0].size()));
    dims.push_back(s.dim);
  }
  validate_povms(s.povms, dims, inputs, outputs, tol);
  if (s.psi.rows() != s.dim || s.psi.cols() != 1 ||
      std::abs(s.psi.eigen().norm() - 1.0) > tol.abs_eq) {
    throw InvalidStrategy("psi must be a unit vector of the declared dim");
  }
  // Cross-player commutation.
  double worst = 0.0;
  for (std::size_t i = 0; i < s.povms.size(); ++i) {
    for (std::size_t j = i + 1; j < s.povms.size(); ++j) {
      for (const auto& povm_i : s.povms[i]) {
        for (const CMatrix& mi : povm_i) {
          for (const auto& povm_j : s.povms[j]) {
            for (const CMatrix& mj : povm_j) {
              worst = std::max(worst, (mi.eigen() * mj.eigen() -
                                       mj.eigen() * mi.eigen())
                                          .cwiseAbs()
                                          .maxCoeff());
            }
          }
        }
      }
    }
  }
  if (worst > tol.abs_eq) {
    throw NotCommuting("cross-player commutator reaches " +
                       std::to_string(worst));
  }

  Correlation c;
  c.inputs = inputs;
  c.outputs = outputs;
  const std::int64_t nx = c.num_inputs();
  const std::int64_t na = c.num_outputs();
  c.p.assign(static_cast<std::size_t>(na * nx), 0.0);
  for (std::int64_t x = 0; x < nx; ++x) {
    const std::vector<std::int64_t> xs = unflatten_tuple(x, inputs);
    for (std::int64_t a = 0; a < na; ++a) {
      const std::vector<std::int64_t> as = unflatten_tuple(a, outputs);
      Eigen::VectorXcd phi = s.psi.eigen().col(0);
      // Apply in reverse player order so the product reads player 1 ... k.
      for (std::size_t i = s.povms.size(); i-- > 0;) {
        phi = s.povms[i][static_cast<std::size_t>(xs[i])]
                      [static_cast<std::size_t>(as[i])]
                  .eigen() *
              phi;
      }
      const Cplx val = (s.psi.eigen().adjoint() * phi)(0, 0);
      c.p[static_cast<std::size_t>(a * nx + x)] =
          std::min(1.0, std::max(0.0, val.real()));
    }
  }
  c.validate(tol);
  return c;
}

NsReport ns_check(const Correlation& c, double eps) {
  const std::int64_t players = static_cast<std::int64_t>(c.inputs.size());
  const std::int64_t nx = c.num_inputs();
  NsReport report;
  report.eps = eps;
  report.defects.assign(static_cast<std::size_t>(players), 0.0);

  for (std::int64_t i = 0; i < players; ++i) {
    // Marginal over a_i of p(a | x) must not depend on x_i.
    std::vector<std::int64_t> other_inputs, other_outputs;
    for (std::int64_t j = 0; j < players; ++j) {
      if (j == i) continue;
      other_inputs.push_back(c.inputs[static_cast<std::size_t>(j)]);
      other_outputs.push_back(c.outputs[static_cast<std::size_t>(j)]);
    }
    const std::int64_t n_other_x = product_of(other_inputs);
    const std::int64_t n_other_a = product_of(other_outputs);
    double defect = 0.0;
    for (std::int64_t ox = 0; ox < n_other_x; ++ox) {
      const std::vector<std::int64_t> oxs = unflatten_tuple(ox, other_inputs);
      for (std::int64_t oa = 0; oa < n_other_a; ++oa) {
        const std::vector<std::int64_t> oas =
            unflatten_tuple(oa, other_outputs);
        double ref = 0.0;
        for (std::int64_t xi = 0; xi < c.inputs[static_cast<std::size_t>(i)];
             ++xi) {
          std::vector<std::int64_t> xs(static_cast<std::size_t>(players));
          std::size_t pos = 0;
          for (std::int64_t j = 0; j < players; ++j) {
            xs[static_cast<std::size_t>(j)] =
                (j == i) ? xi : oxs[pos++];
          }
          const std::int64_t x = flatten_tuple(xs, c.inputs);
          double marg = 0.0;
          for (std::int64_t ai = 0;
               ai < c.outputs[static_cast<std::size_t>(i)]; ++ai) {
            std::vector<std::int64_t> as(static_cast<std::size_t>(players));
            std::size_t apos = 0;
            for (std::int64_t j = 0; j < players; ++j) {
              as[static_cast<std::size_t>(j)] =
                  (j == i) ? ai : oas[apos++];
            }
            marg += c.p[static_cast<std::size_t>(
                flatten_tuple(as, c.outputs) * nx + x)];
          }
          if (xi == 0) {
            ref = marg;
          } else {
            defect = std::max(defect, std::abs(marg - ref));
          }
        }
      }
    }
    report.defects[static_cast<std::size_t>(i)] = defect;
  }
  report.pass = true;
  for (double d : report.defects) {
    if (d > eps) report.pass = false;
  }
  return report;
}

namespace {

// Objective value of a tensor strategy against g (no validation; internal).
double objective(const Game& g, const TensorStrategy& s) {
  const std::int64_t nx = g.num_inputs();
  const std::int64_t na = g.num_outputs();
  double value = 0.0;
  for (std::int64_t x = 0; x < nx; ++x) {
    if (g.q[x] == 0.0) continue;
    const std::vector<std::int64_t> xs = unflatten_tuple(x, g.inputs);
    for (std::int64_t a = 0; a < na; ++a) {
      if (g.predicate[a * nx + x] == 0.0) continue;
      const std::vector<std::int64_t> as = unflatten_tuple(a, g.outputs);
      CMatrix op = s.povms[0][static_cast<std::size_t>(xs[0])]
                            [static_cast<std::size_t>(as[0])];
      for (std::size_t i = 1; i < s.povms.size(); ++i) {
        op = kron(op, s.povms[i][static_cast<std::size_t>(xs[i])]
                              [static_cast<std::size_t>(as[i])]);
      }
      value += g.q[x] *
               (s.psi.eigen().adjoint() * op.eigen() * s.psi.eigen())(0, 0)
                   .real();
    }
  }
  return value;
}

// Projector onto the span of eigenvectors with non-negative eigenvalue.
Eigen::MatrixXcd nonneg_eigenprojector(const Eigen::MatrixXcd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
      0.5 * (h + h.adjoint()));
  Eigen::MatrixXcd proj = Eigen::MatrixXcd::Zero(h.rows(), h.cols());
  for (Eigen::Index t = 0; t < es.eigenvalues().size(); ++t) {
    if (es.eigenvalues()(t) >= 0.0) {
      proj += es.eigenvectors().col(t) * es.eigenvectors().col(t).adjoint();
    }
  }
  return proj;
}

// Haar-random projective POVM: partition the columns of a Haar unitary
// round-robin into `outcomes` rank sums. Falls back to a normalized Ginibre
// POVM when there are more outcomes than dimensions.
std::vector<CMatrix> random_povm(Rng& rng, std::int64_t dim,
                                 std::int64_t outcomes) {
  std::vector<Eigen::MatrixXcd> ops(
      static_cast<std::size_t>(outcomes),
      Eigen::MatrixXcd::Zero(dim, dim));
  if (outcomes <= dim) {
    const Eigen::MatrixXcd u = rng.haar_unitary(dim).eigen();
    for (std::int64_t c = 0; c < dim; ++c) {
      ops[static_cast<std::size_t>(c % outcomes)] +=
          u.col(c) * u.col(c).adjoint();
    }
  } else {
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(dim, dim);
    for (auto& op : ops) {
      const Eigen::MatrixXcd gmat = rng.ginibre(dim, dim).eigen();
      op = gmat * gmat.adjoint();
      sum += op;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sum);
    Eigen::VectorXd inv_root = es.eigenvalues().cwiseMax(1e-12).cwiseSqrt()
                                   .cwiseInverse();
    const Eigen::MatrixXcd s_inv = es.eigenvectors() *
                                   inv_root.asDiagonal() *
                                   es.eigenvectors().adjoint();
    for (auto& op : ops) op = s_inv * op * s_inv;
  }
  std::vector<CMatrix> povm;
  povm.reserve(ops.size());
  for (auto& op : ops) povm.push_back(CMatrix::from_eigen(op));
  return povm;
}

}  // namespace

std::pair<double, TensorStrategy> seesaw_quantum_value(
    const Game& g, const std::vector<std::int64_t>& dims,
    std::int64_t restarts, std::uint64_t rng_seed, const Tolerance& tol) {
  g.validate(tol);
  if (static_cast<std::int64_t>(dims.size()) != g.players) {
    throw ShapeMismatch("need one local dimension per player");
  }
  for (std::int64_t d : dims) {
    if (d <= 0) throw ShapeMismatch("local dimensions must be positive");
  }
  std::int64_t total_dim = 1;
  for (std::int64_t d : dims) total_dim *= d;
  const std::int64_t nx = g.num_inputs();
  const std::int64_t na = g.num_outputs();

  double best_value = -1.0;
  TensorStrategy best;

  for (std::int64_t restart = 0; restart < std::max<std::int64_t>(1, restarts);
       ++restart) {
    Rng rng(rng_seed, static_cast<std::uint64_t>(restart));
    TensorStrategy s;
    s.dims = dims;
    s.povms.resize(dims.size());
    for (std::size_t i = 0; i < dims.size(); ++i) {
      s.povms[i].resize(static_cast<std::size_t>(g.inputs[i]));
      for (std::int64_t x = 0; x < g.inputs[i]; ++x) {
        s.povms[i][static_cast<std::size_t>(x)] =
            random_povm(rng, dims[i], g.outputs[i]);
      }
    }
    s.psi = rng.unit_vector(total_dim);

    double value = objective(g, s);
    for (int sweep = 0; sweep < 500; ++sweep) {
      // State update: top eigenvector of the game operator.
      Eigen::MatrixXcd game_op =
          Eigen::MatrixXcd::Zero(total_dim, total_dim);
      for (std::int64_t x = 0; x < nx; ++x) {
        if (g.q[x] == 0.0) continue;
        const std::vector<std::int64_t> xs = unflatten_tuple(x, g.inputs);
        for (std::int64_t a = 0; a < na; ++a) {
          if (g.predicate[a * nx + x] == 0.0) continue;
          const std::vector<std::int64_t> as = unflatten_tuple(a, g.outputs);
          CMatrix op = s.povms[0][static_cast<std::size_t>(xs[0])]
                                [static_cast<std::size_t>(as[0])];
          for (std::size_t i = 1; i < s.povms.size(); ++i) {
            op = kron(op, s.povms[i][static_cast<std::size_t>(xs[i])]
                                  [static_cast<std::size_t>(as[i])]);
          }
          game_op += g.q[x] * op.eigen();
        }
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
          0.5 * (game_op + game_op.adjoint()));
      Eigen::VectorXcd top =
          es.eigenvectors().col(es.eigenvalues().size() - 1);
      s.psi = CMatrix::from_eigen(top);

      // POVM updates, one (player, input) at a time.
      for (std::size_t pi = 0; pi < s.povms.size(); ++pi) {
        for (std::int64_t x_i = 0; x_i < g.inputs[pi]; ++x_i) {
          // Effective operators H_a on player pi's space for this input.
          std::vector<Eigen::MatrixXcd> h(
              static_cast<std::size_t>(g.outputs[pi]),
              Eigen::MatrixXcd::Zero(dims[pi], dims[pi]));
          const Eigen::MatrixXcd psi_density =
              s.psi.eigen() * s.psi.eigen().adjoint();
          for (std::int64_t x = 0; x < nx; ++x) {
            if (g.q[x] == 0.0) continue;
            const std::vector<std::int64_t> xs = unflatten_tuple(x, g.inputs);
            if (xs[pi] != x_i) continue;
            for (std::int64_t a = 0; a < na; ++a) {
              if (g.predicate[a * nx + x] == 0.0) continue;
              const std::vector<std::int64_t> as =
                  unflatten_tuple(a, g.outputs);
              // Other players' operators, identity at slot pi.
              CMatrix frame = pi == 0
                                  ? CMatrix::identity(dims[0])
                                  : s.povms[0][static_cast<std::size_t>(xs[0])]
                                            [static_cast<std::size_t>(as[0])];
              for (std::size_t i = 1; i < s.povms.size(); ++i) {
                frame = kron(frame,
                             i == pi ? CMatrix::identity(dims[i])
                                     : s.povms[i][static_cast<std::size_t>(
                                           xs[i])][static_cast<std::size_t>(
                                           as[i])]);
              }
              const Eigen::MatrixXcd weighted =
                  psi_density * frame.eigen() * g.q[x];
              // tr((1 (x) M (x) 1) weighted) = tr(M Tr_other(weighted)).
              const CMatrix reduced = partial_trace(
                  CMatrix::from_eigen(weighted), dims,
                  {static_cast<std::int64_t>(pi)});
              h[static_cast<std::size_t>(as[pi])] +=
                  0.5 * (reduced.eigen() + reduced.eigen().adjoint());
            }
          }

          auto& povm = s.povms[pi][static_cast<std::size_t>(x_i)];
          std::vector<Eigen::MatrixXcd> candidate;
          candidate.reserve(povm.size());
          for (const CMatrix& m : povm) candidate.push_back(m.eigen());
          if (povm.size() == 2) {
            // Exact two-outcome update.
            const Eigen::MatrixXcd proj =
                nonneg_eigenprojector(h[1] - h[0]);
            candidate[1] = proj;
            candidate[0] =
                Eigen::MatrixXcd::Identity(dims[pi], dims[pi]) - proj;
          } else {
            // Pairwise sweeps restricted to each pair's joint support.
            Tolerance loose;
            loose.abs_eq = 1e-6;
            loose.psd_floor = 1e-6;
            for (std::size_t a1 = 0; a1 < candidate.size(); ++a1) {
              for (std::size_t a2 = a1 + 1; a2 < candidate.size(); ++a2) {
                const Eigen::MatrixXcd t_sum = candidate[a1] + candidate[a2];
                const Eigen::MatrixXcd root =
                    sqrt_psd(CMatrix::from_eigen(t_sum), loose).eigen();
                const Eigen::MatrixXcd proj = nonneg_eigenprojector(
                    root * (h[a2] - h[a1]) * root);
                candidate[a2] = root * proj * root;
                candidate[a1] = t_sum - candidate[a2];
              }
            }
          }
          // Objective-guarded acceptance keeps the sweep monotone.
          std::vector<CMatrix> saved = povm;
          for (std::size_t a = 0; a < povm.size(); ++a) {
            povm[a] = CMatrix::from_eigen(candidate[a]);
          }
          const double updated = objective(g, s);
          if (updated + 1e-14 < value) {
            povm = std::move(saved);
          }
        }
      }

      const double new_value = objective(g, s);
      const double gain = new_value - value;
      value = std::max(value, new_value);
      if (gain < 1e-10) break;
    }

    if (value > best_value) {
      best_value = value;
      best = s;
    }
  }
  return {best_value, best};
}

}  // namespace opalg
