#include "opalg/compiled.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "opalg/errors.hpp"

namespace opalg {

namespace {

constexpr std::int64_t kBranchCap = std::int64_t{1} << 16;

// Requires the map to carry exactly the labels "0".."n-1".
template <typename T>
void require_canonical_labels(const std::map<std::string, T>& m,
                              std::int64_t n, const std::string& what) {
  if (static_cast<std::int64_t>(m.size()) != n) {
    throw InvalidStrategy(what + " needs exactly " + std::to_string(n) +
                          " labels");
  }
  for (std::int64_t i = 0; i < n; ++i) {
    if (m.find(std::to_string(i)) == m.end()) {
      throw InvalidStrategy(what + " is missing label " + std::to_string(i));
    }
  }
}

}  // namespace

EncryptionScheme EncryptionScheme::identity() {
  EncryptionScheme e;
  e.kind = Kind::Identity;
  return e;
}

EncryptionScheme EncryptionScheme::xorpad() {
  EncryptionScheme e;
  e.kind = Kind::XorPad;
  return e;
}

std::int64_t EncryptionScheme::key_count(std::int64_t in_space,
                                         std::int64_t out_space) const {
  if (in_space <= 0 || out_space <= 0) {
    throw ValidationError("InvalidLabelSpace", "label spaces must be positive");
  }
  if (kind == Kind::Identity) return 1;
  return in_space * out_space;
}

std::int64_t EncryptionScheme::question_pad(std::int64_t key,
                                            std::int64_t in_space) const {
  if (in_space <= 0) {
    throw ValidationError("InvalidLabelSpace", "label spaces must be positive");
  }
  if (key < 0) {
    throw ValidationError("LabelOutOfRange", "round key out of range");
  }
  return key % in_space;
}

std::int64_t EncryptionScheme::answer_pad(std::int64_t key,
                                          std::int64_t in_space) const {
  if (in_space <= 0) {
    throw ValidationError("InvalidLabelSpace", "label spaces must be positive");
  }
  if (key < 0) {
    throw ValidationError("LabelOutOfRange", "round key out of range");
  }
  return key / in_space;
}

std::int64_t EncryptionScheme::enc(std::int64_t pad, std::int64_t plain,
                                   std::int64_t space) const {
  if (plain < 0 || plain >= space) {
    throw ValidationError("LabelOutOfRange", "plaintext label out of range");
  }
  if (pad < 0) {
    throw ValidationError("LabelOutOfRange", "pad out of range");
  }
  return (plain + pad % space) % space;
}

std::int64_t EncryptionScheme::dec(std::int64_t pad, std::int64_t cipher,
                                   std::int64_t space) const {
  if (cipher < 0 || cipher >= space) {
    throw ValidationError("LabelOutOfRange", "ciphertext label out of range");
  }
  if (pad < 0) {
    throw ValidationError("LabelOutOfRange", "pad out of range");
  }
  return ((cipher - pad % space) % space + space) % space;
}

void ProverProgram::validate(const Game& g, const Tolerance& tol) const {
  g.validate(tol);
  if (!initial.is_square() || initial.rows() < 1) {
    throw InvalidStrategy("initial state must be a square matrix");
  }
  if (!initial.is_psd(tol) ||
      std::abs(initial.trace().real() - 1.0) > tol.abs_eq ||
      std::abs(initial.trace().imag()) > tol.abs_eq) {
    throw InvalidStrategy("initial state must be a density matrix");
  }
  if (static_cast<std::int64_t>(rounds.size()) != g.players) {
    throw InvalidStrategy("prover needs one round per player");
  }
  std::int64_t dim = initial.rows();
  for (std::size_t i = 0; i < rounds.size(); ++i) {
    const std::string round_name = "round " + std::to_string(i + 1);
    require_canonical_labels(rounds[i], g.inputs[i],
                             round_name + " received-label table");
    std::int64_t out = -1;
    for (const auto& [label, inst] : rounds[i]) {
      require_canonical_labels(inst.arms(), g.outputs[i],
                               round_name + " instrument arms");
      if (inst.in_dim() != dim) {
        throw InvalidStrategy(round_name +
                              " instrument does not accept the carried state");
      }
      if (out == -1) {
        out = inst.out_dim();
      } else if (inst.out_dim() != out) {
        throw InvalidStrategy(round_name +
                              " instruments disagree on the output dimension");
      }
    }
    dim = out;
  }
}

std::vector<Transcript> run_protocol(const Game& g, const ProverProgram& p,
                                     const EncryptionScheme& e,
                                     const Tolerance& tol) {
  p.validate(g, tol);
  const std::int64_t k = g.players;
  const std::int64_t nx = g.num_inputs();

  // Key spaces for the encrypted rounds (all but the last).
  std::vector<std::int64_t> key_spaces;
  std::int64_t total_keys = 1;
  for (std::int64_t i = 0; i + 1 < k; ++i) {
    key_spaces.push_back(e.key_count(g.inputs[i], g.outputs[i]));
    total_keys *= key_spaces.back();
  }

  // Cap the full enumeration before doing any work.
  std::int64_t branches = nx;
  const auto scale = [&branches](std::int64_t f) {
    if (branches > kBranchCap) throw TooLarge("enumeration exceeds 2^16 branches");
    branches *= f;
  };
  scale(total_keys);
  for (std::int64_t i = 0; i < k; ++i) scale(g.outputs[i]);
  if (branches > kBranchCap) {
    throw TooLarge("enumeration needs " + std::to_string(branches) +
                   " branches, cap is " + std::to_string(kBranchCap));
  }

  std::vector<Transcript> ts;
  ts.reserve(static_cast<std::size_t>(branches));

  for (std::int64_t x = 0; x < nx; ++x) {
    const std::vector<std::int64_t> xs = unflatten_tuple(x, g.inputs);
    for (std::int64_t kt = 0; kt < total_keys; ++kt) {
      const std::vector<std::int64_t> keys =
          unflatten_tuple(kt, key_spaces.empty()
                                  ? std::vector<std::int64_t>{1}
                                  : key_spaces);
      std::vector<std::int64_t> sent(static_cast<std::size_t>(k), 0);
      std::vector<std::int64_t> answers(static_cast<std::size_t>(k), 0);

      // Walk every branch of the round-by-round instrument tree, carrying
      // the unnormalized state; its final trace is the branch probability.
      std::function<void(std::int64_t, const CMatrix&)> walk =
          [&](std::int64_t round, const CMatrix& state) {
            if (round == k) {
              const double prob = std::max(0.0, state.trace().real());
              Transcript t;
              t.inputs = xs;
              t.sent = sent;
              t.answers = answers;
              t.keys = key_spaces.empty() ? std::vector<std::int64_t>{}
                                          : keys;
              t.cond_weight = prob / static_cast<double>(total_keys);
              t.weight = g.q[static_cast<std::size_t>(x)] * t.cond_weight;
              ts.push_back(std::move(t));
              return;
            }
            const std::size_t r = static_cast<std::size_t>(round);
            const std::int64_t received =
                (round + 1 < k)
                    ? e.enc(e.question_pad(keys[r], g.inputs[r]), xs[r],
                            g.inputs[r])
                    : xs[r];
            sent[r] = received;
            const Instrument& inst =
                p.rounds[r].at(std::to_string(received));
            for (const auto& [label, arm] : inst.arms()) {
              answers[r] = std::stoll(label);
              walk(round + 1, arm.apply(state));
            }
          };
      walk(0, p.initial);
    }
  }
  return ts;
}

Correlation decrypted_correlation(const std::vector<Transcript>& ts,
                                  const EncryptionScheme& e, const Game& g) {
  const std::int64_t k = g.players;
  const std::int64_t nx = g.num_inputs();
  const std::int64_t na = g.num_outputs();

  std::vector<double> mass(static_cast<std::size_t>(na * nx), 0.0);
  std::vector<double> total(static_cast<std::size_t>(nx), 0.0);
  for (const Transcript& t : ts) {
    if (static_cast<std::int64_t>(t.inputs.size()) != k ||
        static_cast<std::int64_t>(t.answers.size()) != k ||
        static_cast<std::int64_t>(t.keys.size()) != std::max<std::int64_t>(
                                                        k - 1, 0)) {
      throw ValidationError("InvalidTranscript", "transcript does not match the game shape");
    }
    std::vector<std::int64_t> plain(static_cast<std::size_t>(k), 0);
    for (std::int64_t i = 0; i < k; ++i) {
      const std::size_t ii = static_cast<std::size_t>(i);
      plain[ii] = (i + 1 < k)
                      ? e.dec(e.answer_pad(t.keys[ii], g.inputs[i]),
                              t.answers[ii], g.outputs[i])
                      : t.answers[ii];
    }
    const std::int64_t x = flatten_tuple(t.inputs, g.inputs);
    const std::int64_t a = flatten_tuple(plain, g.outputs);
    mass[static_cast<std::size_t>(a * nx + x)] += t.cond_weight;
    total[static_cast<std::size_t>(x)] += t.cond_weight;
  }

  Correlation c;
  c.inputs = g.inputs;
  c.outputs = g.outputs;
  c.p.assign(static_cast<std::size_t>(na * nx), 0.0);
  for (std::int64_t x = 0; x < nx; ++x) {
    if (total[static_cast<std::size_t>(x)] <= 0.0) {
      throw ValidationError("InvalidTranscript", "transcripts do not cover every question tuple");
    }
    for (std::int64_t a = 0; a < na; ++a) {
      c.p[static_cast<std::size_t>(a * nx + x)] =
          mass[static_cast<std::size_t>(a * nx + x)] /
          total[static_cast<std::size_t>(x)];
    }
  }
  return c;
}

double compiled_score(const Game& g, const Correlation& c,
                      const Tolerance& tol) {
  return score(g, c, tol);
}

namespace {

// Worst change of the marginal over one block of players when player i's
// input flips, everything else held fixed. pick_block selects which answer
// digits survive the marginalization.
double directional_defect(const Correlation& c, std::size_t player,
                          bool keep_later) {
  const std::size_t k = c.inputs.size();
  const std::int64_t nx = c.num_inputs();
  const std::int64_t na = c.num_outputs();

  // Flat radix for the kept block of answer digits.
  std::int64_t kept = 1;
  for (std::size_t j = 0; j < k; ++j) {
    const bool keep = keep_later ? (j > player) : (j < player);
    if (keep) kept *= c.outputs[j];
  }
  if (kept == 1) return 0.0;  // nothing survives: marginal is identically 1

  double worst = 0.0;
  std::vector<double> m1(static_cast<std::size_t>(kept), 0.0);
  std::vector<double> m2(static_cast<std::size_t>(kept), 0.0);
  for (std::int64_t x = 0; x < nx; ++x) {
    std::vector<std::int64_t> xs = unflatten_tuple(x, c.inputs);
    for (std::int64_t alt = xs[player] + 1; alt < c.inputs[player]; ++alt) {
      std::vector<std::int64_t> xs2 = xs;
      xs2[player] = alt;
      const std::int64_t x2 = flatten_tuple(xs2, c.inputs);
      std::fill(m1.begin(), m1.end(), 0.0);
      std::fill(m2.begin(), m2.end(), 0.0);
      for (std::int64_t a = 0; a < na; ++a) {
        const std::vector<std::int64_t> as = unflatten_tuple(a, c.outputs);
        std::int64_t key = 0;
        for (std::size_t j = 0; j < k; ++j) {
          const bool keep = keep_later ? (j > player) : (j < player);
          if (keep) key = key * c.outputs[j] + as[j];
        }
        m1[static_cast<std::size_t>(key)] +=
            c.p[static_cast<std::size_t>(a * nx + x)];
        m2[static_cast<std::size_t>(key)] +=
            c.p[static_cast<std::size_t>(a * nx + x2)];
      }
      for (std::int64_t j = 0; j < kept; ++j) {
        worst = std::max(worst, std::abs(m1[static_cast<std::size_t>(j)] -
                                         m2[static_cast<std::size_t>(j)]));
      }
    }
  }
  return worst;
}

}  // namespace

CompiledNsReport eps_ns_audit(const Correlation& c, double eps) {
  CompiledNsReport r;
  r.ns = ns_check(c, eps);
  r.pass = r.ns.pass;
  const std::size_t k = c.inputs.size();
  for (std::size_t i = 0; i < k; ++i) {
    r.past_to_future.push_back(directional_defect(c, i, /*keep_later=*/true));
    r.future_to_past.push_back(directional_defect(c, i, /*keep_later=*/false));
  }
  for (std::size_t i = 0; i + 1 < k; ++i) {
    r.encrypted_defect = std::max(r.encrypted_defect, r.past_to_future[i]);
  }
  return r;
}

ProverProgram prover_from_sequential(const SequentialStrategy& s,
                                     const Tolerance& tol) {
  s.validate(tol);
  const std::int64_t d = s.dim;

  ProverProgram p;
  p.initial = CMatrix::identity(1);
  p.rounds.resize(s.instruments.size() + 2);

  // Round 1: prepare the assemblage member for the received label. As a CP
  // map M_1 -> M_d, the preparation of sigma is the map t -> t * sigma,
  // whose Choi matrix is sigma itself.
  std::int64_t xi = 0;
  for (const auto& [x, fam] : s.assemblage) {
    std::map<std::string, CpMap> arms;
    std::int64_t ai = 0;
    for (const auto& [a, sigma] : fam) {
      arms.emplace(std::to_string(ai), CpMap::from_choi(1, d, sigma, tol));
      ++ai;
    }
    p.rounds[0].emplace(std::to_string(xi), Instrument(std::move(arms), tol));
    ++xi;
  }

  // Middle rounds: the strategy's instruments with canonical labels.
  for (std::size_t i = 0; i < s.instruments.size(); ++i) {
    std::int64_t yi = 0;
    for (const auto& [y, inst] : s.instruments[i]) {
      std::map<std::string, CpMap> arms;
      std::int64_t bi = 0;
      for (const auto& [b, arm] : inst.arms()) {
        arms.emplace(std::to_string(bi), arm);
        ++bi;
      }
      p.rounds[i + 1].emplace(std::to_string(yi),
                              Instrument(std::move(arms), tol));
      ++yi;
    }
  }

  // Last round: measure the final POVM; each effect becomes the trace
  // functional m -> tr(effect * m), a CP map M_d -> M_1 with Choi equal to
  // the transposed effect.
  std::int64_t zi = 0;
  for (const auto& [z, povm] : s.final_povm) {
    std::map<std::string, CpMap> arms;
    std::int64_t ci = 0;
    for (const auto& [cl, effect] : povm) {
      arms.emplace(std::to_string(ci),
                   CpMap::from_choi(d, 1, effect.transpose(), tol));
      ++ci;
    }
    p.rounds.back().emplace(std::to_string(zi),
                            Instrument(std::move(arms), tol));
    ++zi;
  }
  return p;
}

}  // namespace opalg
