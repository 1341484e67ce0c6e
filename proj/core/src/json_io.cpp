#include "opalg/json_io.hpp"

#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "opalg/errors.hpp"

namespace opalg {

namespace {

using nlohmann::json;

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ParseError(std::string("missing field \"") + key + "\"");
  }
  return j.at(key);
}

std::int64_t int_field(const json& j, const char* key) {
  const json& f = field(j, key);
  if (!f.is_number_integer()) {
    throw ParseError(std::string("field \"") + key + "\" must be an integer");
  }
  return f.get<std::int64_t>();
}

double double_field(const json& j, const char* key) {
  const json& f = field(j, key);
  if (!f.is_number()) {
    throw ParseError(std::string("field \"") + key + "\" must be a number");
  }
  return f.get<double>();
}

std::vector<double> double_array(const json& f, const char* key) {
  if (!f.is_array()) {
    throw ParseError(std::string("field \"") + key + "\" must be an array");
  }
  std::vector<double> out;
  out.reserve(f.size());
  for (const json& e : f) {
    if (!e.is_number()) {
      throw ParseError(std::string("field \"") + key +
                       "\" must hold numbers");
    }
    out.push_back(e.get<double>());
  }
  return out;
}

std::vector<std::int64_t> int_array(const json& f, const char* key) {
  if (!f.is_array()) {
    throw ParseError(std::string("field \"") + key + "\" must be an array");
  }
  std::vector<std::int64_t> out;
  out.reserve(f.size());
  for (const json& e : f) {
    if (!e.is_number_integer()) {
      throw ParseError(std::string("field \"") + key +
                       "\" must hold integers");
    }
    out.push_back(e.get<std::int64_t>());
  }
  return out;
}

// Splits a composite key like "a,x" at its first comma.
std::pair<std::string, std::string> split_key(const std::string& key) {
  const std::size_t pos = key.find(',');
  if (pos == std::string::npos) {
    throw ParseError("composite key \"" + key + "\" needs a comma");
  }
  return {key.substr(0, pos), key.substr(pos + 1)};
}

json matrix_to_j(const CMatrix& m) {
  json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  std::vector<double> re, im;
  re.reserve(static_cast<std::size_t>(m.rows() * m.cols()));
  im.reserve(static_cast<std::size_t>(m.rows() * m.cols()));
  for (std::int64_t i = 0; i < m.rows(); ++i) {
    for (std::int64_t c = 0; c < m.cols(); ++c) {
      re.push_back(m(i, c).real());
      im.push_back(m(i, c).imag());
    }
  }
  j["re"] = re;
  j["im"] = im;
  return j;
}

CMatrix j_to_matrix(const json& j) {
  const std::int64_t rows = int_field(j, "rows");
  const std::int64_t cols = int_field(j, "cols");
  if (rows < 0 || cols < 0) throw ParseError("matrix sizes must be >= 0");
  const std::vector<double> re = double_array(field(j, "re"), "re");
  const std::vector<double> im = double_array(field(j, "im"), "im");
  const std::size_t n = static_cast<std::size_t>(rows * cols);
  if (re.size() != n || im.size() != n) {
    throw ParseError("matrix entry arrays do not match rows*cols");
  }
  std::vector<Cplx> entries;
  entries.reserve(n);
  for (std::size_t i = 0; i < n; ++i) entries.emplace_back(re[i], im[i]);
  return CMatrix(rows, cols, entries);
}

json cpmap_to_j(const CpMap& s) {
  json j;
  j["in_dim"] = s.in_dim();
  j["out_dim"] = s.out_dim();
  json kraus = json::array();
  for (const CMatrix& k : s.kraus()) kraus.push_back(matrix_to_j(k));
  j["kraus"] = kraus;
  return j;
}

CpMap j_to_cpmap(const json& j) {
  const std::int64_t in = int_field(j, "in_dim");
  const std::int64_t out = int_field(j, "out_dim");
  const json& kr = field(j, "kraus");
  if (!kr.is_array()) throw ParseError("\"kraus\" must be an array");
  std::vector<CMatrix> kraus;
  kraus.reserve(kr.size());
  for (const json& k : kr) kraus.push_back(j_to_matrix(k));
  return CpMap(in, out, std::move(kraus));
}

json instrument_to_j(const Instrument& inst) {
  json arms = json::object();
  for (const auto& [label, arm] : inst.arms()) {
    arms[label] = cpmap_to_j(arm);
  }
  json j;
  j["arms"] = arms;
  return j;
}

Instrument j_to_instrument(const json& j, const Tolerance& tol) {
  const json& arms = field(j, "arms");
  if (!arms.is_object() || arms.empty()) {
    throw ParseError("\"arms\" must be a non-empty object");
  }
  std::map<std::string, CpMap> parsed;
  for (const auto& [label, arm] : arms.items()) {
    parsed.emplace(label, j_to_cpmap(arm));
  }
  return Instrument(std::move(parsed), tol);
}

json dilation_to_j(const Dilation& d) {
  json rep = json::object();
  for (std::int64_t i = 0; i < d.algebra_dim; ++i) {
    for (std::int64_t k = 0; k < d.algebra_dim; ++k) {
      rep[std::to_string(i) + "," + std::to_string(k)] =
          matrix_to_j(d.rep_unit(i, k));
    }
  }
  json j;
  j["dil_dim"] = d.dil_dim;
  j["rep"] = rep;
  j["v"] = matrix_to_j(d.v);
  return j;
}

Dilation j_to_dilation(const json& j, const Tolerance& tol) {
  Dilation d;
  d.dil_dim = int_field(j, "dil_dim");
  if (d.dil_dim <= 0) throw ParseError("\"dil_dim\" must be positive");
  const json& rep = field(j, "rep");
  if (!rep.is_object() || rep.empty()) {
    throw ParseError("\"rep\" must be a non-empty object");
  }
  // The algebra size follows from the number of matrix units.
  std::int64_t n = 0;
  while (n * n < static_cast<std::int64_t>(rep.size())) ++n;
  if (n * n != static_cast<std::int64_t>(rep.size())) {
    throw ParseError("\"rep\" must hold a full square grid of matrix units");
  }
  d.algebra_dim = n;
  d.rep.assign(static_cast<std::size_t>(n * n), CMatrix());
  for (const auto& [key, val] : rep.items()) {
    const auto [is, ks] = split_key(key);
    std::int64_t i = 0, k = 0;
    try {
      i = std::stoll(is);
      k = std::stoll(ks);
    } catch (const std::exception&) {
      throw ParseError("bad rep key \"" + key + "\"");
    }
    if (i < 0 || i >= n || k < 0 || k >= n) {
      throw ParseError("rep key \"" + key + "\" out of range");
    }
    CMatrix m = j_to_matrix(val);
    if (m.rows() != d.dil_dim || m.cols() != d.dil_dim) {
      throw ParseError("rep entry \"" + key + "\" has the wrong dimension");
    }
    d.rep[static_cast<std::size_t>(i * n + k)] = m;
  }
  d.v = j_to_matrix(field(j, "v"));
  if (d.v.rows() != d.dil_dim || d.v.cols() < 1) {
    throw ParseError("\"v\" must map the source space into the dilation");
  }
  // Reconstruct the dilated map as a -> v* pi(a) v.
  const std::int64_t m_dim = d.v.cols();
  Eigen::MatrixXcd choi =
      Eigen::MatrixXcd::Zero(n * m_dim, n * m_dim);
  for (std::int64_t i = 0; i < n; ++i) {
    for (std::int64_t k = 0; k < n; ++k) {
      choi.block(i * m_dim, k * m_dim, m_dim, m_dim) =
          d.v.eigen().adjoint() * d.rep_unit(i, k).eigen() * d.v.eigen();
    }
  }
  d.source = CpMap::from_choi(n, m_dim, CMatrix::from_eigen(choi), tol);
  return d;
}

json correlation_to_j(const Correlation& c) {
  json j;
  j["inputs"] = c.inputs;
  j["outputs"] = c.outputs;
  j["p"] = c.p;
  return j;
}

Correlation j_to_correlation(const json& j) {
  Correlation c;
  c.inputs = int_array(field(j, "inputs"), "inputs");
  c.outputs = int_array(field(j, "outputs"), "outputs");
  c.p = double_array(field(j, "p"), "p");
  return c;
}

json povms_to_j(const std::vector<std::vector<std::vector<CMatrix>>>& povms) {
  json players = json::array();
  for (const auto& per_input : povms) {
    json inputs = json::array();
    for (const auto& povm : per_input) {
      json effects = json::array();
      for (const CMatrix& m : povm) effects.push_back(matrix_to_j(m));
      inputs.push_back(effects);
    }
    players.push_back(inputs);
  }
  return players;
}

std::vector<std::vector<std::vector<CMatrix>>> j_to_povms(const json& j) {
  if (!j.is_array()) throw ParseError("\"povms\" must be an array");
  std::vector<std::vector<std::vector<CMatrix>>> povms;
  for (const json& per_input : j) {
    if (!per_input.is_array()) {
      throw ParseError("per-player POVM tables must be arrays");
    }
    std::vector<std::vector<CMatrix>> inputs;
    for (const json& povm : per_input) {
      if (!povm.is_array()) throw ParseError("POVMs must be arrays");
      std::vector<CMatrix> effects;
      for (const json& m : povm) effects.push_back(j_to_matrix(m));
      inputs.push_back(std::move(effects));
    }
    povms.push_back(std::move(inputs));
  }
  return povms;
}

json ns_report_to_j(const NsReport& r) {
  json j;
  j["defects"] = r.defects;
  j["eps"] = r.eps;
  j["pass"] = r.pass;
  return j;
}

json transcript_to_j(const Transcript& t) {
  json j;
  j["inputs"] = t.inputs;
  j["sent"] = t.sent;
  j["answers"] = t.answers;
  j["keys"] = t.keys;
  j["weight"] = t.weight;
  j["cond_weight"] = t.cond_weight;
  return j;
}

Transcript j_to_transcript(const json& j) {
  Transcript t;
  t.inputs = int_array(field(j, "inputs"), "inputs");
  t.sent = int_array(field(j, "sent"), "sent");
  t.answers = int_array(field(j, "answers"), "answers");
  t.keys = int_array(field(j, "keys"), "keys");
  t.weight = double_field(j, "weight");
  t.cond_weight = double_field(j, "cond_weight");
  return t;
}

std::string dump(const json& j) { return j.dump(2); }

}  // namespace

std::string matrix_to_json(const CMatrix& m) { return dump(matrix_to_j(m)); }

CMatrix matrix_from_json(const std::string& text) {
  return j_to_matrix(parse_text(text));
}

std::string cpmap_to_json(const CpMap& s) { return dump(cpmap_to_j(s)); }

CpMap cpmap_from_json(const std::string& text) {
  return j_to_cpmap(parse_text(text));
}

std::string instrument_to_json(const Instrument& inst) {
  return dump(instrument_to_j(inst));
}

Instrument instrument_from_json(const std::string& text,
                                const Tolerance& tol) {
  return j_to_instrument(parse_text(text), tol);
}

std::string dilation_to_json(const Dilation& d) {
  return dump(dilation_to_j(d));
}

Dilation dilation_from_json(const std::string& text, const Tolerance& tol) {
  return j_to_dilation(parse_text(text), tol);
}

std::string dilation_report_to_json(const DilationReport& r) {
  json j;
  j["product_residual"] = r.product_residual;
  j["star_residual"] = r.star_residual;
  j["reconstruction_residual"] = r.reconstruction_residual;
  j["norm_residual"] = r.norm_residual;
  j["minimality_defect"] = r.minimality_defect;
  return dump(j);
}

std::string rn_derivative_to_json(const RnDerivative& d) {
  json j;
  j["d"] = matrix_to_j(d.d);
  j["dilation"] = dilation_to_j(d.dilation);
  return dump(j);
}

RnDerivative rn_derivative_from_json(const std::string& text,
                                     const Tolerance& tol) {
  const json j = parse_text(text);
  RnDerivative d;
  d.d = j_to_matrix(field(j, "d"));
  d.dilation = j_to_dilation(field(j, "dilation"), tol);
  return d;
}

std::string chain_stages_to_json(const std::vector<ChainStage>& stages) {
  json arr = json::array();
  for (const ChainStage& st : stages) {
    json fams = json::object();
    for (const auto& [x, fam] : st.families) {
      json inner = json::object();
      for (const auto& [a, s] : fam) inner[a] = cpmap_to_j(s);
      fams[x] = inner;
    }
    json j;
    j["families"] = fams;
    j["dominant"] = cpmap_to_j(st.dominant);
    arr.push_back(j);
  }
  return dump(arr);
}

std::vector<ChainStage> chain_stages_from_json(const std::string& text) {
  const json arr = parse_text(text);
  if (!arr.is_array() || arr.empty()) {
    throw ParseError("chain stages must be a non-empty array");
  }
  std::vector<ChainStage> stages;
  for (const json& j : arr) {
    ChainStage st;
    const json& fams = field(j, "families");
    if (!fams.is_object() || fams.empty()) {
      throw ParseError("\"families\" must be a non-empty object");
    }
    for (const auto& [x, fam] : fams.items()) {
      if (!fam.is_object() || fam.empty()) {
        throw ParseError("family \"" + x + "\" must be a non-empty object");
      }
      for (const auto& [a, s] : fam.items()) {
        st.families[x].emplace(a, j_to_cpmap(s));
      }
    }
    st.dominant = j_to_cpmap(field(j, "dominant"));
    stages.push_back(std::move(st));
  }
  return stages;
}

std::string commuting_representation_to_json(
    const CommutingRepresentation& cr) {
  json rep = json::object();
  for (std::int64_t i = 0; i < cr.algebra_dim; ++i) {
    for (std::int64_t k = 0; k < cr.algebra_dim; ++k) {
      rep[std::to_string(i) + "," + std::to_string(k)] =
          matrix_to_j(cr.rep_unit(i, k));
    }
  }
  json fams = json::array();
  for (const auto& stage : cr.families) {
    json per_input = json::object();
    for (const auto& [x, fam] : stage) {
      json inner = json::object();
      for (const auto& [a, m] : fam) inner[a] = matrix_to_j(m);
      per_input[x] = inner;
    }
    fams.push_back(per_input);
  }
  json j;
  j["dim_k"] = cr.dim_k;
  j["algebra_dim"] = cr.algebra_dim;
  j["rep"] = rep;
  j["v"] = matrix_to_j(cr.v);
  j["families"] = fams;
  return dump(j);
}

CommutingRepresentation commuting_representation_from_json(
    const std::string& text) {
  const json j = parse_text(text);
  CommutingRepresentation cr;
  cr.dim_k = int_field(j, "dim_k");
  cr.algebra_dim = int_field(j, "algebra_dim");
  if (cr.dim_k <= 0 || cr.algebra_dim <= 0) {
    throw ParseError("\"dim_k\" and \"algebra_dim\" must be positive");
  }
  const json& rep = field(j, "rep");
  const std::int64_t n = cr.algebra_dim;
  if (!rep.is_object() ||
      static_cast<std::int64_t>(rep.size()) != n * n) {
    throw ParseError("\"rep\" must hold algebra_dim^2 matrix units");
  }
  cr.rep.assign(static_cast<std::size_t>(n * n), CMatrix());
  for (const auto& [key, val] : rep.items()) {
    const auto [is, ks] = split_key(key);
    std::int64_t i = 0, k = 0;
    try {
      i = std::stoll(is);
      k = std::stoll(ks);
    } catch (const std::exception&) {
      throw ParseError("bad rep key \"" + key + "\"");
    }
    if (i < 0 || i >= n || k < 0 || k >= n) {
      throw ParseError("rep key \"" + key + "\" out of range");
    }
    cr.rep[static_cast<std::size_t>(i * n + k)] = j_to_matrix(val);
  }
  cr.v = j_to_matrix(field(j, "v"));
  const json& fams = field(j, "families");
  if (!fams.is_array()) throw ParseError("\"families\" must be an array");
  for (const json& stage : fams) {
    if (!stage.is_object()) {
      throw ParseError("each stage family must be an object");
    }
    std::map<std::string, std::map<std::string, CMatrix>> per_input;
    for (const auto& [x, fam] : stage.items()) {
      if (!fam.is_object()) {
        throw ParseError("family \"" + x + "\" must be an object");
      }
      for (const auto& [a, m] : fam.items()) {
        per_input[x].emplace(a, j_to_matrix(m));
      }
    }
    cr.families.push_back(std::move(per_input));
  }
  return cr;
}

std::string chain_report_to_json(const ChainReport& r) {
  json j;
  j["family_min_eig"] = r.family_min_eig;
  j["closure_residual"] = r.closure_residual;
  j["cross_commutation"] = r.cross_commutation;
  j["rep_commutation"] = r.rep_commutation;
  j["reconstruction_residual"] = r.reconstruction_residual;
  return dump(j);
}

std::string game_to_json(const Game& g) {
  json j;
  j["players"] = g.players;
  j["inputs"] = g.inputs;
  j["outputs"] = g.outputs;
  j["q"] = g.q;
  j["predicate"] = g.predicate;
  return dump(j);
}

Game game_from_json(const std::string& text) {
  const json j = parse_text(text);
  Game g;
  g.players = int_field(j, "players");
  g.inputs = int_array(field(j, "inputs"), "inputs");
  g.outputs = int_array(field(j, "outputs"), "outputs");
  g.q = double_array(field(j, "q"), "q");
  g.predicate = double_array(field(j, "predicate"), "predicate");
  return g;
}

std::string correlation_to_json(const Correlation& c) {
  return dump(correlation_to_j(c));
}

Correlation correlation_from_json(const std::string& text) {
  return j_to_correlation(parse_text(text));
}

std::string tensor_strategy_to_json(const TensorStrategy& s) {
  json j;
  j["dims"] = s.dims;
  j["povms"] = povms_to_j(s.povms);
  j["psi"] = matrix_to_j(s.psi);
  return dump(j);
}

TensorStrategy tensor_strategy_from_json(const std::string& text) {
  const json j = parse_text(text);
  TensorStrategy s;
  s.dims = int_array(field(j, "dims"), "dims");
  s.povms = j_to_povms(field(j, "povms"));
  s.psi = j_to_matrix(field(j, "psi"));
  return s;
}

std::string commuting_strategy_to_json(const CommutingStrategy& s) {
  json j;
  j["dim"] = s.dim;
  j["povms"] = povms_to_j(s.povms);
  j["psi"] = matrix_to_j(s.psi);
  return dump(j);
}

CommutingStrategy commuting_strategy_from_json(const std::string& text) {
  const json j = parse_text(text);
  CommutingStrategy s;
  s.dim = int_field(j, "dim");
  s.povms = j_to_povms(field(j, "povms"));
  s.psi = j_to_matrix(field(j, "psi"));
  return s;
}

std::string ns_report_to_json(const NsReport& r) {
  return dump(ns_report_to_j(r));
}

std::string sequential_strategy_to_json(const SequentialStrategy& s) {
  json assemblage = json::object();
  for (const auto& [x, fam] : s.assemblage) {
    for (const auto& [a, sigma] : fam) {
      assemblage[a + "," + x] = matrix_to_j(sigma);
    }
  }
  json instruments = json::array();
  for (const auto& per_input : s.instruments) {
    json round = json::object();
    for (const auto& [y, inst] : per_input) {
      json arms = json::object();
      for (const auto& [b, arm] : inst.arms()) arms[b] = cpmap_to_j(arm);
      round[y] = arms;
    }
    instruments.push_back(round);
  }
  json final_povm = json::object();
  for (const auto& [z, povm] : s.final_povm) {
    json effects = json::object();
    for (const auto& [c, m] : povm) effects[c] = matrix_to_j(m);
    final_povm[z] = effects;
  }
  json j;
  j["dim"] = s.dim;
  j["assemblage"] = assemblage;
  j["instruments"] = instruments;
  j["final_povm"] = final_povm;
  return dump(j);
}

SequentialStrategy sequential_strategy_from_json(const std::string& text,
                                                 const Tolerance& tol) {
  const json j = parse_text(text);
  SequentialStrategy s;
  s.dim = int_field(j, "dim");
  const json& assemblage = field(j, "assemblage");
  if (!assemblage.is_object() || assemblage.empty()) {
    throw ParseError("\"assemblage\" must be a non-empty object");
  }
  for (const auto& [key, val] : assemblage.items()) {
    const auto [a, x] = split_key(key);
    s.assemblage[x].emplace(a, j_to_matrix(val));
  }
  const json& instruments = field(j, "instruments");
  if (!instruments.is_array()) {
    throw ParseError("\"instruments\" must be an array");
  }
  for (const json& round : instruments) {
    if (!round.is_object() || round.empty()) {
      throw ParseError("each middle round must be a non-empty object");
    }
    std::map<std::string, Instrument> per_input;
    for (const auto& [y, arms] : round.items()) {
      if (!arms.is_object() || arms.empty()) {
        throw ParseError("instrument \"" + y +
                         "\" must be a non-empty object");
      }
      std::map<std::string, CpMap> parsed;
      for (const auto& [b, arm] : arms.items()) {
        parsed.emplace(b, j_to_cpmap(arm));
      }
      per_input.emplace(y, Instrument(std::move(parsed), tol));
    }
    s.instruments.push_back(std::move(per_input));
  }
  const json& final_povm = field(j, "final_povm");
  if (!final_povm.is_object() || final_povm.empty()) {
    throw ParseError("\"final_povm\" must be a non-empty object");
  }
  for (const auto& [z, povm] : final_povm.items()) {
    if (!povm.is_object() || povm.empty()) {
      throw ParseError("final POVM \"" + z + "\" must be a non-empty object");
    }
    for (const auto& [c, m] : povm.items()) {
      s.final_povm[z].emplace(c, j_to_matrix(m));
    }
  }
  return s;
}

std::string ons_report_to_json(const OnsReport& r) {
  json j;
  j["state_defect"] = r.state_defect;
  j["instrument_defects"] = r.instrument_defects;
  j["pass_threshold"] = r.pass_threshold;
  j["pass"] = r.pass();
  return dump(j);
}

std::string conversion_result_to_json(const ConversionResult& r) {
  json strategy;
  strategy["dim"] = r.strategy.dim;
  strategy["povms"] = povms_to_j(r.strategy.povms);
  strategy["psi"] = matrix_to_j(r.strategy.psi);
  json chain;
  chain["family_min_eig"] = r.chain.family_min_eig;
  chain["closure_residual"] = r.chain.closure_residual;
  chain["cross_commutation"] = r.chain.cross_commutation;
  chain["rep_commutation"] = r.chain.rep_commutation;
  chain["reconstruction_residual"] = r.chain.reconstruction_residual;
  json j;
  j["strategy"] = strategy;
  j["chain"] = chain;
  j["eval_residual"] = r.eval_residual;
  return dump(j);
}

std::string prover_to_json(const ProverProgram& p) {
  json rounds = json::array();
  for (const auto& per_label : p.rounds) {
    json round = json::object();
    for (const auto& [label, inst] : per_label) {
      json arms = json::object();
      for (const auto& [b, arm] : inst.arms()) arms[b] = cpmap_to_j(arm);
      round[label] = arms;
    }
    rounds.push_back(round);
  }
  json j;
  j["initial"] = matrix_to_j(p.initial);
  j["rounds"] = rounds;
  return dump(j);
}

ProverProgram prover_from_json(const std::string& text, const Tolerance& tol) {
  const json j = parse_text(text);
  ProverProgram p;
  p.initial = j_to_matrix(field(j, "initial"));
  const json& rounds = field(j, "rounds");
  if (!rounds.is_array() || rounds.empty()) {
    throw ParseError("\"rounds\" must be a non-empty array");
  }
  for (const json& round : rounds) {
    if (!round.is_object() || round.empty()) {
      throw ParseError("each round must be a non-empty object");
    }
    std::map<std::string, Instrument> per_label;
    for (const auto& [label, arms] : round.items()) {
      if (!arms.is_object() || arms.empty()) {
        throw ParseError("round entry \"" + label +
                         "\" must be a non-empty object");
      }
      std::map<std::string, CpMap> parsed;
      for (const auto& [b, arm] : arms.items()) {
        parsed.emplace(b, j_to_cpmap(arm));
      }
      per_label.emplace(label, Instrument(std::move(parsed), tol));
    }
    p.rounds.push_back(std::move(per_label));
  }
  return p;
}

std::string transcripts_to_jsonl(const std::vector<Transcript>& ts) {
  std::ostringstream out;
  for (const Transcript& t : ts) {
    out << transcript_to_j(t).dump() << "\n";
  }
  return out.str();
}

std::vector<Transcript> transcripts_from_jsonl(const std::string& text) {
  std::vector<Transcript> ts;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ts.push_back(j_to_transcript(parse_text(line)));
  }
  return ts;
}

std::string compiled_ns_report_to_json(const CompiledNsReport& r) {
  json j;
  j["ns"] = ns_report_to_j(r.ns);
  j["past_to_future"] = r.past_to_future;
  j["future_to_past"] = r.future_to_past;
  j["encrypted_defect"] = r.encrypted_defect;
  j["pass"] = r.pass;
  return dump(j);
}

}  // namespace opalg
