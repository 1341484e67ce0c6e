// Command line front door: loads JSON descriptions, dispatches to the
// library, and emits deterministic JSON reports. Identical invocations
// produce byte-identical output.
//
// Exit codes: 0 success, 2 malformed input (validation / parse / missing
// file), 3 numeric contract violation, 4 resource cap exceeded.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "opalg/compiled.hpp"
#include "opalg/cpmaps.hpp"
#include "opalg/dilation.hpp"
#include "opalg/errors.hpp"
#include "opalg/games.hpp"
#include "opalg/json_io.hpp"
#include "opalg/numerics.hpp"
#include "opalg/radon_nikodym.hpp"
#include "opalg/sequential.hpp"

namespace {

using nlohmann::json;
using namespace opalg;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ValidationError("FileError", "cannot read " + path);
  }
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw ValidationError("FileError", "cannot write " + path);
  }
  out << content;
  if (!out) {
    throw ValidationError("FileError", "cannot write " + path);
  }
}

// One scalar result line, formatted via JSON so the text round-trips the
// double exactly and identically on every run.
void print_line(const std::string& key, const json& value) {
  std::cout << key << " " << value.dump() << "\n";
}

// Emits the report: to --out (plus a pointer line on stdout) when given,
// otherwise in full on stdout.
void emit_report(const std::string& out_path, const std::string& report) {
  if (out_path.empty()) {
    std::cout << report << "\n";
  } else {
    write_file(out_path, report + "\n");
    std::cout << "report " << out_path << "\n";
  }
}

struct GlobalOpts {
  Tolerance tol;
  std::uint64_t seed = 0;
  std::string out;
  std::int64_t cap = 0;  // 0 = module defaults
};

int cmd_value(const GlobalOpts& opt, const std::string& game_path,
              const std::string& mode, const std::string& dims_text,
              std::int64_t restarts) {
  const Game g = game_from_json(read_file(game_path));
  json report;
  report["game"] = game_path;
  report["mode"] = mode;
  if (mode == "classical") {
    const std::int64_t cap =
        (opt.cap > 0) ? opt.cap : (std::int64_t{1} << 24);
    const auto [value, assignment] = classical_value(g, opt.tol, cap);
    report["value"] = value;
    report["assignment"] = assignment;
    print_line("value", json(value));
  } else {
    std::vector<std::int64_t> dims;
    if (dims_text.empty()) {
      dims.assign(static_cast<std::size_t>(g.players), 2);
    } else {
      std::stringstream ss(dims_text);
      std::string item;
      while (std::getline(ss, item, ',')) {
        try {
          dims.push_back(std::stoll(item));
        } catch (const std::exception&) {
          throw ValidationError("ParseError", "bad --dims entry: " + item);
        }
      }
    }
    const auto [value, strategy] =
        seesaw_quantum_value(g, dims, restarts, opt.seed, opt.tol);
    report["value"] = value;
    report["dims"] = dims;
    report["restarts"] = restarts;
    report["seed"] = opt.seed;
    report["witness"] = json::parse(tensor_strategy_to_json(strategy));
    print_line("value", json(value));
  }
  emit_report(opt.out, report.dump(2));
  return 0;
}

int cmd_dilate(const GlobalOpts& opt, const std::string& map_path) {
  const CpMap t = cpmap_from_json(read_file(map_path));
  const Dilation d = stinespring_minimal(t, opt.tol);
  const DilationReport r = verify_dilation(d, opt.tol);
  json report;
  report["dilation"] = json::parse(dilation_to_json(d));
  report["report"] = json::parse(dilation_report_to_json(r));
  print_line("dil_dim", json(d.dil_dim));
  print_line("reconstruction_residual", json(r.reconstruction_residual));
  emit_report(opt.out, report.dump(2));
  return 0;
}

int cmd_rn(const GlobalOpts& opt, const std::string& map_path,
           const std::string& dilation_path) {
  const CpMap s = cpmap_from_json(read_file(map_path));
  const Dilation dil = dilation_from_json(read_file(dilation_path), opt.tol);
  const RnDerivative der = rn_derivative(s, dil, opt.tol);

  // Residuals of the defining identities: S(E_ij) = V* D pi(E_ij) V and
  // [D, pi(E_ij)] = 0.
  double reconstruction = 0.0;
  double commutant = 0.0;
  for (std::int64_t i = 0; i < dil.algebra_dim; ++i) {
    for (std::int64_t j = 0; j < dil.algebra_dim; ++j) {
      const CMatrix& pij = dil.rep_unit(i, j);
      reconstruction = std::max(
          reconstruction,
          (dil.v.adjoint() * der.d * pij * dil.v - s.apply_unit(i, j))
              .max_abs());
      commutant =
          std::max(commutant, (der.d * pij - pij * der.d).max_abs());
    }
  }
  const EigResult eig = eig_hermitian(der.d, opt.tol);
  json report;
  report["derivative"] = json::parse(matrix_to_json(der.d));
  report["reconstruction_residual"] = reconstruction;
  report["commutant_residual"] = commutant;
  report["spectrum_min"] = eig.values.empty() ? 0.0 : eig.values.back();
  report["spectrum_max"] = eig.values.empty() ? 0.0 : eig.values.front();
  print_line("reconstruction_residual", json(reconstruction));
  emit_report(opt.out, report.dump(2));
  return 0;
}

int cmd_chain(const GlobalOpts& opt, const std::string& stages_path) {
  const std::vector<ChainStage> stages =
      chain_stages_from_json(read_file(stages_path));
  const CommutingRepresentation cr = chain_k(stages, opt.tol);
  const ChainReport r = verify_chain(cr, stages, opt.tol);
  json report;
  report["representation"] =
      json::parse(commuting_representation_to_json(cr));
  report["report"] = json::parse(chain_report_to_json(r));
  report["ok"] = r.ok(opt.tol);
  print_line("dim_k", json(cr.dim_k));
  print_line("cross_commutation", json(r.cross_commutation));
  emit_report(opt.out, report.dump(2));
  return 0;
}

int cmd_convert(const GlobalOpts& opt, const std::string& strategy_path) {
  const SequentialStrategy s =
      sequential_strategy_from_json(read_file(strategy_path), opt.tol);
  const ConversionResult r = to_commuting(s, opt.tol);
  print_line("dim", json(r.strategy.dim));
  print_line("eval_residual", json(r.eval_residual));
  emit_report(opt.out, conversion_result_to_json(r));
  return 0;
}

int cmd_simulate(const GlobalOpts& opt, const std::string& run_path,
                 const std::string& transcripts_path,
                 const std::string& correlation_path, double eps) {
  const json desc = [&] {
    try {
      return json::parse(read_file(run_path));
    } catch (const json::exception& e) {
      throw ParseError("run descriptor: " + std::string(e.what()));
    }
  }();
  if (!desc.is_object() || !desc.contains("game") ||
      !desc.contains("prover") || !desc.contains("scheme")) {
    throw ParseError("run descriptor needs game, prover, and scheme");
  }
  const auto text_field = [&](const char* key) {
    if (!desc[key].is_string()) {
      throw ParseError(std::string("run descriptor field ") + key +
                       " must be a string");
    }
    return desc[key].get<std::string>();
  };
  const auto resolve = [&](const std::string& p) {
    const std::filesystem::path q(p);
    if (q.is_absolute()) return q.string();
    return (std::filesystem::path(run_path).parent_path() / q).string();
  };
  const Game g = game_from_json(read_file(resolve(text_field("game"))));
  const ProverProgram prover =
      prover_from_json(read_file(resolve(text_field("prover"))), opt.tol);
  const std::string scheme_name = text_field("scheme");
  EncryptionScheme scheme;
  if (scheme_name == "identity") {
    scheme = EncryptionScheme::identity();
  } else if (scheme_name == "xorpad") {
    scheme = EncryptionScheme::xorpad();
  } else {
    throw ParseError("unknown scheme: " + scheme_name);
  }

  if (opt.cap > 0) {
    // Pre-check the enumeration size against the user cap (the library
    // enforces its own fixed cap regardless).
    double branches = static_cast<double>(g.num_inputs());
    for (std::int64_t i = 0; i + 1 < g.players; ++i) {
      branches *= static_cast<double>(
          scheme.key_count(g.inputs[i], g.outputs[i]));
    }
    for (std::int64_t i = 0; i < g.players; ++i) {
      branches *= static_cast<double>(g.outputs[i]);
    }
    if (branches > static_cast<double>(opt.cap)) {
      throw TooLarge("enumeration exceeds the --cap of " +
                     std::to_string(opt.cap) + " branches");
    }
  }

  const std::vector<Transcript> ts = run_protocol(g, prover, scheme, opt.tol);
  const Correlation c = decrypted_correlation(ts, scheme, g);
  const double value = compiled_score(g, c, opt.tol);
  const CompiledNsReport audit = eps_ns_audit(c, eps);

  if (!transcripts_path.empty()) {
    write_file(transcripts_path, transcripts_to_jsonl(ts));
  }
  if (!correlation_path.empty()) {
    write_file(correlation_path, correlation_to_json(c) + "\n");
  }
  json report;
  report["scheme"] = scheme_name;
  report["transcripts"] = ts.size();
  report["score"] = value;
  report["correlation"] = json::parse(correlation_to_json(c));
  report["audit"] = json::parse(compiled_ns_report_to_json(audit));
  print_line("score", json(value));
  print_line("encrypted_defect", json(audit.encrypted_defect));
  print_line("audit_pass", json(audit.pass));
  emit_report(opt.out, report.dump(2));
  return 0;
}

int cmd_audit(const GlobalOpts& opt, const std::string& correlation_path,
              double eps) {
  const Correlation c = correlation_from_json(read_file(correlation_path));
  const CompiledNsReport r = eps_ns_audit(c, eps);
  print_line("pass", json(r.pass));
  print_line("encrypted_defect", json(r.encrypted_defect));
  emit_report(opt.out, compiled_ns_report_to_json(r));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "operator-algebra toolkit: dilations, derivatives, chained "
      "representations, nonlocal games, and compiled-protocol simulation"};
  app.require_subcommand(1);
  // Let the shared flags (--tol-*, --seed, --out, --cap) appear after the
  // subcommand name as well.
  app.fallthrough();

  GlobalOpts opt;
  app.add_option("--tol-abs", opt.tol.abs_eq, "absolute equality tolerance");
  app.add_option("--tol-psd", opt.tol.psd_floor,
                 "how far below zero an eigenvalue may dip");
  app.add_option("--tol-rank", opt.tol.rank_cut, "relative rank cutoff");
  app.add_option("--seed", opt.seed, "random seed for seeded commands");
  app.add_option("--out", opt.out, "write the JSON report to this path");
  app.add_option("--cap", opt.cap,
                 "enumeration cap override (0 = module defaults)");

  // value
  std::string game_path, mode = "classical", dims_text;
  std::int64_t restarts = 20;
  CLI::App* value =
      app.add_subcommand("value", "classical or seesaw value of a game");
  value->add_option("game", game_path, "game JSON")->required();
  value->add_option("--mode", mode, "classical | seesaw")
      ->check(CLI::IsMember({"classical", "seesaw"}));
  value->add_option("--dims", dims_text,
                    "comma-separated local dimensions (seesaw)");
  value->add_option("--restarts", restarts, "seesaw restarts");

  // dilate
  std::string map_path;
  CLI::App* dilate =
      app.add_subcommand("dilate", "minimal dilation of a CP map");
  dilate->add_option("cpmap", map_path, "CP map JSON")->required();

  // rn
  std::string rn_map_path, rn_dilation_path;
  CLI::App* rn = app.add_subcommand(
      "rn", "derivative of a dominated CP map on a dilation");
  rn->add_option("cpmap", rn_map_path, "dominated CP map JSON")->required();
  rn->add_option("dilation", rn_dilation_path, "dilation JSON")->required();

  // chain
  std::string stages_path;
  CLI::App* chain = app.add_subcommand(
      "chain", "chain dominated families into one representation");
  chain->add_option("stages", stages_path, "chain stages JSON")->required();

  // convert
  std::string strategy_path;
  CLI::App* convert = app.add_subcommand(
      "convert", "sequential strategy to a commuting-operator strategy");
  convert->add_option("strategy", strategy_path, "sequential strategy JSON")
      ->required();

  // simulate
  std::string run_path, transcripts_path, correlation_out;
  double eps = 1e-9;
  CLI::App* simulate =
      app.add_subcommand("simulate", "run a compiled protocol");
  simulate->add_option("run", run_path, "run descriptor JSON")->required();
  simulate->add_option("--transcripts", transcripts_path,
                       "also write the transcripts as JSON lines");
  simulate->add_option("--correlation", correlation_out,
                       "also write the decrypted correlation JSON");
  simulate->add_option("--eps", eps, "no-signalling audit threshold");

  // audit
  std::string correlation_path;
  CLI::App* audit =
      app.add_subcommand("audit", "no-signalling audit of a correlation");
  audit->add_option("correlation", correlation_path, "correlation JSON")
      ->required();
  audit->add_option("--eps", eps, "no-signalling audit threshold");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    opt.tol.validate();
    if (value->parsed()) {
      return cmd_value(opt, game_path, mode, dims_text, restarts);
    }
    if (dilate->parsed()) return cmd_dilate(opt, map_path);
    if (rn->parsed()) return cmd_rn(opt, rn_map_path, rn_dilation_path);
    if (chain->parsed()) return cmd_chain(opt, stages_path);
    if (convert->parsed()) return cmd_convert(opt, strategy_path);
    if (simulate->parsed()) {
      return cmd_simulate(opt, run_path, transcripts_path, correlation_out,
                          eps);
    }
    if (audit->parsed()) return cmd_audit(opt, correlation_path, eps);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
