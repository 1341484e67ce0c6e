#pragma once

// JSON (de)serialization for every value the toolkit exchanges with disk.
// All functions speak std::string so the JSON backend stays an internal
// detail of the library. Schemas:
//
//   matrix      {"rows":n,"cols":m,"re":[...],"im":[...]}   (row-major)
//   cpmap       {"in_dim":n,"out_dim":m,"kraus":[matrix,...]}
//   instrument  {"arms":{label:cpmap,...}}
//   dilation    {"dil_dim":k,"rep":{"i,j":matrix,...},"v":matrix}
//               (the dilated map is reconstructed on load as a -> v* pi(a) v)
//   game        {"players":k,"inputs":[...],"outputs":[...],"q":[...],
//                "predicate":[...]}                          (row-major,
//               player 1 most significant, index = flat(a)*num_x + flat(x))
//   correlation {"inputs":[...],"outputs":[...],"p":[...]}
//   sequential  {"dim":d,"assemblage":{"a,x":matrix,...},
//                "instruments":[{y:{b:cpmap,...},...},...],
//                "final_povm":{z:{c:matrix,...},...}}
//   prover      {"initial":matrix,"rounds":[{recv:{ans:cpmap,...},...},...]}
//   transcripts one JSON object per line:
//               {"inputs":[...],"sent":[...],"answers":[...],"keys":[...],
//                "weight":w,"cond_weight":cw}
//
// Composite keys like "a,x" and "i,j" split at the first comma, so labels
// must not contain commas. Serialization is deterministic: object keys are
// emitted sorted and numbers in shortest round-trip form. Parsers throw
// ParseError on malformed input.

#include <string>
#include <vector>

#include "opalg/compiled.hpp"
#include "opalg/cpmaps.hpp"
#include "opalg/dilation.hpp"
#include "opalg/games.hpp"
#include "opalg/numerics.hpp"
#include "opalg/radon_nikodym.hpp"
#include "opalg/sequential.hpp"

namespace opalg {

std::string matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const std::string& text);

std::string cpmap_to_json(const CpMap& s);
CpMap cpmap_from_json(const std::string& text);

std::string instrument_to_json(const Instrument& inst);
Instrument instrument_from_json(const std::string& text, const Tolerance& tol);

std::string dilation_to_json(const Dilation& d);
Dilation dilation_from_json(const std::string& text, const Tolerance& tol);
std::string dilation_report_to_json(const DilationReport& r);

std::string rn_derivative_to_json(const RnDerivative& d);
RnDerivative rn_derivative_from_json(const std::string& text,
                                     const Tolerance& tol);

std::string chain_stages_to_json(const std::vector<ChainStage>& stages);
std::vector<ChainStage> chain_stages_from_json(const std::string& text);
std::string commuting_representation_to_json(
    const CommutingRepresentation& cr);
CommutingRepresentation commuting_representation_from_json(
    const std::string& text);
std::string chain_report_to_json(const ChainReport& r);

std::string game_to_json(const Game& g);
Game game_from_json(const std::string& text);
std::string correlation_to_json(const Correlation& c);
Correlation correlation_from_json(const std::string& text);
std::string tensor_strategy_to_json(const TensorStrategy& s);
TensorStrategy tensor_strategy_from_json(const std::string& text);
std::string commuting_strategy_to_json(const CommutingStrategy& s);
CommutingStrategy commuting_strategy_from_json(const std::string& text);
std::string ns_report_to_json(const NsReport& r);

std::string sequential_strategy_to_json(const SequentialStrategy& s);
SequentialStrategy sequential_strategy_from_json(const std::string& text,
                                                 const Tolerance& tol);
std::string ons_report_to_json(const OnsReport& r);
std::string conversion_result_to_json(const ConversionResult& r);

std::string prover_to_json(const ProverProgram& p);
ProverProgram prover_from_json(const std::string& text, const Tolerance& tol);
std::string transcripts_to_jsonl(const std::vector<Transcript>& ts);
std::vector<Transcript> transcripts_from_jsonl(const std::string& text);
std::string compiled_ns_report_to_json(const CompiledNsReport& r);

}  // namespace opalg
