// Writes the bundled reference data (games, strategies, provers, run
// descriptors) as deterministic JSON under a target directory. Run once from
// the repository root; the output is checked in.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "opalg/catalog.hpp"
#include "opalg/compiled.hpp"
#include "opalg/cpmaps.hpp"
#include "opalg/dilation.hpp"
#include "opalg/json_io.hpp"
#include "opalg/numerics.hpp"
#include "opalg/radon_nikodym.hpp"

namespace {

using nlohmann::json;

void write(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content << "\n";
  if (!out) {
    std::cerr << "cannot write " << path << "\n";
    std::exit(1);
  }
  std::cout << path.string() << "\n";
}

std::string run_descriptor(const std::string& game, const std::string& prover,
                           const std::string& scheme) {
  json j;
  j["game"] = game;
  j["prover"] = prover;
  j["scheme"] = scheme;
  return j.dump(2);
}

}  // namespace

int main(int argc, char** argv) {
  const std::filesystem::path root = (argc > 1) ? argv[1] : "data";
  const opalg::Tolerance tol;

  const opalg::Game chsh = opalg::chsh_game();
  const opalg::Game mermin = opalg::mermin_game();
  write(root / "games/chsh.json", opalg::game_to_json(chsh));
  write(root / "games/mermin3.json", opalg::game_to_json(mermin));

  write(root / "strategies/chsh_steering.json",
        opalg::sequential_strategy_to_json(opalg::chsh_steering_strategy()));
  write(root / "strategies/mermin_ghz.json",
        opalg::sequential_strategy_to_json(opalg::mermin_ghz_strategy()));
  write(root / "strategies/uniform_3p.json",
        opalg::sequential_strategy_to_json(opalg::uniform_3p_strategy()));
  write(
      root / "strategies/signalling_counterexample.json",
      opalg::sequential_strategy_to_json(opalg::signalling_strategy()));

  write(root / "provers/chsh_honest.json",
        opalg::prover_to_json(opalg::prover_from_sequential(
            opalg::chsh_steering_strategy(), tol)));
  write(root / "provers/mermin_honest.json",
        opalg::prover_to_json(opalg::prover_from_sequential(
            opalg::mermin_ghz_strategy(), tol)));
  write(root / "provers/echo.json",
        opalg::prover_to_json(opalg::echo_prover(chsh)));
  write(root / "provers/copying.json",
        opalg::prover_to_json(opalg::copying_prover(chsh)));

  write(root / "runs/chsh_identity.json",
        run_descriptor("../games/chsh.json", "../provers/chsh_honest.json",
                       "identity"));
  write(root / "runs/mermin_identity.json",
        run_descriptor("../games/mermin3.json",
                       "../provers/mermin_honest.json", "identity"));
  write(root / "runs/chsh_xorpad_echo.json",
        run_descriptor("../games/chsh.json", "../provers/echo.json",
                       "xorpad"));
  write(root / "runs/chsh_identity_copying.json",
        run_descriptor("../games/chsh.json", "../provers/copying.json",
                       "identity"));

  // CP maps for the dilate / rn commands: the qubit depolarizing channel
  // a -> tr(a) 1/2, the identity channel, and half the Z-dephasing channel
  // (dominated by depolarizing; the identity is not).
  using opalg::CMatrix;
  using opalg::Cplx;
  const double inv = 1.0 / std::sqrt(2.0);
  std::vector<CMatrix> depol_kraus;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      CMatrix k = CMatrix::zero(2, 2);
      k.at(i, j) = Cplx(inv, 0.0);
      depol_kraus.push_back(k);
    }
  }
  const opalg::CpMap depolarizing(2, 2, depol_kraus);
  CMatrix p0 = CMatrix::zero(2, 2);
  p0.at(0, 0) = Cplx(1.0, 0.0);
  CMatrix p1 = CMatrix::zero(2, 2);
  p1.at(1, 1) = Cplx(1.0, 0.0);
  const opalg::CpMap half_dephasing(2, 2, {inv * p0, inv * p1});
  write(root / "maps/depolarizing.json", opalg::cpmap_to_json(depolarizing));
  write(root / "maps/half_dephasing.json",
        opalg::cpmap_to_json(half_dephasing));
  write(root / "maps/identity2.json",
        opalg::cpmap_to_json(opalg::CpMap(2, 2, {CMatrix::identity(2)})));
  write(root / "dilations/depolarizing.json",
        opalg::dilation_to_json(
            opalg::stinespring_minimal(depolarizing, tol)));

  // A two-stage chain on one qubit: measurement effects as functionals
  // dominated by the trace, preceded by the Z-projection arms dominated by
  // the Z-dephasing channel.
  std::vector<opalg::ChainStage> stages(2);
  stages[0].dominant =
      opalg::CpMap::from_choi(2, 1, CMatrix::identity(2), tol);
  stages[0].families["0"] = {
      {"0", opalg::CpMap::from_choi(2, 1, p0, tol)},
      {"1", opalg::CpMap::from_choi(2, 1, p1, tol)}};
  stages[1].dominant = opalg::CpMap(2, 2, {p0, p1});
  stages[1].families["0"] = {{"0", opalg::CpMap(2, 2, {p0})},
                             {"1", opalg::CpMap(2, 2, {p1})}};
  write(root / "chains/qubit_pair.json", opalg::chain_stages_to_json(stages));
  return 0;
}
