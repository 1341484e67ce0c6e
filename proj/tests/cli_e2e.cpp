// End-to-end tests of the command line tool: spawns the installed binary on
// the bundled data files and checks exit codes, result lines, and that
// report files are byte-identical across reruns. Paths are injected by the
// build (OPALG_CLI_PATH, OPALG_DATA_DIR).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#ifndef _WIN32
#include <sys/wait.h>
#endif

#include "doctest.h"

#ifndef OPALG_CLI_PATH
#error "OPALG_CLI_PATH must be defined by the build"
#endif
#ifndef OPALG_DATA_DIR
#error "OPALG_DATA_DIR must be defined by the build"
#endif

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int exit_code = -1;
  std::string out;
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path scratch_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "opalg_cli_e2e";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

// Runs the CLI with the given arguments; stdout and stderr are captured.
RunResult run(const std::string& args) {
  const fs::path out_file = scratch_dir() / "stdout.txt";
  const std::string cmd = std::string(OPALG_CLI_PATH) + " " + args + " > " +
                          out_file.string() + " 2>&1";
  const int raw = std::system(cmd.c_str());
  RunResult r;
#ifdef _WIN32
  r.exit_code = raw;
#else
  r.exit_code = (raw >= 0 && WIFEXITED(raw)) ? WEXITSTATUS(raw) : -1;
#endif
  r.out = read_file(out_file);
  return r;
}

std::string data(const std::string& rel) {
  return (fs::path(OPALG_DATA_DIR) / rel).string();
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

// Extracts the value after `key ` on the line starting with the key.
double value_after(const std::string& out, const std::string& key) {
  std::istringstream lines(out);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.rfind(key + " ", 0) == 0) {
      return std::stod(line.substr(key.size() + 1));
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("classical values of the bundled games") {
  const RunResult chsh =
      run("value " + data("games/chsh.json") + " --mode classical");
  CHECK(chsh.exit_code == 0);
  CHECK(contains(chsh.out, "value 0.75"));

  const RunResult mermin =
      run("value " + data("games/mermin3.json") + " --mode classical");
  CHECK(mermin.exit_code == 0);
  CHECK(contains(mermin.out, "value 0.75"));
}

TEST_CASE("seesaw lower bound lands on the Tsirelson value") {
  const RunResult r = run("value " + data("games/chsh.json") +
                          " --mode seesaw --seed 7 --restarts 20");
  CHECK(r.exit_code == 0);
  const double v = value_after(r.out, "value");
  CHECK(v >= 0.8535 - 1e-12);
  CHECK(v <= 0.8536);
}

TEST_CASE("classical enumeration respects --cap") {
  const RunResult r = run("value " + data("games/chsh.json") +
                          " --mode classical --cap 3");
  CHECK(r.exit_code == 4);
}

TEST_CASE("dilate reports the frozen dilation dimension") {
  const RunResult r = run("dilate " + data("maps/depolarizing.json"));
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "dil_dim 8"));
}

TEST_CASE("derivative of a dominated map succeeds; undominated input exits 3") {
  const RunResult ok = run("rn " + data("maps/half_dephasing.json") + " " +
                           data("dilations/depolarizing.json"));
  CHECK(ok.exit_code == 0);
  CHECK(value_after(ok.out, "reconstruction_residual") <= 1e-10);

  const RunResult bad = run("rn " + data("maps/identity2.json") + " " +
                            data("dilations/depolarizing.json"));
  CHECK(bad.exit_code == 3);
  CHECK(contains(bad.out, "NotDominated"));
}

TEST_CASE("chain builds the frozen commuting representation") {
  const RunResult r = run("chain " + data("chains/qubit_pair.json"));
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "dim_k 8"));
  CHECK(value_after(r.out, "cross_commutation") <= 1e-12);
}

TEST_CASE("convert succeeds on balanced strategies, exits 3 on signalling") {
  const RunResult steer =
      run("convert " + data("strategies/chsh_steering.json"));
  CHECK(steer.exit_code == 0);
  CHECK(contains(steer.out, "dim 4"));
  CHECK(value_after(steer.out, "eval_residual") <= 1e-10);

  const RunResult sig =
      run("convert " + data("strategies/signalling_counterexample.json"));
  CHECK(sig.exit_code == 3);
  CHECK(contains(sig.out, "NotOns"));
}

TEST_CASE("simulate: honest run, hidden copying prover, flagged in the clear") {
  const RunResult honest = run("simulate " + data("runs/chsh_identity.json"));
  CHECK(honest.exit_code == 0);
  CHECK(std::abs(value_after(honest.out, "score") - 0.8535533905932738) <=
        1e-6);
  CHECK(contains(honest.out, "audit_pass true"));

  const RunResult echo = run("simulate " + data("runs/chsh_xorpad_echo.json"));
  CHECK(echo.exit_code == 0);
  CHECK(std::abs(value_after(echo.out, "score") - 0.5) <= 1e-12);
  CHECK(value_after(echo.out, "encrypted_defect") <= 1e-14);

  const RunResult copying =
      run("simulate " + data("runs/chsh_identity_copying.json"));
  CHECK(copying.exit_code == 0);
  CHECK(value_after(copying.out, "encrypted_defect") == 1.0);
  CHECK(contains(copying.out, "audit_pass false"));
}

TEST_CASE("simulate writes transcripts and correlations on request") {
  const fs::path transcripts = scratch_dir() / "echo_transcripts.jsonl";
  const fs::path corr = scratch_dir() / "echo_correlation.json";
  const RunResult r = run("simulate " + data("runs/chsh_xorpad_echo.json") +
                          " --transcripts " + transcripts.string() +
                          " --correlation " + corr.string());
  CHECK(r.exit_code == 0);
  const std::string lines = read_file(transcripts);
  CHECK(std::count(lines.begin(), lines.end(), '\n') == 64);

  // The exported correlation audits clean through the audit command.
  const RunResult audit = run("audit " + corr.string());
  CHECK(audit.exit_code == 0);
  CHECK(contains(audit.out, "pass true"));
}

TEST_CASE("reports are byte-identical across reruns") {
  const fs::path out1 = scratch_dir() / "report1.json";
  const fs::path out2 = scratch_dir() / "report2.json";
  const RunResult r1 = run("convert " + data("strategies/chsh_steering.json") +
                           " --out " + out1.string());
  const RunResult r2 = run("convert " + data("strategies/chsh_steering.json") +
                           " --out " + out2.string());
  CHECK(r1.exit_code == 0);
  CHECK(r2.exit_code == 0);
  const std::string b1 = read_file(out1);
  CHECK(!b1.empty());
  CHECK(b1 == read_file(out2));
}

TEST_CASE("usage and validation errors map to exit code 2") {
  CHECK(run("value " + scratch_dir().string() + "/missing.json").exit_code ==
        2);
  CHECK(run("nonsense-subcommand").exit_code == 2);
  CHECK(run("value").exit_code == 2);  // missing required argument
}

TEST_SUITE_END();
