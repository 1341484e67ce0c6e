#pragma once

// Error taxonomy shared by every module. Each error carries a process exit
// code so the command line tools can map failures uniformly:
//   2 -> the input itself is malformed (validation),
//   3 -> the input parses but a numeric contract does not hold,
//   4 -> a resource cap was exceeded.

#include <stdexcept>
#include <string>

namespace opalg {

class Error : public std::runtime_error {
 public:
  Error(std::string name, const std::string& what, int exit_code)
      : std::runtime_error(name + ": " + what),
        name_(std::move(name)),
        exit_code_(exit_code) {}

  const std::string& name() const { return name_; }
  int exit_code() const { return exit_code_; }

 private:
  std::string name_;
  int exit_code_;
};

// ---- validation failures (exit code 2) -------------------------------------

class ValidationError : public Error {
 public:
  ValidationError(std::string name, const std::string& what)
      : Error(std::move(name), what, 2) {}
};

struct DimensionMismatch : ValidationError {
  explicit DimensionMismatch(const std::string& what)
      : ValidationError("DimensionMismatch", what) {}
};

struct ShapeMismatch : ValidationError {
  explicit ShapeMismatch(const std::string& what)
      : ValidationError("ShapeMismatch", what) {}
};

struct NotHermitian : ValidationError {
  explicit NotHermitian(const std::string& what)
      : ValidationError("NotHermitian", what) {}
};

struct NotState : ValidationError {
  explicit NotState(const std::string& what)
      : ValidationError("NotState", what) {}
};

struct NotUnitary : ValidationError {
  explicit NotUnitary(const std::string& what)
      : ValidationError("NotUnitary", what) {}
};

struct NotContraction : ValidationError {
  explicit NotContraction(const std::string& what)
      : ValidationError("NotContraction", what) {}
};

struct SumMismatch : ValidationError {
  explicit SumMismatch(const std::string& what)
      : ValidationError("SumMismatch", what) {}
};

struct InvalidStrategy : ValidationError {
  explicit InvalidStrategy(const std::string& what)
      : ValidationError("InvalidStrategy", what) {}
};

struct ParseError : ValidationError {
  explicit ParseError(const std::string& what)
      : ValidationError("ParseError", what) {}
};

// ---- numeric contract failures (exit code 3) --------------------------------

class ContractError : public Error {
 public:
  ContractError(std::string name, const std::string& what)
      : Error(std::move(name), what, 3) {}
};

struct NotCP : ContractError {
  explicit NotCP(const std::string& what) : ContractError("NotCP", what) {}
};

struct NotDominated : ContractError {
  explicit NotDominated(const std::string& what)
      : ContractError("NotDominated", what) {}
};

struct RangeViolation : ContractError {
  explicit RangeViolation(const std::string& what)
      : ContractError("RangeViolation", what) {}
};

struct NotInCommutant : ContractError {
  explicit NotInCommutant(const std::string& what)
      : ContractError("NotInCommutant", what) {}
};

struct NotCommuting : ContractError {
  explicit NotCommuting(const std::string& what)
      : ContractError("NotCommuting", what) {}
};

struct NotOns : ContractError {
  explicit NotOns(const std::string& what)
      : ContractError("NotOns", what) {}
};

// ---- resource caps (exit code 4) --------------------------------------------

struct TooLarge : Error {
  explicit TooLarge(const std::string& what) : Error("TooLarge", what, 4) {}
};

}  // namespace opalg
