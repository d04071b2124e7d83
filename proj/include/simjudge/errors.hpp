#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace simjudge {

// Base class for all toolkit errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Grammar violation while parsing a spec document.
class ParseError : public Error {
 public:
  ParseError(int line, int column, std::string expected)
      : Error("parse error at line " + std::to_string(line) + ", column " +
              std::to_string(column) + ": expected " + expected),
        line(line),
        column(column),
        expected(std::move(expected)) {}

  int line;
  int column;
  std::string expected;
};

// A mandatory value is present but semantically unusable.
class ExtractionError : public Error {
 public:
  ExtractionError(std::string section, std::string entry, const std::string& why)
      : Error("cannot extract '" + entry + "' in section '" + section + "': " + why),
        section(std::move(section)),
        entry(std::move(entry)) {}

  std::string section;
  std::string entry;
};

class UnknownUnitError : public Error {
 public:
  explicit UnknownUnitError(std::string token)
      : Error("unknown unit token '" + token + "'"), token(std::move(token)) {}

  std::string token;
};

class MissingParameterError : public Error {
 public:
  explicit MissingParameterError(std::string name)
      : Error("required parameter '" + name + "' is absent from the spec"),
        name(std::move(name)) {}

  std::string name;
};

class GraphError : public Error {
 public:
  explicit GraphError(const std::string& what) : Error(what) {}
};

// Thrown by graph construction; carries one witness cycle.
class CycleError : public GraphError {
 public:
  explicit CycleError(std::vector<std::string> cycle_nodes, const std::string& rendered)
      : GraphError("graph has a cycle: " + rendered), cycle(std::move(cycle_nodes)) {}

  std::vector<std::string> cycle;
};

class MultipleSinksError : public GraphError {
 public:
  explicit MultipleSinksError(const std::string& what) : GraphError(what) {}
};

class UnknownFamilyError : public Error {
 public:
  explicit UnknownFamilyError(std::string family)
      : Error("unknown method family '" + family + "'"), family(std::move(family)) {}

  std::string family;
};

class MissingPlanFieldError : public Error {
 public:
  explicit MissingPlanFieldError(std::string field)
      : Error("plan is missing required field '" + field + "'"),
        field(std::move(field)) {}

  std::string field;
};

class NoEvaluatorError : public Error {
 public:
  explicit NoEvaluatorError(std::string archetype)
      : Error("no residual evaluator for archetype '" + archetype + "'"),
        archetype(std::move(archetype)) {}

  std::string archetype;
};

class NoLinearizationError : public Error {
 public:
  NoLinearizationError() : Error("problem provides no linearization") {}
};

class SolveError : public Error {
 public:
  explicit SolveError(const std::string& what) : Error(what) {}
};

class CFLViolationError : public Error {
 public:
  CFLViolationError(double ratio, double limit)
      : Error("CFL violation: ratio " + std::to_string(ratio) + " exceeds " +
              std::to_string(limit)),
        ratio(ratio),
        limit(limit) {}

  double ratio;
  double limit;
};

class SingularSystemError : public Error {
 public:
  explicit SingularSystemError(const std::string& what) : Error(what) {}
};

class InconsistentInputsError : public Error {
 public:
  explicit InconsistentInputsError(const std::string& what) : Error(what) {}
};

}  // namespace simjudge
