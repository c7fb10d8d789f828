#pragma once

#include <stdexcept>
#include <string>

namespace nrp {

/// Malformed or inconsistent input: unparsable files, dangling ids,
/// cyclic dependency graphs, invalid generator specs.
class ModelError : public std::runtime_error {
public:
  explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

/// A parse failure tied to a specific line of an input file.
class ParseError : public ModelError {
public:
  ParseError(const std::string& file, int line, const std::string& what)
      : ModelError(file + ":" + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

private:
  int line_;
};

/// A broken internal invariant: contradictory backbone pairs, refinement
/// collisions, infeasible backbones handed to the reducer. These signal a
/// bug in the caller, not bad user input.
class IntegrityError : public std::logic_error {
public:
  explicit IntegrityError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace nrp
