#pragma once

#include <stdexcept>
#include <string>

namespace reaction_miner {

// Exception hierarchy. Everything thrown by the library derives from Error
// so callers (the CLI in particular) can map failures to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Input file is structurally wrong (too many malformed lines, bad header).
class FormatError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Empty or inconsistent emotion model.
class ModelError : public Error {
 public:
  using Error::Error;
};

/// Raised when an operation needs meaningful scores but the text matched no pattern.
class NoSignalError : public Error {
 public:
  using Error::Error;
};

class TrainingError : public Error {
 public:
  using Error::Error;
};

/// Precondition broken by the caller.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace reaction_miner
