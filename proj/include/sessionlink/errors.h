#ifndef SESSIONLINK_ERRORS_H_
#define SESSIONLINK_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace sessionlink {

// Base class for every error raised by the library. The CLI maps subclasses
// onto its exit codes, so new errors should derive from the closest match.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input. `line` is 1-based; 0 means the location is unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line)
      : Error(line == 0 ? message
                        : "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class EmptyCorpusError : public Error {
 public:
  using Error::Error;
};

class InvalidSpecError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

class SplitError : public Error {
 public:
  using Error::Error;
};

// A fingerprint or attack needs a semantic channel the corpus lacks.
class ChannelError : public Error {
 public:
  using Error::Error;
};

class VocabularyError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

// Training produced a non-finite loss.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, int epoch)
      : Error(what + " diverged at epoch " + std::to_string(epoch)),
        epoch_(epoch) {}

  int epoch() const { return epoch_; }

 private:
  int epoch_;
};

class InsufficientSessionsError : public Error {
 public:
  using Error::Error;
};

class DegenerateLabelsError : public Error {
 public:
  using Error::Error;
};

class DefenseConfigError : public Error {
 public:
  using Error::Error;
};

// Wraps the first failure of a multi-trial experiment.
class TrialError : public Error {
 public:
  TrialError(int trial, const std::string& cause)
      : Error("trial " + std::to_string(trial) + ": " + cause),
        trial_(trial) {}

  int trial() const { return trial_; }

 private:
  int trial_;
};

// Every problem found while validating a run configuration.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> problems)
      : Error(Join(problems)), problems_(std::move(problems)) {}

  const std::vector<std::string>& problems() const { return problems_; }

 private:
  static std::string Join(const std::vector<std::string>& problems) {
    std::string out = "invalid configuration";
    for (const std::string& p : problems) out += "\n  " + p;
    return out;
  }

  std::vector<std::string> problems_;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace sessionlink

#endif  // SESSIONLINK_ERRORS_H_
