#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace gskor {

/// Two paths built on different grids were combined.
class GridMismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A constraint pair whose obstacles touch or cross.
class SeparationError : public std::runtime_error {
 public:
  SeparationError(const std::string& what, double gap)
      : std::runtime_error(what), gap_(gap) {}
  double gap() const noexcept { return gap_; }

 private:
  double gap_;
};

/// Numeric inversion of a constraint function failed at a grid node.
class RootNotFoundError : public std::runtime_error {
 public:
  RootNotFoundError(const std::string& what, std::size_t node)
      : std::runtime_error(what), node_(node) {}
  std::size_t node() const noexcept { return node_; }

 private:
  std::size_t node_;
};

/// A computation produced a non-finite value. The message carries the
/// coordinates (node, time, state) of the failure.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Config parsing/validation failure with one issue per offending key,
/// addressed by JSON pointer.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> issues)
      : std::runtime_error(join(issues)), issues_(std::move(issues)) {}
  const std::vector<std::string>& issues() const noexcept { return issues_; }

 private:
  static std::string join(const std::vector<std::string>& issues) {
    std::string out = "invalid config";
    for (const auto& issue : issues) {
      out += "\n  ";
      out += issue;
    }
    return out;
  }
  std::vector<std::string> issues_;
};

}  // namespace gskor
