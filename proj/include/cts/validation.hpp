#pragma once

#include <string>
#include <utility>
#include <vector>

namespace cts {

// One rule violation with enough structured detail to reproduce it.
struct Violation {
  std::string code;     // stable machine tag, e.g. "chain-rule"
  std::string message;  // human-readable, witnesses inline
  std::vector<std::pair<std::string, std::string>> detail;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  void add(std::string code, std::string message,
           std::vector<std::pair<std::string, std::string>> detail = {}) {
    violations.push_back(
        {std::move(code), std::move(message), std::move(detail)});
  }
};

}  // namespace cts
