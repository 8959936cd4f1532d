#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace hodgewp {

// One residual-versus-tolerance entry.  `ref` names the identity being checked.
struct Check {
  std::string name;
  std::string ref;
  double residual = 0;
  double tolerance = 0;
  bool pass = false;
  std::string note;
};

struct ValidationReport {
  std::string subject;
  std::vector<Check> checks;

  // Records residual <= tolerance (NaN fails).
  Check& add(std::string name, std::string ref, double residual, double tolerance,
             std::string note = {}) {
    bool ok = std::isfinite(residual) && residual <= tolerance;
    checks.push_back({std::move(name), std::move(ref), residual, tolerance, ok, std::move(note)});
    return checks.back();
  }
  Check& add_flag(std::string name, std::string ref, bool ok, std::string note = {}) {
    checks.push_back({std::move(name), std::move(ref), ok ? 0.0 : 1.0, 0.0, ok, std::move(note)});
    return checks.back();
  }
  void append(const ValidationReport& other, const std::string& prefix = {}) {
    for (auto c : other.checks) {
      if (!prefix.empty()) c.name = prefix + c.name;
      checks.push_back(std::move(c));
    }
  }

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
  }
  const Check* first_failure() const {
    for (const auto& c : checks)
      if (!c.pass) return &c;
    return nullptr;
  }
  const Check* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
  double max_residual() const {
    double r = 0;
    for (const auto& c : checks) r = std::max(r, c.residual);
    return r;
  }
};

struct Tolerances {
  double rank = 1e-9;
  double residual = 1e-8;
};

}  // namespace hodgewp
