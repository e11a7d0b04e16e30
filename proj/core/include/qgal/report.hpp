#pragma once

// Residual-based check reports shared by every verification suite.

#include <string>
#include <vector>

namespace qgal {

struct CheckResult {
  std::string name;
  double residual = 0.0;
  double threshold = 0.0;
  bool pass = false;
  bool negate = false;  // negative controls: pass means residual > threshold
};

struct Report {
  std::string subject;
  std::vector<CheckResult> checks;
  double elapsed_ms = 0.0;

  // residual <= threshold passes; negated checks require residual > threshold
  CheckResult& add(const std::string& name, double res, double thr) {
    checks.push_back({name, res, thr, res <= thr, false});
    return checks.back();
  }
  CheckResult& add_negative(const std::string& name, double res, double thr) {
    checks.push_back({name, res, thr, res > thr, true});
    return checks.back();
  }
  CheckResult& add_flag(const std::string& name, bool ok) {
    checks.push_back({name, ok ? 0.0 : 1.0, 0.5, ok, false});
    return checks.back();
  }
  void merge(const Report& other, const std::string& prefix = "") {
    for (auto c : other.checks) {
      if (!prefix.empty()) c.name = prefix + "." + c.name;
      checks.push_back(std::move(c));
    }
  }
  bool overall() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  double worst_residual() const {
    double w = 0.0;
    for (const auto& c : checks)
      if (!c.negate) w = w > c.residual ? w : c.residual;
    return w;
  }
};

}  // namespace qgal
