#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "minvar/errors.hpp"
#include "minvar/families/family_spec.hpp"
#include "minvar/harness/plan.hpp"

#ifndef MINVAR_VERSION
#define MINVAR_VERSION "1.0.0"
#endif

namespace minvar {

inline constexpr const char* kEngineVersion = MINVAR_VERSION;

enum class Verdict { pass, fail, fail_expected, inconclusive };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "PASS";
    case Verdict::fail:
      return "FAIL";
    case Verdict::fail_expected:
      return "FAIL-EXPECTED";
    case Verdict::inconclusive:
      return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

inline Verdict verdict_from_string(const std::string& s) {
  if (s == "PASS") return Verdict::pass;
  if (s == "FAIL") return Verdict::fail;
  if (s == "FAIL-EXPECTED") return Verdict::fail_expected;
  if (s == "INCONCLUSIVE") return Verdict::inconclusive;
  throw SpecError("unknown verdict '" + s + "'");
}

/// One named residual over a sample set.
struct CheckResult {
  std::string name;
  double max_residual = 0.0;
  double mean_residual = 0.0;
  double min_residual = 0.0;
  double max_raw = 0.0;  // unnormalized magnitude behind the residual, where one exists
  long long points_evaluated = 0;
  long long points_excluded = 0;
  double tolerance = 0.0;
  bool negative_control = false;
  Verdict verdict = Verdict::inconclusive;

  Verdict expected() const { return negative_control ? Verdict::fail_expected : Verdict::pass; }
  bool matches_expectation() const { return verdict == expected(); }
};

/// Streaming max/min/mean of a residual.
class ResidualStats {
 public:
  void add(double residual, double raw) {
    if (std::isnan(residual)) residual = std::numeric_limits<double>::infinity();
    max_ = std::max(max_, residual);
    min_ = std::min(min_, residual);
    raw_ = std::max(raw_, std::abs(raw));
    sum_ += residual;
    ++n_;
  }
  void add(double residual) { add(residual, residual); }

  /// Positive checks PASS iff max <= tol; negative controls are FAIL-EXPECTED
  /// iff min >= tol_negative, PASS (wrongly) iff max <= tol, else INCONCLUSIVE.
  CheckResult finish(std::string name, double tol, bool negative_control, const TolerancePolicy& policy,
                     long long excluded) const {
    CheckResult c;
    c.name = std::move(name);
    c.max_residual = n_ ? max_ : 0.0;
    c.min_residual = n_ ? min_ : 0.0;
    c.mean_residual = n_ ? sum_ / static_cast<double>(n_) : 0.0;
    c.max_raw = raw_;
    c.points_evaluated = n_;
    c.points_excluded = excluded;
    c.tolerance = tol;
    c.negative_control = negative_control;
    if (n_ == 0) {
      c.verdict = Verdict::inconclusive;
    } else if (c.max_residual <= tol) {
      c.verdict = Verdict::pass;
    } else if (!negative_control) {
      c.verdict = Verdict::fail;
    } else if (c.min_residual >= policy.tol_negative) {
      c.verdict = Verdict::fail_expected;
    } else {
      c.verdict = Verdict::inconclusive;
    }
    return c;
  }

 private:
  double max_ = 0.0;
  double min_ = std::numeric_limits<double>::infinity();
  double raw_ = 0.0;
  double sum_ = 0.0;
  long long n_ = 0;
};

struct VerificationReport {
  std::string engine_version = kEngineVersion;
  std::string campaign;
  FamilySpecPtr spec;
  SamplePlan plan;
  TolerancePolicy tolerances;
  std::vector<CheckResult> checks;
  std::optional<bool> verdicts_agree;  // takahashi only
  std::optional<double> wall_time;     // seconds; left out unless requested

  bool all_expected() const {
    if (verdicts_agree && !*verdicts_agree) return false;
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.matches_expectation(); });
  }

  const CheckResult* find(const std::string& name) const {
    for (const auto& c : checks) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }
};

}  // namespace minvar
