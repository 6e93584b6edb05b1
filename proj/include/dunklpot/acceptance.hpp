#pragma once

#include <functional>
#include <string>
#include <vector>

namespace dunklpot {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool checksPassed = false;
  double seconds = 0.0;
  double budgetSeconds = 0.0;  // 0: no time limit
  std::string detail;

  bool pass() const { return checksPassed && (budgetSeconds <= 0.0 || seconds <= budgetSeconds); }
  std::string line() const;
};

struct SuiteOptions {
  /// Directory for the per-criterion CSV files; empty to skip writing.
  std::string outDir;
};

/// Criterion ids of a named suite: symbolic, heat, green, kernels, means,
/// excessivity, minprinciple, dirichlet, harmonic-measure, symmetry, bridge,
/// determinism, or all. ConfigError for anything else.
std::vector<int> suiteCriteria(const std::string& suite);

CriterionResult runCriterion(int id, const SuiteOptions& opts);

/// Runs every criterion of the suite, reporting each result as it finishes.
std::vector<CriterionResult> runSuite(const std::string& suite, const SuiteOptions& opts,
                                      const std::function<void(const CriterionResult&)>& report = {});

}  // namespace dunklpot
