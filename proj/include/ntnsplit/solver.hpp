#pragma once

#include <optional>
#include <vector>

#include "ntnsplit/cost_model.hpp"

namespace ntnsplit {

struct CandidateEval {
  Assignment assignment;
  double power_w = 0.0;
  FeasibilityReport report;
};

// Exact solution of the power-minimization problem over the 8 candidate
// assignments. `ranked` always holds all 8 candidates: feasible ones first,
// ordered by (power asc, option asc, SAT before HAP), then the infeasible
// ones in the same order. `best` is empty when no candidate is feasible.
struct SolveResult {
  std::optional<Assignment> best;
  double best_power_w = 0.0;
  FeasibilityReport best_report;
  std::vector<CandidateEval> ranked;

  bool feasible() const { return best.has_value(); }
};

/// All 8 (platform, option) pairs, platform ascending then option ascending:
/// (SAT,0) ... (SAT,3), (HAP,0) ... (HAP,3).
std::vector<Assignment> enumerate_assignments();

SolveResult solve_optimal(double lambda_ru_mbps, const ScenarioParams& params);

}  // namespace ntnsplit
