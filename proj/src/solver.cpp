#include "ntnsplit/solver.hpp"

#include <algorithm>
#include <tuple>

namespace ntnsplit {

std::vector<Assignment> enumerate_assignments() {
  std::vector<Assignment> all;
  all.reserve(kPlatformCount * kSplitOptionCount);
  for (int p = 0; p < kPlatformCount; ++p) {
    for (int o = 0; o < kSplitOptionCount; ++o) {
      all.push_back({static_cast<Platform>(p), o});
    }
  }
  return all;
}

SolveResult solve_optimal(double lambda_ru_mbps, const ScenarioParams& params) {
  SolveResult result;
  result.ranked.reserve(kPlatformCount * kSplitOptionCount);
  for (const Assignment& a : enumerate_assignments()) {
    CandidateEval c;
    c.assignment = a;
    c.power_w = total_power_w(a, lambda_ru_mbps, params);
    c.report = check_feasibility(a, lambda_ru_mbps, params);
    result.ranked.push_back(std::move(c));
  }

  // Feasible before infeasible; within each group lowest power wins, ties
  // broken by lower option id, then SAT before HAP.
  auto rank_key = [](const CandidateEval& c) {
    return std::make_tuple(!c.report.feasible(), c.power_w, c.assignment.option,
                           static_cast<int>(c.assignment.platform));
  };
  std::stable_sort(result.ranked.begin(), result.ranked.end(),
                   [&](const CandidateEval& a, const CandidateEval& b) {
                     return rank_key(a) < rank_key(b);
                   });

  if (result.ranked.front().report.feasible()) {
    result.best = result.ranked.front().assignment;
    result.best_power_w = result.ranked.front().power_w;
    result.best_report = result.ranked.front().report;
  }
  return result;
}

}  // namespace ntnsplit
