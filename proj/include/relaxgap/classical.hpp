#ifndef RELAXGAP_CLASSICAL_HPP_
#define RELAXGAP_CLASSICAL_HPP_

#include <cstdint>
#include <optional>

#include "relaxgap/dynamics.hpp"
#include "relaxgap/problem.hpp"

namespace relaxgap {

struct DirectSolveResult {
  ClassicalControl best_control;
  double best_cost = 0;        // integral cost + terminal cost, no penalty
  double penalty_at_best = 0;  // quadratic constraint violation at rho = 1e4
  int starts = 0;
  std::uint64_t seed = 0;
};

inline constexpr double kPenaltyRho = 1e4;

/// cost and penalty decomposition of one control (integration at the
/// dynamics default step).
std::pair<double, double> evaluate_control(const Problem& p, const ClassicalControl& c,
                                           Membership mode);

/// Multistart coordinate pattern search over piecewise-constant controls on K
/// uniform intervals.  Deterministic in (problem, K, starts, seed).  A warm
/// start, when given, replaces start 0 (resampled to the K-interval grid).
DirectSolveResult solve_classical(const Problem& p, int K, int starts, std::uint64_t seed,
                                  Membership mode,
                                  const std::optional<ClassicalControl>& warm_start = std::nullopt);

}  // namespace relaxgap

#endif  // RELAXGAP_CLASSICAL_HPP_
