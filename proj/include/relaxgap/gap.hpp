#ifndef RELAXGAP_GAP_HPP_
#define RELAXGAP_GAP_HPP_

#include "relaxgap/classical.hpp"
#include "relaxgap/occmeas.hpp"
#include "relaxgap/problem.hpp"

namespace relaxgap {

/// Domain and target shrunk inward by epsilon: {h >= eps} for implicit
/// regions, each side moved in by eps for boxes.
struct InnerApproximation {
  double epsilon = 0;
  RegionSpec omega_eps, target_eps;
  bool x0_in_omega_eps = true;
};

InnerApproximation shrink(const Problem& p, double eps);

/// The problem restated on (omega_eps, target_eps).  Throws ProblemError
/// (naming "x0 in omega") when x0 falls outside the shrunken domain.
Problem shrunken_problem(const Problem& p, const InnerApproximation& ia);

struct GapRung {
  double epsilon = 0;
  bool valid = false;
  std::string flag;            // why the rung is invalid, when it is
  double upper_shrunk = 0;     // direct-method cost on (omega_eps, target_eps)
  double upper_penalty = 0;
  double gap_bound = 0;        // upper_shrunk - lower_full
};

struct GapReport {
  std::vector<double> ladder;
  double lower_full = 0;  // occupation LP estimate on the full closed domain
  std::vector<GapRung> rungs;
  std::vector<std::string> caveats;
};

/// Gap-bound pipeline: one relaxed solve on the full domain, one classical
/// solve per ladder rung (largest epsilon first, warm-started down the
/// ladder).
GapReport gap_bound(const Problem& p, const std::vector<double>& ladder, const GridSpec& grid,
                    int K, int starts, std::uint64_t seed);

inline const std::vector<double> kDefaultLadder = {0.2, 0.1, 0.05, 0.025};

}  // namespace relaxgap

#endif  // RELAXGAP_GAP_HPP_
