#ifndef RELAXGAP_CONDITIONS_HPP_
#define RELAXGAP_CONDITIONS_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "relaxgap/problem.hpp"

namespace relaxgap {

enum class ConditionId { FW1, FW2, H1, IPC, V4 };
enum class Verdict { SatisfiedOnSamples, Violated, NotApplicable };

std::string to_string(ConditionId id);
std::string to_string(Verdict v);

struct Witness {
  std::string description;
  std::vector<double> point;
  double value = 0;
};

/// Sampling-based verdict: "satisfied-on-samples" is evidence, not proof;
/// "violated" carries a re-verified witness.
struct ConditionReport {
  ConditionId condition = ConditionId::FW1;
  Verdict verdict = Verdict::NotApplicable;
  std::vector<Witness> witnesses;
  std::map<std::string, double> constants;
  long samples_used = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> notes;
};

/// Growth bound of the lifted velocity set: estimates the smallest constant
/// with sup ||(f,L)|| <= lambda (1 + ||x||) over the box.
ConditionReport check_fw1(const Problem& p, long samples, std::uint64_t seed);

/// Local Lipschitz behavior of x -> F(t,x) in the Hausdorff metric,
/// approximated on a shared control grid.  Diverging difference ratios as
/// the pair separation shrinks flag a violation.
ConditionReport check_fw2(const Problem& p, long samples, std::uint64_t seed);

/// Integral time-regularity of F along Lipschitz probe curves; autonomous
/// problems short-circuit to satisfied with constant 0.
ConditionReport check_h1(const Problem& p, long probes, std::uint64_t seed);

/// Inward pointing condition at sampled boundary points of an implicit
/// domain, via the Clarke-cone interior {v : grad h . v > 0} with margin eta.
ConditionReport check_ipc(const Problem& p, long boundary_samples, double eta,
                          std::uint64_t seed);

/// Midpoint convexity of the reduced Lagrangian v -> min{L : f = v} on the
/// achievable velocity set, tested per sampled (t,x).
ConditionReport check_v4_convexity(const Problem& p, long probes, std::uint64_t seed);

inline constexpr double kDefaultIpcEta = 1e-2;
inline constexpr long kDefaultBoundarySamples = 500;
inline constexpr int kDefaultControlGridPoints = 101;  // per control dimension

}  // namespace relaxgap

#endif  // RELAXGAP_CONDITIONS_HPP_
