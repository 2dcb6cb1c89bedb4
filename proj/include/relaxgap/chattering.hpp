#ifndef RELAXGAP_CHATTERING_HPP_
#define RELAXGAP_CHATTERING_HPP_

#include "relaxgap/dynamics.hpp"
#include "relaxgap/problem.hpp"

namespace relaxgap {

/// Realizes a Young measure as a rapidly switching classical control: each
/// measure interval is cut into N frames and each frame into consecutive
/// sub-slots with lengths proportional to the atom weights, in stored atom
/// order.
ClassicalControl chatter(const Problem& p, const YoungMeasureControl& y, int N);

struct ChatteringError {
  double state_err = 0;  // max_t ||gamma_young(t) - gamma_chattered(t)||
  double cost_err = 0;   // |running cost difference at T| (lifted coordinate)
};

ChatteringError chattering_error(const Problem& p, const YoungMeasureControl& y, int N,
                                 double dt);

}  // namespace relaxgap

#endif  // RELAXGAP_CHATTERING_HPP_
