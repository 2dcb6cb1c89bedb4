#ifndef RELAXGAP_OCCMEAS_HPP_
#define RELAXGAP_OCCMEAS_HPP_

#include "relaxgap/dynamics.hpp"
#include "relaxgap/lp.hpp"
#include "relaxgap/problem.hpp"

namespace relaxgap {

struct OccError : std::runtime_error {
  explicit OccError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Cell counts over [0,T] x boundingBox(omega) x U plus the max total degree
/// of the monomial test functions.
struct GridSpec {
  int nt = 20;
  int nx = 40;  // per state dimension
  int nu = 21;  // per control dimension
  int test_degree = 4;

  /// One refinement step: t and x cells double, control cells quadruple
  /// (control quantization error dominates for bang-type optima).
  GridSpec refined() const { return GridSpec{nt * 2, nx * 2, nu * 4, test_degree}; }

  void validate() const;
};

/// Monomial exponents of a test function t^a * x1^a1 * ... * xn^an.
using Monomial = std::vector<int>;  // [a, a1..an]

std::vector<Monomial> test_monomials(int n, int max_degree);

/// Assembled grid LP together with the cell geometry behind each column.
struct AssembledLp {
  SparseLp lp;
  std::vector<Monomial> monomials;  // one Liouville row each; last row is the
                                    // boundary normalization
  // columns [0, mu_count): interior cells; [mu_count, mu_count+bd_count): target cells
  int mu_count = 0;
  int bd_count = 0;
  std::vector<double> mu_t;
  std::vector<Eigen::VectorXd> mu_x, mu_u;
  std::vector<Eigen::VectorXd> bd_x;
};

AssembledLp assemble_occupation_lp(const Problem& p, const GridSpec& grid, Membership mode,
                                   double shrink_eps);

struct DiscreteOccupationMeasure {
  struct Cell {
    double t;
    Eigen::VectorXd x, u;
    double weight = 0;
  };
  struct BoundaryCell {
    Eigen::VectorXd x;
    double weight = 0;
  };
  std::vector<Cell> mu;
  std::vector<BoundaryCell> boundary;
  double objective = 0;

  double total_mass() const;
  double boundary_mass() const;
  void write_csv(std::ostream& os, int n, int m) const;
};

/// Solves the grid LP; the objective is the M_o estimate (not a certified
/// bound: see README caveats).
DiscreteOccupationMeasure solve_occupation(const Problem& p, const GridSpec& grid,
                                           Membership mode, double shrink_eps);

/// Pushes an integrated trajectory into the cell grid: each step deposits its
/// step length of mass at the cell holding the step midpoint; the boundary
/// measure is a Dirac at the endpoint's cell.
DiscreteOccupationMeasure trajectory_measure(const Problem& p, const Trajectory& tr,
                                             const ClassicalControl& c, const GridSpec& grid);
DiscreteOccupationMeasure trajectory_measure(const Problem& p, const Trajectory& tr,
                                             const YoungMeasureControl& y, const GridSpec& grid);

/// Max absolute violation of the Liouville rows (each normalized by its
/// largest coefficient over the occupied cells).
double liouville_residual(const Problem& p, const DiscreteOccupationMeasure& dm,
                          int test_degree);

}  // namespace relaxgap

#endif  // RELAXGAP_OCCMEAS_HPP_
