#pragma once

#include <vector>

#include "criteria.hpp"
#include "model.hpp"

namespace gtd {

struct SolverConfig {
  double certificate_tol = 1e-5;
  long max_iters = 200000;
  double prune_tol = 1e-6;
  double bisection_tol = 1e-8;
  unsigned seed = 0;

  void validate() const {
    if (!(certificate_tol > 0) || !(prune_tol >= 0) || !(bisection_tol > 0))
      throw invalid_input("solver tolerances must be positive");
    if (max_iters < 1) throw invalid_input("max_iters must be >= 1");
  }
};

struct SolveReport {
  Design design;
  double objective = 0;        // Eq.-scale criterion value at the solution
  int certificate_point = 0;   // worst grid point u
  double certificate_value = 0;  // max_u d(u, w)
  long iterations = 0;
  double wall_time = 0;
  bool converged = false;
  std::vector<double> trace;  // objective at each accepted outer step
};

struct RobustSpec {
  double rho = 0;

  explicit RobustSpec(double r) : rho(r) {
    if (!(rho >= 0)) throw invalid_input("rho must be nonnegative");
  }
};

struct VerifyResult {
  bool certified = false;
  int worst_u = 0;
  double worst_value = 0;
};

SolveReport solve_oad(const CriterionSpec& spec, const GridTables& t, const SolverConfig& cfg);
SolveReport solve_e_optimal(const GridTables& t, const SolverConfig& cfg);
SolveReport solve_robust_e(const RobustSpec& robust, const GridTables& t,
                           const SolverConfig& cfg);
VerifyResult verify_optimality(const CriterionSpec& spec, const Design& d, const GridTables& t,
                               double delta);

/// First-order check for the robust E-problem: the maximum reduced
/// supergradient over the grid must not exceed delta.
VerifyResult verify_robust(const RobustSpec& robust, const Design& d, const GridTables& t,
                           double delta);

inline SolveReport solve_oad(const CriterionSpec& spec, const ModelParams& th,
                             const CostModel& cm, const DesignGrid& grid,
                             const SolverConfig& cfg) {
  if (spec.kind == Crit::E) throw invalid_input("use solve_e_optimal for the E-criterion");
  return solve_oad(spec, GridTables::build(grid, th, cm), cfg);
}

inline SolveReport solve_e_optimal(const ModelParams& th, const CostModel& cm,
                                   const DesignGrid& grid, const SolverConfig& cfg) {
  return solve_e_optimal(GridTables::build(grid, th, cm), cfg);
}

inline SolveReport solve_robust_e(const RobustSpec& robust, const ModelParams& th,
                                  const CostModel& cm, const DesignGrid& grid,
                                  const SolverConfig& cfg) {
  return solve_robust_e(robust, GridTables::build(grid, th, cm), cfg);
}

inline VerifyResult verify_optimality(const CriterionSpec& spec, const Design& d,
                                      const ModelParams& th, const CostModel& cm, double delta) {
  return verify_optimality(spec, d, GridTables::build(DesignGrid(d.M), th, cm), delta);
}

// Shared by the maximin module: Newton polish of a criterion on a restricted
// support, followed by worst-dispersion exchange. Exposed for reuse.
namespace detail {

/// Solves H z = -g for small dense symmetric H with ridge damping on failure.
std::vector<double> damped_solve(std::vector<std::vector<double>> H, std::vector<double> g);

struct RestrictedState {
  std::vector<int> supp;       // grid indices (0-based)
  std::vector<double> w;       // weights on supp, simplex
  long iters = 0;
};

void newton_restricted(const CriterionSpec& spec, const GridTables& t, RestrictedState& st,
                       int max_newton);

std::vector<double> initial_design(int M);
std::vector<double> expand(const RestrictedState& st, int M);

}  // namespace detail

}  // namespace gtd
