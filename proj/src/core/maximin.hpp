#pragma once

#include <optional>
#include <vector>

#include "criteria.hpp"
#include "model.hpp"
#include "solvers.hpp"

namespace gtd {

class anchor_unverified : public std::runtime_error {
 public:
  anchor_unverified() : std::runtime_error("anchor design fails its optimality certificate") {}
};

struct MaximinSpec {
  std::vector<AnchoredCriterion> criteria;

  explicit MaximinSpec(std::vector<AnchoredCriterion> cs) : criteria(std::move(cs)) {
    if (criteria.empty()) throw invalid_input("maximin needs at least one criterion");
  }
};

struct MaximinSolution {
  Design design;
  double t_star = 1;
  double min_eff = 1;                  // 1/t*
  std::vector<double> efficiencies;    // one per criterion
  long iterations = 0;
  double wall_time = 0;
  bool converged = false;
};

struct CertificateWeights {
  std::vector<double> eta;
  double delta1 = 1e-5;
  double delta2 = 1e-5;
};

/// Phi_j convention: log(phi) for D, phi itself otherwise.
inline double maximin_phi(const AnchoredCriterion& a, const Sym3& info) {
  double v = objective(a.spec, info);
  return a.spec.kind == Crit::D ? std::log(v) : v;
}

inline double h_fn(const AnchoredCriterion& a, double t) {
  switch (a.spec.kind) {
    case Crit::D: return std::log(a.anchor) + 3.0 * std::log(t);
    case Crit::E: return a.anchor / t;
    default: return t * a.anchor;
  }
}

inline double g_fn(const AnchoredCriterion& a, double t) {
  switch (a.spec.kind) {
    case Crit::D: return 3.0 / t;
    case Crit::E: return -a.anchor / (t * t);
    default: return a.anchor;
  }
}

MaximinSolution solve_maximin(const MaximinSpec& spec, const GridTables& t,
                              const SolverConfig& cfg);

std::optional<CertificateWeights> verify_maximin(const MaximinSolution& sol,
                                                 const MaximinSpec& spec, const GridTables& t,
                                                 double delta1 = 1e-5, double delta2 = 1e-5);

/// Solves each single-objective problem and packages the anchors.
MaximinSpec make_maximin_spec(const std::vector<CriterionSpec>& kinds, const GridTables& t,
                              const SolverConfig& cfg);

}  // namespace gtd
