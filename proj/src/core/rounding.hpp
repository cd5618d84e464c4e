#pragma once

#include <vector>

#include "criteria.hpp"
#include "maximin.hpp"
#include "model.hpp"

namespace gtd {

class budget_too_small : public invalid_input {
 public:
  budget_too_small() : invalid_input("budget too small to place any observation") {}
};

class sample_too_small : public invalid_input {
 public:
  sample_too_small() : invalid_input("sample size below the number of support points") {}
};

class enumeration_cap_exceeded : public std::runtime_error {
 public:
  enumeration_cap_exceeded()
      : std::runtime_error("allocation enumeration exceeded the configured cap") {}
};

struct ExactDesign {
  std::vector<std::pair<int, long>> points;  // (group size, replicate count), ascending x
  double realized_cost = 0;
  long realized_n = 0;
};

struct RoundingTrace {
  std::vector<std::pair<int, long>> floor_counts;
  double remaining = 0;        // C_r (budget mode) or m (fixed-n mode)
  std::vector<std::pair<int, long>> delta;
  double remaining_final = 0;  // C_r'
  double objective = 0;
  double efficiency = 0;       // min efficiency for multi-criterion specs
};

struct ExpansionConfig {
  int radius = 2;
  long enum_cap = 5000000;

  void validate() const {
    if (radius < 0 || radius > 2) throw invalid_input("expansion radius must be 0, 1 or 2");
    if (enum_cap < 1) throw invalid_input("enumeration cap must be positive");
  }
};

/// Objective used during the allocation search and for reporting: a single
/// criterion minimizes phi; a multi-criterion spec minimizes -min_j eff_j.
struct RoundingObjective {
  std::vector<AnchoredCriterion> criteria;
  bool has_anchor = true;  // false when the anchor is a ranking-only placeholder

  static RoundingObjective single(const CriterionSpec& spec) {
    // the anchor is irrelevant for ranking a single criterion; use a
    // sign-consistent placeholder
    return {{AnchoredCriterion(spec, spec.kind == Crit::E ? -1.0 : 1.0)}, false};
  }
  static RoundingObjective anchored(const AnchoredCriterion& a) { return {{a}, true}; }
  static RoundingObjective maximin(const MaximinSpec& spec) { return {spec.criteria, true}; }
};

/// phi (or -min_j eff_j) of an exact design whose information is built with
/// weights n_i c(x_i) / denom.
double exact_objective(const RoundingObjective& obj, const std::vector<std::pair<int, long>>& pts,
                       const GridTables& t, double denom);

/// Eq.-4 efficiency with realized-cost normalization.
double exact_efficiency(const ExactDesign& ed, const AnchoredCriterion& a, const GridTables& t);

/// min_j eff_j with an explicit normalizing denominator (budget or realized).
double exact_min_eff(const ExactDesign& ed, const std::vector<AnchoredCriterion>& criteria,
                     const GridTables& t, double denom);

/// Step-II search: exhaustive DFS over augmentations of the floored counts,
/// optionally split across threads at the first branching level (the merge is
/// deterministic). exact_sum demands the remaining amount be spent exactly
/// (fixed-n mode).
std::vector<std::pair<int, long>> allocation_search(
    const std::vector<int>& candidates, const std::vector<long>& caps, double remaining,
    const RoundingObjective& obj, const std::vector<std::pair<int, long>>& base,
    const GridTables& t, double denom, bool exact_sum, long enum_cap, bool prune = true,
    int threads = 1);

std::pair<ExactDesign, RoundingTrace> round_budget(const Design& oad, double C,
                                                   const RoundingObjective& obj,
                                                   const GridTables& t,
                                                   const ExpansionConfig& expansion,
                                                   double prune_tol = 1e-6, int threads = 1);

std::pair<ExactDesign, RoundingTrace> round_fixed_n(const Design& oad, long n,
                                                    const RoundingObjective& obj,
                                                    const GridTables& t,
                                                    const ExpansionConfig& expansion,
                                                    double prune_tol = 1e-6, int threads = 1);

}  // namespace gtd
