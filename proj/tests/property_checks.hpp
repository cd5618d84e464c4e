#pragma once

// Model-free invariants shared by the unit suites and the acceptance runner.
// Each check returns ok + a short detail line (worst deviation, instance id).

#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "core/maximin.hpp"
#include "core/rounding.hpp"
#include "core/solvers.hpp"

namespace gtd::checks {

struct PropResult {
  bool ok = true;
  std::string detail;
};

inline std::string fmt(const char* f, double a, double b = 0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

/// regressor() must be the gradient of the positive-response probability in
/// (p0, p1, p2); central differences, relative tolerance 1e-6.
inline PropResult regressor_fd() {
  double worst = 0;
  for (int x : {1, 2, 5, 17, 61, 150}) {
    auto prob = [&](double p0, double p1, double p2) {
      return positive_prob(x, ModelParams(p0, p1, p2));
    };
    const double h = 1e-5;  // balances cancellation vs truncation below 1e-6
    Vec3 fd{(prob(0.07 + h, 0.93, 0.96) - prob(0.07 - h, 0.93, 0.96)) / (2 * h),
            (prob(0.07, 0.93 + h, 0.96) - prob(0.07, 0.93 - h, 0.96)) / (2 * h),
            (prob(0.07, 0.93, 0.96 + h) - prob(0.07, 0.93, 0.96 - h)) / (2 * h)};
    Vec3 an = regressor(x, ModelParams(0.07, 0.93, 0.96));
    for (int i = 0; i < 3; ++i) {
      double rel = std::abs(fd.x[i] - an.x[i]) / std::max(1e-12, std::abs(an.x[i]));
      worst = std::max(worst, rel);
    }
  }
  return {worst <= 1e-6, fmt("regressor vs FD worst rel err %.2e", worst)};
}

/// I(a*w + (1-a)*v) = a*I(w) + (1-a)*I(v), and I is PSD for any design.
inline PropResult info_linearity_psd() {
  GridTables t = GridTables::build(DesignGrid(61), ModelParams(0.07, 0.93, 0.96), CostModel(0.2));
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double worst_lin = 0, worst_eig = 0;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> w(61), v(61);
    double sw = 0, sv = 0;
    for (int i = 0; i < 61; ++i) {
      w[i] = unif(rng);
      v[i] = unif(rng);
      sw += w[i];
      sv += v[i];
    }
    for (int i = 0; i < 61; ++i) {
      w[i] /= sw;
      v[i] /= sv;
    }
    double a = unif(rng);
    std::vector<double> mix(61);
    for (int i = 0; i < 61; ++i) mix[i] = a * w[i] + (1 - a) * v[i];
    Sym3 lhs = info_matrix(mix, t);
    Sym3 rhs = info_matrix(w, t) * a + info_matrix(v, t) * (1 - a);
    for (double d : {lhs.a00 - rhs.a00, lhs.a01 - rhs.a01, lhs.a02 - rhs.a02,
                     lhs.a11 - rhs.a11, lhs.a12 - rhs.a12, lhs.a22 - rhs.a22})
      worst_lin = std::max(worst_lin, std::abs(d));
    auto ev = eigenvalues_sym3(lhs);
    worst_eig = std::min(worst_eig, ev[0]);
  }
  bool ok = worst_lin <= 1e-9 && worst_eig >= -1e-12;
  return {ok, fmt("linearity gap %.2e, min eigenvalue %.2e", worst_lin, worst_eig)};
}

/// d_D, d_A, d_c must match the directional derivative of their criterion
/// along (e_u - w): d_D = +d/da log det I, d_A/d_c = -d/da phi. rel tol 1e-4.
inline PropResult dispersion_fd() {
  GridTables t = GridTables::build(DesignGrid(61), ModelParams(0.07, 0.93, 0.96), CostModel(0.2));
  std::vector<double> w(61, 0.0);
  w[0] = 0.5;
  w[9] = 0.2;
  w[60] = 0.3;
  const double a = 1e-5;
  double worst = 0;
  std::string worst_at;
  for (const CriterionSpec& spec :
       {CriterionSpec::D(), CriterionSpec::A(), CriterionSpec::C({0, 1, 1})}) {
    auto val = [&](const std::vector<double>& ww) {
      Sym3 info = info_matrix(ww, t);
      return spec.kind == Crit::D ? std::log(info.det()) : -objective(spec, info);
    };
    std::vector<double> d = dispersion_all(spec, w, t);
    for (int u : {0, 4, 9, 24, 40, 60}) {
      std::vector<double> wp = w, wm = w;
      for (int i = 0; i < 61; ++i) {
        wp[i] += a * ((i == u ? 1.0 : 0.0) - w[i]);
        wm[i] -= a * ((i == u ? 1.0 : 0.0) - w[i]);
      }
      double fd = (val(wp) - val(wm)) / (2 * a);
      double rel = std::abs(fd - d[u]) / std::max(1e-9, std::abs(fd));
      if (rel > worst) {
        worst = rel;
        worst_at = std::string(crit_name(spec.kind)) + "/u=" + std::to_string(u + 1);
      }
    }
  }
  return {worst <= 1e-4, "dispersion vs FD worst rel err " + fmt("%.2e at ", worst) + worst_at};
}

/// Whenever the D-optimal design has exactly three support points its weights
/// must be uniform (Caratheodory bound for a 3-parameter model).
inline PropResult d_equal_weights() {
  SolverConfig cfg;
  for (int M : {61, 150})
    for (double q : {0.0, 0.2, 0.8}) {
      GridTables t = GridTables::build(DesignGrid(M), ModelParams(0.07, 0.93, 0.96), CostModel(q));
      SolveReport r = solve_oad(CriterionSpec::D(), t, cfg);
      auto sup = support(r.design, cfg.prune_tol);
      if (sup.size() != 3) continue;
      for (auto& [x, wv] : sup)
        if (std::abs(wv - 1.0 / 3.0) > 1e-4)
          return {false, fmt("M dev %.2e (w=%.6f)", std::abs(wv - 1.0 / 3.0), wv)};
    }
  return {true, "all 3-point D-optima uniform to 1e-4"};
}

/// Continuous solver vs exhaustive search at M=6 (supports of size <= 3 on a
/// 1/200 weight grid, plus all supports on a 1/20 grid). Gap <= 1e-3 relative.
inline PropResult brute_force_m6() {
  GridTables t = GridTables::build(DesignGrid(6), ModelParams(0.07, 0.93, 0.96), CostModel(0.2));
  SolverConfig cfg;
  double worst = 0;
  std::string worst_at;
  for (const CriterionSpec& spec : {CriterionSpec::D(), CriterionSpec::A(),
                                    CriterionSpec::C({0, 1, 1}), CriterionSpec::E()}) {
    double brute = kInf;
    std::vector<double> w(6);
    // supports of size <= 3, weight grid 1/200
    for (int i = 0; i < 6; ++i)
      for (int j = i; j < 6; ++j)
        for (int k = j; k < 6; ++k)
          for (int a = 0; a <= 200; ++a)
            for (int b = 0; a + b <= 200; ++b) {
              std::fill(w.begin(), w.end(), 0.0);
              w[i] += a / 200.0;
              w[j] += b / 200.0;
              w[k] += (200 - a - b) / 200.0;
              brute = std::min(brute, objective(spec, info_matrix(w, t)));
            }
    // all six points, weight grid 1/20
    for (int a = 0; a <= 20; ++a)
      for (int b = 0; a + b <= 20; ++b)
        for (int c = 0; a + b + c <= 20; ++c)
          for (int d = 0; a + b + c + d <= 20; ++d)
            for (int e = 0; a + b + c + d + e <= 20; ++e) {
              w = {a / 20.0, b / 20.0, c / 20.0, d / 20.0, e / 20.0,
                   (20 - a - b - c - d - e) / 20.0};
              brute = std::min(brute, objective(spec, info_matrix(w, t)));
            }
    SolveReport r =
        spec.kind == Crit::E ? solve_e_optimal(t, cfg) : solve_oad(spec, t, cfg);
    // the continuous optimum can only be better; the grid gap must be small
    double gap = (brute - r.objective) / std::abs(brute);
    if (r.objective > brute + 1e-9 * std::abs(brute))
      return {false, std::string("solver above brute-force at ") + crit_name(spec.kind)};
    if (gap > worst) {
      worst = gap;
      worst_at = crit_name(spec.kind);
    }
  }
  return {worst <= 1e-3, "brute-force gap " + fmt("%.2e at ", worst) + worst_at};
}

/// Rounding vs exhaustive enumeration of every exact design at M=8:
/// fixed n=6 (q=0) and budget C=30 (q=0.2). Gap <= 0.5%.
inline PropResult brute_force_m8() {
  SolverConfig cfg;
  ExpansionConfig exp2;
  double worst = 0;
  std::string worst_at;
  for (int mode = 0; mode < 2; ++mode) {
    double q = mode == 0 ? 0.0 : 0.2;
    GridTables t = GridTables::build(DesignGrid(8), ModelParams(0.07, 0.93, 0.96), CostModel(q));
    for (const CriterionSpec& spec : {CriterionSpec::D(), CriterionSpec::A()}) {
      SolveReport r = solve_oad(spec, t, cfg);
      RoundingObjective obj = RoundingObjective::single(spec);
      double denom = mode == 0 ? 6.0 : 30.0;
      auto [ed, tr] = mode == 0 ? round_fixed_n(r.design, 6, obj, t, exp2)
                                : round_budget(r.design, 30.0, obj, t, exp2);
      // exhaustive DFS over all replicate vectors within the budget
      double brute = kInf;
      std::vector<long> n(8, 0);
      auto rec = [&](auto&& self, int x, double left) -> void {
        if (x == 8) {
          if (mode == 0 && left > 1e-9) return;  // fixed n spends exactly
          std::vector<std::pair<int, long>> pts;
          for (int i = 0; i < 8; ++i)
            if (n[i] > 0) pts.emplace_back(i + 1, n[i]);
          if (pts.empty()) return;
          brute = std::min(brute, exact_objective(obj, pts, t, denom));
          return;
        }
        double c = t.cost[x];
        for (long k = 0; k * c <= left + 1e-9; ++k) {
          n[x] = k;
          self(self, x + 1, left - k * c);
        }
        n[x] = 0;
      };
      rec(rec, 0, denom);
      double gap = (tr.objective - brute) / std::abs(brute);
      if (gap > worst) {
        worst = gap;
        worst_at = std::string(mode == 0 ? "n=6/" : "C=30/") + crit_name(spec.kind);
      }
      if (brute > tr.objective + 1e-9 * std::abs(brute))
        return {false, "enumeration beat by search at " + worst_at};
    }
  }
  return {worst <= 0.005, "exact-design gap " + fmt("%.2e at ", worst) + worst_at};
}

/// Wider candidate expansion can only improve the searched objective.
inline PropResult expansion_dominance() {
  GridTables t = GridTables::build(DesignGrid(61), ModelParams(0.07, 0.93, 0.96), CostModel(0.2));
  SolverConfig cfg;
  SolveReport r = solve_oad(CriterionSpec::D(), t, cfg);
  RoundingObjective obj = RoundingObjective::single(CriterionSpec::D());
  double prev = kInf;
  for (int radius : {0, 1, 2}) {
    ExpansionConfig e;
    e.radius = radius;
    auto [ed, tr] = round_budget(r.design, 60.0, obj, t, e);
    if (tr.objective > prev + 1e-12)
      return {false, fmt("radius widening worsened objective by %.2e", tr.objective - prev)};
    prev = tr.objective;
  }
  return {true, "objective monotone over radius 0 >= 1 >= 2"};
}

/// Cost-bound pruning must not change the search outcome.
inline PropResult pruning_soundness() {
  GridTables t = GridTables::build(DesignGrid(61), ModelParams(0.07, 0.93, 0.96), CostModel(0.2));
  SolverConfig cfg;
  SolveReport r = solve_oad(CriterionSpec::A(), t, cfg);
  auto sup = support(r.design, cfg.prune_tol);
  RoundingObjective obj = RoundingObjective::single(CriterionSpec::A());
  const double C = 40.0;
  std::vector<std::pair<int, long>> base;
  std::vector<int> cands;
  std::vector<long> caps;
  double spent = 0;
  for (auto& [x, wv] : sup) {
    long flr = static_cast<long>(std::floor(C * wv / t.cost[x - 1]));
    base.emplace_back(x, flr);
    spent += flr * t.cost[x - 1];
    for (int dx = -1; dx <= 1; ++dx)
      if (x + dx >= 1 && x + dx <= 61) cands.push_back(x + dx);
  }
  std::sort(cands.begin(), cands.end());
  cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
  double rem = C - spent;
  for (int x : cands) caps.push_back(static_cast<long>(std::floor(rem / t.cost[x - 1] + 1e-9)));
  auto with = allocation_search(cands, caps, rem, obj, base, t, C, false, 5000000, true);
  auto without = allocation_search(cands, caps, rem, obj, base, t, C, false, 5000000, false);
  bool same = with == without;
  double ow = exact_objective(obj, with, t, C), on = exact_objective(obj, without, t, C);
  return {same && ow == on, fmt("pruned obj %.12g vs unpruned %.12g", ow, on)};
}

/// The maximin design's worst efficiency must dominate 1000 seeded random
/// designs.
inline PropResult maximin_dominance() {
  GridTables t = GridTables::build(DesignGrid(61), ModelParams(0.07, 0.93, 0.96), CostModel(0.0));
  SolverConfig cfg;
  MaximinSpec spec = make_maximin_spec({CriterionSpec::D(), CriterionSpec::A()}, t, cfg);
  MaximinSolution sol = solve_maximin(spec, t, cfg);
  auto min_eff = [&](const std::vector<double>& w) {
    double m = kInf;
    Sym3 info = info_matrix(w, t);
    for (const auto& a : spec.criteria)
      m = std::min(m, efficiency_from_values(a.spec.kind, a.anchor, objective(a.spec, info)));
    return m;
  };
  double ours = min_eff(sol.design.w);
  std::mt19937 rng(12345);
  std::uniform_int_distribution<int> npts(2, 8);
  std::uniform_int_distribution<int> pick(0, 60);
  std::exponential_distribution<double> expo(1.0);
  double best_random = -kInf;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> w(61, 0.0);
    int k = npts(rng);
    double s = 0;
    for (int i = 0; i < k; ++i) {
      double v = expo(rng);
      w[pick(rng)] += v;
      s += v;
    }
    for (double& v : w) v /= s;
    best_random = std::max(best_random, min_eff(w));
  }
  return {best_random <= ours + 1e-9,
          fmt("maximin min-eff %.6f vs best of 1000 random %.6f", ours, best_random)};
}

}  // namespace gtd::checks
