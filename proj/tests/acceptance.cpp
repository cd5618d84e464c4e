// Acceptance gate: one line per criterion, nonzero exit on any failure.
// Run with the build tree's working directory; takes no arguments.

#include <chrono>
#include <cstdio>
#include <string>
#include <thread>
#include <vector>

#include "io/tables.hpp"
#include "property_checks.hpp"

using namespace gtd;

namespace {

int g_failures = 0;

void report(int criterion, const char* what, bool ok, const std::string& detail) {
  std::printf("criterion %d: %s — %s%s%s\n", criterion, ok ? "PASS" : "FAIL", what,
              detail.empty() ? "" : ": ", detail.c_str());
  if (!ok) ++g_failures;
}

int threads() {
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

/// pass/fail over a subset of a reproduction report, with failing cells named
std::pair<bool, std::string> cells_verdict(const ReproduceReport& rep, bool eff_cells) {
  bool ok = true;
  std::string bad;
  int shown = 0;
  for (const auto& c : rep.cells) {
    bool is_eff = c.cell.rfind("eff_", 0) == 0;
    if (is_eff != eff_cells) continue;
    if (c.pass) continue;
    ok = false;
    if (shown++ < 3) bad += (bad.empty() ? "" : ", ") + c.instance + " " + c.cell;
  }
  return {ok, ok ? std::to_string(rep.cells.size()) + " cells checked" : "failing: " + bad};
}

ProblemFile table1_problem(const ExpectedDesignRow& row) {
  ProblemFile p;
  p.task = Task::Oad;
  p.cost = CostModel(row.q);
  p.M = row.M;
  std::string k = row.crit;
  p.criteria = {k == "D"    ? CriterionSpec::D()
                : k == "A"  ? CriterionSpec::A()
                : k == "Ds" ? CriterionSpec::Ds()
                : k == "c"  ? CriterionSpec::C({0, 1, 1})
                            : CriterionSpec::E()};
  return p;
}

}  // namespace

int main() {
  const int nthreads = threads();

  // 1 + 2: Table 1 designs, objectives and certificates; efficiency cross-table
  ReproduceReport t1 = reproduce("table1", nthreads);
  double slowest = 0;
  for (const auto& row : table1_rows()) {
    auto start = std::chrono::steady_clock::now();
    run_problem(table1_problem(row));
    slowest = std::max(slowest,
                       std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                           .count());
  }
  {
    auto [ok, detail] = cells_verdict(t1, false);
    bool fast = slowest < 5.0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "; slowest solve %.2fs", slowest);
    report(1, "single-criterion designs reproduce the published table", ok && fast,
           detail + buf);
  }
  {
    auto [ok, detail] = cells_verdict(t1, true);
    report(2, "efficiency cross-table within 0.01", ok, detail);
  }

  // 3: optimality certificates at delta = 1e-5, |d| <= 1e-6 on support
  {
    bool ok = true;
    std::string bad;
    for (const auto& row : table1_rows()) {
      ProblemFile p = table1_problem(row);
      GridTables t = GridTables::build(DesignGrid(p.M), p.model, p.cost);
      ResultRecord rec = run_problem(p);
      Design d = rec.design();
      VerifyResult v = verify_optimality(p.criteria[0], d, t, 1e-5);
      auto disp = dispersion_all(p.criteria[0], d.w, t);
      bool row_ok = v.certified;
      for (auto& [x, wv] : support(d)) row_ok = row_ok && std::abs(disp[x - 1]) <= 1e-6;
      if (!row_ok && ok) bad = std::string(row.crit) + "/M" + std::to_string(row.M);
      ok = ok && row_ok;
    }
    report(3, "every design certified, support dispersions at machine scale", ok, bad);
  }

  // 4: Table 2 maximin designs
  {
    ReproduceReport t2 = reproduce("table2", nthreads);
    auto [ok, detail] = cells_verdict(t2, false);
    report(4, "maximin designs reproduce the published table", ok, detail);
  }

  // 5: the certificate LP at the triple-objective showcase instance
  {
    GridTables t = GridTables::build(DesignGrid(150), ModelParams(0.07, 0.93, 0.96),
                                     CostModel(0.2));
    SolverConfig cfg;
    MaximinSpec spec =
        make_maximin_spec({CriterionSpec::D(), CriterionSpec::A(), CriterionSpec::Ds()}, t, cfg);
    MaximinSolution sol = solve_maximin(spec, t, cfg);
    auto cert = verify_maximin(sol, spec, t, 1e-5, 1e-5);
    bool ok = sol.converged && cert.has_value() && std::abs(sol.t_star - 1.170) < 0.005;
    std::string detail;
    if (cert) {
      double sum = 0;
      for (double e : cert->eta) sum += e;
      ok = ok && std::abs(sum - 3.405) <= 0.05 * 3.405;
      // the published multipliers must satisfy the same constraints (their
      // three printed digits allow a small feasibility slop)
      const double eta_pub[3] = {0.0, 0.183, 3.222};
      double gsum = 0, agg_max = -kInf;
      std::vector<std::vector<double>> disp;
      for (int j = 0; j < 3; ++j) {
        gsum += eta_pub[j] * g_fn(spec.criteria[j], sol.t_star);
        disp.push_back(dispersion_all(spec.criteria[j].spec, sol.design.w, t));
      }
      for (int u = 0; u < t.M; ++u) {
        double a = 0;
        for (int j = 0; j < 3; ++j) a += eta_pub[j] * disp[j][u];
        agg_max = std::max(agg_max, a);
      }
      ok = ok && std::abs(gsum - 1.0) < 2e-3 && agg_max <= 1e-5 + 5e-3;
      char buf[128];
      std::snprintf(buf, sizeof buf,
                    "t*=%.4f, sum(eta)=%.3f, published-eta gsum=%.4f aggmax=%.1e", sol.t_star,
                    sum, gsum, agg_max);
      detail = buf;
    }
    report(5, "equivalence-theorem LP certifies the D-A-Ds design", ok, detail);
  }

  // 6-8: exact-design tables and the penalized E family
  for (auto [criterion, table, what] :
       {std::tuple<int, const char*, const char*>{6, "table3",
                                                  "budget rounding reproduces the published table"},
        {7, "table4", "multi-objective exact designs reproduce the published table"},
        {8, "robust-e", "penalized E designs: rho=0 match and monotone trade-off"}}) {
    ReproduceReport rep = reproduce(table, nthreads);
    auto [ok, detail] = cells_verdict(rep, false);
    report(criterion, what, ok, detail);
  }

  // 9: model-free properties
  {
    struct Named {
      const char* name;
      checks::PropResult (*fn)();
    };
    const Named props[] = {
        {"regressor-gradient", checks::regressor_fd},
        {"info-linearity-psd", checks::info_linearity_psd},
        {"dispersion-derivative", checks::dispersion_fd},
        {"d-equal-weights", checks::d_equal_weights},
        {"brute-force-m6", checks::brute_force_m6},
        {"brute-force-m8", checks::brute_force_m8},
        {"expansion-dominance", checks::expansion_dominance},
        {"pruning-soundness", checks::pruning_soundness},
        {"maximin-dominance", checks::maximin_dominance},
    };
    bool ok = true;
    std::string detail;
    for (const auto& pr : props) {
      checks::PropResult res = pr.fn();
      if (!res.ok) {
        ok = false;
        detail += (detail.empty() ? "" : "; ") + std::string(pr.name) + ": " + res.detail;
      }
    }
    if (ok) detail = "9 properties hold";
    report(9, "property suite", ok, detail);
  }

  return g_failures;
}
