#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "core/maximin.hpp"
#include "property_checks.hpp"

using namespace gtd;

namespace {
const ModelParams kTheta{0.07, 0.93, 0.96};
}

TEST_CASE("dual-objective D-A design, M=150, equal cost") {
  GridTables t = GridTables::build(DesignGrid(150), kTheta, CostModel(0.0));
  SolverConfig cfg;
  MaximinSpec spec = make_maximin_spec({CriterionSpec::D(), CriterionSpec::A()}, t, cfg);
  MaximinSolution sol = solve_maximin(spec, t, cfg);
  REQUIRE(sol.converged);
  auto sup = support(sol.design);
  REQUIRE(sup.size() == 3);
  CHECK(sup[0].first == 1);
  CHECK(sup[1].first == 19);
  CHECK(sup[2].first == 150);
  CHECK(std::abs(sup[0].second - 0.409) < 0.002);
  CHECK(std::abs(sup[1].second - 0.251) < 0.002);
  CHECK(std::abs(sup[2].second - 0.339) < 0.002);
  CHECK(std::abs(sol.min_eff - 0.981) < 0.002);
  // worst criterion attains the maximin value
  double worst = kInf;
  for (double e : sol.efficiencies) worst = std::min(worst, e);
  CHECK(worst == doctest::Approx(sol.min_eff).epsilon(1e-6));
  CHECK(verify_maximin(sol, spec, t).has_value());
}

TEST_CASE("triple-objective D-A-Ds certificate, M=150, q=0.2") {
  GridTables t = GridTables::build(DesignGrid(150), kTheta, CostModel(0.2));
  SolverConfig cfg;
  MaximinSpec spec =
      make_maximin_spec({CriterionSpec::D(), CriterionSpec::A(), CriterionSpec::Ds()}, t, cfg);
  MaximinSolution sol = solve_maximin(spec, t, cfg);
  REQUIRE(sol.converged);
  CHECK(std::abs(sol.t_star - 1.170) < 0.005);
  CHECK(std::abs(sol.min_eff - 0.855) < 0.002);
  auto cert = verify_maximin(sol, spec, t);
  REQUIRE(cert.has_value());
  REQUIRE(cert->eta.size() == 3);
  double sum = cert->eta[0] + cert->eta[1] + cert->eta[2];
  CHECK(sum == doctest::Approx(0.183 + 3.222).epsilon(0.05));
  // the eta mix must price the efficiency constraint exactly
  double gsum = 0;
  for (int j = 0; j < 3; ++j) gsum += cert->eta[j] * g_fn(spec.criteria[j], sol.t_star);
  CHECK(gsum == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("single criterion degenerates to the anchor design") {
  GridTables t = GridTables::build(DesignGrid(61), kTheta, CostModel(0.0));
  SolverConfig cfg;
  MaximinSpec spec = make_maximin_spec({CriterionSpec::D()}, t, cfg);
  MaximinSolution sol = solve_maximin(spec, t, cfg);
  CHECK(sol.converged);
  CHECK(sol.min_eff == doctest::Approx(1.0).epsilon(1e-6));
  REQUIRE(sol.efficiencies.size() == 1);
  CHECK(sol.efficiencies[0] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("maximin transforms h and g are consistent") {
  // h_j(t) is increasing and g_j = d/dt of the efficiency-slack scaling
  AnchoredCriterion aD(CriterionSpec::D(), 0.5), aA(CriterionSpec::A(), 2.0),
      aE(CriterionSpec::E(), -1.5);
  for (const AnchoredCriterion& a : {aD, aA, aE}) {
    double h1 = h_fn(a, 1.1), h2 = h_fn(a, 1.3);
    CHECK(h2 > h1);
    double t0 = 1.2, h = 1e-6;
    double fd = (h_fn(a, t0 + h) - h_fn(a, t0 - h)) / (2 * h);
    CHECK(fd == doctest::Approx(g_fn(a, t0)).epsilon(1e-7));
  }
}

TEST_CASE("maximin design dominates random designs") {
  auto res = checks::maximin_dominance();
  INFO(res.detail);
  CHECK(res.ok);
}

TEST_CASE("certificate tolerances are validated") {
  GridTables t = GridTables::build(DesignGrid(61), kTheta, CostModel(0.0));
  SolverConfig cfg;
  MaximinSpec spec = make_maximin_spec({CriterionSpec::D(), CriterionSpec::A()}, t, cfg);
  MaximinSolution sol = solve_maximin(spec, t, cfg);
  CHECK_THROWS_AS(verify_maximin(sol, spec, t, 0.0, 1e-5), invalid_input);
  CHECK_THROWS_AS((MaximinSpec{{}}), invalid_input);
}
