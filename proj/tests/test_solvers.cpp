#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "core/solvers.hpp"
#include "property_checks.hpp"

using namespace gtd;

namespace {
const ModelParams kTheta{0.07, 0.93, 0.96};
}

TEST_CASE("D-optimal design, M=61, equal per-observation cost") {
  GridTables t = GridTables::build(DesignGrid(61), kTheta, CostModel(0.0));
  SolveReport r = solve_oad(CriterionSpec::D(), t, SolverConfig{});
  REQUIRE(r.converged);
  auto sup = support(r.design);
  REQUIRE(sup.size() == 3);
  CHECK(sup[0].first == 1);
  CHECK(sup[1].first == 17);
  CHECK(sup[2].first == 61);
  for (auto& [x, w] : sup) CHECK(w == doctest::Approx(1.0 / 3.0).epsilon(3e-4));
  CHECK(r.objective == doctest::Approx(0.003038).epsilon(5e-3));
  VerifyResult v = verify_optimality(CriterionSpec::D(), r.design, t, 1e-5);
  CHECK(v.certified);
}

TEST_CASE("E-optimal design, M=150, q=0.8") {
  GridTables t = GridTables::build(DesignGrid(150), kTheta, CostModel(0.8));
  SolveReport r = solve_e_optimal(t, SolverConfig{});
  REQUIRE(r.converged);
  auto sup = support(r.design);
  REQUIRE(sup.size() == 3);
  CHECK(sup[0].first == 1);
  CHECK(sup[1].first == 8);
  CHECK(sup[2].first == 78);
  CHECK(r.objective < 0);  // -lambda_min of a PD matrix
}

TEST_CASE("certificates hold at delta=1e-5 with tiny support dispersions") {
  GridTables t = GridTables::build(DesignGrid(61), kTheta, CostModel(0.2));
  for (const CriterionSpec& spec :
       {CriterionSpec::A(), CriterionSpec::Ds(), CriterionSpec::C({0, 1, 1})}) {
    SolveReport r = solve_oad(spec, t, SolverConfig{});
    REQUIRE(r.converged);
    VerifyResult v = verify_optimality(spec, r.design, t, 1e-5);
    INFO(crit_name(spec.kind), " worst dispersion ", v.worst_value, " at u=", v.worst_u);
    CHECK(v.certified);
    auto d = dispersion_all(spec, r.design.w, t);
    for (auto& [x, w] : support(r.design)) CHECK(std::abs(d[x - 1]) <= 1e-6);
  }
}

TEST_CASE("solver matches exhaustive search on a tiny grid") {
  auto res = checks::brute_force_m6();
  INFO(res.detail);
  CHECK(res.ok);
}

TEST_CASE("three-point D-optima carry uniform weights") {
  auto res = checks::d_equal_weights();
  INFO(res.detail);
  CHECK(res.ok);
}

TEST_CASE("solver input validation") {
  CHECK_THROWS_AS(
      solve_oad(CriterionSpec::E(), kTheta, CostModel(0.0), DesignGrid(61), SolverConfig{}),
      invalid_input);
  SolverConfig bad;
  bad.certificate_tol = 0;
  CHECK_THROWS_AS(bad.validate(), invalid_input);
  CHECK_THROWS_AS(RobustSpec(-0.1), invalid_input);
}

TEST_CASE("robust E at rho=0 recovers the E-optimal design") {
  GridTables t = GridTables::build(DesignGrid(61), kTheta, CostModel(0.0));
  SolveReport e = solve_e_optimal(t, SolverConfig{});
  SolveReport r = solve_robust_e(RobustSpec(0.0), t, SolverConfig{});
  REQUIRE(r.converged);
  auto se = support(e.design), sr = support(r.design);
  REQUIRE(se.size() == sr.size());
  for (std::size_t i = 0; i < se.size(); ++i) {
    CHECK(se[i].first == sr[i].first);
    CHECK(se[i].second == doctest::Approx(sr[i].second).epsilon(1e-6));
  }
}

TEST_CASE("robust E penalty trades off lambda_min against concentration") {
  GridTables t = GridTables::build(DesignGrid(61), kTheta, CostModel(0.0));
  double prev_obj = kInf, prev_norm = kInf;
  for (double rho : {0.0, 0.001, 0.01}) {
    SolveReport r = solve_robust_e(RobustSpec(rho), t, SolverConfig{});
    REQUIRE(r.converged);
    double norm = 0;
    for (double w : r.design.w) norm += w * w;
    norm = std::sqrt(norm);
    CHECK(r.objective <= prev_obj + 1e-9);
    CHECK(norm <= prev_norm + 1e-9);
    prev_obj = r.objective;
    prev_norm = norm;
    VerifyResult v = verify_robust(RobustSpec(rho), r.design, t, 1e-5);
    CHECK(v.certified);
  }
}
