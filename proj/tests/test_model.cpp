#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "core/model.hpp"
#include "property_checks.hpp"

using namespace gtd;

namespace {
const ModelParams kTheta{0.07, 0.93, 0.96};
}

TEST_CASE("parameter domains are enforced") {
  CHECK_THROWS_AS(ModelParams(0.0, 0.93, 0.96), invalid_input);
  CHECK_THROWS_AS(ModelParams(1.0, 0.93, 0.96), invalid_input);
  CHECK_THROWS_AS(ModelParams(0.07, 0.5, 0.96), invalid_input);
  CHECK_THROWS_AS(ModelParams(0.07, 0.93, 1.01), invalid_input);
  CHECK_NOTHROW(ModelParams(0.07, 1.0, 1.0));
  CHECK_THROWS_AS(CostModel(-0.1), invalid_input);
  CHECK_THROWS_AS(CostModel(1.1), invalid_input);
  CHECK_THROWS_AS(DesignGrid(2), invalid_input);
  CHECK_THROWS_AS(DesignGrid(10001), invalid_input);
  CHECK_NOTHROW(DesignGrid(10000));
}

TEST_CASE("cost model") {
  CHECK(unit_cost(7, CostModel(0.0)) == 1.0);
  CHECK(unit_cost(5, CostModel(1.0)) == 5.0);
  CHECK(unit_cost(10, CostModel(0.2)) == doctest::Approx(2.8));
  CHECK(CostModel::from_raw(1.0, 1.0).q == doctest::Approx(0.5));
  CHECK(CostModel::from_raw(4.0, 1.0).q == doctest::Approx(0.2));
  CHECK_THROWS_AS(CostModel::from_raw(0.0, 0.0), invalid_input);
}

TEST_CASE("response probability and weight") {
  // pi(x) = p1 - (p1 + p2 - 1)(1 - p0)^x
  CHECK(positive_prob(1, kTheta) == doctest::Approx(0.93 - 0.89 * 0.93).epsilon(1e-12));
  // pi is increasing in x toward p1
  double prev = 0;
  for (int x = 1; x <= 200; ++x) {
    double pi = positive_prob(x, kTheta);
    CHECK(pi > prev);
    CHECK(pi < 0.93);
    prev = pi;
  }
  CHECK(survival_pow(0.07, 10) == doctest::Approx(std::pow(0.93, 10)).epsilon(1e-13));
  CostModel cm(0.2);
  double pi = positive_prob(4, kTheta);
  CHECK(weight_fn(4, kTheta, cm) ==
        doctest::Approx(1.0 / (unit_cost(4, cm) * pi * (1 - pi))).epsilon(1e-13));
}

TEST_CASE("regressor is the gradient of the response probability") {
  auto res = checks::regressor_fd();
  INFO(res.detail);
  CHECK(res.ok);
}

TEST_CASE("information matrix: frozen values, linearity, PSD") {
  GridTables t = GridTables::build(DesignGrid(61), kTheta, CostModel(0.2));
  std::vector<double> w(61, 0.0);
  w[0] = 0.5;
  w[9] = 0.2;
  w[60] = 0.3;
  Sym3 I = info_matrix(w, t);
  CHECK(I.a00 == doctest::Approx(10.5934173926606).epsilon(1e-11));
  CHECK(I.a01 == doctest::Approx(1.23665895892094).epsilon(1e-11));
  CHECK(I.a02 == doctest::Approx(-5.14953227639134).epsilon(1e-11));
  CHECK(I.a11 == doctest::Approx(0.406641320627402).epsilon(1e-11));
  CHECK(I.a12 == doctest::Approx(-0.429472699300193).epsilon(1e-11));
  CHECK(I.a22 == doctest::Approx(4.77597382915099).epsilon(1e-11));

  auto res = checks::info_linearity_psd();
  INFO(res.detail);
  CHECK(res.ok);
}

TEST_CASE("design validation and support extraction") {
  CHECK_THROWS_AS(Design(3, {0.5, 0.5}), invalid_input);
  CHECK_THROWS_AS(Design(3, {0.5, 0.6, -0.1}), invalid_input);
  CHECK_THROWS_AS(Design(3, {0.5, 0.4, 0.2}), invalid_input);
  Design d(4, {0.5, 1e-8, 0.0, 0.49999999});
  auto sup = support(d, 1e-6);
  REQUIRE(sup.size() == 2);
  CHECK(sup[0].first == 1);
  CHECK(sup[1].first == 4);
  // renormalized after pruning the dust point
  CHECK(sup[0].second + sup[1].second == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(support(d, 0.02), invalid_input);
  Design pm = Design::point_mass(5, 3);
  CHECK(pm.w[2] == 1.0);
}

TEST_CASE("custom grid tables plug into the same pipeline") {
  // a toy model: lambda = 1, f = (1, x, x^2) gives the classic quadratic moments
  GridTables t = GridTables::build_custom(
      DesignGrid(3), [](int) { return 1.0; },
      [](int x) { return Vec3{1.0, double(x), double(x) * x}; }, [](int) { return 1.0; });
  std::vector<double> w = {0.5, 0.0, 0.5};
  Sym3 I = info_matrix(w, t);
  CHECK(I.a00 == doctest::Approx(1.0));
  CHECK(I.a01 == doctest::Approx(2.0));   // E[x]
  CHECK(I.a11 == doctest::Approx(5.0));   // E[x^2]
  CHECK(I.a22 == doctest::Approx(41.0));  // E[x^4]
}
