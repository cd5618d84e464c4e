#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <string>

#include "gtdesign/gtdesign.h"

namespace {

const char* kOad61 =
    R"({"task":"oad","model":{"p0":0.07,"p1":0.93,"p2":0.96},"cost":{"q":0},)"
    R"("grid":{"M":61},"criteria":[{"kind":"D"}]})";

}  // namespace

TEST_CASE("version and schema accessors") {
  CHECK(std::string(gtd_version()) == "1.0.0");
  CHECK(gtd_schema_version() == 1);
}

TEST_CASE("parse errors surface a status and a message") {
  gtd_problem* p = nullptr;
  CHECK(gtd_problem_parse("{not json", &p) == GTD_ERR_INVALID_INPUT);
  CHECK(p == nullptr);
  CHECK(std::strlen(gtd_last_error()) > 0);
  CHECK(gtd_problem_parse(nullptr, &p) == GTD_ERR_INVALID_INPUT);
  CHECK(gtd_problem_parse(R"({"task":"oad"})", &p) == GTD_ERR_INVALID_INPUT);
}

TEST_CASE("solve through the C surface") {
  gtd_problem* p = nullptr;
  REQUIRE(gtd_problem_parse(kOad61, &p) == GTD_OK);
  CHECK(std::string(gtd_problem_task(p)) == "oad");
  CHECK(std::string(gtd_problem_output(p)).empty());

  gtd_result* r = nullptr;
  REQUIRE(gtd_problem_run(p, 1, &r) == GTD_OK);
  CHECK(gtd_result_converged(r) == 1);
  CHECK(gtd_result_certified(r) == 1);

  char* json = nullptr;
  REQUIRE(gtd_result_to_json(r, -1, &json) == GTD_OK);
  // records parse back and re-verify through the same surface
  gtd_result* back = nullptr;
  REQUIRE(gtd_result_parse(json, &back) == GTD_OK);
  int certified = 0, matches = 0;
  CHECK(gtd_verify_record(back, &certified, &matches) == GTD_OK);
  CHECK(certified == 1);
  CHECK(matches == 1);

  char* csv = nullptr;
  REQUIRE(gtd_dispersion_csv(back, &csv) == GTD_OK);
  CHECK(std::string(csv).rfind("u,d_D", 0) == 0);

  gtd_string_free(csv);
  gtd_string_free(json);
  gtd_result_free(back);
  gtd_result_free(r);
  gtd_problem_free(p);
}

TEST_CASE("patching replaces top-level fields and re-validates") {
  gtd_problem* p = nullptr;
  REQUIRE(gtd_problem_parse(kOad61, &p) == GTD_OK);
  gtd_problem* patched = nullptr;
  REQUIRE(gtd_problem_patch(p, R"({"grid":{"M":150},"output":"r.json"})", &patched) == GTD_OK);
  CHECK(std::string(gtd_problem_output(patched)) == "r.json");
  gtd_problem_free(patched);
  // a patch that breaks an invariant is rejected
  CHECK(gtd_problem_patch(p, R"({"grid":{"M":2}})", &patched) == GTD_ERR_INVALID_INPUT);
  CHECK(patched == nullptr);
  gtd_problem_free(p);
}

TEST_CASE("enumeration cap maps to the not-converged status") {
  gtd_problem* p = nullptr;
  const char* round =
      R"({"task":"round","model":{"p0":0.07,"p1":0.93,"p2":0.96},"cost":{"q":0.2},)"
      R"("grid":{"M":150},"criteria":[{"kind":"D"}],"budget":100,)"
      R"("rounding":{"enum_cap":1}})";
  REQUIRE(gtd_problem_parse(round, &p) == GTD_OK);
  gtd_result* r = nullptr;
  CHECK(gtd_problem_run(p, 1, &r) == GTD_ERR_NOT_CONVERGED);
  CHECK(r == nullptr);
  gtd_problem_free(p);
}
