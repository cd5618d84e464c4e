#include "io/problem.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstdlib>

#include "json.hpp"

namespace gtd {
namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void bad(const std::string& msg) { throw invalid_input(msg); }

void check_keys(const json& j, const std::string& where,
                std::initializer_list<const char*> allowed) {
  if (!j.is_object()) bad(where + " must be a JSON object");
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (item.key() == a) {
        ok = true;
        break;
      }
    if (!ok) bad("unknown key '" + item.key() + "' in " + where);
  }
}

double need_num(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) bad(where + " is missing '" + key + "'");
  if (!j[key].is_number()) bad(where + "." + key + " must be a number");
  return j[key].get<double>();
}

long need_int(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key) || !j[key].is_number_integer())
    bad(where + "." + key + " must be an integer");
  return j[key].get<long>();
}

CriterionSpec parse_criterion(const json& j, const std::string& where) {
  check_keys(j, where, {"kind", "c"});
  if (!j.contains("kind") || !j["kind"].is_string()) bad(where + ".kind must be a string");
  auto k = crit_from_name(j["kind"].get<std::string>());
  if (!k) bad(where + ".kind must be one of D, A, Ds, c, E");
  if (*k == Crit::C) {
    if (!j.contains("c") || !j["c"].is_array() || j["c"].size() != 3)
      bad(where + " with kind 'c' needs a length-3 'c' vector");
    Vec3 c{j["c"][0].get<double>(), j["c"][1].get<double>(), j["c"][2].get<double>()};
    return CriterionSpec::C(c);
  }
  if (j.contains("c")) bad(where + ".c is only valid for the c-criterion");
  switch (*k) {
    case Crit::D: return CriterionSpec::D();
    case Crit::A: return CriterionSpec::A();
    case Crit::Ds: return CriterionSpec::Ds();
    default: return CriterionSpec::E();
  }
}

json criterion_json(const CriterionSpec& spec) {
  json j{{"kind", crit_name(spec.kind)}};
  if (spec.kind == Crit::C) j["c"] = {spec.direction.x[0], spec.direction.x[1], spec.direction.x[2]};
  return j;
}

json pairs_json_d(const std::vector<std::pair<int, double>>& v) {
  json a = json::array();
  for (auto [x, w] : v) a.push_back({x, sig12(w)});
  return a;
}

json pairs_json_l(const std::vector<std::pair<int, long>>& v) {
  json a = json::array();
  for (auto [x, n] : v) a.push_back({x, n});
  return a;
}

std::vector<std::pair<int, double>> pairs_parse_d(const json& j, const std::string& where) {
  if (!j.is_array()) bad(where + " must be an array of [x, value] pairs");
  std::vector<std::pair<int, double>> out;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2) bad(where + " entries must be [x, value] pairs");
    out.emplace_back(e[0].get<int>(), e[1].get<double>());
  }
  return out;
}

std::vector<std::pair<int, long>> pairs_parse_l(const json& j, const std::string& where) {
  std::vector<std::pair<int, long>> out;
  for (auto [x, v] : pairs_parse_d(j, where)) out.emplace_back(x, static_cast<long>(v));
  return out;
}

json nums_json(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(sig12(x));
  return a;
}

}  // namespace

const char* task_name(Task t) {
  switch (t) {
    case Task::Oad: return "oad";
    case Task::Maximin: return "maximin";
    case Task::Round: return "round";
    case Task::RobustE: return "robust-e";
  }
  return "?";
}

std::optional<Task> task_from_name(const std::string& s) {
  if (s == "oad") return Task::Oad;
  if (s == "maximin") return Task::Maximin;
  if (s == "round") return Task::Round;
  if (s == "robust-e") return Task::RobustE;
  return std::nullopt;
}

double sig12(double v) {
  if (!std::isfinite(v) || v == 0.0) return v;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.11e", v);
  return std::strtod(buf, nullptr);
}

std::string fnv1a_hex(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

ProblemFile ProblemFile::parse(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    bad(std::string("problem file is not valid JSON: ") + e.what());
  }
  check_keys(j, "problem", {"schema", "task", "model", "cost", "grid", "criteria", "rho",
                            "budget", "sample_size", "rounding", "solver", "output"});
  if (j.contains("schema") && need_int(j, "schema", "problem") != kRecordSchema)
    bad("unsupported schema version");
  if (!j.contains("task") || !j["task"].is_string()) bad("problem.task must be a string");
  auto task = task_from_name(j["task"].get<std::string>());
  if (!task) bad("problem.task must be one of oad, maximin, round, robust-e");

  if (!j.contains("model")) bad("problem is missing 'model'");
  check_keys(j["model"], "model", {"p0", "p1", "p2"});
  ModelParams model(need_num(j["model"], "p0", "model"), need_num(j["model"], "p1", "model"),
                    need_num(j["model"], "p2", "model"));

  CostModel cost(0.0);
  if (j.contains("cost")) {
    check_keys(j["cost"], "cost", {"q", "q0", "q1"});
    if (j["cost"].contains("q")) {
      if (j["cost"].contains("q0") || j["cost"].contains("q1"))
        bad("cost takes either q or the raw pair (q0, q1), not both");
      cost = CostModel(need_num(j["cost"], "q", "cost"));
    } else {
      cost = CostModel::from_raw(need_num(j["cost"], "q0", "cost"),
                                 need_num(j["cost"], "q1", "cost"));
    }
  }

  if (!j.contains("grid")) bad("problem is missing 'grid'");
  check_keys(j["grid"], "grid", {"M"});
  int M = static_cast<int>(need_int(j["grid"], "M", "grid"));
  DesignGrid grid(M);  // validates the range

  ProblemFile p;
  p.task = *task;
  p.model = model;
  p.cost = cost;
  p.M = grid.M;

  if (j.contains("criteria")) {
    if (p.task == Task::RobustE) bad("robust-e fixes the E-criterion; omit 'criteria'");
    if (!j["criteria"].is_array() || j["criteria"].empty())
      bad("problem.criteria must be a non-empty array");
    for (const auto& c : j["criteria"]) p.criteria.push_back(parse_criterion(c, "criterion"));
  } else if (p.task != Task::RobustE) {
    bad("problem is missing 'criteria'");
  }
  if (p.task == Task::Oad && p.criteria.size() != 1)
    bad("oad takes exactly one criterion");
  if (p.task == Task::Maximin && p.criteria.size() < 2)
    bad("maximin needs at least two criteria; use oad for a single one");

  if (j.contains("rho")) {
    if (p.task != Task::RobustE) bad("rho is only valid for robust-e");
    p.rho = need_num(j, "rho", "problem");
    RobustSpec check(p.rho);  // validates rho >= 0
    (void)check;
  }

  if (j.contains("budget")) {
    if (p.task != Task::Round) bad("budget is only valid for round");
    p.budget = need_num(j, "budget", "problem");
  }
  if (j.contains("sample_size")) {
    if (p.task != Task::Round) bad("sample_size is only valid for round");
    p.sample_size = need_int(j, "sample_size", "problem");
  }
  if (p.task == Task::Round && p.budget.has_value() == p.sample_size.has_value())
    bad("round takes exactly one of budget or sample_size");

  if (j.contains("rounding")) {
    if (p.task != Task::Round) bad("rounding options are only valid for round");
    check_keys(j["rounding"], "rounding", {"radius", "enum_cap"});
    if (j["rounding"].contains("radius"))
      p.expansion.radius = static_cast<int>(need_int(j["rounding"], "radius", "rounding"));
    if (j["rounding"].contains("enum_cap"))
      p.expansion.enum_cap = need_int(j["rounding"], "enum_cap", "rounding");
    p.expansion.validate();
  }

  if (j.contains("solver")) {
    check_keys(j["solver"], "solver",
               {"certificate_tol", "max_iters", "prune_tol", "bisection_tol", "seed"});
    const json& s = j["solver"];
    if (s.contains("certificate_tol"))
      p.solver.certificate_tol = need_num(s, "certificate_tol", "solver");
    if (s.contains("max_iters")) p.solver.max_iters = need_int(s, "max_iters", "solver");
    if (s.contains("prune_tol")) p.solver.prune_tol = need_num(s, "prune_tol", "solver");
    if (s.contains("bisection_tol"))
      p.solver.bisection_tol = need_num(s, "bisection_tol", "solver");
    if (s.contains("seed"))
      p.solver.seed = static_cast<unsigned>(need_int(s, "seed", "solver"));
    p.solver.validate();
  }

  if (j.contains("output")) {
    if (!j["output"].is_string()) bad("problem.output must be a string");
    p.output = j["output"].get<std::string>();
  }
  return p;
}

std::string ProblemFile::to_json(int indent) const {
  json j;
  j["schema"] = kRecordSchema;
  j["task"] = task_name(task);
  j["model"] = {{"p0", model.p0}, {"p1", model.p1}, {"p2", model.p2}};
  j["cost"] = {{"q", cost.q}};
  j["grid"] = {{"M", M}};
  if (task != Task::RobustE) {
    json cs = json::array();
    for (const auto& c : criteria) cs.push_back(criterion_json(c));
    j["criteria"] = cs;
  } else {
    j["rho"] = rho;
  }
  if (task == Task::Round) {
    if (budget) j["budget"] = *budget;
    if (sample_size) j["sample_size"] = *sample_size;
    j["rounding"] = {{"radius", expansion.radius}, {"enum_cap", expansion.enum_cap}};
  }
  j["solver"] = {{"certificate_tol", solver.certificate_tol},
                 {"max_iters", solver.max_iters},
                 {"prune_tol", solver.prune_tol},
                 {"bisection_tol", solver.bisection_tol},
                 {"seed", solver.seed}};
  if (!output.empty()) j["output"] = output;
  return j.dump(indent);
}

Design ResultRecord::design() const {
  std::vector<double> w(problem.M, 0.0);
  double s = 0;
  for (auto [x, wx] : support) {
    if (x < 1 || x > problem.M) throw invalid_input("support point outside the grid");
    w[x - 1] = wx;
    s += wx;
  }
  if (!(s > 0)) throw invalid_input("record support is empty");
  for (double& v : w) v /= s;
  return Design(problem.M, std::move(w));
}

std::string ResultRecord::to_json(int indent) const {
  json j;
  j["schema"] = schema;
  j["tool_version"] = tool_version;
  j["config_hash"] = config_hash;
  j["problem"] = json::parse(problem.to_json());
  if (!support.empty()) j["support"] = pairs_json_d(support);
  if (exact) {
    j["exact"] = {{"points", pairs_json_l(exact->points)},
                  {"realized_cost", sig12(exact->realized_cost)},
                  {"realized_n", exact->realized_n}};
  }
  j["objective"] = sig12(objective);
  if (!efficiencies.empty()) j["efficiencies"] = nums_json(efficiencies);
  if (!anchors.empty()) j["anchors"] = nums_json(anchors);
  if (t_star) j["t_star"] = sig12(*t_star);
  if (min_eff) j["min_eff"] = sig12(*min_eff);
  j["certificate"] = {{"certified", certificate.certified},
                      {"worst_u", certificate.worst_u},
                      {"worst_value", sig12(certificate.worst_value)},
                      {"delta", sig12(certificate.delta)}};
  if (!certificate.eta.empty()) j["certificate"]["eta"] = nums_json(certificate.eta);
  if (trace) {
    j["rounding_trace"] = {{"floor_counts", pairs_json_l(trace->floor_counts)},
                           {"remaining", sig12(trace->remaining)},
                           {"delta", pairs_json_l(trace->delta)},
                           {"remaining_final", sig12(trace->remaining_final)},
                           {"objective", sig12(trace->objective)},
                           {"efficiency", sig12(trace->efficiency)}};
  }
  j["iterations"] = iterations;
  j["wall_time"] = sig12(wall_time);
  j["converged"] = converged;
  return j.dump(indent);
}

ResultRecord ResultRecord::parse(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    bad(std::string("result record is not valid JSON: ") + e.what());
  }
  check_keys(j, "record",
             {"schema", "tool_version", "config_hash", "problem", "support", "exact",
              "objective", "efficiencies", "anchors", "t_star", "min_eff", "certificate",
              "rounding_trace", "iterations", "wall_time", "converged"});
  ResultRecord r;
  if (j.contains("schema") && need_int(j, "schema", "record") != kRecordSchema)
    bad("unsupported record schema version");
  if (j.contains("tool_version")) r.tool_version = j["tool_version"].get<std::string>();
  if (j.contains("config_hash")) r.config_hash = j["config_hash"].get<std::string>();
  if (!j.contains("problem")) bad("record is missing 'problem'");
  r.problem = ProblemFile::parse(j["problem"].dump());
  if (j.contains("support")) r.support = pairs_parse_d(j["support"], "record.support");
  if (j.contains("exact")) {
    check_keys(j["exact"], "exact", {"points", "realized_cost", "realized_n"});
    ExactDesign ed;
    ed.points = pairs_parse_l(j["exact"]["points"], "exact.points");
    ed.realized_cost = need_num(j["exact"], "realized_cost", "exact");
    ed.realized_n = need_int(j["exact"], "realized_n", "exact");
    r.exact = std::move(ed);
  }
  r.objective = need_num(j, "objective", "record");
  if (j.contains("efficiencies"))
    r.efficiencies = j["efficiencies"].get<std::vector<double>>();
  if (j.contains("anchors")) r.anchors = j["anchors"].get<std::vector<double>>();
  if (j.contains("t_star")) r.t_star = need_num(j, "t_star", "record");
  if (j.contains("min_eff")) r.min_eff = need_num(j, "min_eff", "record");
  if (!j.contains("certificate")) bad("record is missing 'certificate'");
  check_keys(j["certificate"], "certificate",
             {"certified", "worst_u", "worst_value", "delta", "eta"});
  r.certificate.certified = j["certificate"]["certified"].get<bool>();
  r.certificate.worst_u = static_cast<int>(need_int(j["certificate"], "worst_u", "certificate"));
  r.certificate.worst_value = need_num(j["certificate"], "worst_value", "certificate");
  r.certificate.delta = need_num(j["certificate"], "delta", "certificate");
  if (j["certificate"].contains("eta"))
    r.certificate.eta = j["certificate"]["eta"].get<std::vector<double>>();
  if (j.contains("rounding_trace")) {
    const json& tr = j["rounding_trace"];
    check_keys(tr, "rounding_trace",
               {"floor_counts", "remaining", "delta", "remaining_final", "objective",
                "efficiency"});
    RoundingTrace rt;
    rt.floor_counts = pairs_parse_l(tr["floor_counts"], "rounding_trace.floor_counts");
    rt.remaining = need_num(tr, "remaining", "rounding_trace");
    rt.delta = pairs_parse_l(tr["delta"], "rounding_trace.delta");
    rt.remaining_final = need_num(tr, "remaining_final", "rounding_trace");
    rt.objective = need_num(tr, "objective", "rounding_trace");
    rt.efficiency = need_num(tr, "efficiency", "rounding_trace");
    r.trace = std::move(rt);
  }
  if (j.contains("iterations")) r.iterations = need_int(j, "iterations", "record");
  if (j.contains("wall_time")) r.wall_time = need_num(j, "wall_time", "record");
  if (!j.contains("converged") || !j["converged"].is_boolean())
    bad("record.converged must be a boolean");
  r.converged = j["converged"].get<bool>();
  return r;
}

namespace {

/// Worst eta-aggregated dispersion over the grid (Theorem-style certificate
/// summary for multi-criterion designs).
std::pair<int, double> aggregate_worst(const std::vector<AnchoredCriterion>& criteria,
                                       const std::vector<double>& eta, const Design& d,
                                       const GridTables& t) {
  std::vector<double> agg(t.M, 0.0);
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    if (eta[k] == 0.0) continue;
    auto dk = dispersion_all(criteria[k].spec, d.w, t);
    for (int u = 0; u < t.M; ++u) agg[u] += eta[k] * dk[u];
  }
  int best = 0;
  for (int u = 1; u < t.M; ++u)
    if (agg[u] > agg[best]) best = u;
  return {best + 1, agg[best]};
}

MaximinSpec spec_from_record(const ResultRecord& rec) {
  if (rec.anchors.size() != rec.problem.criteria.size())
    throw invalid_input("record anchors do not match the criteria list");
  std::vector<AnchoredCriterion> cs;
  for (std::size_t k = 0; k < rec.anchors.size(); ++k)
    cs.emplace_back(rec.problem.criteria[k], rec.anchors[k]);
  return MaximinSpec(std::move(cs));
}

}  // namespace

ResultRecord run_problem(const ProblemFile& p, int threads) {
  p.solver.validate();
  GridTables t = GridTables::build(DesignGrid(p.M), p.model, p.cost);
  ResultRecord rec;
  rec.problem = p;
  rec.config_hash = fnv1a_hex(p.to_json());

  auto fill_single = [&](const CriterionSpec& spec) {
    SolveReport r = spec.kind == Crit::E ? solve_e_optimal(t, p.solver)
                                         : solve_oad(spec, t, p.solver);
    rec.support = support(r.design, p.solver.prune_tol);
    rec.objective = r.objective;
    rec.iterations = r.iterations;
    rec.wall_time = r.wall_time;
    rec.converged = r.converged;
    VerifyResult v = verify_optimality(spec, r.design, t, p.solver.certificate_tol);
    rec.certificate = {v.certified, v.worst_u, v.worst_value, p.solver.certificate_tol, {}};
    return r;
  };

  auto fill_maximin = [&]() {
    MaximinSpec spec = make_maximin_spec(p.criteria, t, p.solver);
    MaximinSolution sol = solve_maximin(spec, t, p.solver);
    rec.support = support(sol.design, p.solver.prune_tol);
    rec.t_star = sol.t_star;
    rec.min_eff = sol.min_eff;
    rec.objective = sol.min_eff;
    rec.efficiencies = sol.efficiencies;
    for (const auto& a : spec.criteria) rec.anchors.push_back(a.anchor);
    rec.iterations = sol.iterations;
    rec.wall_time = sol.wall_time;
    rec.converged = sol.converged;
    auto cert = verify_maximin(sol, spec, t);
    rec.certificate = {cert.has_value(), 0, 0.0, 1e-5, {}};
    if (cert) {
      rec.certificate.eta = cert->eta;
      auto [u, v] = aggregate_worst(spec.criteria, cert->eta, sol.design, t);
      rec.certificate.worst_u = u;
      rec.certificate.worst_value = v;
    }
    return std::make_pair(std::move(spec), std::move(sol));
  };

  switch (p.task) {
    case Task::Oad:
      fill_single(p.criteria[0]);
      break;
    case Task::Maximin:
      fill_maximin();
      break;
    case Task::RobustE: {
      RobustSpec rs(p.rho);
      SolveReport r = solve_robust_e(rs, t, p.solver);
      rec.support = support(r.design, p.solver.prune_tol);
      rec.objective = r.objective;
      rec.iterations = r.iterations;
      rec.wall_time = r.wall_time;
      rec.converged = r.converged;
      VerifyResult v = verify_robust(rs, r.design, t, p.solver.certificate_tol);
      rec.certificate = {v.certified, v.worst_u, v.worst_value, p.solver.certificate_tol, {}};
      break;
    }
    case Task::Round: {
      RoundingObjective obj;
      Design base = Design::point_mass(p.M, 1);
      if (p.criteria.size() == 1) {
        SolveReport r = fill_single(p.criteria[0]);
        obj = RoundingObjective::anchored(AnchoredCriterion(p.criteria[0], r.objective));
        rec.anchors = {r.objective};
        base = r.design;
      } else {
        auto [spec, sol] = fill_maximin();
        obj = RoundingObjective::maximin(spec);
        base = sol.design;
      }
      auto [ed, tr] = p.budget ? round_budget(base, *p.budget, obj, t, p.expansion,
                                              p.solver.prune_tol, threads)
                               : round_fixed_n(base, *p.sample_size, obj, t, p.expansion,
                                               p.solver.prune_tol, threads);
      rec.exact = ed;
      rec.trace = tr;
      rec.objective = tr.objective;
      double denom = p.budget ? *p.budget : static_cast<double>(*p.sample_size);
      if (obj.criteria.size() > 1) {
        rec.efficiencies.clear();
        for (const auto& a : obj.criteria)
          rec.efficiencies.push_back(exact_min_eff(ed, {a}, t, denom));
        rec.min_eff = tr.efficiency;
      } else {
        rec.efficiencies = {tr.efficiency};
      }
      break;
    }
  }
  return rec;
}

RecordCheck verify_record(const ResultRecord& rec) {
  const ProblemFile& p = rec.problem;
  GridTables t = GridTables::build(DesignGrid(p.M), p.model, p.cost);
  Design d = rec.design();
  RecordCheck out;
  bool multi = p.criteria.size() > 1;

  if (p.task == Task::RobustE) {
    VerifyResult v = verify_robust(RobustSpec(p.rho), d, t, rec.certificate.delta);
    out = {v.certified, v.certified == rec.certificate.certified, v.worst_u, v.worst_value};
    return out;
  }
  if (!multi) {
    VerifyResult v = verify_optimality(p.criteria[0], d, t, rec.certificate.delta);
    out = {v.certified, v.certified == rec.certificate.certified, v.worst_u, v.worst_value};
  } else {
    MaximinSpec spec = spec_from_record(rec);
    double tstar = rec.t_star.value_or(1.0);
    MaximinSolution sol{d, tstar, rec.min_eff.value_or(1.0 / tstar), {}, 0, 0.0, true};
    auto cert = verify_maximin(sol, spec, t);
    out.certified = cert.has_value();
    if (cert) {
      auto [u, v] = aggregate_worst(spec.criteria, cert->eta, d, t);
      out.worst_u = u;
      out.worst_value = v;
    }
    out.matches_stored = out.certified == rec.certificate.certified;
  }
  if (p.task == Task::Round && rec.exact) {
    // exact-design invariants must still hold for the record to verify
    double spent = 0;
    long n = 0;
    for (auto [x, cnt] : rec.exact->points) {
      spent += static_cast<double>(cnt) * t.cost[x - 1];
      n += cnt;
    }
    bool ok = std::abs(spent - rec.exact->realized_cost) <= 1e-6 &&
              n == rec.exact->realized_n;
    if (p.budget) ok = ok && spent <= *p.budget + 1e-9;
    if (p.sample_size) ok = ok && n == *p.sample_size;
    if (!ok) out.matches_stored = false;
  }
  return out;
}

std::string dispersion_csv(const ResultRecord& rec) {
  const ProblemFile& p = rec.problem;
  GridTables t = GridTables::build(DesignGrid(p.M), p.model, p.cost);
  Design d = rec.design();
  std::vector<CriterionSpec> specs =
      p.task == Task::RobustE ? std::vector<CriterionSpec>{CriterionSpec::E()} : p.criteria;
  bool multi = specs.size() > 1;
  if (multi && rec.certificate.eta.size() != specs.size())
    throw invalid_input("record lacks the eta multipliers needed for the aggregate column");

  std::vector<std::vector<double>> cols;
  for (const auto& s : specs) cols.push_back(dispersion_all(s, d.w, t));

  std::string out = "u";
  for (const auto& s : specs) {
    out += ",d_";
    out += crit_name(s.kind);
  }
  if (multi) out += ",aggregate";
  out += "\n";
  char buf[64];
  for (int u = 0; u < t.M; ++u) {
    out += std::to_string(u + 1);
    double agg = 0;
    for (std::size_t k = 0; k < specs.size(); ++k) {
      std::snprintf(buf, sizeof buf, ",%.12g", cols[k][u]);
      out += buf;
      if (multi) agg += rec.certificate.eta[k] * cols[k][u];
    }
    if (multi) {
      std::snprintf(buf, sizeof buf, ",%.12g", agg);
      out += buf;
    }
    out += "\n";
  }
  return out;
}

}  // namespace gtd
