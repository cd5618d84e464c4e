#include "io/tables.hpp"

#include <atomic>
#include <cstdio>
#include <functional>
#include <thread>

namespace gtd {

// Support points and weights are the printed values (3 dp); phi is the
// full-precision optimum (the printed column rounds to 3 significant digits,
// too coarse for a 0.5% relative comparison).
const std::vector<ExpectedDesignRow>& table1_rows() {
  static const std::vector<ExpectedDesignRow> rows = {
      // Table 1, M=61, q=0
      {61, 0.0, "D", {{1, 0.333}, {17, 0.333}, {61, 0.333}}, 0.00303822694832,
       {1, 0.936, 0.705, 0.692, 0.946}},
      {61, 0.0, "A", {{1, 0.416}, {16, 0.213}, {61, 0.371}}, 0.705846914169,
       {0.961, 1, 0.489, 0.817, 0.987}},
      {61, 0.0, "Ds", {{1, 0.131}, {16, 0.628}, {61, 0.241}}, 0.0353972005532,
       {0.811, 0.509, 1, 0.337, 0.438}},
      {61, 0.0, "c", {{1, 0.521}, {56, 0.180}, {57, 0.299}}, 0.404951701061,
       {0.068, 0.001, 0, 1, 0.001}},
      {61, 0.0, "E", {{1, 0.415}, {16, 0.251}, {61, 0.335}}, -2.35995319891,
       {0.979, 0.991, 0.559, 0.779, 1}},
      // Table 1, M=61, q=0.2
      {61, 0.2, "D", {{1, 0.333}, {10, 0.333}, {61, 0.333}}, 0.134946299571,
       {1, 0.744, 0.756, 0.536, 0.568}},
      {61, 0.2, "A", {{1, 0.205}, {10, 0.185}, {61, 0.610}}, 3.18873462169,
       {0.855, 1, 0.506, 0.823, 0.941}},
      {61, 0.2, "Ds", {{1, 0.106}, {10, 0.569}, {61, 0.325}}, 0.146807421085,
       {0.809, 0.624, 1, 0.437, 0.556}},
      {61, 0.2, "c", {{1, 0.238}, {56, 0.285}, {57, 0.477}}, 1.93906562333,
       {0.048, 0.001, 0, 1, 0}},
      {61, 0.2, "E", {{1, 0.126}, {10, 0.188}, {61, 0.686}}, -0.479801331124,
       {0.76, 0.946, 0.509, 0.773, 1}},
      // Table 1, M=61, q=0.8
      {61, 0.8, "D", {{1, 0.333}, {7, 0.029}, {8, 0.304}, {61, 0.333}}, 1.43597547203,
       {1, 0.632, 0.734, 0.448, 0.49}},
      {61, 0.8, "A", {{1, 0.125}, {8, 0.183}, {61, 0.692}}, 9.19059244117,
       {0.753, 1, 0.496, 0.823, 0.941}},
      {61, 0.8, "Ds", {{1, 0.095}, {7, 0.573}, {61, 0.332}}, 0.409285704849,
       {0.787, 0.601, 1, 0.416, 0.495}},
      {61, 0.8, "c", {{1, 0.139}, {56, 0.322}, {57, 0.539}}, 5.69599474491,
       {0.039, 0.001, 0, 1, 0}},
      {61, 0.8, "E", {{1, 0.063}, {7, 0.165}, {61, 0.772}}, -0.151269137454,
       {0.602, 0.928, 0.44, 0.787, 1}},
      // Table 1, M=150, q=0 (the printed phi for the D row, 0.021, is
      // inconsistent with its own efficiency column; the optimum is 0.00206)
      {150, 0.0, "D", {{1, 0.333}, {19, 0.333}, {150, 0.333}}, 0.00206096642134,
       {1, 0.903, 0.694, 0.738, 0.779}},
      {150, 0.0, "A", {{1, 0.458}, {20, 0.194}, {150, 0.347}}, 0.561735455985,
       {0.941, 1, 0.434, 0.875, 0.927}},
      {150, 0.0, "Ds", {{1, 0.128}, {17, 0.635}, {150, 0.237}}, 0.0275701060811,
       {0.803, 0.448, 1, 0.341, 0.323}},
      {150, 0.0, "c", {{1, 0.521}, {56, 0.180}, {57, 0.299}}, 0.404951701061,
       {0.060, 0.001, 0, 1, 0}},
      {150, 0.0, "E", {{1, 0.532}, {17, 0.208}, {150, 0.260}}, -3.22984182519,
       {0.917, 0.958, 0.458, 0.826, 1}},
      // Table 1, M=150, q=0.2
      {150, 0.2, "D", {{1, 0.333}, {10, 0.333}, {67, 0.333}}, 0.13299602735,
       {1, 0.727, 0.739, 0.538, 0.509}},
      {150, 0.2, "A", {{1, 0.207}, {11, 0.169}, {73, 0.624}}, 3.04517910352,
       {0.835, 1, 0.471, 0.807, 0.904}},
      {150, 0.2, "Ds", {{1, 0.104}, {10, 0.555}, {81, 0.341}}, 0.13763318039,
       {0.798, 0.607, 1, 0.426, 0.502}},
      {150, 0.2, "c", {{1, 0.238}, {56, 0.285}, {57, 0.477}}, 1.93906562333,
       {0.048, 0.001, 0, 1, 0}},
      {150, 0.2, "E", {{1, 0.131}, {10, 0.133}, {81, 0.735}}, -0.550659862388,
       {0.692, 0.925, 0.393, 0.729, 1}},
      // Table 1, M=150, q=0.8
      {150, 0.8, "D", {{1, 0.333}, {8, 0.333}, {65, 0.333}}, 1.42658776251,
       {1, 0.618, 0.717, 0.449, 0.445}},
      {150, 0.8, "A", {{1, 0.126}, {8, 0.169}, {70, 0.492}, {71, 0.212}}, 8.88615320836,
       {0.739, 1, 0.468, 0.807, 0.902}},
      {150, 0.8, "Ds", {{1, 0.080}, {8, 0.559}, {78, 0.362}}, 0.390299796612,
       {0.747, 0.599, 1, 0.419, 0.467}},
      {150, 0.8, "c", {{1, 0.139}, {56, 0.322}, {57, 0.539}}, 5.69599474491,
       {0.039, 0.001, 0, 1, 0}},
      {150, 0.8, "E", {{1, 0.057}, {8, 0.112}, {78, 0.830}}, -0.168886485152,
       {0.517, 0.881, 0.328, 0.718, 1}},
  };
  return rows;
}

const std::vector<ExpectedMaximinRow>& table2_rows() {
  static const std::vector<ExpectedMaximinRow> rows = {
      // Table 2, D-A
      {150, 0.0, {"D", "A"}, {{1, 0.409}, {19, 0.251}, {150, 0.339}}, 0.981},
      {61, 0.0, {"D", "A"}, {{1, 0.382}, {16, 0.114}, {17, 0.148}, {61, 0.356}}, 0.987},
      {150, 0.2, {"D", "A"}, {{1, 0.259}, {10, 0.240}, {69, 0.176}, {70, 0.325}}, 0.943},
      {61, 0.2, {"D", "A"}, {{1, 0.258}, {10, 0.248}, {61, 0.494}}, 0.949},
      {150, 0.8, {"D", "A"}, {{1, 0.216}, {8, 0.236}, {67, 0.108}, {68, 0.440}}, 0.909},
      {61, 0.8, {"D", "A"}, {{1, 0.217}, {7, 0.242}, {61, 0.541}}, 0.915},
      // Table 2, D-A-Ds
      {150, 0.0, {"D", "A", "Ds"}, {{1, 0.311}, {17, 0.420}, {150, 0.269}}, 0.818},
      {61, 0.0, {"D", "A", "Ds"}, {{1, 0.289}, {15, 0.246}, {16, 0.179}, {61, 0.286}}, 0.842},
      {150, 0.2, {"D", "A", "Ds"}, {{1, 0.158}, {10, 0.364}, {75, 0.478}}, 0.855},
      {61, 0.2, {"D", "A", "Ds"}, {{1, 0.156}, {10, 0.377}, {61, 0.467}}, 0.864},
      {150, 0.8, {"D", "A", "Ds"}, {{1, 0.122}, {8, 0.366}, {71, 0.512}}, 0.848},
      {61, 0.8, {"D", "A", "Ds"}, {{1, 0.123}, {7, 0.158}, {8, 0.217}, {61, 0.502}}, 0.856},
      // Table 2, D-A-c-E
      {150, 0.0, {"D", "A", "c", "E"}, {{1, 0.469}, {26, 0.203}, {150, 0.328}}, 0.909},
      {61, 0.0, {"D", "A", "c", "E"}, {{1, 0.455}, {18, 0.130}, {19, 0.015}, {61, 0.401}},
       0.891},
      {150, 0.2, {"D", "A", "c", "E"}, {{1, 0.237}, {11, 0.156}, {65, 0.260}, {66, 0.348}},
       0.844},
      {61, 0.2, {"D", "A", "c", "E"}, {{1, 0.256}, {11, 0.150}, {61, 0.595}}, 0.848},
      {150, 0.8, {"D", "A", "c", "E"}, {{1, 0.189}, {8, 0.162}, {63, 0.250}, {64, 0.399}},
       0.812},
      {61, 0.8, {"D", "A", "c", "E"}, {{1, 0.198}, {8, 0.156}, {61, 0.646}}, 0.814},
  };
  return rows;
}

const std::vector<ExpectedRoundRow>& table3_rows() {
  static const std::vector<ExpectedRoundRow> rows = {
      // Table 3 (M=150, q=0.2), D rows
      {"D", 100, {{1, 35}, {10, 12}, {11, 1}, {67, 2}}, 7.8,
       {{1, 2}, {10, 1}, {11, 1}}, 0, 0.135, 0.994, true},
      {"D", 500, {{1, 173}, {10, 61}, {67, 11}}, 12.6, {{1, 7}, {10, 2}}, 0, 0.133, 0.999,
       false},
      {"D", 10000, {{1, 3334}, {10, 1194}, {67, 234}}, 12.2, {{1, 1}, {10, 4}}, 0, 0.133, 1,
       false},
      // Table 3, A rows
      {"A", 100, {{1, 20}, {11, 5}, {12, 1}, {73, 4}}, 3.4, {{12, 1}}, 0.2, 3.056, 0.997,
       false},
      {"A", 500, {{1, 105}, {11, 29}, {73, 20}}, 5, {{1, 2}, {11, 1}}, 0, 3.046, 1, false},
      {"A", 10000, {{1, 2071}, {11, 564}, {73, 405}}, 7, {{1, 4}, {11, 1}}, 0, 3.045, 1,
       false},
      // Table 3, Ds rows
      {"Ds", 100, {{1, 10}, {10, 20}, {81, 2}}, 2.8, {{10, 1}}, 0, 0.138, 1, false},
      {"Ds", 500, {{1, 52}, {10, 99}, {81, 10}}, 0.8, {}, 0.8, 0.138, 1, true},
      {"Ds", 10000, {{1, 1042}, {10, 1985}, {81, 200}}, 11.2, {{10, 4}}, 0, 0.138, 1, false},
      // Table 3, c rows
      {"c", 100, {{1, 27}, {56, 2}, {57, 4}}, 16.4, {{1, 4}, {57, 1}}, 0.2, 1.967, 0.986,
       false},
      {"c", 500, {{1, 124}, {56, 12}, {57, 19}}, 17.2, {{1, 5}, {56, 1}}, 0.2, 1.941, 0.999,
       false},
      {"c", 10000, {{1, 2386}, {56, 238}, {57, 390}}, 16, {{1, 4}, {56, 1}}, 0, 1.939, 1,
       false},
      // Table 3, E rows
      {"E", 100, {{1, 13}, {9, 3}, {10, 4}, {81, 4}}, 7.8, {{9, 3}}, 0, -0.532, 0.966, false},
      {"E", 500, {{1, 68}, {9, 3}, {10, 24}, {81, 21}}, 13.6, {{1, 3}, {9, 3}, {10, 1}}, 0,
       -0.547, 0.994, false},
      {"E", 10000, {{1, 1312}, {10, 480}, {81, 432}}, 12.2, {{1, 1}, {10, 4}}, 0, -0.551, 1,
       false},
  };
  return rows;
}

const std::vector<ExpectedMaximinRoundRow>& table4_rows() {
  static const std::vector<ExpectedMaximinRoundRow> rows = {
      // Table 4 (M=61), q=0, D-A, fixed sample sizes
      {0.0, {"D", "A"}, true, 10, {{1, 4}, {15, 1}, {16, 1}, {17, 1}, {61, 3}}, 0.959, 0.987,
       true},
      {0.0, {"D", "A"}, true, 25, {{1, 10}, {16, 2}, {17, 4}, {61, 9}}, 0.977, 0.987, false},
      {0.0, {"D", "A"}, true, 50, {{1, 19}, {16, 5}, {17, 8}, {61, 18}}, 0.986, 0.987, false},
      // Table 4, q=0, D-A-Ds
      {0.0, {"D", "A", "Ds"}, true, 10, {{1, 3}, {15, 3}, {16, 1}, {61, 3}}, 0.809, 0.842,
       false},
      {0.0, {"D", "A", "Ds"}, true, 25, {{1, 7}, {15, 6}, {16, 4}, {17, 1}, {61, 7}}, 0.825,
       0.842, false},
      {0.0, {"D", "A", "Ds"}, true, 50, {{1, 14}, {15, 13}, {16, 8}, {61, 15}}, 0.838, 0.842,
       false},
      // Table 4, q=0.2, budget mode
      {0.2, {"D", "A"}, false, 100, {{1, 26}, {10, 8}, {59, 1}, {61, 3}}, 0.932, 0.949, false},
      {0.2, {"D", "A"}, false, 500, {{1, 130}, {10, 44}, {60, 1}, {61, 18}}, 0.948, 0.949,
       false},
      {0.2, {"D", "A", "Ds"}, false, 100, {{1, 24}, {10, 13}, {61, 3}}, 0.818, 0.864, false},
      {0.2, {"D", "A", "Ds"}, false, 500, {{1, 78}, {10, 67}, {61, 18}}, 0.861, 0.864, true},
  };
  return rows;
}

// ---------------------------------------------------------------------------
// Reproduction harness.
// ---------------------------------------------------------------------------

namespace {

CriterionSpec spec_of(const std::string& name) {
  auto k = crit_from_name(name);
  if (!k) throw invalid_input("unknown criterion name: " + name);
  return *k == Crit::C ? CriterionSpec::C({0, 1, 1}) : CriterionSpec{*k, {1, 0, 0}};
}

std::vector<CriterionSpec> specs_of(const std::vector<const char*>& kinds) {
  std::vector<CriterionSpec> out;
  for (const char* k : kinds) out.push_back(spec_of(k));
  return out;
}

std::string combo_name(const std::vector<const char*>& kinds) {
  std::string s;
  for (const char* k : kinds) {
    if (!s.empty()) s += '-';
    s += k;
  }
  return s;
}

ReproduceCell num_cell(const std::string& inst, const std::string& cell, double expected,
                       double got, double tol) {
  return {inst, cell, expected, got, tol, std::abs(got - expected) <= tol};
}

ReproduceCell flag_cell(const std::string& inst, const std::string& cell, bool ok) {
  return {inst, cell, 1, ok ? 1.0 : 0.0, 0, ok};
}

bool same_points_d(const std::vector<std::pair<int, double>>& expected,
                   const std::vector<std::pair<int, double>>& got) {
  if (expected.size() != got.size()) return false;
  for (std::size_t i = 0; i < expected.size(); ++i)
    if (expected[i].first != got[i].first) return false;
  return true;
}

bool same_counts(const std::vector<std::pair<int, long>>& a,
                 const std::vector<std::pair<int, long>>& b) {
  return a == b;
}

double weight_at(const std::vector<std::pair<int, double>>& sup, int x) {
  for (auto [p, w] : sup)
    if (p == x) return w;
  return 0;
}

void compare_support(std::vector<ReproduceCell>& cells, const std::string& inst,
                     const std::vector<std::pair<int, double>>& expected,
                     const std::vector<std::pair<int, double>>& got, double wtol) {
  cells.push_back(flag_cell(inst, "support", same_points_d(expected, got)));
  for (auto [x, w] : expected)
    cells.push_back(num_cell(inst, "w(" + std::to_string(x) + ")", w, weight_at(got, x), wtol));
}

ProblemFile base_problem(Task task, int M, double q) {
  ProblemFile p;
  p.task = task;
  p.M = M;
  p.cost = CostModel(q);
  return p;
}

using Job = std::function<std::vector<ReproduceCell>()>;

std::vector<ReproduceCell> run_jobs(const std::vector<Job>& jobs, int threads) {
  threads = std::max(1, std::min<int>(threads, static_cast<int>(jobs.size())));
  std::vector<std::vector<ReproduceCell>> results(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      try {
        results[i] = jobs[i]();
      } catch (const std::exception& e) {
        results[i] = {flag_cell("job " + std::to_string(i), std::string("error: ") + e.what(),
                                false)};
      }
    }
  };
  std::vector<std::thread> pool;
  for (int k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  std::vector<ReproduceCell> out;
  for (auto& r : results) out.insert(out.end(), r.begin(), r.end());
  return out;
}

std::vector<Job> table1_jobs() {
  std::vector<Job> jobs;
  for (const auto& row : table1_rows()) {
    jobs.push_back([&row] {
      std::vector<ReproduceCell> cells;
      char inst[64];
      std::snprintf(inst, sizeof inst, "table1/M%d/q%g/%s", row.M, row.q, row.crit);
      ProblemFile p = base_problem(Task::Oad, row.M, row.q);
      p.criteria = {spec_of(row.crit)};
      ResultRecord rec = run_problem(p);
      compare_support(cells, inst, row.support, rec.support, 0.002);
      cells.push_back(num_cell(inst, "phi", row.phi, rec.objective, 0.005 * std::abs(row.phi)));
      cells.push_back(flag_cell(inst, "certified", rec.certificate.certified));
      // efficiency columns, using the same-(M,q) block's optima as anchors
      std::vector<AnchoredCriterion> anchors;
      for (const auto& other : table1_rows())
        if (other.M == row.M && other.q == row.q)
          anchors.emplace_back(spec_of(other.crit), other.phi);
      GridTables t =
          GridTables::build(DesignGrid(p.M), p.model, p.cost);
      auto effs = efficiency_table(rec.design(), t, anchors);
      const char* names[5] = {"eff_D", "eff_A", "eff_Ds", "eff_c", "eff_E"};
      for (int k = 0; k < 5; ++k)
        cells.push_back(num_cell(inst, names[k], row.eff[k], effs[k], 0.01));
      return cells;
    });
  }
  return jobs;
}

std::vector<Job> table2_jobs() {
  std::vector<Job> jobs;
  for (const auto& row : table2_rows()) {
    jobs.push_back([&row] {
      std::vector<ReproduceCell> cells;
      char inst[64];
      std::snprintf(inst, sizeof inst, "table2/%s/M%d/q%g", combo_name(row.kinds).c_str(),
                    row.M, row.q);
      ProblemFile p = base_problem(Task::Maximin, row.M, row.q);
      p.criteria = specs_of(row.kinds);
      ResultRecord rec = run_problem(p);
      compare_support(cells, inst, row.support, rec.support, 0.002);
      cells.push_back(num_cell(inst, "1/t*", row.inv_t, rec.min_eff.value_or(0), 0.002));
      cells.push_back(flag_cell(inst, "certified", rec.certificate.certified));
      return cells;
    });
  }
  return jobs;
}

std::vector<Job> table3_jobs() {
  std::vector<Job> jobs;
  for (const auto& row : table3_rows()) {
    jobs.push_back([&row] {
      std::vector<ReproduceCell> cells;
      char inst[64];
      std::snprintf(inst, sizeof inst, "table3/%s/C%g", row.crit, row.C);
      ProblemFile p = base_problem(Task::Round, 150, 0.2);
      p.criteria = {spec_of(row.crit)};
      p.budget = row.C;
      ResultRecord rec = run_problem(p);
      cells.push_back(num_cell(inst, "eff", row.eff, rec.trace->efficiency, 0.002));
      if (row.pin_identity) {
        cells.push_back(flag_cell(inst, "design", same_counts(row.design, rec.exact->points)));
        cells.push_back(num_cell(inst, "C_r", row.Cr, rec.trace->remaining, 1e-6));
        cells.push_back(flag_cell(inst, "delta", same_counts(row.delta, rec.trace->delta)));
        cells.push_back(num_cell(inst, "C_r'", row.Cr_final, rec.trace->remaining_final, 1e-6));
      }
      return cells;
    });
  }
  return jobs;
}

std::vector<Job> table4_jobs() {
  std::vector<Job> jobs;
  for (const auto& row : table4_rows()) {
    jobs.push_back([&row] {
      std::vector<ReproduceCell> cells;
      char inst[80];
      std::snprintf(inst, sizeof inst, "table4/q%g/%s/%s%g", row.q,
                    combo_name(row.kinds).c_str(), row.fixed_n ? "n" : "C", row.n_or_C);
      ProblemFile p = base_problem(Task::Round, 61, row.q);
      p.criteria = specs_of(row.kinds);
      if (row.fixed_n)
        p.sample_size = static_cast<long>(row.n_or_C);
      else
        p.budget = row.n_or_C;
      ResultRecord rec = run_problem(p);
      double min_eff = rec.min_eff.value_or(0);
      double inv_t = rec.t_star ? 1.0 / *rec.t_star : 0;
      cells.push_back(num_cell(inst, "MinEff", row.min_eff, min_eff, 0.002));
      cells.push_back(num_cell(inst, "1/t*", row.inv_t, inv_t, 0.002));
      cells.push_back(flag_cell(inst, "MinEff<=1/t*", min_eff <= inv_t + 1e-9));
      if (row.pin_identity)
        cells.push_back(flag_cell(inst, "design", same_counts(row.design, rec.exact->points)));
      return cells;
    });
  }
  return jobs;
}

std::vector<Job> robust_e_jobs() {
  std::vector<Job> jobs;
  // rho = 0 must recover the single-objective E designs
  for (const auto& row : table1_rows()) {
    if (std::string(row.crit) != "E") continue;
    jobs.push_back([&row] {
      std::vector<ReproduceCell> cells;
      char inst[64];
      std::snprintf(inst, sizeof inst, "robust-e/M%d/q%g/rho0", row.M, row.q);
      ProblemFile p = base_problem(Task::RobustE, row.M, row.q);
      p.rho = 0;
      ResultRecord rec = run_problem(p);
      compare_support(cells, inst, row.support, rec.support, 1e-3);
      cells.push_back(flag_cell(inst, "certified", rec.certificate.certified));
      return cells;
    });
  }
  // objective and design norm must be non-increasing in rho
  for (int M : {61, 150}) {
    for (double q : {0.0, 0.8}) {
      jobs.push_back([M, q] {
        std::vector<ReproduceCell> cells;
        char inst[64];
        std::snprintf(inst, sizeof inst, "robust-e/M%d/q%g/path", M, q);
        double prev_obj = kInf, prev_norm = kInf;
        bool obj_mono = true, norm_mono = true;
        for (double rho : {0.0, 0.001, 0.01}) {
          ProblemFile p = base_problem(Task::RobustE, M, q);
          p.rho = rho;
          ResultRecord rec = run_problem(p);
          double nw = 0;
          for (auto [x, w] : rec.support) nw += w * w;
          nw = std::sqrt(nw);
          obj_mono = obj_mono && rec.objective <= prev_obj + 1e-9;
          norm_mono = norm_mono && nw <= prev_norm + 1e-9;
          prev_obj = rec.objective;
          prev_norm = nw;
        }
        cells.push_back(flag_cell(inst, "objective_nonincreasing", obj_mono));
        cells.push_back(flag_cell(inst, "norm_nonincreasing", norm_mono));
        return cells;
      });
    }
  }
  return jobs;
}

}  // namespace

std::string ReproduceReport::text() const {
  std::string out;
  char buf[256];
  for (const auto& c : cells) {
    std::snprintf(buf, sizeof buf, "[%s] %s %s expected=%.6g got=%.6g tol=%.3g\n",
                  c.pass ? "PASS" : "FAIL", c.instance.c_str(), c.cell.c_str(), c.expected,
                  c.got, c.tol);
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "%s: %s (%zu cells)\n", table.c_str(),
                all_pass ? "ALL PASS" : "MISMATCH", cells.size());
  out += buf;
  return out;
}

ReproduceReport reproduce(const std::string& table_id, int threads) {
  std::vector<Job> jobs;
  if (table_id == "table1")
    jobs = table1_jobs();
  else if (table_id == "table2")
    jobs = table2_jobs();
  else if (table_id == "table3")
    jobs = table3_jobs();
  else if (table_id == "table4")
    jobs = table4_jobs();
  else if (table_id == "robust-e")
    jobs = robust_e_jobs();
  else
    throw invalid_input("unknown table id: " + table_id +
                        " (expected table1..table4 or robust-e)");
  ReproduceReport rep;
  rep.table = table_id;
  rep.cells = run_jobs(jobs, threads);
  rep.all_pass = true;
  for (const auto& c : rep.cells) rep.all_pass = rep.all_pass && c.pass;
  return rep;
}

}  // namespace gtd
