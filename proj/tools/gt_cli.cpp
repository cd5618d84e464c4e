// gt: command-line front end for the group-testing design library.
//
// Exit codes: 0 solved and certified, 1 input error, 2 not converged /
// certificate failed, 3 reproduction mismatch.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gtdesign/gtdesign.h"

namespace {

constexpr int kExitInput = 1;
constexpr int kExitNotConverged = 2;
constexpr int kExitMismatch = 3;

int from_status(gtd_status s) {
  switch (s) {
    case GTD_OK: return 0;
    case GTD_ERR_NOT_CONVERGED: return kExitNotConverged;
    case GTD_ERR_MISMATCH: return kExitMismatch;
    default: return kExitInput;
  }
}

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << text;
  return out.good();
}

int fail(const std::string& msg, int code) {
  std::cerr << "gt: error: " << msg << "\n";
  return code;
}

int fail_api(gtd_status s) { return fail(gtd_last_error(), from_status(s)); }

/// --threads flag beats the environment override beats hardware parallelism.
int pick_threads(int flag_threads) {
  if (flag_threads > 0) return flag_threads;
  if (const char* env = std::getenv("GTDESIGN_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 0;  // library resolves to available parallelism
}

struct SolveArgs {
  std::string problem_path;
  std::vector<std::string> sets;  // key=json overrides
  std::string output;             // overrides the problem's output field
  int threads = 0;
  bool verbose = false;
};

void add_solve_options(CLI::App* cmd, SolveArgs& args) {
  cmd->add_option("problem", args.problem_path, "Problem file (JSON)")->required();
  cmd->add_option("--set", args.sets,
                  "Override a top-level problem field, key=JSON (repeatable), "
                  "e.g. --set M=150 --set rho=0.01");
  cmd->add_option("-o,--output", args.output,
                  "Write the result record here (overrides the problem's output "
                  "field; default stdout)");
  cmd->add_option("-j,--threads", args.threads, "Worker threads (default: all cores)");
  cmd->add_flag("-v,--verbose", args.verbose, "Progress summary on stderr");
}

/// Builds the JSON merge patch from --set key=value pairs. Values are raw JSON
/// fragments; bare words are quoted so --set output=r.json works unescaped.
std::string build_patch(const std::vector<std::string>& sets, std::string* err) {
  std::string patch = "{";
  for (const std::string& kv : sets) {
    std::size_t eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      *err = "--set expects key=value, got '" + kv + "'";
      return "";
    }
    std::string key = kv.substr(0, eq);
    std::string value = kv.substr(eq + 1);
    bool looks_json = !value.empty() && (std::string("{[\"-0123456789").find(value[0]) !=
                                             std::string::npos ||
                                         value == "true" || value == "false" ||
                                         value == "null");
    if (!looks_json) value = "\"" + value + "\"";
    if (patch.size() > 1) patch += ",";
    patch += "\"" + key + "\":" + value;
  }
  patch += "}";
  return patch;
}

int run_solve(const std::string& subcommand, const SolveArgs& args) {
  std::string text;
  if (!read_file(args.problem_path, text))
    return fail("cannot read " + args.problem_path, kExitInput);

  gtd_problem* prob = nullptr;
  gtd_status st = gtd_problem_parse(text.c_str(), &prob);
  if (st != GTD_OK) return fail_api(st);

  if (!args.sets.empty()) {
    std::string err;
    std::string patch = build_patch(args.sets, &err);
    if (patch.empty()) {
      gtd_problem_free(prob);
      return fail(err, kExitInput);
    }
    gtd_problem* patched = nullptr;
    st = gtd_problem_patch(prob, patch.c_str(), &patched);
    gtd_problem_free(prob);
    if (st != GTD_OK) return fail_api(st);
    prob = patched;
  }

  if (subcommand != gtd_problem_task(prob)) {
    std::string task = gtd_problem_task(prob);
    gtd_problem_free(prob);
    return fail("problem file declares task '" + task + "', not '" + subcommand + "'",
                kExitInput);
  }

  gtd_result* res = nullptr;
  st = gtd_problem_run(prob, pick_threads(args.threads), &res);
  if (st != GTD_OK) {
    gtd_problem_free(prob);
    return fail_api(st);
  }

  char* json = nullptr;
  st = gtd_result_to_json(res, 2, &json);
  if (st != GTD_OK) {
    gtd_result_free(res);
    gtd_problem_free(prob);
    return fail_api(st);
  }

  std::string out_path = !args.output.empty() ? args.output : gtd_problem_output(prob);
  int code = 0;
  if (!out_path.empty()) {
    if (!write_file(out_path, std::string(json) + "\n"))
      code = fail("cannot write " + out_path, kExitInput);
  } else {
    std::cout << json << "\n";
  }

  bool ok = gtd_result_converged(res) && gtd_result_certified(res);
  if (args.verbose || !ok)
    std::cerr << "gt: " << subcommand << (ok ? ": certified" : ": NOT certified")
              << (out_path.empty() ? "" : " -> " + out_path) << "\n";
  if (code == 0 && !ok) code = kExitNotConverged;

  gtd_string_free(json);
  gtd_result_free(res);
  gtd_problem_free(prob);
  return code;
}

int load_record(const std::string& path, gtd_result** out) {
  std::string text;
  if (!read_file(path, text)) return fail("cannot read " + path, kExitInput);
  gtd_status st = gtd_result_parse(text.c_str(), out);
  if (st != GTD_OK) return fail_api(st);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal designs for group testing: solve, round, verify, reproduce"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(gtd_version()));

  SolveArgs oad_args, mm_args, round_args, rob_args;
  add_solve_options(app.add_subcommand("oad", "Single-criterion optimal approximate design"),
                    oad_args);
  add_solve_options(app.add_subcommand("maximin", "Maximin efficient multi-criterion design"),
                    mm_args);
  add_solve_options(app.add_subcommand("round", "Exact design under a budget or sample size"),
                    round_args);
  add_solve_options(app.add_subcommand("robust-e", "Penalized E-optimal design"), rob_args);

  std::string disp_record, disp_output;
  CLI::App* disp = app.add_subcommand("dispersion", "Dispersion CSV for a result record");
  disp->add_option("record", disp_record, "Result record (JSON)")->required();
  disp->add_option("-o,--output", disp_output, "CSV path (default stdout)");

  std::string verify_record_path;
  CLI::App* verify = app.add_subcommand("verify", "Re-verify a stored result record");
  verify->add_option("record", verify_record_path, "Result record (JSON)")->required();

  std::string repro_table;
  int repro_threads = 0;
  CLI::App* repro = app.add_subcommand("reproduce", "Re-run a published table and compare");
  repro->add_option("table", repro_table, "table1|table2|table3|table4|robust-e")->required();
  repro->add_option("-j,--threads", repro_threads, "Worker threads (default: all cores)");

  CLI11_PARSE(app, argc, argv);

  if (app.got_subcommand("oad")) return run_solve("oad", oad_args);
  if (app.got_subcommand("maximin")) return run_solve("maximin", mm_args);
  if (app.got_subcommand("round")) return run_solve("round", round_args);
  if (app.got_subcommand("robust-e")) return run_solve("robust-e", rob_args);

  if (app.got_subcommand("dispersion")) {
    gtd_result* rec = nullptr;
    if (int code = load_record(disp_record, &rec)) return code;
    char* csv = nullptr;
    gtd_status st = gtd_dispersion_csv(rec, &csv);
    gtd_result_free(rec);
    if (st != GTD_OK) return fail_api(st);
    int code = 0;
    if (!disp_output.empty()) {
      if (!write_file(disp_output, csv)) code = fail("cannot write " + disp_output, kExitInput);
    } else {
      std::cout << csv;
    }
    gtd_string_free(csv);
    return code;
  }

  if (app.got_subcommand("verify")) {
    gtd_result* rec = nullptr;
    if (int code = load_record(verify_record_path, &rec)) return code;
    int certified = 0, matches = 0;
    gtd_status st = gtd_verify_record(rec, &certified, &matches);
    gtd_result_free(rec);
    if (st != GTD_OK) return fail_api(st);
    std::cout << "certified: " << (certified ? "yes" : "no")
              << "\nmatches stored verdict: " << (matches ? "yes" : "no") << "\n";
    return certified && matches ? 0 : kExitNotConverged;
  }

  // reproduce
  char* report = nullptr;
  gtd_status st = gtd_reproduce(repro_table.c_str(), pick_threads(repro_threads), &report);
  if (report) {
    std::cout << report;
    gtd_string_free(report);
  }
  if (st == GTD_OK) return 0;
  if (st == GTD_ERR_MISMATCH) return kExitMismatch;
  return fail_api(st);
}
