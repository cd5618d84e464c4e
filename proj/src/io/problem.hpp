#pragma once

#include <optional>
#include <string>
#include <vector>

#include "core/maximin.hpp"
#include "core/model.hpp"
#include "core/rounding.hpp"
#include "core/solvers.hpp"

namespace gtd {

constexpr int kRecordSchema = 1;
constexpr const char* kToolVersion = "1.0.0";

enum class Task { Oad, Maximin, Round, RobustE };

const char* task_name(Task t);
std::optional<Task> task_from_name(const std::string& s);

/// Round a double to 12 significant digits (the serialization precision).
double sig12(double v);

/// FNV-1a 64-bit hash, hex-encoded; used as the config hash of a record.
std::string fnv1a_hex(const std::string& s);

/// Parsed problem description. The JSON schema is strict: unknown keys are
/// rejected at every nesting level before any solve starts.
struct ProblemFile {
  Task task = Task::Oad;
  ModelParams model{0.07, 0.93, 0.96};
  CostModel cost{0.0};
  int M = 0;
  std::vector<CriterionSpec> criteria;
  double rho = 0;                    // robust-e
  std::optional<double> budget;      // round, budget mode
  std::optional<long> sample_size;   // round, fixed-n mode
  ExpansionConfig expansion;
  SolverConfig solver;
  std::string output;                // optional result path (used by the CLI)

  static ProblemFile parse(const std::string& json_text);
  std::string to_json(int indent = -1) const;
};

struct CertificateSummary {
  bool certified = false;
  int worst_u = 0;
  double worst_value = 0;
  double delta = 1e-5;
  std::vector<double> eta;  // maximin only (Eq.-9 multipliers)
};

struct ResultRecord {
  int schema = kRecordSchema;
  std::string tool_version = kToolVersion;
  std::string config_hash;
  ProblemFile problem;
  std::vector<std::pair<int, double>> support;  // approximate design
  std::optional<ExactDesign> exact;             // round only
  double objective = 0;
  std::vector<double> efficiencies;
  std::vector<double> anchors;                  // multi-criterion tasks
  std::optional<double> t_star;
  std::optional<double> min_eff;
  CertificateSummary certificate;
  std::optional<RoundingTrace> trace;
  long iterations = 0;
  double wall_time = 0;
  bool converged = false;

  std::string to_json(int indent = -1) const;
  static ResultRecord parse(const std::string& json_text);

  /// Expands the stored support back into a full design vector.
  Design design() const;
};

/// Executes the task described by the problem. Throws on invalid input;
/// a failed certificate is reported via converged/certificate, not thrown.
ResultRecord run_problem(const ProblemFile& p, int threads = 1);

struct RecordCheck {
  bool certified = false;       // verdict of the fresh re-verification
  bool matches_stored = false;  // fresh verdict equals the stored one
  int worst_u = 0;
  double worst_value = 0;
};

/// Re-verifies a stored record against a fresh certificate computation.
RecordCheck verify_record(const ResultRecord& rec);

/// CSV with one row per grid point: u, d_j(u,w) per criterion, and for
/// multi-criterion records the eta-aggregated dispersion column.
std::string dispersion_csv(const ResultRecord& rec);

}  // namespace gtd
