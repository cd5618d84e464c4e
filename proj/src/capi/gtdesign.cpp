#include "gtdesign/gtdesign.h"

#include <cstring>
#include <new>
#include <string>
#include <thread>

#include <json.hpp>

#include "io/problem.hpp"
#include "io/tables.hpp"

namespace {

thread_local std::string g_error;

int resolve_threads(int threads) {
  if (threads > 0) return threads;
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

/* Runs fn, translating exceptions into status codes + g_error. */
template <typename Fn>
gtd_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const gtd::anchor_unverified& e) {
    g_error = e.what();
    return GTD_ERR_NOT_CONVERGED;
  } catch (const gtd::enumeration_cap_exceeded& e) {
    g_error = e.what();
    return GTD_ERR_NOT_CONVERGED;
  } catch (const gtd::invalid_input& e) {
    g_error = e.what();
    return GTD_ERR_INVALID_INPUT;
  } catch (const gtd::singular_information& e) {
    g_error = e.what();
    return GTD_ERR_INVALID_INPUT;
  } catch (const nlohmann::json::exception& e) {
    g_error = e.what();
    return GTD_ERR_INVALID_INPUT;
  } catch (const std::exception& e) {
    g_error = e.what();
    return GTD_ERR_INTERNAL;
  }
}

}  // namespace

struct gtd_problem {
  gtd::ProblemFile file;
  std::string task;
  std::string output;

  explicit gtd_problem(gtd::ProblemFile f)
      : file(std::move(f)), task(gtd::task_name(file.task)), output(file.output) {}
};

struct gtd_result {
  gtd::ResultRecord rec;

  explicit gtd_result(gtd::ResultRecord r) : rec(std::move(r)) {}
};

extern "C" {

const char* gtd_version(void) { return gtd::kToolVersion; }

int gtd_schema_version(void) { return gtd::kRecordSchema; }

const char* gtd_last_error(void) { return g_error.c_str(); }

gtd_status gtd_problem_parse(const char* json_text, gtd_problem** out) {
  if (!json_text || !out) {
    g_error = "null argument";
    return GTD_ERR_INVALID_INPUT;
  }
  *out = nullptr;
  return guarded([&] {
    *out = new gtd_problem(gtd::ProblemFile::parse(json_text));
    return GTD_OK;
  });
}

void gtd_problem_free(gtd_problem* p) { delete p; }

gtd_status gtd_problem_patch(const gtd_problem* p, const char* patch_json,
                             gtd_problem** out) {
  if (!p || !patch_json || !out) {
    g_error = "null argument";
    return GTD_ERR_INVALID_INPUT;
  }
  *out = nullptr;
  return guarded([&] {
    nlohmann::ordered_json base = nlohmann::ordered_json::parse(p->file.to_json());
    nlohmann::ordered_json patch = nlohmann::ordered_json::parse(patch_json);
    if (!patch.is_object()) throw gtd::invalid_input("patch must be a JSON object");
    for (auto& [key, value] : patch.items()) {
      if (value.is_null())
        base.erase(key);
      else
        base[key] = value;
    }
    *out = new gtd_problem(gtd::ProblemFile::parse(base.dump()));
    return GTD_OK;
  });
}

const char* gtd_problem_task(const gtd_problem* p) { return p->task.c_str(); }

const char* gtd_problem_output(const gtd_problem* p) { return p->output.c_str(); }

gtd_status gtd_problem_run(const gtd_problem* p, int threads, gtd_result** out) {
  if (!p || !out) {
    g_error = "null argument";
    return GTD_ERR_INVALID_INPUT;
  }
  *out = nullptr;
  return guarded([&] {
    *out = new gtd_result(gtd::run_problem(p->file, resolve_threads(threads)));
    return GTD_OK;
  });
}

gtd_status gtd_result_parse(const char* json_text, gtd_result** out) {
  if (!json_text || !out) {
    g_error = "null argument";
    return GTD_ERR_INVALID_INPUT;
  }
  *out = nullptr;
  return guarded([&] {
    *out = new gtd_result(gtd::ResultRecord::parse(json_text));
    return GTD_OK;
  });
}

void gtd_result_free(gtd_result* r) { delete r; }

gtd_status gtd_result_to_json(const gtd_result* r, int indent, char** out) {
  if (!r || !out) {
    g_error = "null argument";
    return GTD_ERR_INVALID_INPUT;
  }
  *out = nullptr;
  return guarded([&] {
    *out = dup_string(r->rec.to_json(indent));
    return GTD_OK;
  });
}

int gtd_result_converged(const gtd_result* r) { return r->rec.converged ? 1 : 0; }

int gtd_result_certified(const gtd_result* r) {
  return r->rec.certificate.certified ? 1 : 0;
}

const char* gtd_result_output(const gtd_result* r) {
  return r->rec.problem.output.c_str();
}

gtd_status gtd_verify_record(const gtd_result* r, int* certified, int* matches_stored) {
  if (!r || !certified || !matches_stored) {
    g_error = "null argument";
    return GTD_ERR_INVALID_INPUT;
  }
  return guarded([&] {
    gtd::RecordCheck check = gtd::verify_record(r->rec);
    *certified = check.certified ? 1 : 0;
    *matches_stored = check.matches_stored ? 1 : 0;
    return GTD_OK;
  });
}

gtd_status gtd_dispersion_csv(const gtd_result* r, char** out) {
  if (!r || !out) {
    g_error = "null argument";
    return GTD_ERR_INVALID_INPUT;
  }
  *out = nullptr;
  return guarded([&] {
    *out = dup_string(gtd::dispersion_csv(r->rec));
    return GTD_OK;
  });
}

gtd_status gtd_reproduce(const char* table_id, int threads, char** report) {
  if (!table_id || !report) {
    g_error = "null argument";
    return GTD_ERR_INVALID_INPUT;
  }
  *report = nullptr;
  return guarded([&]() -> gtd_status {
    gtd::ReproduceReport rep = gtd::reproduce(table_id, resolve_threads(threads));
    *report = dup_string(rep.text());
    if (!rep.all_pass) {
      g_error = "reproduction mismatch for " + rep.table;
      return GTD_ERR_MISMATCH;
    }
    return GTD_OK;
  });
}

void gtd_string_free(char* s) { delete[] s; }

}  // extern "C"
