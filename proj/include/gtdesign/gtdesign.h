#ifndef GTDESIGN_H
#define GTDESIGN_H

/* C interface to the group-testing optimal-design library.
 *
 * All objects are opaque handles freed by their *_free function. Functions
 * returning gtd_status report failure details via gtd_last_error(), which is
 * thread-local and valid until the next API call on the same thread. Strings
 * returned through char** out-parameters are heap-allocated and must be
 * released with gtd_string_free(). */

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  GTD_OK = 0,
  GTD_ERR_INVALID_INPUT = 1, /* malformed problem/record, violated invariant */
  GTD_ERR_NOT_CONVERGED = 2, /* solver or anchor failed its certificate */
  GTD_ERR_MISMATCH = 3,      /* reproduction cells differ from expected */
  GTD_ERR_INTERNAL = 4
} gtd_status;

typedef struct gtd_problem gtd_problem;
typedef struct gtd_result gtd_result;

const char* gtd_version(void);
int gtd_schema_version(void);
const char* gtd_last_error(void);

/* ---- problems ---- */

gtd_status gtd_problem_parse(const char* json_text, gtd_problem** out);
void gtd_problem_free(gtd_problem* p);

/* Shallow merge-patch: top-level keys of patch_json replace those of the
 * problem; the merged document is re-validated from scratch. */
gtd_status gtd_problem_patch(const gtd_problem* p, const char* patch_json,
                             gtd_problem** out);

/* "oad", "maximin", "round" or "robust-e" */
const char* gtd_problem_task(const gtd_problem* p);
/* Result path from the problem file; "" when unset. */
const char* gtd_problem_output(const gtd_problem* p);

/* threads <= 0 selects the available hardware parallelism. */
gtd_status gtd_problem_run(const gtd_problem* p, int threads, gtd_result** out);

/* ---- results ---- */

gtd_status gtd_result_parse(const char* json_text, gtd_result** out);
void gtd_result_free(gtd_result* r);

/* indent < 0 emits compact JSON. */
gtd_status gtd_result_to_json(const gtd_result* r, int indent, char** out);

int gtd_result_converged(const gtd_result* r);
int gtd_result_certified(const gtd_result* r);
const char* gtd_result_output(const gtd_result* r);

/* Recomputes the certificate of a stored record. certified reports the fresh
 * verdict, matches_stored whether it equals the recorded one. */
gtd_status gtd_verify_record(const gtd_result* r, int* certified,
                             int* matches_stored);

/* CSV: u, one d_j column per criterion, and an eta-aggregated column for
 * multi-criterion records. Fails with GTD_ERR_INVALID_INPUT when the record
 * lacks the eta weights the aggregate column needs. */
gtd_status gtd_dispersion_csv(const gtd_result* r, char** out);

/* table_id in {"table1","table2","table3","table4","robust-e"}. Writes the
 * per-cell report unconditionally; returns GTD_ERR_MISMATCH unless every cell
 * passes. */
gtd_status gtd_reproduce(const char* table_id, int threads, char** report);

void gtd_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* GTDESIGN_H */
