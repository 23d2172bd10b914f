#ifndef QBIP_H
#define QBIP_H

/* C interface to the qbip library. Functions return a qbip_status; on
 * failure qbip_last_error() describes the most recent error on the calling
 * thread. Strings handed out by the library are released with
 * qbip_string_free. */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define QBIP_API __declspec(dllexport)
#else
#define QBIP_API __attribute__((visibility("default")))
#endif

typedef enum qbip_status {
  QBIP_OK = 0,
  QBIP_INVALID_ARGUMENT = 1,
  QBIP_RING_MISMATCH = 2,
  QBIP_NOT_UNIT = 3,
  QBIP_PARSE = 4,
  QBIP_PRECISION = 5,
  QBIP_NOT_FOUND = 6,
  QBIP_IO = 7,
  QBIP_RANGE = 8,
  QBIP_INTERNAL = 100
} qbip_status;

typedef struct qbip_expr qbip_expr;
typedef struct qbip_series qbip_series;

QBIP_API const char* qbip_version(void);
/* Message for the last failed call on this thread, or "" if none. */
QBIP_API const char* qbip_last_error(void);
QBIP_API void qbip_string_free(char* s);

QBIP_API qbip_status qbip_expr_parse(const char* text, qbip_expr** out);
QBIP_API void qbip_expr_free(qbip_expr* e);
QBIP_API qbip_status qbip_expr_to_string(const qbip_expr* e, char** out);

/* Expands e through q^order over the integers (modulus 0) or Z/modulus. */
QBIP_API qbip_status qbip_series_eval(const qbip_expr* e, uint64_t modulus, size_t order, qbip_series** out);
QBIP_API void qbip_series_free(qbip_series* s);
QBIP_API size_t qbip_series_order(const qbip_series* s);
QBIP_API uint64_t qbip_series_modulus(const qbip_series* s);
/* Coefficient of q^n as a decimal string. */
QBIP_API qbip_status qbip_series_coeff(const qbip_series* s, size_t n, char** out);
QBIP_API qbip_status qbip_series_to_string(const qbip_series* s, size_t max_terms, char** out);

/* B_{l,m}(n) as a decimal string, exactly (modulus 0) or reduced mod modulus. */
QBIP_API qbip_status qbip_bipartition_coeff(int64_t l, int64_t m, size_t n, uint64_t modulus, char** out);
/* b_l(n), same conventions. */
QBIP_API qbip_status qbip_regular_coeff(int64_t l, size_t n, uint64_t modulus, char** out);

/* Runs a verification suite described by a JSON config and returns the JSON
 * report. exit_code is 0 when no case failed. */
QBIP_API qbip_status qbip_run_suite(const char* config_json, char** report_json, int* exit_code);
/* Renders a JSON report as "text", "json" or "csv". */
QBIP_API qbip_status qbip_render_report(const char* report_json, const char* format, char** out);
/* JSON listing of identities, chains and families. */
QBIP_API qbip_status qbip_list(char** out);

#ifdef __cplusplus
}
#endif

#endif
