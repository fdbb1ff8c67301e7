/* C interface to cartankit: load a problem file, run a named check suite, read the report. */
#ifndef CARTANKIT_H
#define CARTANKIT_H

#include <stddef.h>

#if defined(_WIN32)
#define CK_API __declspec(dllexport)
#else
#define CK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct ck_problem ck_problem;
typedef struct ck_report ck_report;

typedef enum ck_status {
  CK_OK = 0,
  CK_ERR_ARGUMENT = 1, /* null pointer or malformed argument */
  CK_ERR_IO = 2,       /* file cannot be read */
  CK_ERR_PARSE = 3,    /* not JSON, or wrong schema tag */
  CK_ERR_PROBLEM = 4,  /* names do not resolve, shapes inconsistent, bad setting */
  CK_ERR_USAGE = 5,    /* unknown command or wrong argument count */
  CK_ERR_NUMERIC = 6,  /* a computation outside any check failed */
  CK_ERR_INTERNAL = 7
} ck_status;

CK_API const char* ck_version(void);
CK_API const char* ck_status_string(ck_status s);
/* Message of the last failing call on this thread; empty if none. */
CK_API const char* ck_last_error(void);

/* Settings start from the file, then CARTANKIT_MODE; ck_problem_set overrides both. */
CK_API ck_status ck_problem_load_file(const char* path, ck_problem** out);
CK_API ck_status ck_problem_load_json(const char* text, ck_problem** out);
CK_API void ck_problem_free(ck_problem* p);
/* key: mode, tol, order, cap, h, fd_tol, test_mode */
CK_API ck_status ck_problem_set(ck_problem* p, const char* key, const char* value);

CK_API size_t ck_command_count(void);
CK_API const char* ck_command_name(size_t i);
CK_API const char* ck_command_usage(size_t i);
CK_API const char* ck_command_help(size_t i);

/* Generic entry point; args are the positional command arguments. */
CK_API ck_status ck_run(const ck_problem* p, const char* command, const char* const* args, size_t nargs,
                        ck_report** out);

CK_API ck_status ck_check_lie(const ck_problem* p, ck_report** out);
CK_API ck_status ck_verify_cartan(const ck_problem* p, const char* rep, ck_report** out);
/* flavor "chain" or "cochain"; expected may be NULL or "1,0,0,1" (degree 0 outward) */
CK_API ck_status ck_ce(const ck_problem* p, const char* rep, const char* flavor, const char* expected,
                       ck_report** out);
/* method "series", "quadrature" or "both" */
CK_API ck_status ck_integrate(const ck_problem* p, const char* rep, const char* word, const char* method,
                              ck_report** out);
/* nwords == 0 means every word in the problem */
CK_API ck_status ck_verify_module(const ck_problem* p, const char* rep, const char* const* words, size_t nwords,
                                  ck_report** out);
CK_API ck_status ck_roundtrip(const ck_problem* p, const char* rep, ck_report** out);
CK_API ck_status ck_adjunction(const ck_problem* p, const char* grep, const char* tgrep, ck_report** out);
CK_API ck_status ck_cubical(const ck_problem* p, const char* rep, const char* word, ck_report** out);

/* 1 iff every check passed. */
CK_API int ck_report_passed(const ck_report* r);
CK_API size_t ck_report_check_count(const ck_report* r);
/* Strings are owned by the report and live until ck_report_free. */
CK_API ck_status ck_report_json(const ck_report* r, const char** out);
CK_API ck_status ck_report_jsonl(const ck_report* r, const char** out);
CK_API ck_status ck_report_table(const ck_report* r, const char** out);
CK_API void ck_report_free(ck_report* r);

#ifdef __cplusplus
}
#endif

#endif
