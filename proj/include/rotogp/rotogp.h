#ifndef ROTOGP_ROTOGP_H
#define ROTOGP_ROTOGP_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(ROTOGP_BUILDING)
#    define ROTOGP_API __declspec(dllexport)
#  else
#    define ROTOGP_API __declspec(dllimport)
#  endif
#else
#  define ROTOGP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rotogp_status {
    ROTOGP_OK = 0,
    ROTOGP_ERR_INVALID_ARGUMENT = 1, /* malformed config or violated precondition */
    ROTOGP_ERR_GRID_MISMATCH = 2,
    ROTOGP_ERR_NOT_CONVERGED = 3,
    ROTOGP_ERR_NUMERICAL = 4,
    ROTOGP_ERR_IO = 5,
    ROTOGP_ERR_NULL_POINTER = 6,
    ROTOGP_ERR_INTERNAL = 7
} rotogp_status;

typedef struct rotogp_result rotogp_result;
typedef struct rotogp_field rotogp_field;

ROTOGP_API const char* rotogp_version(void);
ROTOGP_API const char* rotogp_status_string(rotogp_status status);

/* Message of the last failure on the calling thread ("" when none). */
ROTOGP_API const char* rotogp_last_error(void);

/* Number of subcommands and their names. */
ROTOGP_API size_t rotogp_command_count(void);
ROTOGP_API const char* rotogp_command_name(size_t index);

/* Runs one subcommand described by a JSON config document, e.g.
   {"command": "solve-gp", "dim": 2, "omega": 0, "a": 0, "output_dir": "out"}.
   Writes results.json, timings.json and any CSV or field dumps into
   output_dir. On success *out owns the result; free it with rotogp_result_free. */
ROTOGP_API rotogp_status rotogp_run(const char* config_json, rotogp_result** out);

/* results.json content; the pointer lives as long as the result. */
ROTOGP_API const char* rotogp_result_json(const rotogp_result* result);
ROTOGP_API const char* rotogp_result_timings(const rotogp_result* result);
/* 1 when every invariant check passed, 0 otherwise (or on NULL). */
ROTOGP_API int rotogp_result_passed(const rotogp_result* result);
/* Number at a JSON pointer such as "/outputs/energy". */
ROTOGP_API rotogp_status rotogp_result_number(const rotogp_result* result, const char* pointer, double* value);
ROTOGP_API void rotogp_result_free(rotogp_result* result);

/* Field dumps: <stem>.f64 (little-endian float64 re,im pairs, row-major,
   axis 0 slowest) with the sidecar <stem>.json {dim, n, L, omega, format}. */
ROTOGP_API rotogp_status rotogp_field_load(const char* path, rotogp_field** out);
ROTOGP_API rotogp_status rotogp_field_info(const rotogp_field* field, int* dim, int* n, double* extent);
/* Interleaved re,im values; count receives the number of complex entries. */
ROTOGP_API rotogp_status rotogp_field_data(const rotogp_field* field, const double** values, size_t* count);
ROTOGP_API rotogp_status rotogp_field_save(const rotogp_field* field, const char* stem);
/* Total phase winding in the xy-plane and <L_z>. */
ROTOGP_API rotogp_status rotogp_field_vortices(const rotogp_field* field, int* total_winding, double* lz);
ROTOGP_API void rotogp_field_free(rotogp_field* field);

#ifdef __cplusplus
}
#endif

#endif
