/*
 * logtrace C API
 *
 * Shared-library interface over the exact-arithmetic fan/monodromy engine.
 * All functions return a logtrace_status; out-parameters are only written on
 * LOGTRACE_OK unless stated otherwise. Strings returned through char** are
 * heap-allocated and must be released with logtrace_string_free(). The
 * message from the most recent failure in the calling thread is available
 * via logtrace_last_error().
 *
 * Status values double as the CLI exit codes (0 success, 1 validation or
 * runtime failure, 2 consistency violation, 3 parse/usage error).
 */
#ifndef LOGTRACE_H
#define LOGTRACE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct logtrace_model logtrace_model; /* opaque */

typedef enum logtrace_status {
    LOGTRACE_OK = 0,
    LOGTRACE_ERR_VALIDATION = 1,
    LOGTRACE_ERR_CONSISTENCY = 2,
    LOGTRACE_ERR_PARSE = 3,
    LOGTRACE_ERR_PRECONDITION = 4,
    LOGTRACE_ERR_RESOURCE = 5,
    LOGTRACE_ERR_INTERNAL = 6
} logtrace_status;

const char* logtrace_version(void);

/* thread-local message for the last failing call; never NULL */
const char* logtrace_last_error(void);

void logtrace_string_free(char* s);

/* enumeration rank bound (default 4); affects all subsequent calls */
int logtrace_rank_bound(void);
void logtrace_set_rank_bound(int bound);

logtrace_status logtrace_model_parse(const char* json_text, logtrace_model** out);
logtrace_status logtrace_model_load(const char* path, logtrace_model** out);
logtrace_status logtrace_model_save(const logtrace_model* m, const char* path);
logtrace_status logtrace_model_to_json(const logtrace_model* m, char** out_json);
void logtrace_model_free(logtrace_model* m);

/* out_report receives a human-readable violation list (also on failure) */
logtrace_status logtrace_model_validate(const logtrace_model* m, char** out_report);

/* format: 0 = text, 1 = json; max_d <= 0 picks the default trace horizon */
logtrace_status logtrace_model_analyze(const logtrace_model* m, int max_d, int format,
                                       char** out_report);

/*
 * Log blow-up at the ray through `center` (length center_len, coordinates of
 * the named chart). When face_len > 0 the carrier is checked against the
 * given sorted ray-index list and the call fails if they disagree.
 */
logtrace_status logtrace_model_subdivide(const logtrace_model* m, const char* chart,
                                         const int64_t* center, size_t center_len,
                                         const int64_t* face_ray_indices, size_t face_len,
                                         logtrace_model** out);

/* out_trail (optional) receives one "chart v" line per subdivision center */
logtrace_status logtrace_model_resolve(const logtrace_model* m, logtrace_model** out,
                                       char** out_trail);

/* out_cycle (optional) receives the special-fibre cycle when snc */
logtrace_status logtrace_model_is_snc(const logtrace_model* m, int* out_snc, char** out_cycle);

/* randomized saturation-structure oracle; fails unless every case verifies */
logtrace_status logtrace_oracle_run(uint64_t seed, int cases, int max_d, char** out_report);

/* built-in fixtures and property suites */
logtrace_status logtrace_selftest(char** out_report);

/* JSON text of a built-in example model, or NULL for unknown names */
const char* logtrace_fixture(const char* name);

#ifdef __cplusplus
}
#endif

#endif /* LOGTRACE_H */
