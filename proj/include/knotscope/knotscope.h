/* knotscope C API. Handles are opaque; every call returns a ks_status and
 * leaves a thread-local message for ks_last_error_message() on failure.
 * Strings returned through char** are heap-allocated and must be released
 * with ks_free_string(). */
#ifndef KNOTSCOPE_H
#define KNOTSCOPE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define KS_API __declspec(dllexport)
#else
#define KS_API __attribute__((visibility("default")))
#endif

typedef enum ks_status {
  KS_OK = 0,
  KS_ERR_INVALID_ARGUMENT,
  KS_ERR_PARSE,
  KS_ERR_ODD_VALUE,
  KS_ERR_DUPLICATE_MAGNITUDE,
  KS_ERR_WRONG_RANGE,
  KS_ERR_INVALID_GAUSS,
  KS_ERR_INVALID_DIAGRAM,
  KS_ERR_NON_REALIZABLE,
  KS_ERR_NOT_A_KNOT,
  KS_ERR_BUDGET_EXCEEDED,
  KS_ERR_NON_SQUARE_NORM,
  KS_ERR_DISAGREEMENT,
  KS_ERR_OVERFLOW,
  KS_ERR_IO,
  KS_ERR_EMPTY_FILE,
  KS_ERR_MISSING_COLUMN,
  KS_ERR_MALFORMED_ROW,
  KS_ERR_EMPTY_GROUP,
  KS_ERR_EMPTY_INPUT,
  KS_ERR_DEGENERATE_RANGE,
  KS_ERR_DEGENERATE_X,
  KS_ERR_TOO_FEW_POINTS,
  KS_ERR_NONPOSITIVE_VOLUME,
  KS_ERR_NO_CONVERGENCE,
  KS_ERR_SINGULAR_JACOBIAN,
  KS_ERR_INTERNAL
} ks_status;

typedef enum ks_format { KS_FORMAT_JSON = 0, KS_FORMAT_CSV = 1 } ks_format;

typedef struct ks_diagram ks_diagram;
typedef struct ks_table ks_table;

typedef struct ks_determinants {
  uint64_t goeritz;
  uint64_t alexander;
  uint64_t jones;     /* valid only when jones_computed != 0 */
  int jones_computed; /* 0 when the bracket budget was exceeded */
  int agree;
} ks_determinants;

KS_API const char* ks_version(void);
KS_API const char* ks_status_name(ks_status status);
KS_API const char* ks_last_error_message(void);
KS_API void ks_free_string(char* s);

/* Looks up `key` in key = value config text; *value is NULL when absent. */
KS_API ks_status ks_config_lookup(const char* config_text, const char* key, char** value);

/* ---- diagrams ---- */
KS_API ks_status ks_diagram_from_dt(const char* text, ks_diagram** out);
KS_API ks_status ks_diagram_from_gauss(const char* text, ks_diagram** out);
KS_API ks_status ks_diagram_pretzel(int p, int q, int r, ks_diagram** out);
KS_API ks_status ks_diagram_twist(int n, ks_diagram** out);
KS_API ks_status ks_diagram_mirror(const ks_diagram* d, ks_diagram** out);
KS_API void ks_diagram_free(ks_diagram* d);

KS_API ks_status ks_diagram_crossings(const ks_diagram* d, int* out);
KS_API ks_status ks_diagram_writhe(const ks_diagram* d, int* out);
KS_API ks_status ks_diagram_faces(const ks_diagram* d, int* out);
KS_API ks_status ks_diagram_dt(const ks_diagram* d, char** out);      /* canonical DT code */
KS_API ks_status ks_diagram_pd(const ks_diagram* d, char** out);
KS_API ks_status ks_diagram_bracket(const ks_diagram* d, char** out); /* Kauffman bracket in A */
KS_API ks_status ks_diagram_determinants(const ks_diagram* d, ks_determinants* out);
/* Consensus value; KS_ERR_DISAGREEMENT when the routes differ. */
KS_API ks_status ks_diagram_determinant(const ks_diagram* d, uint64_t* out);

/* Family specs: "twist:1..30", "pretzel:3,3,2..20:even". all_match may be NULL. */
KS_API ks_status ks_family_report(const char* spec, ks_format format, char** out, int* all_match);

/* ---- dataset ----
 * `options` is key = value text (NULL for defaults): column.<canonical> =
 * <header>, policy = quarantine|strict, derive_from_name, delimiter,
 * crossings = 12..17. */
KS_API ks_status ks_table_load(const char* const* paths, size_t npaths, const char* options,
                               ks_table** out, char** report_json);
KS_API void ks_table_free(ks_table* t);
KS_API ks_status ks_table_size(const ks_table* t, size_t* out);
KS_API ks_status ks_table_group_stats(const ks_table* t, ks_format format, char** out);
KS_API ks_status ks_table_verify_sample(const ks_table* t, size_t k, uint64_t seed,
                                        const char* crossings, int jobs, char** report_json,
                                        size_t* matches, size_t* sampled);

/* Analysis calls take `params`, key = value text (NULL for defaults):
 *   y = kfh_rank|determinant   groups = all|alt|nonalt|12a,13n
 *   crossings = 12..17         log_base = e|10      jobs = N
 *   d = 50                     x_scale = raw|per-crossing|unit-max
 * `failed` (nullable) receives the number of groups whose fit failed. */
KS_API ks_status ks_table_fit(const ks_table* t, const char* params, ks_format format, char** out,
                              size_t* failed);
KS_API ks_status ks_table_amin(const ks_table* t, const char* params, ks_format format, char** out);
KS_API ks_status ks_table_density(const ks_table* t, const char* params, ks_format format,
                                  char** out, size_t* failed);
/* Step curve of one group ("group = 12n") as CSV x,f. */
KS_API ks_status ks_table_density_curve(const ks_table* t, const char* params, char** out);

/* check = rank-volume | rank-volume-amin | det-volume | density | stoimenow,
 * with a, b, margin and the analysis keys above. For density, sigmoid
 * parameters come from L, k, x0, b when all four are given, otherwise each
 * group's own fit. */
KS_API ks_status ks_table_check(const ks_table* t, const char* check, const char* params,
                                ks_format format, char** out);

/* kind = scatter-rank | scatter-det | hist-rank | hist-volume | hist-det |
 * density; `crossings` selects one crossing number (group for density),
 * seed / max_points / timestamp control scatter downsampling.
 * KS_ERR_EMPTY_GROUP when nothing would be drawn. */
KS_API ks_status ks_table_plot(const ks_table* t, const char* kind, const char* params, char** svg);

#ifdef __cplusplus
}
#endif

#endif
