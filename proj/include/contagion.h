/* C API for the contagion simulation engine.
 *
 * All functions are thread-safe as long as each engine handle is used from
 * one thread at a time. Error details for the most recent failing call on
 * the current thread are available via contagion_last_error().
 */
#ifndef CONTAGION_H
#define CONTAGION_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum contagion_status {
  CONTAGION_OK = 0,
  CONTAGION_VALIDATION_FAILED = 1, /* data or parameter findings; see report */
  CONTAGION_IO_ERROR = 2,
  CONTAGION_INVALID_ARGUMENT = 3,
  CONTAGION_INTERNAL_ERROR = 4
} contagion_status;

/* Values match the engine's stable structure ids. */
typedef enum contagion_structure {
  CONTAGION_ERDOS_RENYI = 0,
  CONTAGION_FLIGHT_TO_QUALITY = 1,
  CONTAGION_DISASSORTATIVE = 2,
  CONTAGION_ASSORTATIVE = 3,
  CONTAGION_TIERED_I = 4,
  CONTAGION_TIERED_II = 5
} contagion_structure;

typedef struct contagion_engine contagion_engine;

const char* contagion_version(void);

/* Message from the most recent failing call on this thread; never NULL. */
const char* contagion_last_error(void);

/* Free any char* returned through an out-parameter. */
void contagion_string_free(char* text);

/* Parse a JSON config (or run manifest) and load the referenced data files.
 * Relative paths resolve against base_dir (pass "" or NULL for the working
 * directory). Returns NULL on failure; see contagion_last_error(). Data-level
 * findings do not fail creation; query them via validate. */
contagion_engine* contagion_engine_create(const char* config_json, const char* base_dir);
void contagion_engine_destroy(contagion_engine* engine);

/* Writes the validation report to *report_out (caller frees). Returns
 * CONTAGION_OK for a usable dataset (exclusions and notes allowed) and
 * CONTAGION_VALIDATION_FAILED when any rejection exists. */
contagion_status contagion_engine_validate(contagion_engine* engine, char** report_out);

/* alpha_timeseries.csv + run_manifest.json into out_dir. jobs <= 0 means
 * one worker; results are identical for every jobs value. */
contagion_status contagion_engine_run(contagion_engine* engine, const char* out_dir, int jobs);

/* Single-cascade trace and optional per-bank profile for one month
 * ("YYYY-MM") and one initiating bank. structure may be NULL to use the
 * first configured structure. */
contagion_status contagion_engine_shock(contagion_engine* engine, const char* month,
                                        const char* bank_id, int with_trace, int with_profile,
                                        const char* structure, const char* out_dir, int jobs);

/* Raw and scaled probability matrices plus an audit summary for one month. */
contagion_status contagion_engine_matrix(contagion_engine* engine, const char* month,
                                         const char* structure, const char* out_dir);

/* ---- array-level primitives (no engine, no files) ---- */

/* Fill out (n*n row-major) with connection probabilities for the given
 * structure over the asset vector. base_p is read only by
 * CONTAGION_ERDOS_RENYI. target_p_bar in (0,1] rescales the matrix average
 * onto the target; pass 0 or a negative value to skip scaling. */
contagion_status contagion_probability_matrix(int kind, int n, const double* assets,
                                              double base_p, double target_p_bar, double* out);

/* Run one cascade over an explicit system.
 * buckets: n*3 row-major (short, medium, long) per bank; capitals: n values;
 * adjacency: n*n row-major, nonzero means a directed edge i->j; initiator in
 * [0, n). Outputs the default count (including the initiator) and the
 * defaulted fraction. Either out-pointer may be NULL. */
contagion_status contagion_run_cascade(int n, const double* buckets, const double* capitals,
                                       const uint8_t* adjacency, int initiator, double s,
                                       double u, double g_s, double g_m, double g_l,
                                       double delta, int* theta_out, double* alpha_out);

#ifdef __cplusplus
}
#endif

#endif /* CONTAGION_H */
