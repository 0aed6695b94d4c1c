#ifndef AXIOMPROBE_H
#define AXIOMPROBE_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum AxpStatus {
  AXP_STATUS_OK = 0,
  AXP_STATUS_NULL_POINTER = 1,
  AXP_STATUS_INVALID_UTF8 = 2,
  AXP_STATUS_INVALID_ARGUMENT = 3,
  AXP_STATUS_PARSE = 4,
  AXP_STATUS_IO = 5,
  AXP_STATUS_GENERATION = 6,
  AXP_STATUS_SCORING = 7,
  AXP_STATUS_PANIC = 8,
} AxpStatus;

/**
 * Which output of a generation run to read.
 */
typedef enum AxpStream {
  AXP_STREAM_STATEMENTS = 0,
  AXP_STREAM_MWP = 1,
  AXP_STREAM_SP = 2,
} AxpStream;

typedef enum AxpFormat {
  AXP_FORMAT_JSON = 0,
  AXP_FORMAT_CSV = 1,
  AXP_FORMAT_MARKDOWN = 2,
} AxpFormat;

typedef struct AxpAxiom AxpAxiom;

typedef struct AxpConfig AxpConfig;

typedef struct AxpGeneration AxpGeneration;

typedef struct AxpReport AxpReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, statically allocated. Do not free.
 */
const char *axp_version(void);

/**
 * Message of the last failed call on this thread, or NULL. Valid until the
 * next call into this library on the same thread. Do not free.
 */
const char *axp_last_error(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, not yet freed.
 */
void axp_string_free(char *s);

/**
 * Parses and validates an axiom formula.
 *
 * # Safety
 * `formula` must be a NUL-terminated string; `out` must be writable.
 */
enum AxpStatus axp_axiom_parse(const char *formula, struct AxpAxiom **out);

/**
 * Canonical formula text. Free the result with `axp_string_free`.
 *
 * # Safety
 * `axiom` must be a live handle; `out` must be writable.
 */
enum AxpStatus axp_axiom_print(const struct AxpAxiom *axiom, char **out);

/**
 * Content-derived axiom id. Free the result with `axp_string_free`.
 *
 * # Safety
 * `axiom` must be a live handle; `out` must be writable.
 */
enum AxpStatus axp_axiom_id(const struct AxpAxiom *axiom, char **out);

/**
 * # Safety
 * `axiom` must be NULL or a handle from `axp_axiom_parse`, not yet freed.
 */
void axp_axiom_free(struct AxpAxiom *axiom);

/**
 * Default configuration: seed 0, novel entities, output directory `out`.
 *
 * # Safety
 * `out` must be writable.
 */
enum AxpStatus axp_config_new(struct AxpConfig **out);

/**
 * Configuration from the same JSON document the command line accepts.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum AxpStatus axp_config_from_json(const char *json, struct AxpConfig **out);

/**
 * # Safety
 * `config` must be a live handle.
 */
enum AxpStatus axp_config_set_seed(struct AxpConfig *config, uint64_t seed);

/**
 * # Safety
 * `config` must be a live handle; `dir` a NUL-terminated string.
 */
enum AxpStatus axp_config_set_output_dir(struct AxpConfig *config, const char *dir);

/**
 * # Safety
 * `config` must be NULL or a live handle, not yet freed.
 */
void axp_config_free(struct AxpConfig *config);

/**
 * Runs the `ingest` stage, writing under the configured output directory.
 *
 * # Safety
 * `config` must be a live handle.
 */
enum AxpStatus axp_ingest(const struct AxpConfig *config);

/**
 * Runs the `generate` stage on disk.
 *
 * # Safety
 * `config` must be a live handle.
 */
enum AxpStatus axp_generate(const struct AxpConfig *config);

/**
 * Runs the `split` stage on disk.
 *
 * # Safety
 * `config` must be a live handle.
 */
enum AxpStatus axp_split(const struct AxpConfig *config);

/**
 * Generates statements and probes in memory from axiom records (JSONL).
 * `lexicons_jsonl` may be NULL.
 *
 * # Safety
 * `config` must be a live handle; string arguments NUL-terminated or, for
 * lexicons, NULL; `out` must be writable.
 */
enum AxpStatus axp_generate_jsonl(const struct AxpConfig *config,
                                  const char *axioms_jsonl,
                                  const char *lexicons_jsonl,
                                  struct AxpGeneration **out);

/**
 * # Safety
 * `generation` must be a live handle.
 */
size_t axp_generation_statement_count(const struct AxpGeneration *generation);

/**
 * One output stream as JSONL. Free the result with `axp_string_free`.
 *
 * # Safety
 * `generation` must be a live handle; `out` must be writable.
 */
enum AxpStatus axp_generation_jsonl(const struct AxpGeneration *generation,
                                    enum AxpStream stream,
                                    char **out);

/**
 * # Safety
 * `generation` must be NULL or a live handle, not yet freed.
 */
void axp_generation_free(struct AxpGeneration *generation);

/**
 * Scores predictions (JSONL) against probes (JSONL).
 *
 * # Safety
 * String arguments must be NUL-terminated; `out` must be writable.
 */
enum AxpStatus axp_score_jsonl(const char *probes_jsonl,
                               const char *predictions_jsonl,
                               bool macro_average,
                               struct AxpReport **out);

/**
 * Headline accuracy under the report's averaging.
 *
 * # Safety
 * `report` must be a live handle; `accuracy` must be writable.
 */
enum AxpStatus axp_report_accuracy(const struct AxpReport *report, double *accuracy);

/**
 * Probe, correct and tie counts. Any output pointer may be NULL.
 *
 * # Safety
 * `report` must be a live handle; non-NULL outputs must be writable.
 */
enum AxpStatus axp_report_counts(const struct AxpReport *report,
                                 size_t *n,
                                 size_t *correct,
                                 size_t *ties);

/**
 * Renders the report. `axes` is a comma-separated list of breakdown axes
 * (perturbation, valence, axiom, template) or NULL for the default
 * perturbation and valence breakdowns. Free the result with
 * `axp_string_free`.
 *
 * # Safety
 * `report` must be a live handle; `axes` NULL or NUL-terminated; `out`
 * must be writable.
 */
enum AxpStatus axp_report_emit(const struct AxpReport *report,
                               enum AxpFormat format,
                               const char *axes,
                               char **out);

/**
 * # Safety
 * `report` must be NULL or a live handle, not yet freed.
 */
void axp_report_free(struct AxpReport *report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* AXIOMPROBE_H */
