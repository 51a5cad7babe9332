/*
 * C interface to the stochastic submodular cover library.
 *
 * Instances are opaque handles. Every call returns an ssc_status; on failure
 * ssc_last_error() describes the problem (thread-local, valid until the next
 * call on the same thread). Strings returned through char** are owned by the
 * caller and released with ssc_string_free(). Options and results are JSON
 * documents.
 */
#ifndef SSC_SSC_H
#define SSC_SSC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SSC_API __declspec(dllexport)
#else
#define SSC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ssc_status {
  SSC_OK = 0,
  SSC_ERR_INVALID_ARGUMENT = 1,
  SSC_ERR_PARSE = 2,
  SSC_ERR_IO = 3,
  SSC_ERR_INVALID_INSTANCE = 4,
  SSC_ERR_ITEM_ALREADY_ASSIGNED = 5,
  SSC_ERR_BUDGET_EXCEEDED = 6,
  SSC_ERR_TABLE_MISS = 7,
  SSC_ERR_NOT_COVERABLE = 8,
  SSC_ERR_ETA_UNAVAILABLE = 9,
  SSC_ERR_POLICY_INCOMPLETE = 10,
  SSC_ERR_NON_COVERING_POLICY = 11,
  SSC_ERR_NO_PROGRESS = 12,
  SSC_ERR_DOMAIN = 13,
  SSC_ERR_GENERATION_FAILED = 14,
  SSC_ERR_REFERENCE_MISMATCH = 15,
  SSC_ERR_INTERNAL = 16
} ssc_status;

typedef struct ssc_instance ssc_instance;

SSC_API const char* ssc_version(void);
SSC_API const char* ssc_status_string(ssc_status status);
SSC_API const char* ssc_last_error(void);
SSC_API void ssc_string_free(char* s);

/* Instance file format: {"n","k","costs","probs","integer_valued","utility"}
 * with an optional declared "eta". */
SSC_API ssc_status ssc_instance_from_json(const char* json, ssc_instance** out);
SSC_API ssc_status ssc_instance_to_json(const ssc_instance* inst, char** out);
SSC_API ssc_status ssc_instance_shape(const ssc_instance* inst, size_t* n, size_t* k);
SSC_API void ssc_instance_destroy(ssc_instance* inst);

/* config: {"kind": "coverage"|"truncated_additive"|"classical_set_cover",
 *          "n","k","m","cost_lo","cost_hi","density","integer_valued","seed"} */
SSC_API ssc_status ssc_generate(const char* config_json, ssc_instance** out);

/* Runs every validator. Result: {"ok", "violations": [{"kind","detail"}]}. */
SSC_API ssc_status ssc_validate(const ssc_instance* inst, size_t budget, uint64_t seed,
                                char** result_json);

/* options: {"policy": "greedy"|"optimal", "alpha", "selector", "budget",
 *           "node_budget", "emit_tree"} */
SSC_API ssc_status ssc_solve(const ssc_instance* inst, const char* options_json,
                             char** result_json);

/* options: as ssc_solve plus {"method": "exact"|"mc"|"both", "trials", "seed"} */
SSC_API ssc_status ssc_evaluate(const ssc_instance* inst, const char* options_json,
                                char** result_json);

/* options: {"alpha", "selector", "lemmas", "tolerance", "budget", "keep_checks"}.
 * *passed is set to 1 when no non-informational check failed. */
SSC_API ssc_status ssc_verify(const ssc_instance* inst, const char* options_json,
                              char** report_json, int* passed);

/* format: "json" or "csv". *passed is 1 when every row passed. */
SSC_API ssc_status ssc_run_experiment(const char* config_json, const char* format,
                                      char** report, int* passed);

/* which: "figure-example" or "appendix-b". */
SSC_API ssc_status ssc_reproduce(const char* which, char** report_json);

SSC_API ssc_status ssc_kappa(double goal, double eta, int integer_valued, double* out);

#ifdef __cplusplus
}
#endif

#endif /* SSC_SSC_H */
