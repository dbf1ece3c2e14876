/* C interface to the longitudinal fairness toolkit: counterfactual dataset
 * generation, biased-interaction simulation over pluggable memory engines,
 * and group-variance bias metrics. All functions return lf_status; every
 * failure leaves a human-readable message in lf_last_error() (thread local).
 * Strings returned through char** are heap-allocated; release them with
 * lf_string_free. Handles are opaque and single-owner. */

#ifndef LTMFAIR_H
#define LTMFAIR_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lf_status {
    LF_OK = 0,
    LF_INVALID_ARGUMENT = 1,
    LF_IO_ERROR = 2,
    LF_INVALID_MANIFEST = 3,
    LF_MISSING_ROSTER = 4,
    LF_PLACEHOLDER_ERROR = 5,
    LF_SCHEMA_ERROR = 6,
    LF_READ_ONLY_VIOLATION = 7,
    LF_EMBED_BACKEND_ERROR = 8,
    LF_CORRUPT_SNAPSHOT = 9,
    LF_RATE_LIMITED = 10,
    LF_BACKEND_UNAVAILABLE = 11,
    LF_AUTH_ERROR = 12,
    LF_MALFORMED_RESPONSE = 13,
    LF_UNKNOWN_GROUP = 14,
    LF_GENERATOR_UNAVAILABLE = 15,
    LF_EXTRACTION_ERROR = 16,
    LF_CORRUPT_CHECKPOINT = 17,
    LF_INSUFFICIENT_GROUPS = 18,
    LF_EMPTY_INPUT = 19,
    LF_MISSING_DOMAIN = 20,
    LF_UNDEFINED_MP = 21,
    LF_AUDITOR_UNAVAILABLE = 22,
    LF_MISSING_SNAPSHOT = 23,
    LF_INTERNAL = 24
} lf_status;

const char* lf_version(void);
const char* lf_status_name(lf_status s);

/* Message of the most recent failing call on this thread; "" when the last
 * call succeeded. The pointer stays valid until the next API call. */
const char* lf_last_error(void);

void lf_string_free(char* s);

/* ---- counterfactual dataset ---- */

typedef struct lf_dataset lf_dataset;

/* domains_csv: comma-separated domain names, NULL = all nine.
 * template_pack_path: JSON template pack, NULL = the built-in pack. */
lf_status lf_dataset_generate(const char* domains_csv, const char* template_pack_path,
                              lf_dataset** out);
lf_status lf_dataset_load(const char* jsonl_path, lf_dataset** out);
lf_status lf_dataset_write(const lf_dataset* ds, const char* jsonl_path);
size_t lf_dataset_size(const lf_dataset* ds);

/* Counterfactual check: every prompt pair within a scenario may differ only
 * inside the recorded attribute span. Returns LF_OK with the violation count;
 * violations_json (optional, may be NULL) receives the violating scenario ids
 * as a JSON array. */
lf_status lf_dataset_validate(const lf_dataset* ds, size_t* violations_out,
                              char** violations_json);
void lf_dataset_free(lf_dataset* ds);

/* Built-in template pack as canonical JSON. */
lf_status lf_default_templates(char** json_out);

/* ---- memory store ---- */

typedef struct lf_store lf_store;

/* kind: "vector" | "cluster" | "paged". paged_window and cluster_threshold
 * pass 0 to take the defaults (8 and 0.55). */
lf_status lf_store_create(const char* kind, int paged_window, double cluster_threshold,
                          lf_store** out);
lf_status lf_store_write(lf_store* st, int turn, const char* query, const char* response,
                         int64_t* entry_id_out);
/* json_out: array of {"entry_id","turn","text","score"} in presentation order. */
lf_status lf_store_retrieve(const lf_store* st, const char* query, int k, char** json_out);
lf_status lf_store_digest(const lf_store* st, char** hex_out);
size_t lf_store_size(const lf_store* st);
void lf_store_free(lf_store* st);

/* ---- simulation ---- */

typedef void (*lf_audit_callback)(int t, double agbv, void* userdata);

typedef struct lf_run_options {
    const char* dib_path;            /* dataset JSONL; NULL = generate default */
    int resume;                      /* nonzero: continue from the checkpoint */
    int stop_after_turn;             /* pause after this turn; <= 0 = run out */
    const char* generator_backend_id;/* bias rewriter; NULL = offline narratives */
    const char* base_url;            /* HTTP backends; NULL = MODEL_BASE_URL */
    const char* api_key;             /* HTTP backends; NULL = MODEL_API_KEY */
    lf_audit_callback on_audit;      /* optional progress hook */
    void* userdata;
} lf_run_options;

/* Executes (or resumes) the run described by the manifest file, writing
 * manifest.json, runlog.jsonl, audit_t<N>.json and checkpoint/ to out_dir.
 * options may be NULL for an all-defaults foreground run. */
lf_status lf_run_execute(const char* manifest_path, const char* out_dir,
                         const lf_run_options* options);

/* Last completed turn in out_dir's checkpoint. */
lf_status lf_checkpoint_turn(const char* out_dir, int* turn_out);

/* ---- metrics ---- */

/* Root of the population variance of the given group means. */
lf_status lf_gbv(const double* means, size_t n, double* out);

/* (delta_mitigated - delta_original) / |delta_original| * 100. */
lf_status lf_mp(double delta_mitigated, double delta_original, double* out);

/* Echo of one audit snapshot file: {"t","agbv","gbv","invalid_count",
 * "auditor_failures"} as JSON. */
lf_status lf_snapshot_summary(const char* snapshot_path, char** json_out);

/* ---- reporting ---- */

/* Emits the requested artifacts over the given run directories into out_dir:
 * want_series -> agbv_series.csv, want_matrix -> propagation_matrix.csv,
 * want_mp -> mp_table.csv; summary.json is always written. All three flags
 * zero means emit everything. baseline_t/compare_t pass -1 for the defaults
 * (0 and 80). paths_json_out (optional) receives the written paths as a JSON
 * array. */
lf_status lf_report(const char* const* run_dirs, size_t n_runs, const char* out_dir,
                    int baseline_t, int compare_t, int want_series, int want_matrix,
                    int want_mp, char** paths_json_out);

#ifdef __cplusplus
}
#endif

#endif /* LTMFAIR_H */
