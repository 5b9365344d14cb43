#ifndef RADCHEMO_H
#define RADCHEMO_H

#include <stddef.h>

#if defined(_WIN32)
#define RC_API __declspec(dllexport)
#elif defined(__GNUC__)
#define RC_API __attribute__((visibility("default")))
#else
#define RC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rc_status {
    RC_OK = 0,
    RC_ERR_CONFIG = 1,       /* malformed or invalid configuration */
    RC_ERR_ARGUMENT = 2,     /* bad argument to an API call */
    RC_ERR_UNSUPPORTED = 3,  /* parameter regime outside the implemented theory */
    RC_ERR_BRACKET = 4,      /* M* bisection bracket precondition violated */
    RC_ERR_IO = 5,           /* result files could not be written */
    RC_ERR_NUMERICAL = 6,    /* solver failure outside a classified run */
    RC_ERR_INTERNAL = 7
} rc_status;

typedef enum rc_solver { RC_SOLVER_PRIMITIVE = 0, RC_SOLVER_MASSPDE = 1 } rc_solver;

typedef enum rc_classification { RC_BOUNDED = 0, RC_BLOWUP = 1, RC_INCONCLUSIVE = 2 } rc_classification;

typedef enum rc_family { RC_POWER_SHIFTED = 0, RC_POWER_PURE = 1 } rc_family;

typedef struct rc_config rc_config;
typedef struct rc_outcome rc_outcome;
typedef struct rc_sweep rc_sweep;

/* One diagnostic sample; unavailable entries are NaN. */
typedef struct rc_sample {
    double t, phi, psi, sup_u, mass, vmax;
    double residual_w_bound, residual_phi_bound, residual_vlower, residual_rvr, residual_wt;
} rc_sample;

typedef struct rc_sweep_row {
    double beta;
    double M;
    rc_classification classification;
    double t_blowup; /* NaN unless BLOWUP */
    int grid_N;
} rc_sweep_row;

typedef struct rc_mstar_result {
    double bracket_lo;
    double bracket_hi;
    int iterations;
    int audit_ok;
    rc_classification verdict;
    size_t runs;
} rc_mstar_result;

typedef struct rc_compare_result {
    double max_rel_discrepancy;
    rc_classification primitive;
    rc_classification masspde;
    double t_blowup_primitive; /* NaN when absent */
    double t_blowup_masspde;
    double blowup_rel_diff;
    size_t points;
} rc_compare_result;

RC_API const char* rc_version(void);

/* Message of the last failed call on this thread ("" if none). */
RC_API const char* rc_last_error(void);

RC_API rc_status rc_config_load_file(const char* path, rc_config** out);
RC_API rc_status rc_config_parse(const char* json_text, rc_config** out);
RC_API rc_status rc_config_set_output_dir(rc_config* config, const char* dir);
RC_API const char* rc_config_output_dir(const rc_config* config);
/* Solver named in the configuration, or -1 when absent. */
RC_API int rc_config_solver(const rc_config* config);
/* Canonical JSON; release with rc_string_free. */
RC_API rc_status rc_config_to_json(const rc_config* config, char** out);
RC_API void rc_config_free(rc_config* config);
RC_API void rc_string_free(char* s);

/* Classified run; with write_outputs != 0 writes samples.csv and manifest.json
 * to the configured output directory. */
RC_API rc_status rc_run(const rc_config* config, rc_solver solver, int write_outputs, rc_outcome** out);
RC_API rc_classification rc_outcome_classification(const rc_outcome* o);
RC_API double rc_outcome_t_final(const rc_outcome* o);
RC_API double rc_outcome_sup_u_final(const rc_outcome* o);
RC_API double rc_outcome_sup_u_max(const rc_outcome* o);
/* Returns 1 and stores the estimate when the run blew up, else 0. */
RC_API int rc_outcome_blowup_time(const rc_outcome* o, double* t);
/* Returns 1 and stores the theoretical upper bound on the blow-up time when defined. */
RC_API int rc_outcome_blowup_time_bound(const rc_outcome* o, double* t);
RC_API double rc_outcome_mass_drift(const rc_outcome* o);
RC_API double rc_outcome_vmax(const rc_outcome* o);
RC_API const char* rc_outcome_detail(const rc_outcome* o);
RC_API size_t rc_outcome_sample_count(const rc_outcome* o);
RC_API rc_status rc_outcome_sample(const rc_outcome* o, size_t index, rc_sample* out);
/* Manifest JSON; release with rc_string_free. */
RC_API rc_status rc_outcome_manifest(const rc_outcome* o, char** out);
RC_API void rc_outcome_free(rc_outcome* o);

RC_API rc_status rc_sweep_run(const rc_config* config, rc_solver solver, const double* betas, size_t n_beta,
                              const double* Ms, size_t n_M, int parallelism, int write_outputs, rc_sweep** out);
RC_API size_t rc_sweep_row_count(const rc_sweep* s);
RC_API rc_status rc_sweep_get_row(const rc_sweep* s, size_t index, rc_sweep_row* out);
RC_API void rc_sweep_free(rc_sweep* s);

RC_API rc_status rc_mstar_run(const rc_config* config, rc_solver solver, double lo, double hi, int iters,
                              int write_outputs, rc_mstar_result* out);

RC_API rc_status rc_compare_run(const rc_config* config, int write_outputs, rc_compare_result* out);

/* Elliptic signal for nodal u on `cells` uniform cells of [0, R]; v_out holds cells + 1 values. */
RC_API rc_status rc_solve_elliptic(int n, double R, int cells, const double* u, double M, double* v_out);

RC_API rc_status rc_sensitivity_eval(rc_family family, double beta, double coeff, double xi, double* out);

#ifdef __cplusplus
}
#endif

#endif
