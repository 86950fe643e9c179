/* C interface to the curvature-operator laboratory.
 *
 * Conventions:
 *   - Every function returning c4_status sets the thread-local message
 *     readable through c4_last_error() when it fails.
 *   - Strings returned through char** out parameters are heap-allocated and
 *     must be released with c4_string_free().
 *   - Matrices cross the boundary as row-major double arrays.
 *   - Structured results are JSON documents with a schema_version field;
 *     trajectory and probe tables are also available as CSV.
 */
#ifndef CURV4LAB_H
#define CURV4LAB_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum c4_status {
  C4_OK = 0,
  C4_INVALID_ARGUMENT,
  C4_SYMMETRY_VIOLATION,
  C4_NON_ORTHONORMAL_FRAME,
  C4_CONVENTION_MISMATCH,
  C4_UNKNOWN_NAME,
  C4_BAD_PARAMS,
  C4_OUT_OF_DOMAIN,
  C4_SINGULAR_METRIC,
  C4_MISSING_POTENTIAL,
  C4_NOT_STEADY,
  C4_NON_CONSTANT_ENERGY,
  C4_SHOOTING_FAILED,
  C4_STEP_FAILURE,
  C4_UNKNOWN_CAMPAIGN,
  C4_CONSTRAINT_MISMATCH,
  C4_REJECTION_BUDGET_EXCEEDED,
  C4_UNKNOWN_ERROR = 99
} c4_status;

/* Library and report-schema metadata. */
int c4_schema_version(void);
const char* c4_version(void);
const char* c4_status_name(c4_status status);

/* Message for the most recent failure on this thread ("" when none). */
const char* c4_last_error(void);

void c4_string_free(char* s);

/* ---- curvature operators ------------------------------------------------ */

typedef struct c4_curvop c4_curvop;

/* Blocks of the two-form curvature operator [[A, B], [B^t, C]]; A and C must
 * be symmetric. */
c4_status c4_curvop_make(const double a[9], const double b[9],
                         const double c[9], c4_curvop** out);
c4_status c4_curvop_from_json(const char* json_text, c4_curvop** out);
void c4_curvop_free(c4_curvop* op);

c4_status c4_curvop_to_json(const c4_curvop* op, char** out_json);
c4_status c4_curvop_scalar(const c4_curvop* op, double* out);

/* Eigenvalue data: blocks, signed B-spectrum, Ricci spectrum, norms. */
c4_status c4_curvop_summary_json(const c4_curvop* op, char** out_json);

/* Cone membership report at tolerance tol * (1 + |Rm|). */
c4_status c4_curvop_cones_json(const c4_curvop* op, double tol,
                               char** out_json);

/* Monitored functionals u, v, eigen-sum margins and the trace gap. */
c4_status c4_curvop_monitors_json(const c4_curvop* op, char** out_json);

/* ---- seeded sampling ----------------------------------------------------- */

/* constraints_csv: comma-separated subset of
 * bianchi,wpic,pic,a_nonneg,c_nonneg,ricci_nonneg,ricci_2nonneg,einstein */
c4_status c4_sample_curvop(uint64_t seed, uint64_t index, double scale,
                           const char* constraints_csv, c4_curvop** out);

/* ---- reaction flow ------------------------------------------------------- */

/* Integrates the four-dimensional reaction system from `init`.
 * store_stride > 0 stores every k-th state as a JSON checkpoint. */
c4_status c4_flow4_json(const c4_curvop* init, double t_max, double rel_tol,
                        double rm_ceiling, int store_stride, char** out_json);
c4_status c4_flow4_csv(const c4_curvop* init, double t_max, double rel_tol,
                       double rm_ceiling, char** out_csv);

/* Three-dimensional eigenvalue system from the triple (m1, m2, m3). */
c4_status c4_flow3_json(double m1, double m2, double m3, double t_max,
                        double rel_tol, double ceiling, char** out_json);
c4_status c4_flow3_csv(double m1, double m2, double m3, double t_max,
                       double rel_tol, double ceiling, char** out_csv);

/* ---- audit campaigns ----------------------------------------------------- */

c4_status c4_campaign_names_json(char** out_json);

/* Runs a registered campaign; the report JSON is a pure function of
 * (name, seed, count, scale, constraints, tol). threads <= 0 picks a
 * machine-dependent worker count (does not affect the report). */
c4_status c4_run_campaign_json(const char* name, uint64_t seed, uint64_t count,
                               double scale, const char* constraints_csv,
                               double tol, int threads, char** out_json);

/* Exact expansion certificates for the two rearrangement identities. */
c4_status c4_certificates_json(char** out_json);

/* Cone preservation along sampled reaction trajectories (4D: requires
 * bianchi,wpic in the constraints; 3D: triples with 2m1+m2+m3 >= 0). */
c4_status c4_flow_audit_json(uint64_t seed, uint64_t count, double scale,
                             const char* constraints_csv, double t_max,
                             double rel_tol, double rm_ceiling, double tol,
                             int threads, char** out_json);
c4_status c4_flow_audit3_json(uint64_t seed, uint64_t count, double scale,
                              double t_max, double rel_tol, double ceiling,
                              double tol, int threads, char** out_json);

/* Frame-minimization consistency over sampled operators: compares the
 * descent minimum of the isotropic-curvature functional with
 * 2 min(A1+A2, C1+C2) on `count` Bianchi-constrained samples. */
c4_status c4_frames_audit_json(uint64_t seed, uint64_t count, double scale,
                               int restarts, double tol, char** out_json);

/* ---- metric catalog ------------------------------------------------------ */

typedef struct c4_chart c4_chart;

/* params_json: JSON object of named reals, e.g. {"radius": 2.0}; NULL or ""
 * means no parameters. */
c4_status c4_chart_open(const char* name, const char* params_json,
                        c4_chart** out);
void c4_chart_free(c4_chart* chart);

c4_status c4_catalog_names_json(char** out_json);

/* scheme: "finite_difference" or "closed_form". */
c4_status c4_chart_normalize_steady(const c4_chart* chart, const char* scheme,
                                    c4_chart** out);

/* Probe sweep: curvature, cone classification and soliton residuals at
 * seeded probe points. */
c4_status c4_catalog_report_json(const c4_chart* chart, int probes,
                                 uint64_t seed, const char* scheme, double h,
                                 char** out_json);
c4_status c4_catalog_report_csv(const c4_chart* chart, int probes,
                                uint64_t seed, const char* scheme, double h,
                                char** out_csv);

#ifdef __cplusplus
}
#endif

#endif /* CURV4LAB_H */
