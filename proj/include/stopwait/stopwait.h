/* C interface to the stopwait library: question-closing behavior models,
 * event-log ingestion, visit expansion, logit and inverse Gaussian
 * estimation, and the threshold/random-walk stopping model.
 *
 * All functions returning sw_status leave their outputs untouched on
 * failure; sw_last_error() describes the most recent failure on the calling
 * thread. */
#ifndef STOPWAIT_H
#define STOPWAIT_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  SW_OK = 0,
  SW_ERR_INVALID_ARGUMENT = 1,
  SW_ERR_PARSE = 2,
  SW_ERR_NUMERIC = 3,
  SW_ERR_IO = 4
} sw_status;

const char* sw_version(void);
const char* sw_last_error(void);

typedef enum { SW_FORMAT_CSV = 0, SW_FORMAT_JSONL = 1 } sw_format;

/* ---------- event-log datasets ---------- */

typedef struct sw_dataset sw_dataset;

sw_status sw_dataset_read(const char* path, sw_format format,
                          sw_dataset** out);
sw_status sw_dataset_parse(const char* text, size_t len, sw_format format,
                           sw_dataset** out);
sw_status sw_dataset_write(const sw_dataset* d, const char* path,
                           sw_format format);
/* Caller frees *out_text with sw_buffer_free. */
sw_status sw_dataset_serialize(const sw_dataset* d, sw_format format,
                               char** out_text, size_t* out_len);
void sw_buffer_free(char* text);
size_t sw_dataset_size(const sw_dataset* d);
sw_status sw_dataset_filter_eligible(const sw_dataset* d,
                                     double max_open_hours, sw_dataset** out);
/* Per-question total answer counts.  Pass out == NULL to query the size. */
sw_status sw_dataset_answer_counts(const sw_dataset* d, double* out,
                                   size_t capacity, size_t* out_n);
/* Per-question (TotalAnswers, ElapsedTime); requires closed questions. */
sw_status sw_dataset_summaries(const sw_dataset* d, double* total_answers,
                               double* elapsed_time, size_t capacity,
                               size_t* out_n);
sw_status sw_dataset_histogram_write(const sw_dataset* d, double bin_width,
                                     const char* path);
void sw_dataset_free(sw_dataset* d);

/* ---------- synthetic corpora ---------- */

enum { SW_ARRIVAL_POISSON = 0, SW_ARRIVAL_LOGNORMAL = 1 };
enum { SW_AGENT_LOGIT = 0, SW_AGENT_GUMBEL = 1 };

typedef struct {
  size_t n_questions;
  int arrival_kind;
  double rate;    /* Poisson answers per hour */
  double meanlog; /* lognormal renewal gap parameters */
  double sdlog;
  double horizon;
  double visit_interval;
  int agent_kind;
  double alpha, beta1, beta2, beta3; /* close-probability index */
  double alpha_u, u0; /* gumbel agent; cost intercept is alpha + alpha_u */
  uint64_t seed;
  int check_at_arrivals;
} sw_scenario;

void sw_scenario_init(sw_scenario* s);
sw_status sw_simulate(const sw_scenario* s, sw_dataset** out);

/* ---------- visit expansion ---------- */

typedef struct sw_observations sw_observations;

sw_status sw_expand(const sw_dataset* d, double visit_interval,
                    int snap_close_to_grid, sw_observations** out);
sw_status sw_observations_read_csv(const char* path, sw_observations** out);
sw_status sw_observations_parse_csv(const char* text, size_t len,
                                    sw_observations** out);
sw_status sw_observations_write_csv(const sw_observations* o,
                                    const char* path);
sw_status sw_observations_serialize_csv(const sw_observations* o,
                                        char** out_text, size_t* out_len);
size_t sw_observations_size(const sw_observations* o);
void sw_observations_free(sw_observations* o);

/* ---------- logit estimation ---------- */

typedef struct {
  double estimate[4]; /* alpha, beta1, beta2, beta3 */
  double std_error[4];
  double log_likelihood;
  uint64_t n_observations;
  uint64_t iterations;
  int converged;
  char diagnosis[128];
} sw_logit_fit;

sw_status sw_fit_logit(const sw_observations* o, sw_logit_fit* out);
/* csv_format != 0 emits CSV rows, otherwise a flat key-value report. */
sw_status sw_logit_report(const sw_logit_fit* fit, int csv_format,
                          char** out_text, size_t* out_len);
sw_status sw_logit_report_write(const sw_logit_fit* fit, const char* path,
                                int csv_format);

/* ---------- correlation ---------- */

typedef struct {
  double r, ci_low, ci_high;
  uint64_t n;
} sw_correlation;

sw_status sw_pearson(const double* x, const double* y, size_t n,
                     sw_correlation* out);
sw_status sw_correlation_report(const sw_correlation* c, int csv_format,
                                char** out_text, size_t* out_len);

/* ---------- inverse Gaussian ---------- */

typedef struct {
  double mu, lambda;
} sw_invgauss;

sw_status sw_invgauss_fit(const double* samples, size_t n, sw_invgauss* out);
sw_status sw_invgauss_pdf(const sw_invgauss* p, double x, double* out);
sw_status sw_invgauss_cdf(const sw_invgauss* p, double x, double* out);
sw_status sw_invgauss_ks(const double* samples, size_t n,
                         const sw_invgauss* p, double* out);
sw_status sw_tail_slope(const double* samples, size_t n, double lo, double hi,
                        double* out);

/* ---------- closed-form model pieces ---------- */

sw_status sw_logistic(double z, double* out);
sw_status sw_close_probability(double alpha, double beta1, double beta2,
                               double beta3, double n, double l, double w,
                               double* out);
sw_status sw_utility(double alpha_u, double beta1, double u0, int64_t n,
                     double* out);
sw_status sw_marginal_benefit(double alpha_u, double beta1, int64_t n,
                              double* out);
sw_status sw_expected_wait_cost(double alpha_c, double beta2, double beta3,
                                double l, double w, double* out);
/* *out_close = 1 for Close, 0 for Wait; equality resolves to Close. */
sw_status sw_myopic_decision(double alpha_u, double beta1, double u0,
                             double alpha_c, double beta2, double beta3,
                             int64_t n, double l, double w, int* out_close);
sw_status sw_utility_peak(double alpha_u, double beta1, int64_t* out_peak,
                          int* out_has_peak);

/* ---------- threshold / first-passage model ---------- */

typedef struct sw_threshold sw_threshold;

enum { SW_STEP_DETERMINISTIC = 0, SW_STEP_NORMAL = 1 };

/* Deterministic: step_a is the (signed) step; normal: step_a mean, step_b
 * standard deviation. */
sw_status sw_threshold_solve(int step_kind, double step_a, double step_b,
                             double delta, double grid_lo, double grid_hi,
                             size_t grid_count, double tol,
                             sw_threshold** out);
double sw_threshold_x_star(const sw_threshold* t);
uint64_t sw_threshold_iterations(const sw_threshold* t);
double sw_threshold_residual(const sw_threshold* t);
sw_status sw_threshold_write_csv(const sw_threshold* t, const char* path);
void sw_threshold_free(sw_threshold* t);

/* out_times must hold n_paths entries; out_censored may be NULL. */
sw_status sw_brownian_passage(double distance, double drift, double sigma,
                              double dt, size_t n_paths, uint64_t seed,
                              double* out_times, int* out_censored);
sw_status sw_brownian_passage_write_csv(double distance, double drift,
                                        double sigma, double dt,
                                        size_t n_paths, uint64_t seed,
                                        const char* path);

#ifdef __cplusplus
}
#endif

#endif /* STOPWAIT_H */
