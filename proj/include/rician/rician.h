/* C interface to the rician library. All objects are opaque handles
 * released with the matching *_free function; freeing NULL is a no-op.
 * Functions return RICIAN_OK or an error code; the message of the most
 * recent failure on the calling thread is available from
 * rician_last_error(). */
#ifndef RICIAN_H
#define RICIAN_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define RICIAN_API __declspec(dllexport)
#else
#define RICIAN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  RICIAN_OK = 0,
  RICIAN_E_INVALID_ARGUMENT = 1, /* null pointer, bad size or option */
  RICIAN_E_DOMAIN = 2,           /* value outside the mathematical domain */
  RICIAN_E_CONVERGENCE = 3,      /* quadrature or iteration failed */
  RICIAN_E_PARSE = 4,            /* malformed text; see rician_last_error_line */
  RICIAN_E_IMPROPER = 5,         /* propriety gate refused the prior */
  RICIAN_E_SINGULAR = 6,         /* information matrix not invertible */
  RICIAN_E_IO = 7,               /* file could not be opened or written */
  RICIAN_E_INTERNAL = 8
} rician_status;

RICIAN_API const char* rician_version(void);
RICIAN_API const char* rician_last_error(void);
/* Line number of the last RICIAN_E_PARSE failure, 0 if unknown. */
RICIAN_API size_t rician_last_error_line(void);

/* ---- samples ---------------------------------------------------------- */

typedef struct rician_sample rician_sample;

RICIAN_API rician_status rician_sample_from_values(const double* values, size_t n,
                                                   rician_sample** out);
/* path "-" reads standard input. */
RICIAN_API rician_status rician_sample_load(const char* path, rician_sample** out);
RICIAN_API rician_status rician_sample_write(const rician_sample* s, const char* path);
RICIAN_API rician_status rician_sample_simulate(double eta, double alpha, size_t n,
                                                uint64_t seed, rician_sample** out);
RICIAN_API void rician_sample_free(rician_sample* s);
RICIAN_API size_t rician_sample_size(const rician_sample* s);
RICIAN_API int rician_sample_all_equal(const rician_sample* s);
/* Copies min(cap, size) values. */
RICIAN_API size_t rician_sample_values(const rician_sample* s, double* out, size_t cap);

/* ---- model ------------------------------------------------------------ */

RICIAN_API rician_status rician_pdf(double x, double eta, double alpha, double* out);
RICIAN_API rician_status rician_cdf(double x, double eta, double alpha, double* out);
RICIAN_API rician_status rician_psi(double rho, double* out);

/* ---- classical estimators --------------------------------------------- */

enum { RICIAN_METHOD_MOMENTS = 0, RICIAN_METHOD_MLE = 1 };
enum { RICIAN_FLAG_MOMENTS_UNDEFINED = 1, RICIAN_FLAG_AT_BOUNDARY = 2 };

typedef struct {
  int method;
  double eta;
  double alpha;
  int converged;
  size_t iterations;
  double score_residual;
  unsigned flags;
} rician_estimate;

typedef struct {
  double lo;
  double hi;
} rician_interval;

RICIAN_API rician_status rician_fit_moments(const rician_sample* s, rician_estimate* out);
/* tol <= 0 or max_iter == 0 select the defaults (1e-10, 500). */
RICIAN_API rician_status rician_fit_mle(const rician_sample* s, double tol, size_t max_iter,
                                        rician_estimate* out);
RICIAN_API rician_status rician_asymptotic_ci(const rician_estimate* est,
                                              const rician_sample* s, double level,
                                              rician_interval* eta, rician_interval* alpha);
/* Row-major 2x2 expected information, ordered (alpha, eta). */
RICIAN_API rician_status rician_fisher(double eta, double alpha, size_t n, double out[4]);

/* ---- priors and propriety --------------------------------------------- */

typedef enum {
  RICIAN_PRIOR_POWER = 0,
  RICIAN_PRIOR_JEFFREYS = 1,
  RICIAN_PRIOR_CUSTOM_TAILS = 2
} rician_prior_family;

typedef struct {
  rician_prior_family family;
  double epsilon; /* power */
  double r0, r_inf, k; /* custom tails */
} rician_prior;

enum { RICIAN_PROPER = 0, RICIAN_IMPROPER = 1, RICIAN_NOT_GUARANTEED = 2 };
enum {
  RICIAN_RULE_GENERAL_IMPROPER = 0,
  RICIAN_RULE_GENERAL_PROPER = 1,
  RICIAN_RULE_FIRST_MOMENTS = 2,
  RICIAN_RULE_POWER_PRIOR = 3,
  RICIAN_RULE_JEFFREYS_PRIOR = 4
};

typedef struct {
  int status;
  int rule;
  long min_n; /* -1 when none */
  int requires_distinct_data;
  int boundary_case;
  /* effective tail exponents used by the rule */
  double r0, r_inf, k;
} rician_verdict;

/* "jeffreys", "power:EPS" or "tails:R0,RINF,K". */
RICIAN_API rician_status rician_prior_parse(const char* text, rician_prior* out);
RICIAN_API rician_status rician_check_propriety(const rician_prior* prior, size_t n,
                                                int distinct_data, rician_verdict* out);
RICIAN_API rician_status rician_check_moments(const rician_prior* prior, size_t n,
                                              int distinct_data, rician_verdict* out);
RICIAN_API const char* rician_verdict_status_name(int status);
RICIAN_API const char* rician_verdict_rule_name(int rule);
RICIAN_API rician_status rician_log_posterior(const rician_prior* prior, double eta,
                                              double alpha, const rician_sample* s,
                                              double* out);

/* ---- MCMC ------------------------------------------------------------- */

typedef struct {
  size_t iterations;
  size_t burn_in;
  size_t thin;
  size_t chains;
  double d_eta;
  double d_alpha;
  uint64_t seed;
  rician_prior prior;
  int allow_improper;
} rician_mcmc_config;

typedef struct rician_chain rician_chain;

typedef struct {
  double mean;
  double median;
  double sd;
  double lo;
  double hi;
  double point;
} rician_param_summary;

/* 50500 iterations, 500 burn-in, thin 5, 2 chains, precisions 100,
 * Jeffreys prior, seed 0. */
RICIAN_API void rician_mcmc_config_default(rician_mcmc_config* cfg);
/* RICIAN_E_IMPROPER before any sampling when the gate refuses. */
RICIAN_API rician_status rician_run_chain(const rician_sample* s,
                                          const rician_mcmc_config* cfg,
                                          rician_chain** out);
RICIAN_API void rician_chain_free(rician_chain* c);
RICIAN_API size_t rician_chain_count(const rician_chain* c);
RICIAN_API size_t rician_chain_length(const rician_chain* c, size_t chain);
/* Copies up to cap draws of one chain; either output may be NULL. */
RICIAN_API size_t rician_chain_draws(const rician_chain* c, size_t chain, double* eta,
                                     double* alpha, size_t cap);
RICIAN_API rician_status rician_chain_acceptance(const rician_chain* c, size_t chain,
                                                 double* eta_rate, double* alpha_rate);
RICIAN_API rician_status rician_chain_geweke(const rician_chain* c, size_t chain,
                                             double* z_eta, double* z_alpha);
/* Pooled over chains; eta point = median, alpha point = mean. */
RICIAN_API rician_status rician_chain_summarize(const rician_chain* c, double level,
                                                rician_param_summary* eta,
                                                rician_param_summary* alpha);
RICIAN_API rician_status rician_chain_write_csv(const rician_chain* c, const char* path);
RICIAN_API rician_status rician_chain_read_csv(const char* path, rician_chain** out);

/* ---- posterior predictive --------------------------------------------- */

typedef struct rician_predictive rician_predictive;

RICIAN_API rician_status rician_predictive_draw(const rician_chain* c, uint64_t seed,
                                                rician_predictive** out);
RICIAN_API void rician_predictive_free(rician_predictive* p);
RICIAN_API size_t rician_predictive_size(const rician_predictive* p);
RICIAN_API size_t rician_predictive_values(const rician_predictive* p, double* out,
                                           size_t cap);
/* point = mean */
RICIAN_API rician_status rician_predictive_summarize(const rician_predictive* p,
                                                     double level,
                                                     rician_param_summary* out);
RICIAN_API rician_status rician_predictive_write_csv(const rician_predictive* p,
                                                     const char* path);

/* ---- outage ------------------------------------------------------------ */

typedef struct {
  double gamma_th;
  double point;
  double lo;
  double hi;
} rician_outage_point;

/* out must hold n points. failed_draws may be NULL. */
RICIAN_API rician_status rician_outage_curve(const rician_chain* c, const double* grid,
                                             size_t n, double level,
                                             rician_outage_point* out,
                                             size_t* failed_draws);
RICIAN_API rician_status rician_outage_write_csv(const rician_outage_point* points,
                                                 size_t n, const char* path);

/* ---- simulation study -------------------------------------------------- */

typedef struct {
  double eta;
  double alpha;
  const size_t* n_grid;
  size_t n_grid_len;
  size_t replications;
  /* "mm", "mle", "bayes_jeffreys", "bayes_power:EPS" */
  const char* const* methods;
  size_t methods_len;
  double level;
  uint64_t seed;
  rician_mcmc_config mcmc; /* prior and seed are ignored */
  size_t threads;          /* 0: hardware concurrency */
} rician_study_config;

typedef struct {
  const char* method;    /* valid while the study handle lives */
  size_t n;
  const char* parameter; /* "eta" or "alpha" */
  double bias;
  double mse;
  double cp;
  int has_cp;
  size_t failures;
  size_t used;
} rician_study_cell;

typedef struct rician_study rician_study;

/* theta = (6, 2), n = 10, 15, ..., 60, 1000 replications, mm + mle +
 * bayes_jeffreys, level 0.95, chains of 5500 iterations. The grid and
 * method arrays point to static storage. */
RICIAN_API void rician_study_config_default(rician_study_config* cfg);
RICIAN_API rician_status rician_run_study(const rician_study_config* cfg,
                                          rician_study** out);
RICIAN_API void rician_study_free(rician_study* s);
RICIAN_API size_t rician_study_cell_count(const rician_study* s);
RICIAN_API rician_status rician_study_cell_at(const rician_study* s, size_t i,
                                              rician_study_cell* out);
RICIAN_API rician_status rician_study_write_csv(const rician_study* s, const char* path);

#ifdef __cplusplus
}
#endif

#endif
