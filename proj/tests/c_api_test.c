/* Exercises the C interface from C, linked against the shared library. */
#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "rician/rician.h"

static int failures = 0;

#define EXPECT(cond)                                                  \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                     \
    }                                                                 \
  } while (0)

static void test_samples_and_model(void) {
  const double xs[] = {2.0, 2.0, 2.0, 2.0, 2.0, 4.0};
  rician_sample* s = NULL;
  EXPECT(rician_sample_from_values(xs, 6, &s) == RICIAN_OK);
  EXPECT(rician_sample_size(s) == 6);
  EXPECT(!rician_sample_all_equal(s));
  rician_estimate est;
  EXPECT(rician_fit_moments(s, &est) == RICIAN_OK);
  EXPECT(fabs(est.eta - 2.0) < 1e-14 && fabs(est.alpha - 1.0) < 1e-14);
  rician_sample_free(s);

  const double bad[] = {1.0, -3.0};
  EXPECT(rician_sample_from_values(bad, 2, &s) == RICIAN_E_DOMAIN);
  EXPECT(strlen(rician_last_error()) > 0);
  EXPECT(rician_sample_from_values(NULL, 2, &s) == RICIAN_E_INVALID_ARGUMENT);

  double v = 0.0;
  EXPECT(rician_pdf(1.0, 0.0, 1.0, &v) == RICIAN_OK);
  EXPECT(fabs(v - exp(-0.5)) < 1e-14);
  EXPECT(rician_cdf(0.0, 6.0, 2.0, &v) == RICIAN_OK && v == 0.0);
  EXPECT(rician_cdf(-1.0, 6.0, 2.0, &v) == RICIAN_E_DOMAIN);
  EXPECT(rician_psi(1.0, &v) == RICIAN_OK && fabs(v - 0.521446920734) < 1e-10);
  EXPECT(rician_psi(0.0, &v) == RICIAN_E_DOMAIN);

  double f[4];
  EXPECT(rician_fisher(6.0, 2.0, 1, f) == RICIAN_OK);
  EXPECT(f[1] == f[2] && f[0] * f[3] - f[1] * f[2] > 0.0);

  rician_sample_free(NULL);
}

static void test_load_and_fit(void) {
  rician_sample* s = NULL;
  EXPECT(rician_sample_load(RICIAN_DATA_DIR "/table1.txt", &s) == RICIAN_OK);
  EXPECT(rician_sample_size(s) == 35);
  rician_estimate mle;
  EXPECT(rician_fit_mle(s, 0.0, 0, &mle) == RICIAN_OK);
  EXPECT(mle.converged && mle.method == RICIAN_METHOD_MLE);
  EXPECT(mle.score_residual <= 1e-10);
  rician_interval ie, ia;
  EXPECT(rician_asymptotic_ci(&mle, s, 0.95, &ie, &ia) == RICIAN_OK);
  EXPECT(ie.lo < mle.eta && mle.eta < ie.hi);
  EXPECT(ia.lo < mle.alpha && mle.alpha < ia.hi);
  EXPECT(rician_asymptotic_ci(&mle, s, 1.5, &ie, &ia) == RICIAN_E_DOMAIN);
  rician_sample_free(s);

  EXPECT(rician_sample_load("/nonexistent/file", &s) == RICIAN_E_IO);

  const char* path = "c_api_bad_sample.txt";
  FILE* fp = fopen(path, "w");
  fputs("1.5\n-3\n", fp);
  fclose(fp);
  EXPECT(rician_sample_load(path, &s) == RICIAN_E_PARSE);
  EXPECT(rician_last_error_line() == 2);
  remove(path);
}

static void test_priors(void) {
  rician_prior p;
  rician_verdict v;
  EXPECT(rician_prior_parse("power:-1", &p) == RICIAN_OK);
  EXPECT(rician_check_propriety(&p, 35, 1, &v) == RICIAN_OK);
  EXPECT(v.status == RICIAN_IMPROPER && v.min_n == -1 && v.rule == RICIAN_RULE_POWER_PRIOR);
  EXPECT(strcmp(rician_verdict_status_name(v.status), "IMPROPER") == 0);
  EXPECT(rician_prior_parse("jeffreys", &p) == RICIAN_OK);
  EXPECT(rician_check_propriety(&p, 3, 1, &v) == RICIAN_OK);
  EXPECT(v.status == RICIAN_PROPER && v.min_n == 3);
  EXPECT(rician_check_moments(&p, 5, 1, &v) == RICIAN_OK);
  EXPECT(v.status == RICIAN_PROPER && v.min_n == 5 && v.rule == RICIAN_RULE_FIRST_MOMENTS);
  EXPECT(rician_prior_parse("bogus", &p) == RICIAN_E_PARSE);
}

static void test_chain_pipeline(void) {
  rician_sample* s = NULL;
  EXPECT(rician_sample_load(RICIAN_DATA_DIR "/table1.txt", &s) == RICIAN_OK);
  rician_mcmc_config cfg;
  rician_mcmc_config_default(&cfg);
  EXPECT(cfg.iterations == 50500 && cfg.burn_in == 500 && cfg.thin == 5 && cfg.chains == 2);
  cfg.iterations = 5500;
  cfg.seed = 11;
  rician_chain* c = NULL;
  EXPECT(rician_run_chain(s, &cfg, &c) == RICIAN_OK);
  EXPECT(rician_chain_count(c) == 2);
  EXPECT(rician_chain_length(c, 0) == 1000);
  double* eta = malloc(1000 * sizeof(double));
  EXPECT(rician_chain_draws(c, 1, eta, NULL, 1000) == 1000);
  EXPECT(eta[999] > 0.0);
  double ra, rb;
  EXPECT(rician_chain_acceptance(c, 0, &ra, &rb) == RICIAN_OK && ra > 0 && ra < 1);
  double ze, za;
  EXPECT(rician_chain_geweke(c, 0, &ze, &za) == RICIAN_OK && isfinite(ze) && isfinite(za));
  rician_param_summary se, sa;
  EXPECT(rician_chain_summarize(c, 0.95, &se, &sa) == RICIAN_OK);
  EXPECT(se.point == se.median && sa.point == sa.mean);
  EXPECT(se.lo <= se.median && se.median <= se.hi);

  EXPECT(rician_chain_write_csv(c, "c_api_chain.csv") == RICIAN_OK);
  rician_chain* back = NULL;
  EXPECT(rician_chain_read_csv("c_api_chain.csv", &back) == RICIAN_OK);
  double* eta2 = malloc(1000 * sizeof(double));
  EXPECT(rician_chain_draws(back, 1, eta2, NULL, 1000) == 1000);
  EXPECT(memcmp(eta, eta2, 1000 * sizeof(double)) == 0);
  remove("c_api_chain.csv");

  rician_predictive* p = NULL;
  EXPECT(rician_predictive_draw(back, 7, &p) == RICIAN_OK);
  EXPECT(rician_predictive_size(p) == 2000);
  rician_param_summary ps;
  EXPECT(rician_predictive_summarize(p, 0.95, &ps) == RICIAN_OK && ps.lo < ps.mean && ps.mean < ps.hi);

  const double grid[] = {0.0, 5.0, 200.0};
  rician_outage_point pts[3];
  size_t failed = 99;
  EXPECT(rician_outage_curve(c, grid, 3, 0.95, pts, &failed) == RICIAN_OK);
  EXPECT(failed == 0 && pts[0].point == 0.0 && fabs(pts[2].point - 1.0) < 1e-6);
  EXPECT(pts[1].lo <= pts[1].hi);

  rician_predictive_free(p);
  rician_chain_free(back);
  rician_chain_free(c);
  free(eta);
  free(eta2);

  const double two[] = {2.0, 8.0};
  rician_sample* small = NULL;
  EXPECT(rician_sample_from_values(two, 2, &small) == RICIAN_OK);
  c = NULL;
  EXPECT(rician_run_chain(small, &cfg, &c) == RICIAN_E_IMPROPER);
  EXPECT(c == NULL);
  rician_sample_free(small);
  rician_sample_free(s);
}

static void test_study(void) {
  rician_study_config cfg;
  rician_study_config_default(&cfg);
  EXPECT(cfg.replications == 1000 && cfg.n_grid_len == 11 && cfg.methods_len == 3);
  const size_t grid[] = {10, 20};
  const char* methods[] = {"mm", "mle"};
  cfg.n_grid = grid;
  cfg.n_grid_len = 2;
  cfg.methods = methods;
  cfg.methods_len = 2;
  cfg.replications = 10;
  cfg.seed = 5;
  rician_study* st = NULL;
  EXPECT(rician_run_study(&cfg, &st) == RICIAN_OK);
  EXPECT(rician_study_cell_count(st) == 8);
  rician_study_cell cell;
  EXPECT(rician_study_cell_at(st, 0, &cell) == RICIAN_OK);
  EXPECT(strcmp(cell.method, "mm") == 0 && cell.n == 10 && !cell.has_cp);
  EXPECT(cell.mse >= cell.bias * cell.bias);
  EXPECT(rician_study_cell_at(st, 8, &cell) == RICIAN_E_INVALID_ARGUMENT);
  rician_study_free(st);

  const char* bad[] = {"bayes_jeffreys"};
  const size_t tiny[] = {2};
  cfg.methods = bad;
  cfg.methods_len = 1;
  cfg.n_grid = tiny;
  cfg.n_grid_len = 1;
  EXPECT(rician_run_study(&cfg, &st) != RICIAN_OK);
}

int main(void) {
  EXPECT(strlen(rician_version()) > 0);
  test_samples_and_model();
  test_load_and_fit();
  test_priors();
  test_chain_pipeline();
  test_study();
  if (failures) {
    fprintf(stderr, "%d C API check(s) failed\n", failures);
    return 1;
  }
  printf("C API checks passed\n");
  return 0;
}
