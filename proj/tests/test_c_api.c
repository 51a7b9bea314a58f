/* Exercises the shared library through its C header only. */
#include "bdris/bdris.h"

#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

static int failures = 0;

#define EXPECT(cond)                                                                   \
    do {                                                                               \
        if (!(cond)) {                                                                 \
            fprintf(stderr, "%s:%d: expectation failed: %s (%s)\n", __FILE__, __LINE__, \
                    #cond, bdris_last_error());                                        \
            ++failures;                                                                \
        }                                                                              \
    } while (0)

static void test_config(void)
{
    bdris_config* cfg = NULL;
    EXPECT(bdris_config_parse("{\"m\": 0}", &cfg) == BDRIS_ERR_CONFIG);
    EXPECT(strlen(bdris_last_error()) > 0);
    EXPECT(bdris_config_parse("{\"n_t\": 2, \"n_r\": 2, \"m\": 8, \"trials\": 3}", &cfg) == BDRIS_OK);
    EXPECT(strlen(bdris_last_error()) == 0);

    size_t len = 0;
    EXPECT(bdris_config_to_json(cfg, NULL, 0, &len) == BDRIS_OK);
    char* buf = malloc(len + 1);
    EXPECT(bdris_config_to_json(cfg, buf, len + 1, &len) == BDRIS_OK);
    EXPECT(strstr(buf, "\"trials\"") != NULL);
    free(buf);

    EXPECT(bdris_config_set_trials(cfg, 0) == BDRIS_ERR_CONFIG);
    EXPECT(bdris_config_set_trials(NULL, 3) == BDRIS_ERR_NULL_ARGUMENT);
    EXPECT(bdris_config_load("/nonexistent.json", &cfg) == BDRIS_ERR_CONFIG);
    bdris_config_free(cfg);
    bdris_config_free(NULL);
}

static void test_sweep(void)
{
    bdris_config* cfg = NULL;
    EXPECT(bdris_config_parse("{\"n_t\": 2, \"n_r\": 2, \"m\": 8, \"trials\": 3, \"pt_sweep_dbm\": [0, 30]}", &cfg)
           == BDRIS_OK);
    bdris_results* res = NULL;
    EXPECT(bdris_run_sweep(cfg, BDRIS_SWEEP_PT, "no-ris,bogus", &res) == BDRIS_ERR_CONFIG);
    EXPECT(res == NULL);
    EXPECT(bdris_run_sweep(cfg, BDRIS_SWEEP_PT, "bdris-opt-rxx,no-ris", &res) == BDRIS_OK);
    EXPECT(bdris_results_count(res) == 2 * 2 * 3);

    bdris_result_row row;
    EXPECT(bdris_results_row(res, 0, &row) == BDRIS_OK);
    EXPECT(strcmp(row.scheme, "bdris-opt-rxx") == 0);
    EXPECT(strcmp(row.sweep_var, "pt_dbm") == 0);
    EXPECT(row.sweep_value == 0.0);
    EXPECT(row.trial == 0);
    EXPECT(row.rate_bits >= 0.0);
    EXPECT(bdris_results_row(res, 12, &row) == BDRIS_ERR_OUT_OF_RANGE);
    EXPECT(bdris_results_write_csv(res, "/nonexistent-dir/x.csv") == BDRIS_ERR_IO);
    EXPECT(bdris_results_write_csv(res, "c_api_rows.csv") == BDRIS_OK);
    EXPECT(bdris_results_write_summary_csv(res, "c_api_summary.csv") == BDRIS_OK);

    FILE* f = fopen("c_api_rows.csv", "r");
    EXPECT(f != NULL);
    if (f) {
        char line[256];
        EXPECT(fgets(line, sizeof line, f) != NULL);
        EXPECT(strcmp(line, "scheme,sweep_var,sweep_value,trial,seed,rate_bits\n") == 0);
        fclose(f);
    }
    bdris_results_free(res);

    EXPECT(bdris_run_sweep(cfg, BDRIS_SWEEP_K, NULL, &res) == BDRIS_OK);
    EXPECT(bdris_results_count(res) == 5 * 6 * 3);
    bdris_results_free(res);
    bdris_config_free(cfg);
}

static void test_audit(void)
{
    bdris_audit_report* rep = NULL;
    EXPECT(bdris_audit_run(NULL, 3, 1, BDRIS_INJECT_NONE, &rep) == BDRIS_OK);
    EXPECT(bdris_audit_report_passed(rep) == 1);
    EXPECT(strstr(bdris_audit_report_text(rep), "audit passed") != NULL);
    bdris_audit_report_free(rep);
    EXPECT(bdris_audit_run(NULL, 3, 1, BDRIS_INJECT_ASYMMETRIC_THETA, &rep) == BDRIS_OK);
    EXPECT(bdris_audit_report_passed(rep) == 0);
    bdris_audit_report_free(rep);
}

static void test_numerics(void)
{
    /* f_d = e1, g_a = e2 with M = 2: the coupling must reach 1. */
    const double fd[4] = {1, 0, 0, 0};
    const double ga[4] = {0, 0, 1, 0};
    double theta[8];
    EXPECT(bdris_optimal_bdris(fd, ga, 2, 0.0, BDRIS_QROT_IDENTITY, 0, theta) == BDRIS_OK);
    /* f_d^H Theta g_a = Theta(0, 1), column-major index 2. */
    EXPECT(fabs(theta[4] - 1.0) < 1e-12 && fabs(theta[5]) < 1e-12);
    EXPECT(fabs(theta[2] - theta[4]) < 1e-12 && fabs(theta[3] - theta[5]) < 1e-12);

    const double zero[4] = {0, 0, 0, 0};
    EXPECT(bdris_optimal_bdris(zero, ga, 2, 0.0, BDRIS_QROT_IDENTITY, 0, theta) == BDRIS_ERR_DOMAIN);
    EXPECT(bdris_optimal_bdris(NULL, ga, 2, 0.0, BDRIS_QROT_IDENTITY, 0, theta) == BDRIS_ERR_NULL_ARGUMENT);

    const double eye[8] = {1, 0, 0, 0, 0, 0, 1, 0};
    double rate = -1.0;
    EXPECT(bdris_achievable_rate(eye, 2, 2, eye, 1.0, &rate) == BDRIS_OK);
    EXPECT(fabs(rate - 2.0) < 1e-12);
    const double neg[8] = {1, 0, 0, 0, 0, 0, -1, 0};
    EXPECT(bdris_achievable_rate(eye, 2, 2, neg, 1.0, &rate) == BDRIS_ERR_DOMAIN);
}

int main(void)
{
    EXPECT(strcmp(bdris_version(), "0.1.0") == 0);
    EXPECT(strcmp(bdris_status_name(BDRIS_ERR_IO), "i/o error") == 0);
    test_config();
    test_sweep();
    test_audit();
    test_numerics();
    if (failures) {
        fprintf(stderr, "%d expectation(s) failed\n", failures);
        return 1;
    }
    printf("c api checks passed\n");
    return 0;
}
