/* Exercises the shared library strictly through the C header. */
#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "egc/egc.h"

static int failures = 0;

#define CHECK(cond)                                                   \
  do {                                                                \
    if (!(cond)) {                                                    \
      ++failures;                                                     \
      fprintf(stderr, "FAILED %s:%d: %s\n", __FILE__, __LINE__, #cond); \
    }                                                                 \
  } while (0)

static void test_status_names(void) {
  CHECK(strcmp(egc_status_name(EGC_OK), "ok") == 0);
  CHECK(egc_status_name(EGC_ERR_INVALID_ARGUMENT) != NULL);
  CHECK(egc_status_name(EGC_ERR_PARSE) != NULL);
}

static void test_building(void) {
  egc_building* b = NULL;
  CHECK(egc_building_load("15x6", &b) == EGC_OK);
  CHECK(b != NULL);
  egc_building_free(b);

  b = NULL;
  CHECK(egc_building_load("/no/such/file.cfg", &b) != EGC_OK);
  CHECK(b == NULL);
  CHECK(strlen(egc_last_error()) > 0);

  CHECK(egc_building_load(NULL, &b) == EGC_ERR_INVALID_ARGUMENT);
  CHECK(egc_building_set(1, 3, 4.0, 5.0, 3.0, 8.0, 0, &b) ==
        EGC_ERR_INVALID_ARGUMENT);
  CHECK(egc_building_set(8, 3, 4.0, 5.0, 3.0, 8.0, 0, &b) == EGC_OK);
  egc_building_free(b);
}

static void test_trial(void) {
  egc_building* b = NULL;
  egc_traffic* t = NULL;
  egc_metrics m;
  CHECK(egc_building_load("8x3", &b) == EGC_OK);
  CHECK(egc_traffic_set(600.0, 0.8, 600.0, 1, &t) == EGC_OK);

  CHECK(egc_run_trial(b, t, "esa-dp-la", 0.2, 0.02, &m, NULL) == EGC_OK);
  CHECK(m.served + m.unserved > 0);
  CHECK(m.avg_wait_s >= 0.0);
  CHECK(m.max_wait_s >= m.avg_wait_s);

  /* same seed, same metrics */
  egc_metrics m2;
  CHECK(egc_run_trial(b, t, "esa-dp-la", 0.2, 0.02, &m2, NULL) == EGC_OK);
  CHECK(m.avg_wait_s == m2.avg_wait_s);
  CHECK(m.served == m2.served);

  /* reseeding changes the traffic */
  CHECK(egc_traffic_set_seed(t, 2) == EGC_OK);
  CHECK(egc_run_trial(b, t, "esa-dp-la", 0.2, 0.02, &m2, NULL) == EGC_OK);
  CHECK(m.avg_wait_s != m2.avg_wait_s || m.served != m2.served);

  CHECK(egc_run_trial(b, t, "bogus", 0.2, 0.02, &m, NULL) ==
        EGC_ERR_INVALID_ARGUMENT);
  CHECK(egc_run_trial(b, t, "esa-dp", 2.0, 0.02, &m, NULL) ==
        EGC_ERR_INVALID_ARGUMENT);
  CHECK(egc_run_trial(NULL, t, "esa-dp", 0.2, 0.02, &m, NULL) ==
        EGC_ERR_INVALID_ARGUMENT);

  /* csv output */
  const char* csv = "/tmp/egc_capi_trial.csv";
  CHECK(egc_run_trial(b, t, "conventional", 0.0, 0.0, &m, csv) == EGC_OK);
  FILE* f = fopen(csv, "r");
  CHECK(f != NULL);
  if (f) {
    char line[512];
    CHECK(fgets(line, sizeof line, f) != NULL); /* header */
    CHECK(fgets(line, sizeof line, f) != NULL); /* row */
    fclose(f);
    remove(csv);
  }

  egc_traffic_free(t);
  egc_building_free(b);
}

static void test_lobby_wait(void) {
  double v = 0.0, v_bar = 0.0;
  double times[1] = {10.0};
  CHECK(egc_lobby_wait(times, 1, 0.5, 0.0, &v, &v_bar) == EGC_OK);
  CHECK(fabs(v - 25.0) < 1e-9);
  CHECK(fabs(v_bar - 5.0) < 1e-9);

  double bad[1] = {-1.0};
  CHECK(egc_lobby_wait(bad, 1, 0.5, 0.0, &v, &v_bar) ==
        EGC_ERR_INVALID_ARGUMENT);
  CHECK(egc_lobby_wait(NULL, 1, 0.5, 0.0, &v, &v_bar) ==
        EGC_ERR_INVALID_ARGUMENT);
}

static void test_validate(void) {
  int all = 0;
  const char* path = "/tmp/egc_capi_report.json";
  CHECK(egc_validate(path, &all) == EGC_OK);
  CHECK(all == 1);
  FILE* f = fopen(path, "r");
  CHECK(f != NULL);
  if (f) {
    fclose(f);
    remove(path);
  }
}

static void test_sweep_and_plot(void) {
  const char* cfg = "/tmp/egc_capi_sweep.cfg";
  const char* csv = "/tmp/egc_capi_sweep.csv";
  const char* plot = "/tmp/egc_capi_plot.csv";
  FILE* f = fopen(cfg, "w");
  CHECK(f != NULL);
  if (!f) return;
  fprintf(f,
          "buildings = 6x2\n"
          "rates = 300\n"
          "seeds = 1,2\n"
          "duration_s = 300\n"
          "scenario_cap = 50\n");
  fclose(f);

  CHECK(egc_sweep_run(cfg, csv, 2) == EGC_OK);
  CHECK(egc_plot(csv, "scatter-conventional", plot) == EGC_OK);
  CHECK(egc_plot(csv, "bogus-kind", plot) == EGC_ERR_INVALID_ARGUMENT);
  CHECK(egc_sweep_run("/no/such/file.cfg", csv, 1) != EGC_OK);
  remove(cfg);
  remove(csv);
  remove(plot);
}

int main(void) {
  test_status_names();
  test_building();
  test_trial();
  test_lobby_wait();
  test_validate();
  test_sweep_and_plot();
  if (failures == 0) {
    printf("capi: all checks passed\n");
    return 0;
  }
  printf("capi: %d checks failed\n", failures);
  return 1;
}
