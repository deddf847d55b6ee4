#ifndef EGC_H
#define EGC_H

/* C interface to the elevator group control library. All entry points return
 * an egc_status; on failure egc_last_error() holds a thread-local message. */

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum egc_status {
  EGC_OK = 0,
  EGC_ERR_INVALID_ARGUMENT = 1,
  EGC_ERR_IO = 2,
  EGC_ERR_PARSE = 3,
  EGC_ERR_NUMERIC = 4,
  EGC_ERR_INTERNAL = 5
} egc_status;

typedef struct egc_building egc_building;
typedef struct egc_traffic egc_traffic;

typedef struct egc_metrics {
  double avg_wait_s;
  double max_wait_s;
  long served;
  long unserved;
} egc_metrics;

const char* egc_status_name(egc_status status);
const char* egc_last_error(void);

/* path is a building config file, or FLOORSxCARS shorthand like "15x6" */
egc_status egc_building_load(const char* path, egc_building** out);
/* capacity 0 means unbounded */
egc_status egc_building_set(int floors, int cars, double floor_height_m,
                            double lobby_height_m, double speed_mps,
                            double dwell_s, int capacity, egc_building** out);
void egc_building_free(egc_building* b);

egc_status egc_traffic_load(const char* path, egc_traffic** out);
egc_status egc_traffic_set(double rate_per_hour, double lobby_fraction,
                           double duration_s, uint64_t seed,
                           egc_traffic** out);
void egc_traffic_free(egc_traffic* t);

egc_status egc_traffic_set_seed(egc_traffic* t, uint64_t seed);

/* scheduler: "conventional", "esa-dp" or "esa-dp-la". csv_path may be NULL;
 * when given, one header line plus one metrics row are written there. */
egc_status egc_run_trial(const egc_building* b, const egc_traffic* t,
                         const char* scheduler, double alpha, double beta,
                         egc_metrics* out, const char* csv_path);

/* Expected discounted cumulative lobby wait (out_v) and its per-passenger
 * normalization (out_v_bar) for a landing pattern of n times, seconds. */
egc_status egc_lobby_wait(const double* times_s, int n, double rate,
                          double beta, double* out_v, double* out_v_bar);

egc_status egc_sweep_run(const char* config_path, const char* out_csv_path,
                         int jobs);

/* report_path may be NULL to skip the JSON report. *out_all_passed is 1 when
 * every gate passed; a failing gate is not an error status. */
egc_status egc_validate(const char* report_path, int* out_all_passed);

/* kind: "scatter-conventional", "scatter-esa-dp" or "beta-curve" */
egc_status egc_plot(const char* in_csv_path, const char* kind,
                    const char* out_path);

#ifdef __cplusplus
}
#endif

#endif /* EGC_H */
