#include "egc/egc.h"

#include <fstream>
#include <new>
#include <sstream>
#include <stdexcept>
#include <string>

#include "egc/bench.hpp"
#include "egc/config.hpp"
#include "egc/core.hpp"
#include "egc/lobby_model.hpp"
#include "egc/sim.hpp"

struct egc_building {
  egc::BuildingSpec spec;
};

struct egc_traffic {
  egc::TrafficProfile profile;
};

namespace {

thread_local std::string g_last_error;

egc_status fail(egc_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

// Maps the library's exception taxonomy onto the C status codes.
template <typename Fn>
egc_status guarded(Fn&& fn) {
  try {
    fn();
    return EGC_OK;
  } catch (const egc::ConfigError& e) {
    return fail(EGC_ERR_PARSE, e.what());
  } catch (const std::domain_error& e) {
    return fail(EGC_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(EGC_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::ios_base::failure& e) {
    return fail(EGC_ERR_IO, e.what());
  } catch (const std::runtime_error& e) {
    return fail(EGC_ERR_NUMERIC, e.what());
  } catch (const std::bad_alloc&) {
    return fail(EGC_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(EGC_ERR_INTERNAL, e.what());
  }
}

egc_status require(bool ok, const char* what) {
  return ok ? EGC_OK : fail(EGC_ERR_INVALID_ARGUMENT, what);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::ios_base::failure(path + ": cannot open for writing");
  out << content;
  if (!out) throw std::ios_base::failure(path + ": write failed");
}

}  // namespace

extern "C" {

const char* egc_status_name(egc_status status) {
  switch (status) {
    case EGC_OK:
      return "ok";
    case EGC_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case EGC_ERR_IO:
      return "io error";
    case EGC_ERR_PARSE:
      return "parse error";
    case EGC_ERR_NUMERIC:
      return "numeric error";
    case EGC_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown";
}

const char* egc_last_error(void) { return g_last_error.c_str(); }

egc_status egc_building_load(const char* path, egc_building** out) {
  if (auto s = require(path && out, "null argument")) return s;
  return guarded(
      [&] { *out = new egc_building{egc::resolve_building(path)}; });
}

egc_status egc_building_set(int floors, int cars, double floor_height_m,
                            double lobby_height_m, double speed_mps,
                            double dwell_s, int capacity, egc_building** out) {
  if (auto s = require(out != nullptr, "null argument")) return s;
  return guarded([&] {
    egc::BuildingSpec spec{floors,    cars,    floor_height_m, lobby_height_m,
                           speed_mps, dwell_s, capacity};
    spec.validate();
    *out = new egc_building{spec};
  });
}

void egc_building_free(egc_building* b) { delete b; }

egc_status egc_traffic_load(const char* path, egc_traffic** out) {
  if (auto s = require(path && out, "null argument")) return s;
  return guarded([&] { *out = new egc_traffic{egc::load_traffic(path)}; });
}

egc_status egc_traffic_set(double rate_per_hour, double lobby_fraction,
                           double duration_s, uint64_t seed,
                           egc_traffic** out) {
  if (auto s = require(out != nullptr, "null argument")) return s;
  return guarded([&] {
    *out = new egc_traffic{
        egc::TrafficProfile{rate_per_hour, lobby_fraction, duration_s, seed}};
  });
}

void egc_traffic_free(egc_traffic* t) { delete t; }

egc_status egc_traffic_set_seed(egc_traffic* t, uint64_t seed) {
  if (auto s = require(t != nullptr, "null argument")) return s;
  t->profile.seed = seed;
  return EGC_OK;
}

egc_status egc_run_trial(const egc_building* b, const egc_traffic* t,
                         const char* scheduler, double alpha, double beta,
                         egc_metrics* out, const char* csv_path) {
  if (auto s = require(b && t && scheduler && out, "null argument")) return s;
  return guarded([&] {
    egc::SimParams params;
    params.scheduler = egc::scheduler_from_string(scheduler);
    params.alpha = alpha;
    params.beta = beta;
    egc::SchedulerParams{alpha, beta, 0.0}.validate();
    auto traffic = egc::generate_traffic(t->profile, b->spec);
    egc::TrialMetrics m =
        egc::run_trial(b->spec, params, traffic, t->profile.duration_s);
    out->avg_wait_s = m.avg_wait_s;
    out->max_wait_s = m.max_wait_s;
    out->served = m.served;
    out->unserved = m.unserved;
    if (csv_path) {
      egc::SweepRow row;
      row.building = std::to_string(b->spec.num_floors) + "x" +
                     std::to_string(b->spec.num_cars);
      row.floors = b->spec.num_floors;
      row.shafts = b->spec.num_cars;
      row.rate = t->profile.rate_per_hour;
      row.policy = params.scheduler;
      row.alpha = alpha;
      row.beta = beta;
      row.seed = t->profile.seed;
      row.avg_wait_s = m.avg_wait_s;
      row.max_wait_s = m.max_wait_s;
      row.served = m.served;
      row.unserved = m.unserved;
      row.traffic_hash = egc::traffic_hash(traffic);
      std::ostringstream ss;
      egc::write_csv({row}, ss);
      write_file(csv_path, ss.str());
    }
  });
}

egc_status egc_lobby_wait(const double* times_s, int n, double rate,
                          double beta, double* out_v, double* out_v_bar) {
  if (auto s = require(times_s && out_v && out_v_bar && n >= 0,
                       "null argument or negative length"))
    return s;
  return guarded([&] {
    egc::LandingPattern pattern;
    pattern.times_s.assign(times_s, times_s + n);
    pattern = egc::canonicalize(pattern);
    double v = egc::expected_lobby_wait(pattern, rate, beta);
    *out_v = v;
    double t_last = pattern.times_s.empty() ? 0.0 : pattern.times_s.back();
    *out_v_bar = egc::normalize_wait(v, beta, rate, t_last);
  });
}

egc_status egc_sweep_run(const char* config_path, const char* out_csv_path,
                         int jobs) {
  if (auto s = require(config_path && out_csv_path, "null argument")) return s;
  return guarded([&] {
    egc::SweepConfig cfg = egc::load_sweep_config(config_path);
    auto rows = egc::run_sweep(cfg, jobs);
    std::ostringstream ss;
    egc::write_csv(rows, ss);
    write_file(out_csv_path, ss.str());
  });
}

egc_status egc_validate(const char* report_path, int* out_all_passed) {
  if (auto s = require(out_all_passed != nullptr, "null argument")) return s;
  return guarded([&] {
    egc::ValidateReport report = egc::validate_suite();
    *out_all_passed = report.all_passed ? 1 : 0;
    if (report_path) write_file(report_path, egc::report_to_json(report));
  });
}

egc_status egc_plot(const char* in_csv_path, const char* kind,
                    const char* out_path) {
  if (auto s = require(in_csv_path && kind && out_path, "null argument"))
    return s;
  return guarded([&] {
    std::ifstream in(in_csv_path);
    if (!in)
      throw std::ios_base::failure(std::string(in_csv_path) +
                                   ": cannot open");
    auto rows = egc::read_csv(in);
    std::ostringstream ss;
    egc::emit_plot_data(rows, kind, ss);
    write_file(out_path, ss.str());
  });
}

}  // extern "C"
