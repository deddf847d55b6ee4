#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "egc/core.hpp"
#include "egc/sim.hpp"

namespace egc {

struct SweepConfig {
  std::vector<std::string> buildings = {"8x3", "15x6"};  // shorthand or path
  std::vector<double> rates = {600, 1200, 1800, 2500};   // passengers/hour
  std::vector<SchedulerKind> policies = {SchedulerKind::Conventional,
                                         SchedulerKind::EsaDp,
                                         SchedulerKind::EsaDpLa};
  std::vector<std::uint64_t> seeds = {1,  2,  3,  4,  5,  6,  7,  8,  9,  10,
                                      11, 12, 13, 14, 15, 16, 17, 18, 19, 20};
  std::vector<std::uint64_t> fit_seeds;  // must stay disjoint from seeds
  double alpha = 0.2;
  std::vector<double> betas = {0.02};  // esa-dp-la only
  double duration_s = 3600.0;
  double lobby_fraction = 0.8;
  long scenario_cap = 200;
  double ladder_stop_wait_s = 60.0;

  void validate() const;
};

SweepConfig load_sweep_config(const std::string& path);

struct SweepRow {
  std::string building;
  int floors = 0;
  int shafts = 0;
  double rate = 0.0;
  SchedulerKind policy = SchedulerKind::Conventional;
  double alpha = 0.0;
  double beta = 0.0;
  std::uint64_t seed = 0;
  double avg_wait_s = 0.0;
  double max_wait_s = 0.0;
  long served = 0;
  long unserved = 0;
  std::uint64_t traffic_hash = 0;
};

/// FNV-1a over the generated passenger fields; identical across policies at
/// the same (building, rate, seed), which is what makes rows pairable.
std::uint64_t traffic_hash(const std::vector<Passenger>& traffic);

/// Runs every policy on identical per-seed traffic, walking each building's
/// rate ladder in ascending order and stopping it once any policy's
/// seed-averaged wait exceeds the configured threshold. `jobs` worker threads
/// share a pre-built task list within one rate level; output order does not
/// depend on jobs.
std::vector<SweepRow> run_sweep(const SweepConfig& config, int jobs = 1);

void write_csv(const std::vector<SweepRow>& rows, std::ostream& out);
std::string csv_header();

/// Parses CSV produced by write_csv; throws std::runtime_error on schema or
/// field errors.
std::vector<SweepRow> read_csv(std::istream& in);

/// Plot-data emission. Kinds: "scatter-conventional" and "scatter-esa-dp"
/// (x = baseline seed-averaged wait, y = esa-dp-la, one point per
/// building x rate cell, speedup = (x - y)/x) and "beta-curve"
/// (seed-averaged esa-dp-la wait per (building, rate, beta)).
void emit_plot_data(const std::vector<SweepRow>& rows, const std::string& kind,
                    std::ostream& out);

struct GateResult {
  std::string name;
  double error = 0.0;      // measured worst-case error
  double tolerance = 0.0;  // gate passes iff error < tolerance (strict)
  bool passed = false;
  std::string detail;
};

struct ValidateOptions {
  double tol_scale = 1.0;  // scales every gate tolerance; 0 must fail all
  int mc_reps = 20000;
  int forecast_samples = 2000;
  int policy_states = 100;
  std::uint64_t seed = 42;
};

struct ValidateReport {
  std::vector<GateResult> gates;
  bool all_passed = false;
};

ValidateReport validate_suite(const ValidateOptions& opts = {});
std::string report_to_json(const ValidateReport& report);

/// A reproducible assignment-decision scenario for policy comparisons.
struct DecisionCase {
  BuildingSpec building;
  BankState bank;
  HallCall call;
};

std::vector<DecisionCase> random_decision_suite(int n, std::uint64_t seed);

/// One-sided paired sign test: p-value of seeing at least `wins` successes
/// out of wins + losses fair coin flips (ties already dropped).
double sign_test_p(int wins, int losses);

}  // namespace egc
