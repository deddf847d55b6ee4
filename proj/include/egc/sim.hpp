#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "egc/core.hpp"
#include "egc/forecast.hpp"
#include "egc/policy.hpp"

namespace egc {

enum class SchedulerKind { Conventional, EsaDp, EsaDpLa };

/// Accepts "conventional", "esa-dp", "esa-dp-la"; throws std::domain_error
/// otherwise.
SchedulerKind scheduler_from_string(const std::string& name);
const char* to_string(SchedulerKind k);

struct TrafficProfile {
  double rate_per_hour = 1200.0;
  double lobby_fraction = 0.8;
  double duration_s = 3600.0;
  std::uint64_t seed = 1;

  void validate(const BuildingSpec& b) const;
};

/// Poisson arrivals over [0, duration]; lobby-origin arrivals go uniformly to
/// the upper floors, the rest travel between distinct non-lobby floors.
/// Deterministic given the seed and independent of any policy.
std::vector<Passenger> generate_traffic(const TrafficProfile& profile,
                                        const BuildingSpec& b);

struct SimParams {
  SchedulerKind scheduler = SchedulerKind::EsaDpLa;
  double alpha = 0.2;
  double beta = 0.02;
  double rate_decay_s = 300.0;
  bool park_idle_at_lobby = true;
  long scenario_cap = kDefaultScenarioCap;
  std::uint64_t policy_seed = 0;
};

struct TrialMetrics {
  std::vector<double> waits_s;  // board - arrival, served passengers only
  double avg_wait_s = 0.0;
  double max_wait_s = 0.0;
  long served = 0;
  long unserved = 0;
};

/// Event-driven trial over a fixed, time-sorted passenger sequence. The
/// policy is invoked once per passenger arrival; assignments are immutable.
/// Simulation halts hard at the traffic duration; passengers not yet boarded
/// are reported unserved and excluded from the average.
TrialMetrics run_trial(const BuildingSpec& b, const SimParams& params,
                       const std::vector<Passenger>& traffic,
                       double duration_s);

}  // namespace egc
