#pragma once

#include <cstdint>
#include <vector>

#include "egc/core.hpp"
#include "egc/forecast.hpp"

namespace egc {

struct SchedulerParams {
  double alpha = 0.2;       // mixing weight on existing-passenger waits
  double beta = 0.02;       // discount rate, 1/s
  double lobby_rate = 0.0;  // estimated lobby arrival rate, 1/s

  void validate() const;
};

/// Audit trail of one assignment decision.
struct DecisionRecord {
  std::vector<double> W_bar;   // per candidate, seconds
  std::vector<double> V_bar;   // per candidate, seconds
  std::vector<double> score;   // per candidate, seconds
  int chosen_car = 0;
  bool tie_broken = false;
};

DecisionRecord assign_esa_dp_la(const BankState& bank, const HallCall& call,
                                const BuildingSpec& b,
                                const SchedulerParams& params,
                                long cap = kDefaultScenarioCap,
                                std::uint64_t seed = 0);

/// Existing-passenger criterion only: argmin over W_i.
DecisionRecord assign_esa_dp(const BankState& bank, const HallCall& call,
                             const BuildingSpec& b,
                             long cap = kDefaultScenarioCap,
                             std::uint64_t seed = 0);

/// Round-trip baseline: the call joins car i's sweep itinerary with a
/// pessimistic placeholder destination (farthest floor in the call
/// direction), as does every other unboarded call; cost is the summed
/// completion time of all itineraries back to floor 1.
DecisionRecord assign_conventional(const BankState& bank, const HallCall& call,
                                   const BuildingSpec& b);

/// Exponentially decayed arrival-rate estimates per origin class.
class RateEstimator {
 public:
  explicit RateEstimator(double decay_s = 300.0);

  void update(int origin_floor, double time_s);

  double lobby_rate() const { return lobby_rate_; }
  double upper_rate() const { return upper_rate_; }

 private:
  double decay_s_;
  double lobby_rate_ = 0.0;
  double upper_rate_ = 0.0;
  double last_time_ = 0.0;
  bool seen_any_ = false;
};

}  // namespace egc
