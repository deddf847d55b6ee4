#pragma once

#include <cstdint>
#include <vector>

#include "egc/core.hpp"

namespace egc {

/// One joint assignment of destinations to a car's unboarded passengers.
/// `destinations` is parallel to CarState::assigned_unboarded.
struct DestinationScenario {
  std::vector<int> destinations;
  double probability = 1.0;
};

/// Uniform prior over the floors a call's passenger can be headed to:
/// strictly above the call floor for Up, strictly below for Down.
std::vector<std::pair<int, double>> destination_distribution(
    const HallCall& call, const BuildingSpec& b);

inline constexpr long kDefaultScenarioCap = 10000;

/// Full Cartesian product of per-passenger destination supports when its size
/// is at most `cap`; otherwise `cap` seeded samples with uniform weights.
std::vector<DestinationScenario> enumerate_scenarios(
    const CarState& car, const BuildingSpec& b,
    long cap = kDefaultScenarioCap, std::uint64_t seed = 0);

struct DeliveryResult {
  std::vector<double> pickup_waits;  // parallel to assigned_unboarded
  double lobby_landing_s = 0.0;      // relative to the decision clock
};

/// Deterministic playout of the car's commitments under sweep (SCAN) order
/// with destinations fixed by the scenario: no new assignments, stops served
/// in the current direction out to the farthest commitment, then reverse.
/// Pickup waits are measured from each passenger's original arrival time;
/// the landing time is the car's first stop at floor 1, where it can next
/// serve the lobby queue, or its arrival there after emptying elsewhere.
DeliveryResult simulate_delivery(const CarState& car,
                                 const DestinationScenario& scenario,
                                 const BuildingSpec& b, double clock_s);

struct CarProfile {
  std::vector<double> expected_waits;
  double expected_landing_s = 0.0;
};

/// Probability-weighted average of simulate_delivery over the destination
/// scenarios. Lobby up-calls are marginalized in closed form (their pickup
/// instant is scenario-independent and the remaining trip depends on the iid
/// uniform destinations only through the max and the per-floor stop
/// probabilities), so the result is exact whenever the product space of the
/// remaining calls fits under `cap`.
CarProfile expected_profile(const CarState& car, const BuildingSpec& b,
                            double clock_s, long cap = kDefaultScenarioCap,
                            std::uint64_t seed = 0);

/// Per-candidate expected waits of existing passengers and the C x C matrix
/// of expected lobby landing times.
struct CandidateTable {
  std::vector<double> W;  // cumulative expected wait if the call goes to car i
  int N = 0;              // currently waiting passengers, incl. the new one
  std::vector<std::vector<double>> T_hat;  // row i: landings if car i chosen
};

CandidateTable candidate_table(const BankState& bank, const HallCall& call,
                               const BuildingSpec& b,
                               long cap = kDefaultScenarioCap,
                               std::uint64_t seed = 0);

}  // namespace egc
