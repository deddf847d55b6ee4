#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "egc/forecast.hpp"

using namespace egc;

namespace {

BuildingSpec small_building() {
  BuildingSpec b;
  b.num_floors = 8;
  b.num_cars = 3;
  return b;
}

// Brute-force reference: average simulate_delivery over the full destination
// product, including lobby calls the production path marginalizes in closed
// form.
CarProfile brute_profile(const CarState& car, const BuildingSpec& b,
                         double clock) {
  std::vector<std::vector<int>> supports;
  for (const auto& c : car.assigned_unboarded) {
    HallCall call{c.floor, c.direction, c.arrival_time_s};
    std::vector<int> floors;
    for (const auto& [f, p] : destination_distribution(call, b))
      floors.push_back(f);
    supports.push_back(floors);
  }
  size_t n = supports.size();
  CarProfile out;
  out.expected_waits.assign(n, 0.0);
  double prob = 1.0;
  for (const auto& s : supports) prob /= static_cast<double>(s.size());
  std::vector<size_t> odo(n, 0);
  for (;;) {
    DestinationScenario sc;
    for (size_t k = 0; k < n; ++k) sc.destinations.push_back(supports[k][odo[k]]);
    DeliveryResult res = simulate_delivery(car, sc, b, clock);
    for (size_t k = 0; k < n; ++k)
      out.expected_waits[k] += prob * res.pickup_waits[k];
    out.expected_landing_s += prob * res.lobby_landing_s;
    size_t k = 0;
    while (k < n && ++odo[k] == supports[k].size()) odo[k++] = 0;
    if (k == n || n == 0) break;
  }
  return out;
}

}  // namespace

TEST_CASE("destination distribution is uniform over feasible floors") {
  BuildingSpec b = small_building();
  auto up = destination_distribution({3, Direction::Up, 0.0}, b);
  CHECK(up.size() == 5);
  for (const auto& [f, p] : up) {
    CHECK(f > 3);
    CHECK(p == doctest::Approx(0.2));
  }
  auto down = destination_distribution({3, Direction::Down, 0.0}, b);
  CHECK(down.size() == 2);
}

TEST_CASE("scenario enumeration is exhaustive under the cap") {
  BuildingSpec b = small_building();
  CarState car;
  car.assigned_unboarded = {{1, 3, Direction::Up, 0.0},
                            {2, 6, Direction::Down, 0.0}};
  auto scs = enumerate_scenarios(car, b);
  CHECK(scs.size() == 5 * 5);
  double sum = 0.0;
  for (const auto& sc : scs) sum += sc.probability;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("scenario sampling kicks in above the cap and stays normalized") {
  BuildingSpec b = small_building();
  CarState car;
  car.assigned_unboarded = {{1, 2, Direction::Up, 0.0},
                            {2, 3, Direction::Up, 0.0},
                            {3, 4, Direction::Up, 0.0}};
  auto scs = enumerate_scenarios(car, b, 50, 9);
  CHECK(scs.size() == 50);
  double sum = 0.0;
  for (const auto& sc : scs) {
    sum += sc.probability;
    CHECK(sc.destinations.size() == 3);
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  // seeded, so repeatable
  auto again = enumerate_scenarios(car, b, 50, 9);
  CHECK(scs[0].destinations == again[0].destinations);
}

TEST_CASE("delivery playout worked by hand") {
  BuildingSpec b = small_building();
  CarState car;
  car.position_m = 0.0;
  car.direction = Direction::Idle;
  car.onboard = {{7, 3}};
  car.assigned_unboarded = {{1, 5, Direction::Up, -10.0}};
  DestinationScenario sc{{7}, 1.0};
  DeliveryResult res = simulate_delivery(car, sc, b, 0.0);
  // 1 -> 3 drop, dwell, -> 5 board at 41/3
  CHECK(res.pickup_waits[0] == doctest::Approx(71.0 / 3.0).epsilon(1e-12));
  // -> 7 drop, dwell, then empty run to floor 1
  CHECK(res.lobby_landing_s == doctest::Approx(122.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("landing is the first stop at the lobby") {
  BuildingSpec b = small_building();
  CarState car;
  car.position_m = b.floor_pos_m(6);
  car.direction = Direction::Down;
  car.onboard = {{7, 1}};  // delivering someone to the lobby
  car.assigned_unboarded = {{1, 4, Direction::Up, 0.0}};
  DestinationScenario sc{{6}, 1.0};
  DeliveryResult res = simulate_delivery(car, sc, b, 0.0);
  // picks up at 4 on the way down, drops at 1: that stop is the landing
  double t_pick = (21.0 - 13.0) / 3.0;
  double t_lobby = t_pick + 8.0 + 13.0 / 3.0;
  CHECK(res.pickup_waits[0] == doctest::Approx(t_pick).epsilon(1e-12));
  CHECK(res.lobby_landing_s == doctest::Approx(t_lobby).epsilon(1e-12));
}

TEST_CASE("lobby pickup is the landing for a lobby call") {
  BuildingSpec b = small_building();
  CarState car;
  car.position_m = b.floor_pos_m(3);
  car.direction = Direction::Idle;
  car.assigned_unboarded = {{1, 1, Direction::Up, -4.0}};
  CarProfile prof = expected_profile(car, b, 0.0);
  CHECK(prof.expected_landing_s == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(prof.expected_waits[0] == doctest::Approx(7.0).epsilon(1e-12));
}

TEST_CASE("hybrid profile equals exhaustive enumeration") {
  BuildingSpec b = small_building();
  double clock = 100.0;

  CarState car;
  car.position_m = b.floor_pos_m(2);
  car.direction = Direction::Up;
  car.busy_until_s = 103.0;
  car.onboard = {{9, 6}};
  car.assigned_unboarded = {{1, 1, Direction::Up, 95.0},
                            {2, 4, Direction::Up, 97.0},
                            {3, 7, Direction::Down, 98.0}};

  CarProfile brute = brute_profile(car, b, clock);
  CarProfile hybrid = expected_profile(car, b, clock);
  CHECK(hybrid.expected_landing_s ==
        doctest::Approx(brute.expected_landing_s).epsilon(1e-9));
  REQUIRE(hybrid.expected_waits.size() == brute.expected_waits.size());
  for (size_t k = 0; k < brute.expected_waits.size(); ++k)
    CHECK(hybrid.expected_waits[k] ==
          doctest::Approx(brute.expected_waits[k]).epsilon(1e-9));
}

TEST_CASE("hybrid profile with two lobby calls") {
  BuildingSpec b = small_building();
  CarState car;
  car.position_m = b.floor_pos_m(5);
  car.direction = Direction::Down;
  car.assigned_unboarded = {{1, 1, Direction::Up, -2.0},
                            {2, 1, Direction::Up, -1.0},
                            {3, 3, Direction::Up, 0.0}};
  CarProfile brute = brute_profile(car, b, 0.0);
  CarProfile hybrid = expected_profile(car, b, 0.0);
  CHECK(hybrid.expected_landing_s ==
        doctest::Approx(brute.expected_landing_s).epsilon(1e-9));
  for (size_t k = 0; k < brute.expected_waits.size(); ++k)
    CHECK(hybrid.expected_waits[k] ==
          doctest::Approx(brute.expected_waits[k]).epsilon(1e-9));
}

TEST_CASE("hybrid profile with a pickup pending above the lobby boarding") {
  BuildingSpec b = small_building();
  CarState car;
  car.position_m = 0.0;
  car.direction = Direction::Idle;
  car.assigned_unboarded = {{1, 1, Direction::Up, -3.0},
                            {2, 4, Direction::Up, -1.0},
                            {3, 6, Direction::Down, 0.0}};
  CarProfile brute = brute_profile(car, b, 0.0);
  CarProfile hybrid = expected_profile(car, b, 0.0);
  CHECK(hybrid.expected_landing_s ==
        doctest::Approx(brute.expected_landing_s).epsilon(1e-9));
  for (size_t k = 0; k < brute.expected_waits.size(); ++k)
    CHECK(hybrid.expected_waits[k] ==
          doctest::Approx(brute.expected_waits[k]).epsilon(1e-9));
}

TEST_CASE("candidate table structure") {
  BuildingSpec b = small_building();
  BankState bank;
  bank.clock_s = 0.0;
  bank.cars.resize(3);
  for (int i = 0; i < 3; ++i) bank.cars[i].car_id = i + 1;
  bank.cars[1].position_m = b.floor_pos_m(4);
  bank.cars[1].onboard = {{5, 7}};
  bank.cars[2].assigned_unboarded = {{6, 3, Direction::Up, -5.0}};

  HallCall call{1, Direction::Up, 0.0};
  CandidateTable t = candidate_table(bank, call, b);
  CHECK(t.N == 2);  // one queued call plus the new passenger
  REQUIRE(t.W.size() == 3);
  REQUIRE(t.T_hat.size() == 3);
  // off-diagonal columns are call-free and identical across rows
  CHECK(t.T_hat[0][1] == doctest::Approx(t.T_hat[2][1]));
  CHECK(t.T_hat[0][2] == doctest::Approx(t.T_hat[1][2]));
  // the parked car picks up at once; its landing is now
  CHECK(t.T_hat[0][0] == doctest::Approx(0.0));
  // unperturbed parked car stays a zero entry
  CHECK(t.T_hat[1][0] == doctest::Approx(0.0));
  for (double w : t.W) CHECK(w >= 0.0);
}

TEST_CASE("simulate_delivery rejects malformed scenarios") {
  BuildingSpec b = small_building();
  CarState car;
  car.assigned_unboarded = {{1, 3, Direction::Up, 0.0}};
  CHECK_THROWS_AS(simulate_delivery(car, {{}, 1.0}, b, 0.0),
                  std::domain_error);
  CHECK_THROWS_AS(simulate_delivery(car, {{2}, 1.0}, b, 0.0),
                  std::domain_error);  // not above an up call
}
