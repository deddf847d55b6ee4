#pragma once

#include <optional>
#include <string>
#include <vector>

namespace egc {

enum class Direction { Up, Down, Idle };

const char* to_string(Direction d);

/// Building geometry and kinematic constants. Floor 1 is the lobby; floors
/// are numbered 1..num_floors. Car position is measured in meters above the
/// floor-1 sill, so the taller lobby is representable exactly.
struct BuildingSpec {
  int num_floors = 8;
  int num_cars = 3;
  double floor_height_m = 4.0;
  double lobby_height_m = 5.0;
  double car_speed_mps = 3.0;
  double stop_dwell_s = 8.0;
  int car_capacity = 0;  // 0 = unbounded

  void validate() const;  // throws std::domain_error on bad values
  bool valid_floor(int f) const { return f >= 1 && f <= num_floors; }
  double floor_pos_m(int floor) const;
};

struct HallCall {
  int floor = 1;
  Direction direction = Direction::Up;
  double time_s = 0.0;

  void validate(const BuildingSpec& b) const;
};

struct Passenger {
  int id = 0;
  double arrival_time_s = 0.0;
  int origin_floor = 1;
  int destination_floor = 2;
  std::optional<int> assigned_car;
  std::optional<double> board_time_s;
  std::optional<double> alight_time_s;
};

struct OnboardPassenger {
  int passenger_id = 0;
  int destination_floor = 2;
};

/// A hall call committed to a car whose passenger has not boarded yet; the
/// destination is unknown to the controller until boarding.
struct AssignedCall {
  int passenger_id = 0;
  int floor = 1;
  Direction direction = Direction::Up;
  double arrival_time_s = 0.0;
};

struct CarState {
  int car_id = 1;
  double position_m = 0.0;
  Direction direction = Direction::Idle;
  std::vector<OnboardPassenger> onboard;
  std::vector<AssignedCall> assigned_unboarded;
  double busy_until_s = 0.0;  // time the current stop dwell ends

  bool has_commitments() const {
    return !onboard.empty() || !assigned_unboarded.empty();
  }
};

struct BankState {
  std::vector<CarState> cars;
  double clock_s = 0.0;
};

/// Constant-velocity travel time between two floor sills. Symmetric, zero iff
/// the floors are equal.
double travel_time(int origin_floor, int dest_floor, const BuildingSpec& b);

/// Total time to visit `stops` in order starting from `start_floor`, charging
/// one dwell per listed stop (none at the start floor).
double itinerary_duration(const std::vector<int>& stops, int start_floor,
                          const BuildingSpec& b);

}  // namespace egc
