#include "egc/core.hpp"

#include <cmath>
#include <stdexcept>

namespace egc {

const char* to_string(Direction d) {
  switch (d) {
    case Direction::Up:
      return "up";
    case Direction::Down:
      return "down";
    default:
      return "idle";
  }
}

void BuildingSpec::validate() const {
  if (num_floors < 2) throw std::domain_error("building: num_floors must be >= 2");
  if (num_cars < 1) throw std::domain_error("building: num_cars must be >= 1");
  if (floor_height_m <= 0.0) throw std::domain_error("building: floor_height_m must be > 0");
  if (lobby_height_m <= 0.0) throw std::domain_error("building: lobby_height_m must be > 0");
  if (car_speed_mps <= 0.0) throw std::domain_error("building: speed_mps must be > 0");
  if (stop_dwell_s <= 0.0) throw std::domain_error("building: dwell_s must be > 0");
  if (car_capacity < 0) throw std::domain_error("building: capacity must be >= 0");
}

double BuildingSpec::floor_pos_m(int floor) const {
  if (!valid_floor(floor)) throw std::domain_error("floor out of range");
  if (floor == 1) return 0.0;
  return lobby_height_m + (floor - 2) * floor_height_m;
}

void HallCall::validate(const BuildingSpec& b) const {
  if (!b.valid_floor(floor)) throw std::domain_error("hall call: floor out of range");
  if (direction == Direction::Idle) throw std::domain_error("hall call: direction must be up or down");
  if (direction == Direction::Down && floor == 1)
    throw std::domain_error("hall call: no down call at the lobby");
  if (direction == Direction::Up && floor == b.num_floors)
    throw std::domain_error("hall call: no up call at the top floor");
}

double travel_time(int origin_floor, int dest_floor, const BuildingSpec& b) {
  double d = std::fabs(b.floor_pos_m(dest_floor) - b.floor_pos_m(origin_floor));
  return d / b.car_speed_mps;
}

double itinerary_duration(const std::vector<int>& stops, int start_floor,
                          const BuildingSpec& b) {
  if (stops.empty()) throw std::domain_error("itinerary: empty stop sequence");
  if (!b.valid_floor(start_floor)) throw std::domain_error("floor out of range");
  double total = 0.0;
  int at = start_floor;
  for (int f : stops) {
    total += travel_time(at, f, b) + b.stop_dwell_s;
    at = f;
  }
  return total;
}

}  // namespace egc
