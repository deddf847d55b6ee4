#pragma once

#include <map>
#include <stdexcept>
#include <string>

#include "egc/core.hpp"
#include "egc/sim.hpp"

namespace egc {

/// Raised on malformed config input; the message names the file and key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// `key = value` lines, '#' comments, blank lines ignored. Unknown keys are
/// rejected. Keys: floors, cars, floor_height_m, lobby_height_m, speed_mps,
/// dwell_s, capacity.
BuildingSpec load_building(const std::string& path);

/// Keys: rate_per_hour, lobby_fraction, duration_s, seed.
TrafficProfile load_traffic(const std::string& path);

/// "FxC" shorthand (e.g. "15x6": F floors, C cars, remaining fields default).
BuildingSpec building_from_shorthand(const std::string& text);

/// Shorthand when the token looks like one, config file path otherwise.
BuildingSpec resolve_building(const std::string& token);

/// The raw key/value layer shared by all config formats.
std::map<std::string, std::string> read_key_values(const std::string& path);

}  // namespace egc
