#include "egc/config.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace egc {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t z = s.find_last_not_of(" \t\r");
  return s.substr(a, z - a + 1);
}

}  // namespace

std::map<std::string, std::string> read_key_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open");
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) +
                        ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty())
      throw ConfigError(path + ":" + std::to_string(lineno) +
                        ": empty key or value");
    if (kv.count(key))
      throw ConfigError(path + ": duplicate key '" + key + "'");
    kv[key] = val;
  }
  return kv;
}

namespace {

double to_double(const std::string& path, const std::string& key,
                 const std::string& val) {
  try {
    size_t pos = 0;
    double d = std::stod(val, &pos);
    if (pos != val.size()) throw std::invalid_argument("");
    return d;
  } catch (const std::exception&) {
    throw ConfigError(path + ": key '" + key + "': bad number '" + val + "'");
  }
}

long long to_int(const std::string& path, const std::string& key,
                 const std::string& val) {
  try {
    size_t pos = 0;
    long long v = std::stoll(val, &pos);
    if (pos != val.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(path + ": key '" + key + "': bad integer '" + val +
                      "'");
  }
}

void reject_unknown(const std::string& path,
                    const std::map<std::string, std::string>& kv) {
  if (!kv.empty())
    throw ConfigError(path + ": unknown key '" + kv.begin()->first + "'");
}

}  // namespace

BuildingSpec load_building(const std::string& path) {
  auto kv = read_key_values(path);
  BuildingSpec b;
  auto take = [&](const char* key) {
    auto it = kv.find(key);
    if (it == kv.end()) return std::string();
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  if (auto v = take("floors"); !v.empty())
    b.num_floors = static_cast<int>(to_int(path, "floors", v));
  if (auto v = take("cars"); !v.empty())
    b.num_cars = static_cast<int>(to_int(path, "cars", v));
  if (auto v = take("floor_height_m"); !v.empty())
    b.floor_height_m = to_double(path, "floor_height_m", v);
  if (auto v = take("lobby_height_m"); !v.empty())
    b.lobby_height_m = to_double(path, "lobby_height_m", v);
  if (auto v = take("speed_mps"); !v.empty())
    b.car_speed_mps = to_double(path, "speed_mps", v);
  if (auto v = take("dwell_s"); !v.empty())
    b.stop_dwell_s = to_double(path, "dwell_s", v);
  if (auto v = take("capacity"); !v.empty())
    b.car_capacity = static_cast<int>(to_int(path, "capacity", v));
  reject_unknown(path, kv);
  try {
    b.validate();
  } catch (const std::domain_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return b;
}

TrafficProfile load_traffic(const std::string& path) {
  auto kv = read_key_values(path);
  TrafficProfile t;
  auto take = [&](const char* key) {
    auto it = kv.find(key);
    if (it == kv.end()) return std::string();
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  if (auto v = take("rate_per_hour"); !v.empty())
    t.rate_per_hour = to_double(path, "rate_per_hour", v);
  if (auto v = take("lobby_fraction"); !v.empty())
    t.lobby_fraction = to_double(path, "lobby_fraction", v);
  if (auto v = take("duration_s"); !v.empty())
    t.duration_s = to_double(path, "duration_s", v);
  if (auto v = take("seed"); !v.empty())
    t.seed = static_cast<std::uint64_t>(to_int(path, "seed", v));
  reject_unknown(path, kv);
  return t;
}

BuildingSpec building_from_shorthand(const std::string& text) {
  size_t x = text.find('x');
  bool ok = x != std::string::npos && x > 0 && x + 1 < text.size();
  if (ok) {
    for (size_t k = 0; k < text.size(); ++k)
      if (k != x && !std::isdigit(static_cast<unsigned char>(text[k])))
        ok = false;
  }
  if (!ok)
    throw ConfigError("bad building shorthand '" + text +
                      "' (expected FLOORSxCARS, e.g. 15x6)");
  BuildingSpec b;
  b.num_floors = std::stoi(text.substr(0, x));
  b.num_cars = std::stoi(text.substr(x + 1));
  try {
    b.validate();
  } catch (const std::domain_error& e) {
    throw ConfigError("building shorthand '" + text + "': " +
                      std::string(e.what()));
  }
  return b;
}

BuildingSpec resolve_building(const std::string& token) {
  size_t x = token.find('x');
  bool shorthand = !token.empty() && x != std::string::npos;
  if (shorthand) {
    for (size_t k = 0; k < token.size(); ++k)
      if (k != x && !std::isdigit(static_cast<unsigned char>(token[k])))
        shorthand = false;
  }
  return shorthand ? building_from_shorthand(token) : load_building(token);
}

}  // namespace egc
