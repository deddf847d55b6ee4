#include "egc/forecast.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <set>
#include <stdexcept>

#include "egc/detail/rng.hpp"

namespace egc {

namespace {

constexpr double kPosEps = 1e-9;

Direction flip(Direction d) {
  return d == Direction::Up ? Direction::Down : Direction::Up;
}

bool is_lobby_up_call(const AssignedCall& c) {
  return c.floor == 1 && c.direction == Direction::Up;
}

// Sweep playout state. Destinations are fixed per assigned call except for
// entries marked 0, which stand for not-yet-drawn lobby destinations and are
// marginalized in closed form once the car boards them at floor 1.
struct Sweep {
  const BuildingSpec& b;
  const CarState& car;
  const std::vector<int>& dests;
  double clock;

  double t = 0.0;
  double pos = 0.0;
  Direction dir = Direction::Idle;
  std::vector<int> drop;                // floor -> pending dropoff count
  std::vector<std::vector<int>> pend;   // floor -> assigned indices
  int tasks = 0;

  std::vector<double> waits;
  double landing = 0.0;                  // relative to clock
  bool landed = false;                   // first floor-1 stop recorded
  bool lobby_boarded = false;            // hit the closed-form branch
  double t_pick = 0.0;                   // absolute floor-1 pickup time
  int lobby_count = 0;

  Sweep(const CarState& c, const std::vector<int>& d, const BuildingSpec& bb,
        double clk)
      : b(bb), car(c), dests(d), clock(clk) {
    t = std::max(clk, c.busy_until_s);
    pos = c.position_m;
    dir = c.direction;
    drop.assign(b.num_floors + 1, 0);
    pend.assign(b.num_floors + 1, {});
    waits.assign(c.assigned_unboarded.size(), 0.0);
    for (const auto& p : c.onboard) {
      if (!b.valid_floor(p.destination_floor))
        throw std::domain_error("playout: onboard destination out of range");
      ++drop[p.destination_floor];
      ++tasks;
    }
    for (size_t k = 0; k < c.assigned_unboarded.size(); ++k) {
      const auto& call = c.assigned_unboarded[k];
      if (!b.valid_floor(call.floor))
        throw std::domain_error("playout: call floor out of range");
      pend[call.floor].push_back(static_cast<int>(k));
      ++tasks;
    }
  }

  bool committed(int f) const { return drop[f] > 0 || !pend[f].empty(); }

  int next_stop() const {
    if (dir == Direction::Up) {
      for (int f = 1; f <= b.num_floors; ++f)
        if (committed(f) && b.floor_pos_m(f) >= pos - kPosEps) return f;
      return -1;
    }
    if (dir == Direction::Down) {
      for (int f = b.num_floors; f >= 1; --f)
        if (committed(f) && b.floor_pos_m(f) <= pos + kPosEps) return f;
      return -1;
    }
    // idle: nearest committed floor, ties resolved upward
    int best = -1;
    double best_d = 0.0;
    for (int f = 1; f <= b.num_floors; ++f) {
      if (!committed(f)) continue;
      double d = std::fabs(b.floor_pos_m(f) - pos);
      if (best == -1 || d < best_d - kPosEps ||
          (d <= best_d + kPosEps && f > best)) {
        best = f;
        best_d = d;
      }
    }
    return best;
  }

  // Runs until all commitments are delivered, or until lobby passengers with
  // undrawn destinations board at floor 1 (lobby_boarded set).
  void run() {
    while (tasks > 0) {
      int next = next_stop();
      if (next == -1) {
        dir = (dir == Direction::Idle) ? Direction::Up : flip(dir);
        continue;
      }
      double target = b.floor_pos_m(next);
      if (dir == Direction::Idle && std::fabs(target - pos) > kPosEps)
        dir = target > pos ? Direction::Up : Direction::Down;
      t += std::fabs(target - pos) / b.car_speed_mps;
      pos = target;

      // A landing is the car's next chance to serve the lobby queue, so the
      // first stop at floor 1 counts even when deliveries remain afterwards.
      if (next == 1 && !landed) {
        landed = true;
        landing = t - clock;
      }

      tasks -= drop[next];
      drop[next] = 0;
      int boarded_random = 0;
      for (int idx : pend[next]) {
        waits[idx] = t - car.assigned_unboarded[idx].arrival_time_s;
        if (dests[idx] > 0) {
          ++drop[dests[idx]];  // pickup becomes a dropoff; task count net 0
        } else {
          ++boarded_random;
          --tasks;
        }
      }
      pend[next].clear();
      if (boarded_random > 0) {
        assert(next == 1);
        lobby_boarded = true;
        t_pick = t;
        lobby_count = boarded_random;
        return;
      }
      if (tasks == 0 && next == 1) return;
      t += b.stop_dwell_s;
    }
    if (!landed) landing = (t + pos / b.car_speed_mps) - clock;
  }

  // Closed-form expectation over the k iid uniform lobby destinations for
  // the waits of pickups still pending above the lobby: one ascending pass,
  // with each lobby destination adding a stop below the pickup floor with
  // probability p_hit.
  void lobby_postlude() {
    int top = b.num_floors;
    int k = lobby_count;
    std::set<int> up_stops;
    for (int f = 2; f <= top; ++f)
      if (drop[f] > 0) up_stops.insert(f);
    struct Rem {
      int idx, floor, dest;
    };
    std::vector<Rem> rem;
    for (int f = 2; f <= top; ++f)
      for (int idx : pend[f]) {
        int d = dests[idx];
        rem.push_back({idx, f, d});
        up_stops.insert(f);
        if (d > f) up_stops.insert(d);
      }
    if (rem.empty()) return;

    double span = top - 1.0;                  // lobby destination support size
    double p_hit = 1.0 - std::pow((span - 1.0) / span, k);

    for (const auto& r : rem) {
      int det_below = static_cast<int>(std::distance(
          up_stops.begin(), up_stops.lower_bound(r.floor)));
      double cand = static_cast<double>(r.floor - 2 - det_below);
      double pick_time = t_pick + b.stop_dwell_s +
                         b.floor_pos_m(r.floor) / b.car_speed_mps +
                         b.stop_dwell_s * (det_below + cand * p_hit);
      waits[r.idx] =
          pick_time - car.assigned_unboarded[r.idx].arrival_time_s;
    }
  }
};

// Plays out one sub-scenario; entries of `dests` equal to 0 mark lobby
// up-calls whose destination is marginalized analytically.
DeliveryResult play(const CarState& car, const std::vector<int>& dests,
                    const BuildingSpec& b, double clock) {
  Sweep sweep(car, dests, b, clock);
  sweep.run();
  if (sweep.lobby_boarded) sweep.lobby_postlude();
  return {std::move(sweep.waits), sweep.landing};
}

std::vector<std::vector<int>> call_supports(const CarState& car,
                                            const BuildingSpec& b) {
  std::vector<std::vector<int>> supports;
  supports.reserve(car.assigned_unboarded.size());
  for (const auto& c : car.assigned_unboarded) {
    HallCall call{c.floor, c.direction, c.arrival_time_s};
    auto dist = destination_distribution(call, b);
    std::vector<int> floors;
    floors.reserve(dist.size());
    for (const auto& [f, p] : dist) floors.push_back(f);
    supports.push_back(std::move(floors));
  }
  return supports;
}

}  // namespace

std::vector<std::pair<int, double>> destination_distribution(
    const HallCall& call, const BuildingSpec& b) {
  call.validate(b);
  std::vector<std::pair<int, double>> out;
  if (call.direction == Direction::Up) {
    int n = b.num_floors - call.floor;
    for (int f = call.floor + 1; f <= b.num_floors; ++f)
      out.emplace_back(f, 1.0 / n);
  } else {
    int n = call.floor - 1;
    for (int f = 1; f < call.floor; ++f) out.emplace_back(f, 1.0 / n);
  }
  return out;
}

std::vector<DestinationScenario> enumerate_scenarios(const CarState& car,
                                                     const BuildingSpec& b,
                                                     long cap,
                                                     std::uint64_t seed) {
  if (cap < 1) throw std::domain_error("enumerate_scenarios: cap must be >= 1");
  auto supports = call_supports(car, b);
  size_t n = supports.size();

  long total = 1;
  bool over = false;
  for (const auto& s : supports) {
    total *= static_cast<long>(s.size());
    if (total > cap) {
      over = true;
      break;
    }
  }

  std::vector<DestinationScenario> out;
  if (!over) {
    double prob = 1.0;
    for (const auto& s : supports) prob /= static_cast<double>(s.size());
    std::vector<size_t> odo(n, 0);
    for (;;) {
      DestinationScenario sc;
      sc.destinations.resize(n);
      for (size_t k = 0; k < n; ++k) sc.destinations[k] = supports[k][odo[k]];
      sc.probability = prob;
      out.push_back(std::move(sc));
      size_t k = 0;
      while (k < n && ++odo[k] == supports[k].size()) odo[k++] = 0;
      if (k == n) break;
      if (n == 0) break;
    }
    return out;
  }

  detail::Rng rng(seed);
  out.reserve(cap);
  for (long r = 0; r < cap; ++r) {
    DestinationScenario sc;
    sc.destinations.resize(n);
    for (size_t k = 0; k < n; ++k)
      sc.destinations[k] = supports[k][rng.below(supports[k].size())];
    sc.probability = 1.0 / static_cast<double>(cap);
    out.push_back(std::move(sc));
  }
  return out;
}

DeliveryResult simulate_delivery(const CarState& car,
                                 const DestinationScenario& scenario,
                                 const BuildingSpec& b, double clock_s) {
  if (scenario.destinations.size() != car.assigned_unboarded.size())
    throw std::domain_error(
        "simulate_delivery: scenario does not cover all unboarded passengers");
  for (size_t k = 0; k < scenario.destinations.size(); ++k) {
    const auto& call = car.assigned_unboarded[k];
    int d = scenario.destinations[k];
    bool ok = call.direction == Direction::Up ? d > call.floor : d < call.floor;
    if (!b.valid_floor(d) || !ok)
      throw std::domain_error("simulate_delivery: destination not feasible");
  }
  return play(car, scenario.destinations, b, clock_s);
}

CarProfile expected_profile(const CarState& car, const BuildingSpec& b,
                            double clock_s, long cap, std::uint64_t seed) {
  if (cap < 1) throw std::domain_error("expected_profile: cap must be >= 1");
  size_t n = car.assigned_unboarded.size();

  // Lobby up-calls are marginalized inside the playout; only the remaining
  // calls span the enumerated scenario space.
  std::vector<size_t> other_idx;
  for (size_t k = 0; k < n; ++k)
    if (!is_lobby_up_call(car.assigned_unboarded[k])) other_idx.push_back(k);

  auto supports = call_supports(car, b);
  long total = 1;
  bool over = false;
  for (size_t k : other_idx) {
    total *= static_cast<long>(supports[k].size());
    if (total > cap) {
      over = true;
      break;
    }
  }

  CarProfile profile;
  profile.expected_waits.assign(n, 0.0);
  std::vector<int> dests(n, 0);

  auto accumulate = [&](double prob) {
    DeliveryResult res = play(car, dests, b, clock_s);
    for (size_t k = 0; k < n; ++k)
      profile.expected_waits[k] += prob * res.pickup_waits[k];
    profile.expected_landing_s += prob * res.lobby_landing_s;
  };

  if (!over) {
    double prob = 1.0;
    for (size_t k : other_idx) prob /= static_cast<double>(supports[k].size());
    std::vector<size_t> odo(other_idx.size(), 0);
    for (;;) {
      for (size_t k = 0; k < other_idx.size(); ++k)
        dests[other_idx[k]] = supports[other_idx[k]][odo[k]];
      accumulate(prob);
      size_t k = 0;
      while (k < other_idx.size() && ++odo[k] == supports[other_idx[k]].size())
        odo[k++] = 0;
      if (k == other_idx.size()) break;
    }
  } else {
    detail::Rng rng(seed);
    double prob = 1.0 / static_cast<double>(cap);
    for (long r = 0; r < cap; ++r) {
      for (size_t k : other_idx)
        dests[k] = supports[k][rng.below(supports[k].size())];
      accumulate(prob);
    }
  }
  return profile;
}

CandidateTable candidate_table(const BankState& bank, const HallCall& call,
                               const BuildingSpec& b, long cap,
                               std::uint64_t seed) {
  call.validate(b);
  int c = static_cast<int>(bank.cars.size());
  if (c < 1) throw std::domain_error("candidate_table: empty bank");

  CandidateTable table;
  table.N = 1;  // the new passenger counts
  for (const auto& car : bank.cars)
    table.N += static_cast<int>(car.assigned_unboarded.size());

  std::vector<CarProfile> call_free(c);
  std::vector<double> call_free_wait_sum(c, 0.0);
  for (int j = 0; j < c; ++j) {
    call_free[j] =
        expected_profile(bank.cars[j], b, bank.clock_s, cap, seed + j + 1);
    for (double w : call_free[j].expected_waits) call_free_wait_sum[j] += w;
  }

  table.W.assign(c, 0.0);
  table.T_hat.assign(c, std::vector<double>(c, 0.0));
  for (int i = 0; i < c; ++i) {
    CarState candidate = bank.cars[i];
    candidate.assigned_unboarded.push_back(
        {-1, call.floor, call.direction, call.time_s});
    CarProfile perturbed =
        expected_profile(candidate, b, bank.clock_s, cap, seed + i + 1);
    double w = 0.0;
    for (double wk : perturbed.expected_waits) w += wk;
    for (int j = 0; j < c; ++j) {
      if (j == i) continue;
      w += call_free_wait_sum[j];
      table.T_hat[i][j] = call_free[j].expected_landing_s;
    }
    table.T_hat[i][i] = perturbed.expected_landing_s;
    table.W[i] = w;
  }
  return table;
}

}  // namespace egc
