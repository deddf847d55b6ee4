#include "egc/sim.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "egc/detail/rng.hpp"

namespace egc {

namespace {

constexpr double kEps = 1e-9;

enum EventKind { kCarArrive = 0, kDwellComplete = 1, kPassengerArrival = 2 };

struct Event {
  double time = 0.0;
  int prio = 0;  // equals the kind; lower fires first at equal times
  long seq = 0;
  int kind = 0;
  int car = -1;
  long version = 0;
  int pax = -1;

  bool operator>(const Event& o) const {
    if (time != o.time) return time > o.time;
    if (prio != o.prio) return prio > o.prio;
    return seq > o.seq;
  }
};

struct SimCar {
  CarState st;
  bool dwelling = false;
  bool moving = false;
  double move_start_t = 0.0;
  double move_start_pos = 0.0;
  int move_target = 1;
  long version = 0;
};

class Trial {
 public:
  Trial(const BuildingSpec& b, const SimParams& params,
        const std::vector<Passenger>& traffic, double duration_s)
      : b_(b),
        params_(params),
        pax_(traffic),
        duration_(duration_s),
        estimator_(params.rate_decay_s) {
    cars_.resize(b.num_cars);
    for (int i = 0; i < b.num_cars; ++i) {
      cars_[i].st.car_id = i + 1;
      cars_[i].st.position_m = 0.0;
      cars_[i].st.direction = Direction::Idle;
    }
    for (int k = 0; k < static_cast<int>(pax_.size()); ++k)
      push({pax_[k].arrival_time_s, kPassengerArrival, 0, kPassengerArrival,
            -1, 0, k});
  }

  TrialMetrics run() {
    while (!queue_.empty()) {
      Event e = queue_.top();
      queue_.pop();
      if (e.time > duration_ + kEps) break;
      clock_ = e.time;
      switch (e.kind) {
        case kCarArrive:
          if (e.version == cars_[e.car].version) on_car_arrive(e.car);
          break;
        case kDwellComplete:
          on_dwell_complete(e.car);
          break;
        case kPassengerArrival:
          on_passenger(e.pax);
          break;
      }
    }
    TrialMetrics m;
    for (const auto& p : pax_) {
      if (p.board_time_s) {
        double w = *p.board_time_s - p.arrival_time_s;
        m.waits_s.push_back(w);
        m.max_wait_s = std::max(m.max_wait_s, w);
      } else {
        ++m.unserved;
      }
    }
    m.served = static_cast<long>(m.waits_s.size());
    if (m.served > 0) {
      double sum = 0.0;
      for (double w : m.waits_s) sum += w;
      m.avg_wait_s = sum / m.served;
    }
    return m;
  }

 private:
  void push(Event e) {
    e.seq = seq_++;
    queue_.push(e);
  }

  double cur_pos(const SimCar& c) const {
    if (!c.moving) return c.st.position_m;
    double tgt = b_.floor_pos_m(c.move_target);
    double sgn = tgt > c.move_start_pos ? 1.0 : -1.0;
    double p = c.move_start_pos + sgn * (clock_ - c.move_start_t) *
                                      b_.car_speed_mps;
    return sgn > 0 ? std::min(p, tgt) : std::max(p, tgt);
  }

  bool full(const SimCar& c) const {
    return b_.car_capacity > 0 &&
           static_cast<int>(c.st.onboard.size()) >= b_.car_capacity;
  }

  int drops_at(const SimCar& c, int f) const {
    int n = 0;
    for (const auto& p : c.st.onboard)
      if (p.destination_floor == f) ++n;
    return n;
  }

  int pickups_at(const SimCar& c, int f) const {
    int n = 0;
    for (const auto& a : c.st.assigned_unboarded)
      if (a.floor == f) ++n;
    return n;
  }

  // A floor is worth a stop when something alights there, or someone boards
  // and there is room (a dropoff at the same stop frees space too).
  bool servable(const SimCar& c, int f) const {
    int d = drops_at(c, f);
    if (d > 0) return true;
    return pickups_at(c, f) > 0 && !full(c);
  }

  int next_stop(const SimCar& c, double pos, Direction dir) const {
    if (dir == Direction::Up) {
      for (int f = 1; f <= b_.num_floors; ++f)
        if (servable(c, f) && b_.floor_pos_m(f) >= pos - kEps) return f;
      return -1;
    }
    if (dir == Direction::Down) {
      for (int f = b_.num_floors; f >= 1; --f)
        if (servable(c, f) && b_.floor_pos_m(f) <= pos + kEps) return f;
      return -1;
    }
    int best = -1;
    double best_d = 0.0;
    for (int f = 1; f <= b_.num_floors; ++f) {
      if (!servable(c, f)) continue;
      double d = std::fabs(b_.floor_pos_m(f) - pos);
      if (best == -1 || d < best_d - kEps || (d <= best_d + kEps && f > best)) {
        best = f;
        best_d = d;
      }
    }
    return best;
  }

  int floor_of_pos(double pos) const {
    for (int f = 1; f <= b_.num_floors; ++f)
      if (std::fabs(b_.floor_pos_m(f) - pos) <= kEps) return f;
    return -1;
  }

  void schedule_move(int ci, int target) {
    SimCar& c = cars_[ci];
    double pos = c.st.position_m;
    double tgt = b_.floor_pos_m(target);
    c.st.direction = tgt > pos ? Direction::Up : Direction::Down;
    c.moving = true;
    c.move_start_t = clock_;
    c.move_start_pos = pos;
    c.move_target = target;
    push({clock_ + std::fabs(tgt - pos) / b_.car_speed_mps, kCarArrive, 0,
          kCarArrive, ci, c.version, -1});
  }

  void begin_service(int ci, int floor) {
    SimCar& c = cars_[ci];
    c.st.position_m = b_.floor_pos_m(floor);
    c.moving = false;
    c.dwelling = true;
    c.st.busy_until_s = clock_ + b_.stop_dwell_s;
    for (auto it = c.st.onboard.begin(); it != c.st.onboard.end();) {
      if (it->destination_floor == floor) {
        pax_[it->passenger_id].alight_time_s = clock_;
        it = c.st.onboard.erase(it);
      } else {
        ++it;
      }
    }
    for (auto it = c.st.assigned_unboarded.begin();
         it != c.st.assigned_unboarded.end();) {
      if (it->floor == floor && !full(c)) {
        Passenger& p = pax_[it->passenger_id];
        p.board_time_s = clock_;
        c.st.onboard.push_back({it->passenger_id, p.destination_floor});
        it = c.st.assigned_unboarded.erase(it);
      } else {
        ++it;
      }
    }
    push({c.st.busy_until_s, kDwellComplete, 0, kDwellComplete, ci, 0, -1});
  }

  // Re-decides the car's next action from its current kinematic state. No-op
  // while dwelling; the dwell-complete handler replans. Invalidates any
  // in-flight arrival event.
  void replan(int ci) {
    SimCar& c = cars_[ci];
    if (c.dwelling) return;
    c.st.position_m = cur_pos(c);
    c.moving = false;
    ++c.version;
    if (!c.st.has_commitments()) {
      if (params_.park_idle_at_lobby && c.st.position_m > kEps) {
        schedule_move(ci, 1);
      } else {
        c.st.direction = Direction::Idle;
      }
      return;
    }
    Direction dir = c.st.direction;
    int next = next_stop(c, c.st.position_m, dir);
    if (next == -1) {
      dir = (dir == Direction::Up) ? Direction::Down : Direction::Up;
      next = next_stop(c, c.st.position_m, dir);
    }
    if (next == -1) {
      // everything committed is pickup-only and the car is full elsewhere;
      // cannot happen (a full car always has dropoffs), but stay safe
      c.st.direction = Direction::Idle;
      return;
    }
    if (std::fabs(b_.floor_pos_m(next) - c.st.position_m) <= kEps) {
      c.st.direction = dir == Direction::Idle ? c.st.direction : dir;
      begin_service(ci, next);
    } else {
      schedule_move(ci, next);
    }
  }

  void on_car_arrive(int ci) {
    SimCar& c = cars_[ci];
    c.st.position_m = b_.floor_pos_m(c.move_target);
    c.moving = false;
    int floor = c.move_target;
    if (servable(c, floor)) {
      begin_service(ci, floor);
    } else if (!c.st.has_commitments() && floor == 1) {
      c.st.direction = Direction::Idle;  // parked, doors closed
    } else {
      replan(ci);
    }
  }

  void on_dwell_complete(int ci) {
    cars_[ci].dwelling = false;
    replan(ci);
  }

  BankState snapshot() const {
    BankState bank;
    bank.clock_s = clock_;
    bank.cars.reserve(cars_.size());
    for (const auto& c : cars_) {
      CarState st = c.st;
      st.position_m = cur_pos(c);
      if (!c.dwelling) st.busy_until_s = clock_;
      bank.cars.push_back(std::move(st));
    }
    return bank;
  }

  void on_passenger(int k) {
    Passenger& p = pax_[k];
    estimator_.update(p.origin_floor, p.arrival_time_s);
    Direction dir = p.destination_floor > p.origin_floor ? Direction::Up
                                                         : Direction::Down;
    HallCall call{p.origin_floor, dir, p.arrival_time_s};

    BankState bank = snapshot();
    DecisionRecord rec;
    switch (params_.scheduler) {
      case SchedulerKind::Conventional:
        rec = assign_conventional(bank, call, b_);
        break;
      case SchedulerKind::EsaDp:
        rec = assign_esa_dp(bank, call, b_, params_.scenario_cap,
                            params_.policy_seed);
        break;
      case SchedulerKind::EsaDpLa: {
        SchedulerParams sp{params_.alpha, params_.beta,
                           estimator_.lobby_rate()};
        rec = assign_esa_dp_la(bank, call, b_, sp, params_.scenario_cap,
                               params_.policy_seed);
        break;
      }
    }
    int ci = rec.chosen_car;
    SimCar& c = cars_[ci];
    p.assigned_car = ci;
    c.st.assigned_unboarded.push_back(
        {k, p.origin_floor, dir, p.arrival_time_s});

    bool at_floor = !c.moving &&
                    std::fabs(c.st.position_m - b_.floor_pos_m(p.origin_floor)) <=
                        kEps;
    if (c.dwelling && at_floor && !full(c)) {
      // boards within the ongoing dwell
      p.board_time_s = clock_;
      c.st.onboard.push_back({k, p.destination_floor});
      c.st.assigned_unboarded.pop_back();
      return;
    }
    replan(ci);
  }

  const BuildingSpec& b_;
  const SimParams& params_;
  std::vector<Passenger> pax_;
  double duration_;
  RateEstimator estimator_;
  std::vector<SimCar> cars_;
  std::priority_queue<Event, std::vector<Event>, std::greater<Event>> queue_;
  long seq_ = 0;
  double clock_ = 0.0;
};

}  // namespace

SchedulerKind scheduler_from_string(const std::string& name) {
  if (name == "conventional") return SchedulerKind::Conventional;
  if (name == "esa-dp") return SchedulerKind::EsaDp;
  if (name == "esa-dp-la") return SchedulerKind::EsaDpLa;
  throw std::domain_error("unknown scheduler: " + name);
}

const char* to_string(SchedulerKind k) {
  switch (k) {
    case SchedulerKind::Conventional:
      return "conventional";
    case SchedulerKind::EsaDp:
      return "esa-dp";
    case SchedulerKind::EsaDpLa:
      return "esa-dp-la";
  }
  return "?";
}

void TrafficProfile::validate(const BuildingSpec& b) const {
  if (!(rate_per_hour >= 0.0))
    throw std::domain_error("TrafficProfile: rate_per_hour must be >= 0");
  if (!(lobby_fraction >= 0.0 && lobby_fraction <= 1.0))
    throw std::domain_error("TrafficProfile: lobby_fraction must be in [0,1]");
  if (!(duration_s >= 0.0))
    throw std::domain_error("TrafficProfile: duration_s must be >= 0");
  if (lobby_fraction < 1.0 && b.num_floors < 3)
    throw std::domain_error(
        "TrafficProfile: interfloor traffic needs at least 3 floors");
}

std::vector<Passenger> generate_traffic(const TrafficProfile& profile,
                                        const BuildingSpec& b) {
  b.validate();
  profile.validate(b);
  std::vector<Passenger> out;
  double rate = profile.rate_per_hour / 3600.0;
  if (rate <= 0.0) return out;
  detail::Rng rng(profile.seed);
  int top = b.num_floors;
  double t = 0.0;
  int id = 0;
  for (;;) {
    t += rng.exponential(rate);
    if (t > profile.duration_s) break;
    Passenger p;
    p.id = id++;
    p.arrival_time_s = t;
    if (rng.uniform() <= profile.lobby_fraction) {
      p.origin_floor = 1;
      p.destination_floor = 2 + static_cast<int>(rng.below(top - 1));
    } else {
      p.origin_floor = 2 + static_cast<int>(rng.below(top - 1));
      int d = 2 + static_cast<int>(rng.below(top - 2));
      if (d >= p.origin_floor) ++d;
      p.destination_floor = d;
    }
    out.push_back(p);
  }
  return out;
}

TrialMetrics run_trial(const BuildingSpec& b, const SimParams& params,
                       const std::vector<Passenger>& traffic,
                       double duration_s) {
  b.validate();
  for (size_t k = 1; k < traffic.size(); ++k)
    if (traffic[k].arrival_time_s < traffic[k - 1].arrival_time_s)
      throw std::domain_error("run_trial: traffic must be time-sorted");
  Trial trial(b, params, traffic, duration_s);
  return trial.run();
}

}  // namespace egc
