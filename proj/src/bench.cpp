#include "egc/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "egc/config.hpp"
#include "egc/detail/rng.hpp"
#include "egc/forecast.hpp"
#include "egc/lobby_model.hpp"
#include "egc/policy.hpp"

namespace egc {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::vector<double> parse_list_d(const std::string& path,
                                 const std::string& key,
                                 const std::string& val) {
  std::vector<double> out;
  std::stringstream ss(val);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t pos = 0;
      out.push_back(std::stod(item, &pos));
      while (pos < item.size() && std::isspace((unsigned char)item[pos])) ++pos;
      if (pos != item.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw ConfigError(path + ": key '" + key + "': bad list entry '" + item +
                        "'");
    }
  }
  if (out.empty()) throw ConfigError(path + ": key '" + key + "': empty list");
  return out;
}

std::vector<std::string> parse_list_s(const std::string& val) {
  std::vector<std::string> out;
  std::stringstream ss(val);
  std::string item;
  while (std::getline(ss, item, ',')) {
    size_t a = item.find_first_not_of(" \t");
    size_t z = item.find_last_not_of(" \t");
    if (a == std::string::npos) continue;
    out.push_back(item.substr(a, z - a + 1));
  }
  return out;
}

}  // namespace

void SweepConfig::validate() const {
  if (buildings.empty() || rates.empty() || policies.empty() || seeds.empty())
    throw std::domain_error("SweepConfig: empty list");
  if (!std::is_sorted(rates.begin(), rates.end()))
    throw std::domain_error("SweepConfig: rates must be ascending");
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw std::domain_error("SweepConfig: alpha must be in [0, 1]");
  for (double b : betas)
    if (!(b >= 0.0)) throw std::domain_error("SweepConfig: beta must be >= 0");
  if (betas.empty()) throw std::domain_error("SweepConfig: empty beta list");
  if (!(duration_s > 0.0))
    throw std::domain_error("SweepConfig: duration must be positive");
  if (scenario_cap < 1)
    throw std::domain_error("SweepConfig: scenario_cap must be >= 1");
  std::set<std::uint64_t> test(seeds.begin(), seeds.end());
  for (auto s : fit_seeds)
    if (test.count(s))
      throw std::domain_error(
          "SweepConfig: fit_seeds and seeds must be disjoint");
}

SweepConfig load_sweep_config(const std::string& path) {
  auto kv = read_key_values(path);
  SweepConfig cfg;
  auto take = [&](const char* key) {
    auto it = kv.find(key);
    if (it == kv.end()) return std::string();
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  if (auto v = take("buildings"); !v.empty()) cfg.buildings = parse_list_s(v);
  if (auto v = take("rates"); !v.empty())
    cfg.rates = parse_list_d(path, "rates", v);
  if (auto v = take("policies"); !v.empty()) {
    cfg.policies.clear();
    for (const auto& name : parse_list_s(v)) {
      try {
        cfg.policies.push_back(scheduler_from_string(name));
      } catch (const std::domain_error& e) {
        throw ConfigError(path + ": key 'policies': " + e.what());
      }
    }
  }
  auto parse_seeds = [&](const char* key, std::vector<std::uint64_t>* dst) {
    if (auto v = take(key); !v.empty()) {
      dst->clear();
      for (double d : parse_list_d(path, key, v))
        dst->push_back(static_cast<std::uint64_t>(d));
    }
  };
  parse_seeds("seeds", &cfg.seeds);
  parse_seeds("fit_seeds", &cfg.fit_seeds);
  if (auto v = take("alpha"); !v.empty())
    cfg.alpha = parse_list_d(path, "alpha", v).at(0);
  if (auto v = take("betas"); !v.empty())
    cfg.betas = parse_list_d(path, "betas", v);
  if (auto v = take("duration_s"); !v.empty())
    cfg.duration_s = parse_list_d(path, "duration_s", v).at(0);
  if (auto v = take("lobby_fraction"); !v.empty())
    cfg.lobby_fraction = parse_list_d(path, "lobby_fraction", v).at(0);
  if (auto v = take("scenario_cap"); !v.empty())
    cfg.scenario_cap = static_cast<long>(
        parse_list_d(path, "scenario_cap", v).at(0));
  if (!kv.empty())
    throw ConfigError(path + ": unknown key '" + kv.begin()->first + "'");
  try {
    cfg.validate();
  } catch (const std::domain_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return cfg;
}

std::uint64_t traffic_hash(const std::vector<Passenger>& traffic) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&](std::uint64_t v) {
    for (int k = 0; k < 8; ++k) {
      h ^= (v >> (8 * k)) & 0xff;
      h *= 1099511628211ull;
    }
  };
  for (const auto& p : traffic) {
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(p.arrival_time_s));
    std::memcpy(&bits, &p.arrival_time_s, sizeof(bits));
    mix(bits);
    mix(static_cast<std::uint64_t>(p.origin_floor));
    mix(static_cast<std::uint64_t>(p.destination_floor));
  }
  return h;
}

namespace {

struct Task {
  std::string building;
  BuildingSpec spec;
  double rate = 0.0;
  std::uint64_t seed = 0;
  SchedulerKind policy = SchedulerKind::Conventional;
  double alpha = 0.0;
  double beta = 0.0;
};

SweepRow run_task(const Task& task, const SweepConfig& cfg) {
  TrafficProfile profile{task.rate, cfg.lobby_fraction, cfg.duration_s,
                         task.seed};
  auto traffic = generate_traffic(profile, task.spec);
  SimParams sp;
  sp.scheduler = task.policy;
  sp.alpha = task.alpha;
  sp.beta = task.beta;
  sp.scenario_cap = cfg.scenario_cap;
  TrialMetrics m = run_trial(task.spec, sp, traffic, cfg.duration_s);
  SweepRow row;
  row.building = task.building;
  row.floors = task.spec.num_floors;
  row.shafts = task.spec.num_cars;
  row.rate = task.rate;
  row.policy = task.policy;
  row.alpha = task.alpha;
  row.beta = task.beta;
  row.seed = task.seed;
  row.avg_wait_s = m.avg_wait_s;
  row.max_wait_s = m.max_wait_s;
  row.served = m.served;
  row.unserved = m.unserved;
  row.traffic_hash = traffic_hash(traffic);
  return row;
}

// Runs the task list on `jobs` threads; result order matches input order.
std::vector<SweepRow> run_tasks(const std::vector<Task>& tasks,
                                const SweepConfig& cfg, int jobs) {
  std::vector<SweepRow> rows(tasks.size());
  if (jobs <= 1) {
    for (size_t k = 0; k < tasks.size(); ++k) rows[k] = run_task(tasks[k], cfg);
    return rows;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  auto worker = [&]() {
    for (;;) {
      size_t k = next.fetch_add(1);
      if (k >= tasks.size()) return;
      try {
        rows[k] = run_task(tasks[k], cfg);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!err) err = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
  return rows;
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepConfig& config, int jobs) {
  config.validate();
  if (jobs < 1) throw std::domain_error("run_sweep: jobs must be >= 1");
  std::vector<SweepRow> out;
  for (const auto& token : config.buildings) {
    BuildingSpec spec = resolve_building(token);
    for (double rate : config.rates) {
      std::vector<Task> tasks;
      for (auto seed : config.seeds) {
        for (auto pol : config.policies) {
          if (pol == SchedulerKind::EsaDpLa) {
            for (double beta : config.betas)
              tasks.push_back(
                  {token, spec, rate, seed, pol, config.alpha, beta});
          } else {
            tasks.push_back({token, spec, rate, seed, pol, 0.0, 0.0});
          }
        }
      }
      auto rows = run_tasks(tasks, config, jobs);
      out.insert(out.end(), rows.begin(), rows.end());

      // rate ladder stop: any policy saturated at this level ends the
      // building's ladder
      std::map<std::pair<int, double>, std::pair<double, int>> acc;
      for (const auto& r : rows) {
        auto& slot = acc[{static_cast<int>(r.policy), r.beta}];
        slot.first += r.avg_wait_s;
        slot.second += 1;
      }
      bool saturated = false;
      for (const auto& [key, slot] : acc)
        if (slot.first / slot.second > config.ladder_stop_wait_s)
          saturated = true;
      if (saturated) break;
    }
  }
  return out;
}

std::string csv_header() {
  return "building,floors,shafts,rate,policy,alpha,beta,seed,avg_wait_s,"
         "max_wait_s,served,unserved,traffic_hash";
}

void write_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << csv_header() << "\n";
  for (const auto& r : rows) {
    out << r.building << ',' << r.floors << ',' << r.shafts << ','
        << fmt(r.rate) << ',' << to_string(r.policy) << ',' << fmt(r.alpha)
        << ',' << fmt(r.beta) << ',' << r.seed << ',' << fmt(r.avg_wait_s)
        << ',' << fmt(r.max_wait_s) << ',' << r.served << ',' << r.unserved
        << ',' << r.traffic_hash << "\n";
  }
}

std::vector<SweepRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != csv_header())
    throw std::runtime_error("read_csv: missing or mismatched header");
  std::vector<SweepRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) f.push_back(item);
    if (f.size() != 13)
      throw std::runtime_error("read_csv: expected 13 fields, got " +
                               std::to_string(f.size()));
    try {
      SweepRow r;
      r.building = f[0];
      r.floors = std::stoi(f[1]);
      r.shafts = std::stoi(f[2]);
      r.rate = std::stod(f[3]);
      r.policy = scheduler_from_string(f[4]);
      r.alpha = std::stod(f[5]);
      r.beta = std::stod(f[6]);
      r.seed = std::stoull(f[7]);
      r.avg_wait_s = std::stod(f[8]);
      r.max_wait_s = std::stod(f[9]);
      r.served = std::stol(f[10]);
      r.unserved = std::stol(f[11]);
      r.traffic_hash = std::stoull(f[12]);
      rows.push_back(std::move(r));
    } catch (const std::domain_error& e) {
      throw std::runtime_error(std::string("read_csv: ") + e.what());
    } catch (const std::exception&) {
      throw std::runtime_error("read_csv: bad field in line: " + line);
    }
  }
  return rows;
}

void emit_plot_data(const std::vector<SweepRow>& rows, const std::string& kind,
                    std::ostream& out) {
  struct Acc {
    double sum = 0.0;
    int n = 0;
    double mean() const { return n ? sum / n : 0.0; }
  };
  if (kind == "scatter-conventional" || kind == "scatter-esa-dp") {
    SchedulerKind baseline = kind == "scatter-conventional"
                                 ? SchedulerKind::Conventional
                                 : SchedulerKind::EsaDp;
    out << "building,rate,baseline_avg_wait_s,esa_dp_la_avg_wait_s,speedup\n";
    std::map<std::pair<std::string, double>, std::pair<Acc, Acc>> cells;
    for (const auto& r : rows) {
      auto& cell = cells[{r.building, r.rate}];
      if (r.policy == baseline) {
        cell.first.sum += r.avg_wait_s;
        cell.first.n += 1;
      } else if (r.policy == SchedulerKind::EsaDpLa) {
        cell.second.sum += r.avg_wait_s;
        cell.second.n += 1;
      }
    }
    for (const auto& [key, cell] : cells) {
      if (cell.first.n == 0 || cell.second.n == 0) continue;
      double x = cell.first.mean();
      double y = cell.second.mean();
      double speedup = x > 0.0 ? (x - y) / x : 0.0;
      out << key.first << ',' << fmt(key.second) << ',' << fmt(x) << ','
          << fmt(y) << ',' << fmt(speedup) << "\n";
    }
    return;
  }
  if (kind == "beta-curve") {
    out << "building,rate,beta,avg_wait_s\n";
    std::map<std::tuple<std::string, double, double>, Acc> cells;
    for (const auto& r : rows) {
      if (r.policy != SchedulerKind::EsaDpLa) continue;
      auto& cell = cells[{r.building, r.rate, r.beta}];
      cell.sum += r.avg_wait_s;
      cell.n += 1;
    }
    for (const auto& [key, cell] : cells)
      out << std::get<0>(key) << ',' << fmt(std::get<1>(key)) << ','
          << fmt(std::get<2>(key)) << ',' << fmt(cell.mean()) << "\n";
    return;
  }
  throw std::domain_error("emit_plot_data: unknown kind '" + kind + "'");
}

std::vector<DecisionCase> random_decision_suite(int n, std::uint64_t seed) {
  std::vector<DecisionCase> out;
  detail::Rng rng(seed);
  for (int k = 0; k < n; ++k) {
    DecisionCase dc;
    dc.building.num_floors = 5 + static_cast<int>(rng.below(11));
    dc.building.num_cars = 2 + static_cast<int>(rng.below(3));
    int top = dc.building.num_floors;
    dc.bank.clock_s = 0.0;
    for (int c = 0; c < dc.building.num_cars; ++c) {
      CarState car;
      car.car_id = c + 1;
      int at = 1 + static_cast<int>(rng.below(top));
      car.position_m = dc.building.floor_pos_m(at);
      int nb = static_cast<int>(rng.below(3));
      for (int q = 0; q < nb; ++q)
        car.onboard.push_back(
            {-1, 1 + static_cast<int>(rng.below(top))});
      int na = static_cast<int>(rng.below(3));
      for (int q = 0; q < na; ++q) {
        int f = 1 + static_cast<int>(rng.below(top));
        Direction d;
        if (f == 1)
          d = Direction::Up;
        else if (f == top)
          d = Direction::Down;
        else
          d = rng.uniform() < 0.5 ? Direction::Up : Direction::Down;
        car.assigned_unboarded.push_back({-1, f, d, -30.0 * rng.uniform()});
      }
      if (car.has_commitments())
        car.direction = rng.uniform() < 0.5 ? Direction::Up : Direction::Down;
      dc.bank.cars.push_back(std::move(car));
    }
    int cf = 1 + static_cast<int>(rng.below(top));
    Direction cd;
    if (cf == 1)
      cd = Direction::Up;
    else if (cf == top)
      cd = Direction::Down;
    else
      cd = rng.uniform() < 0.5 ? Direction::Up : Direction::Down;
    dc.call = {cf, cd, 0.0};
    out.push_back(std::move(dc));
  }
  return out;
}

double sign_test_p(int wins, int losses) {
  int n = wins + losses;
  if (n == 0) return 1.0;
  double p = 0.0;
  for (int k = wins; k <= n; ++k) {
    double logc = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                  std::lgamma(n - k + 1.0);
    p += std::exp(logc - n * std::log(2.0));
  }
  return std::min(1.0, p);
}

namespace {

GateResult gate_dual_path(double tol_scale) {
  GateResult g;
  g.name = "dual_path_cost";
  g.tolerance = 1e-8 * tol_scale;
  double worst = 0.0;
  for (int j = 0; j <= 7; ++j)
    for (double rate : {0.1, 0.7, 2.0})
      for (double beta : {0.0, 0.02, 0.1})
        for (double dt : {0.5, 5.0, 30.0})
          for (double t0 : {0.0, 20.0}) {
            double cf = transition_cost(j, t0, dt, rate, beta);
            double q = quadrature_cost(j, t0, dt, rate, beta, 1e-11);
            double rel = std::fabs(cf - q) / std::max(q, 1e-300);
            worst = std::max(worst, rel);
          }
  g.error = worst;
  g.passed = g.error < g.tolerance;
  g.detail = "max relative error over the (j, rate, beta, dt, t_start) grid";
  return g;
}

GateResult gate_dp_vs_mc(const ValidateOptions& opts) {
  GateResult g;
  g.name = "dp_vs_mc";
  g.tolerance = 1.0 * opts.tol_scale;  // error is |diff| / (3 stderr)
  detail::Rng rng(opts.seed);
  double worst = 0.0;
  for (int k = 0; k < 3; ++k) {
    int c = 2 + static_cast<int>(rng.below(3));
    LandingPattern p;
    for (int q = 0; q < c; ++q) p.times_s.push_back(40.0 * rng.uniform());
    p = canonicalize(p);
    double rate = 0.1 + 0.9 * rng.uniform();
    double beta = (k % 2 == 0) ? 0.0 : 0.02;
    double v = expected_lobby_wait(p, rate, beta);
    McEstimate mc = mc_lobby_wait(p, rate, beta, opts.mc_reps, opts.seed + k);
    double denom = std::max(3.0 * mc.stderr_mean, 1e-300);
    worst = std::max(worst, std::fabs(v - mc.mean) / denom);
  }
  g.error = worst;
  g.passed = g.error < g.tolerance;
  g.detail = "max |V_dp - V_mc| in units of 3 stderr";
  return g;
}

GateResult gate_forecast(const ValidateOptions& opts) {
  GateResult g;
  g.name = "forecast_oracle";
  g.tolerance = 1.0 * opts.tol_scale;
  auto cases = random_decision_suite(3, opts.seed + 1000);
  double worst = 0.0;
  for (size_t k = 0; k < cases.size(); ++k) {
    const auto& dc = cases[k];
    const CarState& car = dc.bank.cars[0];
    CarProfile prof = expected_profile(car, dc.building, 0.0);
    size_t n = car.assigned_unboarded.size();
    std::vector<double> wait_sum(n, 0.0), wait_sq(n, 0.0);
    double land_sum = 0.0, land_sq = 0.0;
    detail::Rng rng(opts.seed + 2000 + k);
    int reps = opts.forecast_samples;
    for (int r = 0; r < reps; ++r) {
      DestinationScenario sc;
      for (const auto& a : car.assigned_unboarded) {
        HallCall call{a.floor, a.direction, a.arrival_time_s};
        auto dist = destination_distribution(call, dc.building);
        sc.destinations.push_back(
            dist[rng.below(dist.size())].first);
      }
      DeliveryResult res = simulate_delivery(car, sc, dc.building, 0.0);
      for (size_t q = 0; q < n; ++q) {
        wait_sum[q] += res.pickup_waits[q];
        wait_sq[q] += res.pickup_waits[q] * res.pickup_waits[q];
      }
      land_sum += res.lobby_landing_s;
      land_sq += res.lobby_landing_s * res.lobby_landing_s;
    }
    auto score = [&](double sum, double sq, double expect) {
      double mean = sum / reps;
      double var = std::max(0.0, sq / reps - mean * mean) / (reps - 1);
      double denom = std::max(3.0 * std::sqrt(var), 1e-9);
      return std::fabs(expect - mean) / denom;
    };
    for (size_t q = 0; q < n; ++q)
      worst = std::max(worst,
                       score(wait_sum[q], wait_sq[q], prof.expected_waits[q]));
    worst = std::max(worst, score(land_sum, land_sq, prof.expected_landing_s));
  }
  g.error = worst;
  g.passed = g.error < g.tolerance;
  g.detail = "max |analytic - mc| in units of 3 stderr";
  return g;
}

GateResult gate_scenario_probs(const ValidateOptions& opts) {
  GateResult g;
  g.name = "scenario_probs";
  g.tolerance = 1e-9 * opts.tol_scale;
  auto cases = random_decision_suite(5, opts.seed + 3000);
  double worst = 0.0;
  for (const auto& dc : cases) {
    for (const auto& car : dc.bank.cars) {
      double sum = 0.0;
      for (const auto& sc : enumerate_scenarios(car, dc.building))
        sum += sc.probability;
      worst = std::max(worst, std::fabs(sum - 1.0));
    }
  }
  g.error = worst;
  g.passed = g.error < g.tolerance;
  g.detail = "max |sum of scenario probabilities - 1|";
  return g;
}

GateResult gate_policy_reduction(const ValidateOptions& opts) {
  GateResult g;
  g.name = "policy_reduction";
  g.tolerance = 1.0 * opts.tol_scale;  // error counts mismatching decisions
  auto cases = random_decision_suite(opts.policy_states, opts.seed + 4000);
  int mismatches = 0;
  for (const auto& dc : cases) {
    SchedulerParams sp{1.0, 0.02, 0.5};
    DecisionRecord la = assign_esa_dp_la(dc.bank, dc.call, dc.building, sp);
    DecisionRecord dp = assign_esa_dp(dc.bank, dc.call, dc.building);
    if (la.chosen_car != dp.chosen_car) ++mismatches;
  }
  g.error = mismatches;
  g.passed = g.error < g.tolerance;
  g.detail = "alpha = 1 decisions differing from esa-dp";
  return g;
}

}  // namespace

ValidateReport validate_suite(const ValidateOptions& opts) {
  ValidateReport report;
  report.gates.push_back(gate_dual_path(opts.tol_scale));
  report.gates.push_back(gate_dp_vs_mc(opts));
  report.gates.push_back(gate_forecast(opts));
  report.gates.push_back(gate_scenario_probs(opts));
  report.gates.push_back(gate_policy_reduction(opts));
  report.all_passed = true;
  for (const auto& gate : report.gates)
    if (!gate.passed) report.all_passed = false;
  return report;
}

std::string report_to_json(const ValidateReport& report) {
  nlohmann::json j;
  j["all_passed"] = report.all_passed;
  j["gates"] = nlohmann::json::array();
  for (const auto& g : report.gates) {
    j["gates"].push_back({{"name", g.name},
                          {"max_error", g.error},
                          {"tolerance", g.tolerance},
                          {"passed", g.passed},
                          {"detail", g.detail}});
  }
  return j.dump(2) + "\n";
}

}  // namespace egc
