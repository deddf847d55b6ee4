#include "egc/policy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "egc/lobby_model.hpp"

namespace egc {

namespace {

// Lowest-index argmin; flags whether another candidate tied the winner.
DecisionRecord pick(std::vector<double> w_bar, std::vector<double> v_bar,
                    std::vector<double> score) {
  DecisionRecord rec;
  rec.W_bar = std::move(w_bar);
  rec.V_bar = std::move(v_bar);
  rec.score = std::move(score);
  int best = 0;
  for (int i = 1; i < static_cast<int>(rec.score.size()); ++i)
    if (rec.score[i] < rec.score[best]) best = i;
  rec.chosen_car = best;
  for (int i = 0; i < static_cast<int>(rec.score.size()); ++i)
    if (i != best && rec.score[i] == rec.score[best]) rec.tie_broken = true;
  return rec;
}

}  // namespace

void SchedulerParams::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw std::domain_error("SchedulerParams: alpha must be in [0, 1]");
  if (!(beta >= 0.0))
    throw std::domain_error("SchedulerParams: beta must be >= 0");
  if (!(lobby_rate >= 0.0))
    throw std::domain_error("SchedulerParams: lobby_rate must be >= 0");
}

DecisionRecord assign_esa_dp_la(const BankState& bank, const HallCall& call,
                                const BuildingSpec& b,
                                const SchedulerParams& params, long cap,
                                std::uint64_t seed) {
  params.validate();
  CandidateTable table = candidate_table(bank, call, b, cap, seed);
  int c = static_cast<int>(table.W.size());
  std::vector<double> w_bar(c), v_bar(c, 0.0), score(c);
  for (int i = 0; i < c; ++i) w_bar[i] = table.W[i] / table.N;
  if (params.lobby_rate > 0.0) {
    for (int i = 0; i < c; ++i) {
      LandingPattern row = canonicalize({table.T_hat[i], 0});
      double v = expected_lobby_wait(row, params.lobby_rate, params.beta);
      v_bar[i] =
          normalize_wait(v, params.beta, params.lobby_rate, row.times_s.back());
    }
  }
  for (int i = 0; i < c; ++i)
    score[i] = params.alpha * w_bar[i] + (1.0 - params.alpha) * v_bar[i];
  return pick(std::move(w_bar), std::move(v_bar), std::move(score));
}

DecisionRecord assign_esa_dp(const BankState& bank, const HallCall& call,
                             const BuildingSpec& b, long cap,
                             std::uint64_t seed) {
  CandidateTable table = candidate_table(bank, call, b, cap, seed);
  int c = static_cast<int>(table.W.size());
  std::vector<double> w_bar(c);
  for (int i = 0; i < c; ++i) w_bar[i] = table.W[i] / table.N;
  std::vector<double> v_bar(c, 0.0);
  std::vector<double> score = w_bar;
  return pick(std::move(w_bar), std::move(v_bar), std::move(score));
}

DecisionRecord assign_conventional(const BankState& bank, const HallCall& call,
                                   const BuildingSpec& b) {
  call.validate(b);
  int c = static_cast<int>(bank.cars.size());
  if (c < 1) throw std::domain_error("assign_conventional: empty bank");

  // Round-trip completion time of one car's sweep itinerary back to floor 1,
  // with every unboarded call expanded to its pessimistic destination.
  auto completion = [&](const CarState& car) {
    DestinationScenario scenario;
    scenario.destinations.reserve(car.assigned_unboarded.size());
    for (const auto& a : car.assigned_unboarded)
      scenario.destinations.push_back(
          a.direction == Direction::Up ? b.num_floors : 1);
    return simulate_delivery(car, scenario, b, bank.clock_s).lobby_landing_s;
  };

  std::vector<double> base(c);
  for (int i = 0; i < c; ++i) base[i] = completion(bank.cars[i]);

  std::vector<double> score(c);
  for (int i = 0; i < c; ++i) {
    CarState candidate = bank.cars[i];
    candidate.assigned_unboarded.push_back(
        {-1, call.floor, call.direction, call.time_s});
    double total = completion(candidate);
    for (int j = 0; j < c; ++j)
      if (j != i) total += base[j];
    score[i] = total;
  }
  std::vector<double> zeros(c, 0.0);
  return pick(zeros, zeros, std::move(score));
}

RateEstimator::RateEstimator(double decay_s) : decay_s_(decay_s) {
  if (!(decay_s > 0.0))
    throw std::domain_error("RateEstimator: decay constant must be positive");
}

void RateEstimator::update(int origin_floor, double time_s) {
  if (seen_any_ && time_s < last_time_)
    throw std::domain_error("RateEstimator: time regression");
  double dt = seen_any_ ? time_s - last_time_ : 0.0;
  double decay = std::exp(-dt / decay_s_);
  lobby_rate_ *= decay;
  upper_rate_ *= decay;
  if (origin_floor == 1)
    lobby_rate_ += 1.0 / decay_s_;
  else
    upper_rate_ += 1.0 / decay_s_;
  last_time_ = time_s;
  seen_any_ = true;
}

}  // namespace egc
