#pragma once

#include <cstdint>
#include <vector>

namespace egc {

/// Sorted future lobby landing times of all cars, seconds from the decision
/// instant. Cars already parked at the lobby appear as leading zeros;
/// `parked_count` is the number of exact-zero entries.
struct LandingPattern {
  std::vector<double> times_s;
  int parked_count = 0;
};

/// Sorts the pattern ascending and recounts the leading zeros. Throws
/// std::domain_error on negative entries.
LandingPattern canonicalize(const LandingPattern& pattern);

/// Poisson probability of exactly x arrivals in dt at the given rate,
/// evaluated in log space.
double poisson_pmf(double rate, double dt, int x);

/// Probability of n or more arrivals in dt, computed as the complement of the
/// exact-count probabilities so that outgoing transitions close to one.
double tail_prob(double rate, double dt, int n);

/// Antiderivative used for the undiscounted transition cost: the cost over an
/// interval of length dt is closed_form_G(dt,...) - closed_form_G(0,...).
/// Integration constant is zero. rate == 0 returns the defined limit -j*t.
double closed_form_G(double t, int j, double rate);

/// Discounted counterpart, valid only for beta > 0; the cost over
/// [t0, t0+dt] is exp(-beta*t0) * (F(dt) - F(0)). The beta-dependent term is
/// (beta*j - beta*rate*t - rate) * exp(-beta*t) / beta^2, which is the form
/// that differentiates back to the cost integrand (see quadrature_cost).
double closed_form_F(double t, int j, double rate, double beta);

/// Expected discounted cumulative wait accrued over [t_start, t_start+dt]
/// when j cars idle at the lobby at interval start, via the closed-form
/// antiderivatives. Switches to a positive term-by-term series (incomplete
/// gamma per term) when rate*dt < j+1, where the printed antiderivatives
/// cancel catastrophically. Includes the exp(-beta*t_start) pre-discount.
double transition_cost(int j, double t_start, double dt, double rate,
                       double beta);

/// Authoritative definition of the transition cost: adaptive quadrature of
/// the integrand exp(-beta*t) * sum_{x>j} P[x arrivals by t-t_start] * (x-j)
/// over [t_start, t_start+dt], to the given relative tolerance. Throws
/// std::runtime_error if the evaluation budget is exhausted.
double quadrature_cost(int j, double t_start, double dt, double rate,
                       double beta, double tol);

struct GridTransition {
  int arrivals = 0;  // exact count; -1 marks the (j+1)+ tail transition
  int next_m = 0;    // departed-car coordinate of the successor in row r+1
  double prob = 0.0;
  double cost = 0.0;  // expected cost conditional on taking this transition
};

struct GridNode {
  int i = 0;  // cars yet to land
  int j = 0;  // cars idle at the lobby
  int m = 0;  // cars departed
  std::vector<GridTransition> out;
  double cost_to_go = 0.0;
};

/// Semi-Markov state grid over (i, j, m) with i + j + m = C. rows[r][m] is
/// the state after r cars have landed; row r holds r+1 states.
struct LobbyGrid {
  int num_cars = 0;
  std::vector<std::vector<GridNode>> rows;

  int state_count() const;
};

LobbyGrid build_grid(const LandingPattern& pattern, double rate, double beta);

/// Expected discounted cumulative waiting time of future lobby passengers
/// over [0, T_C]: backward dynamic program over the grid, terminal row zero.
/// Costs are pre-discounted to absolute time, so the backward pass is a plain
/// probability-weighted sum.
double expected_lobby_wait(const LandingPattern& pattern, double rate,
                           double beta);

struct McEstimate {
  double mean = 0.0;
  double stderr_mean = 0.0;
};

/// Monte-Carlo oracle for expected_lobby_wait: simulates Poisson arrivals
/// against the fixed pattern. An arrival boards one idle car (which departs
/// immediately) or queues; a landing car takes the whole queue or joins the
/// idle pool. Accumulates the discounted queue integral over [0, T_C].
McEstimate mc_lobby_wait(const LandingPattern& pattern, double rate,
                         double beta, int reps, std::uint64_t seed);

/// Converts a discounted cumulative wait into an average per-passenger wait
/// (Little's law with the discount weights as the averaging measure). The
/// beta == 0 branch is the analytic limit V / (rate * t_last).
double normalize_wait(double v, double beta, double rate, double t_last);

}  // namespace egc
