#include "egc/lobby_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "egc/detail/rng.hpp"

namespace egc {

namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

double gamma_p_series(double a, double x) {
  double ap = a;
  double del = 1.0 / a;
  double sum = del;
  for (int n = 0; n < 1000; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-17) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_contfrac(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1e300;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 1000; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < 1e-300) d = 1e-300;
    c = b + an / c;
    if (std::fabs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-17) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x) {
  if (x <= 0.0) return 0.0;
  return (x < a + 1.0) ? gamma_p_series(a, x) : 1.0 - gamma_q_contfrac(a, x);
}

// Expected waiting count at elapsed time s with j idle cars:
//   h(s) = sum_{x>j} pmf(x; rate*s) * (x - j).
// Evaluated either via the finite identity (no infinite sum) when the mean
// dominates j, or via the positive tail series when the identity would
// cancel to noise.
double waiting_count(double rate, double s, int j) {
  double mu = rate * s;
  if (mu <= 0.0) return 0.0;
  if (mu >= j + 1.0) {
    double acc = mu - j;
    double pmf = std::exp(-mu);
    for (int x = 0; x <= j; ++x) {
      acc += pmf * (j - x);
      pmf *= mu / (x + 1);
    }
    return acc;
  }
  double pmf = std::exp((j + 1) * std::log(mu) - mu - std::lgamma(j + 2.0));
  double acc = 0.0;
  for (int x = j + 1;; ++x) {
    double contrib = pmf * (x - j);
    acc += contrib;
    if (contrib < acc * 1e-17 && x > j + 2) break;
    if (x > j + 5000) break;
    pmf *= mu / (x + 1);
  }
  return acc;
}

// Term-by-term analytic integral of the cost series:
//   integral_0^dt exp(-beta*s) * sum_{x>j} pmf(x; rate*s) (x - j) ds
//     = sum_{x>j} (x - j) / a * (rate/a)^x * P(x+1, a*dt),  a = rate + beta.
// All terms are positive, so this stays accurate where the printed
// antiderivatives lose every significant digit to cancellation.
double cost_tail_series(int j, double dt, double rate, double beta) {
  double a = rate + beta;
  double ratio = rate / a;
  double z = a * dt;
  double pw = std::pow(ratio, j + 1);
  double sum = 0.0;
  for (int x = j + 1;; ++x) {
    double term = (x - j) * pw / a * gamma_p(x + 1.0, z);
    sum += term;
    if (term < sum * 1e-17 && x > j + 2) break;
    if (x > j + 5000) break;
    pw *= ratio;
  }
  return sum;
}

struct QuadBudget {
  long evals = 0;
  long limit = 4'000'000;
};

// Absolute-budget adaptive Simpson. A relative per-panel criterion cannot
// terminate here: near s = 0 the integrand behaves like s^(j+1), for which
// Simpson's relative error is scale invariant under subdivision. The budget
// halves with each split, so the total error stays within the caller's
// target.
template <typename F>
double adaptive_simpson(const F& f, double a, double fa, double b, double fb,
                        double fm, double whole, double abs_tol, int depth,
                        QuadBudget& budget) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m);
  double rm = 0.5 * (m + b);
  double flm = f(lm);
  double frm = f(rm);
  budget.evals += 2;
  if (budget.evals > budget.limit)
    throw std::runtime_error("quadrature_cost: evaluation budget exhausted");
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double err = left + right - whole;
  if (depth > 0 && std::fabs(err) <= 15.0 * abs_tol)
    return left + right + err / 15.0;
  if (depth >= 56)
    throw std::runtime_error("quadrature_cost: max recursion depth reached");
  return adaptive_simpson(f, a, fa, m, fm, flm, left, 0.5 * abs_tol, depth + 1,
                          budget) +
         adaptive_simpson(f, m, fm, b, fb, frm, right, 0.5 * abs_tol,
                          depth + 1, budget);
}

void check_cost_args(int j, double t_start, double dt, double rate,
                     double beta) {
  if (j < 0 || t_start < 0.0 || dt < 0.0 || rate < 0.0 || beta < 0.0)
    throw std::domain_error("transition cost: negative argument");
}

}  // namespace

LandingPattern canonicalize(const LandingPattern& pattern) {
  LandingPattern out = pattern;
  for (double t : out.times_s)
    if (t < 0.0) throw std::domain_error("landing pattern: negative time");
  std::sort(out.times_s.begin(), out.times_s.end());
  out.parked_count = 0;
  for (double t : out.times_s) {
    if (t != 0.0) break;
    ++out.parked_count;
  }
  return out;
}

double poisson_pmf(double rate, double dt, int x) {
  if (rate < 0.0 || dt < 0.0 || x < 0)
    throw std::domain_error("poisson_pmf: negative argument");
  double mu = rate * dt;
  if (mu == 0.0) return x == 0 ? 1.0 : 0.0;
  return std::exp(x * std::log(mu) - mu - std::lgamma(x + 1.0));
}

double tail_prob(double rate, double dt, int n) {
  if (n < 0) throw std::domain_error("tail_prob: n must be >= 0");
  if (n == 0) return 1.0;
  if (rate < 0.0 || dt < 0.0)
    throw std::domain_error("tail_prob: negative argument");
  double mu = rate * dt;
  if (mu == 0.0) return 0.0;
  double pmf = std::exp(-mu);
  double cdf = 0.0;
  for (int x = 0; x < n; ++x) {
    cdf += pmf;
    pmf *= mu / (x + 1);
  }
  return std::max(0.0, 1.0 - cdf);
}

double closed_form_G(double t, int j, double rate) {
  if (t < 0.0 || j < 0 || rate < 0.0)
    throw std::domain_error("closed_form_G: negative argument");
  if (rate == 0.0) return -static_cast<double>(j) * t;
  double sum = 0.0;
  for (int x = 0; x <= j; ++x) {
    double inner = 0.0;
    for (int l = 0; l <= x; ++l)
      inner += std::pow(t, x - l) / (factorial(x - l) * std::pow(rate, l + 1));
    sum += std::pow(rate, x) * std::exp(-rate * t) * (x - j) * inner;
  }
  return sum + 0.5 * rate * t * t - static_cast<double>(j) * t;
}

double closed_form_F(double t, int j, double rate, double beta) {
  if (t < 0.0 || j < 0)
    throw std::domain_error("closed_form_F: negative argument");
  if (beta <= 0.0)
    throw std::domain_error("closed_form_F: beta must be > 0 (use closed_form_G)");
  if (rate <= 0.0) throw std::domain_error("closed_form_F: rate must be > 0");
  double a = rate + beta;
  double sum = 0.0;
  for (int x = 0; x <= j; ++x) {
    double inner = 0.0;
    for (int l = 0; l <= x; ++l)
      inner += std::pow(t, x - l) / (factorial(x - l) * std::pow(a, l + 1));
    sum += std::pow(rate, x) * std::exp(-a * t) * (x - j) * inner;
  }
  sum += (beta * j - beta * rate * t - rate) * std::exp(-beta * t) /
         (beta * beta);
  return sum;
}

namespace {

// F(t) - F(0) with the beta^-2 middle term differenced through expm1. The
// naive antiderivative difference cancels to representation noise once
// beta^2 is small against the term magnitude (e.g. beta ~ 1e-8).
double closed_form_F_diff(double t, int j, double rate, double beta) {
  double a = rate + beta;
  double sum = 0.0;
  for (int x = 0; x <= j; ++x) {
    double inner = 0.0;
    for (int l = 0; l <= x; ++l)
      inner += std::pow(t, x - l) / (factorial(x - l) * std::pow(a, l + 1));
    sum += std::pow(rate, x) * (x - j) *
           (std::exp(-a * t) * inner - 1.0 / std::pow(a, x + 1));
  }
  double em1 = std::expm1(-beta * t);
  sum += ((beta * j - rate) * em1 - beta * rate * t * (1.0 + em1)) /
         (beta * beta);
  return sum;
}

}  // namespace

double transition_cost(int j, double t_start, double dt, double rate,
                       double beta) {
  check_cost_args(j, t_start, dt, rate, beta);
  if (rate == 0.0 || dt == 0.0) return 0.0;
  double mu = rate * dt;
  double undiscounted;
  if (mu >= j + 1.0) {
    undiscounted = (beta > 0.0)
                       ? closed_form_F_diff(dt, j, rate, beta)
                       : closed_form_G(dt, j, rate) -
                             closed_form_G(0.0, j, rate);
  } else {
    undiscounted = cost_tail_series(j, dt, rate, beta);
  }
  return std::exp(-beta * t_start) * std::max(0.0, undiscounted);
}

double quadrature_cost(int j, double t_start, double dt, double rate,
                       double beta, double tol) {
  check_cost_args(j, t_start, dt, rate, beta);
  if (tol <= 0.0) throw std::domain_error("quadrature_cost: tol must be > 0");
  if (rate == 0.0 || dt == 0.0) return 0.0;
  auto f = [&](double t) {
    return std::exp(-beta * t) * waiting_count(rate, t - t_start, j);
  };
  double a = t_start;
  double b = t_start + dt;

  // pilot composite estimate sets the absolute error budget for the given
  // relative tolerance (the integrand is nonnegative, so it cannot be badly
  // underestimated at this resolution)
  const int pilot_n = 64;
  double h = (b - a) / pilot_n;
  double pilot = 0.0;
  for (int k = 0; k < pilot_n; ++k) {
    double x0 = a + k * h;
    pilot += h / 6.0 * (f(x0) + 4.0 * f(x0 + 0.5 * h) + f(x0 + h));
  }
  if (pilot <= 0.0) return 0.0;

  double fa = f(a);
  double fb = f(b);
  double fm = f(0.5 * (a + b));
  QuadBudget budget;
  budget.evals = 3 + 3 * pilot_n;
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, fa, b, fb, fm, whole, tol * pilot, 0, budget);
}

int LobbyGrid::state_count() const {
  int n = 0;
  for (const auto& row : rows) n += static_cast<int>(row.size());
  return n;
}

LobbyGrid build_grid(const LandingPattern& pattern, double rate, double beta) {
  if (rate < 0.0 || beta < 0.0)
    throw std::domain_error("build_grid: negative rate or beta");
  int c = static_cast<int>(pattern.times_s.size());
  if (c < 1) throw std::domain_error("build_grid: empty pattern");
  for (size_t k = 1; k < pattern.times_s.size(); ++k)
    if (pattern.times_s[k] < pattern.times_s[k - 1])
      throw std::domain_error("build_grid: pattern not canonical");

  LobbyGrid grid;
  grid.num_cars = c;
  grid.rows.resize(c + 1);
  for (int r = 0; r <= c; ++r) {
    grid.rows[r].resize(r + 1);
    for (int m = 0; m <= r; ++m) {
      GridNode& node = grid.rows[r][m];
      node.i = c - r;
      node.m = m;
      node.j = r - m;
    }
  }

  for (int r = 0; r < c; ++r) {
    double t0 = (r == 0) ? 0.0 : pattern.times_s[r - 1];
    double t1 = pattern.times_s[r];
    double dt = t1 - t0;
    for (int m = 0; m <= r; ++m) {
      GridNode& node = grid.rows[r][m];
      int j = node.j;
      // Exact-count transitions 0..j are free; only the (j+1)+ transition
      // carries cost. The stored cost is conditional on taking it, so the
      // probability-weighted backward sum reproduces the unconditional
      // interval cost (nonzero wait can accrue only on the tail branch).
      for (int x = 0; x <= j; ++x) {
        GridTransition t;
        t.arrivals = x;
        t.next_m = m + x;
        t.prob = poisson_pmf(rate, dt, x);
        t.cost = 0.0;
        node.out.push_back(t);
      }
      GridTransition bold;
      bold.arrivals = -1;
      bold.next_m = m + j + 1;
      bold.prob = tail_prob(rate, dt, j + 1);
      if (bold.prob > 0.0)
        bold.cost = transition_cost(j, t0, dt, rate, beta) / bold.prob;
      node.out.push_back(bold);
    }
  }
  return grid;
}

double expected_lobby_wait(const LandingPattern& pattern, double rate,
                           double beta) {
  if (pattern.times_s.empty()) return 0.0;
  if (rate == 0.0) return 0.0;
  LobbyGrid grid = build_grid(pattern, rate, beta);
  int c = grid.num_cars;
  for (auto& node : grid.rows[c]) node.cost_to_go = 0.0;
  for (int r = c - 1; r >= 0; --r) {
    for (auto& node : grid.rows[r]) {
      double v = 0.0;
      for (const auto& t : node.out)
        v += t.prob * (t.cost + grid.rows[r + 1][t.next_m].cost_to_go);
      node.cost_to_go = v;
    }
  }
  return grid.rows[0][0].cost_to_go;
}

McEstimate mc_lobby_wait(const LandingPattern& pattern, double rate,
                         double beta, int reps, std::uint64_t seed) {
  if (reps < 1) throw std::domain_error("mc_lobby_wait: reps must be >= 1");
  McEstimate out;
  if (pattern.times_s.empty() || rate == 0.0) return out;
  double t_last = pattern.times_s.back();
  if (t_last == 0.0) return out;

  detail::Rng rng(seed);
  auto weight = [&](double a, double b) {
    if (beta == 0.0) return b - a;
    return (std::exp(-beta * a) - std::exp(-beta * b)) / beta;
  };

  double sum = 0.0;
  double sum_sq = 0.0;
  for (int rep = 0; rep < reps; ++rep) {
    int idle = 0;
    int queue = 0;
    double t = 0.0;
    double acc = 0.0;
    double next_arrival = rng.exponential(rate);
    size_t landing = 0;
    while (landing < pattern.times_s.size()) {
      double t_land = pattern.times_s[landing];
      if (next_arrival < t_land) {
        acc += queue * weight(t, next_arrival);
        t = next_arrival;
        if (idle > 0)
          --idle;  // boards a waiting car, which departs immediately
        else
          ++queue;
        next_arrival += rng.exponential(rate);
      } else {
        acc += queue * weight(t, t_land);
        t = t_land;
        if (queue > 0)
          queue = 0;  // landing car takes the entire queue
        else
          ++idle;
        ++landing;
      }
    }
    sum += acc;
    sum_sq += acc * acc;
  }
  out.mean = sum / reps;
  if (reps > 1) {
    double var = (sum_sq - sum * sum / reps) / (reps - 1);
    out.stderr_mean = std::sqrt(std::max(0.0, var) / reps);
  }
  return out;
}

double normalize_wait(double v, double beta, double rate, double t_last) {
  if (v < 0.0 || beta < 0.0 || rate < 0.0 || t_last < 0.0)
    throw std::domain_error("normalize_wait: negative argument");
  if (rate == 0.0 || t_last == 0.0 || v == 0.0) return 0.0;
  if (beta == 0.0) return v / (rate * t_last);
  return v * beta / (rate * (1.0 - std::exp(-beta * t_last)));
}

}  // namespace egc
