#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "fairalloc/common.hpp"

namespace fairalloc::bc {

// Degraded Gaussian broadcast channel: one transmitter with power budget
// total_power > 0 serving users with noise powers noise[i] > 0. Users are
// relabeled internally by nondecreasing noise (stable); decode_order()[p] is
// the original index of decoding position p (position 0 = least noise).
class bc_channel {
 public:
  bc_channel(std::vector<double> noise, double total_power);

  int users() const noexcept { return static_cast<int>(sorted_.size()); }
  double total_power() const noexcept { return total_power_; }
  const std::vector<double>& sorted_noise() const noexcept { return sorted_; }
  const std::vector<int>& decode_order() const noexcept { return order_; }

 private:
  std::vector<double> sorted_;
  std::vector<int> order_;
  double total_power_ = 0.0;
};

enum class criterion { symmetric, pf, nbs };

// A boundary point of the capacity region. rates/powers/sinr are indexed by
// ORIGINAL user; x holds the cumulative power splits in DECODING order
// (x[p] = fraction of total power spent on positions 0..p, x.back() = 1).
struct bc_allocation {
  std::vector<double> rates;
  std::vector<double> powers;
  std::vector<double> x;
  std::vector<double> sinr;
  criterion objective = criterion::symmetric;
  std::optional<std::vector<double>> disagreement;  // bargaining only
  double gamma = 0.0;   // common SINR (symmetric objective only)
  int iterations = 0;   // bisection steps taken
  double residual = 0.0;  // largest stationarity defect across adjacent pairs
};

// Entry (i, j), 1-based, of the inverse of the lower-triangular power-balance
// matrix with diagonal 1/gamma and -1 below: 0 above the diagonal, gamma on
// it, gamma^2 (1+gamma)^{i-j-1} below.
double g_gamma_inverse_entry(double gamma, int i, int j);

// Column sum of that inverse: theta_j = gamma * (1+gamma)^{k-j} (1-based j).
// Closed form; tests compare it against the explicit entry sums.
double theta_column_sum(double gamma, int j, int k);

// Total power needed to give every user SINR gamma: sum of
// noise[j] * theta_{j+1}(gamma) over decoding positions. Strictly increasing
// and convex in gamma, zero at gamma = 0. noise must be in decoding order.
double phi_total_power(std::span<const double> noise, double gamma);

// Rates at the split vector x (decoding order, nondecreasing within [0,1],
// x.back() = 1 within 1e-12): position p gets
// 0.5 * ln((N_p + x_p P_T)/(N_p + x_{p-1} P_T)). Returned per ORIGINAL user.
std::vector<double> boundary_rates(const bc_channel& ch, std::span<const double> x);

// Common-rate point: bisect gamma until phi matches the power budget within
// 1e-10 relative, then split power by the SINR recurrence
// p_i = gamma (N_i + p_1 + ... + p_{i-1}). Powers are nondecreasing along the
// decoding order.
bc_allocation symmetric_allocate(const bc_channel& ch);

// One user's utility, given through its derivative: deriv must be strictly
// decreasing and positive on the utility's domain, deriv_inverse its inverse.
struct utility {
  std::function<double(double)> deriv;
  std::function<double(double)> deriv_inverse;
};

struct root_options {
  int coarse_points = 256;        // first scan: merged geometric+uniform grid
  double fine_resolution = 1e-4;  // fallback scan spacing before giving up
  double x_tol = 1e-12;           // bisection width on the first split x_1
};

// Maximize sum of utilities over the boundary. Stationarity couples adjacent
// positions as deriv_p(r_p) / (N_p + x_p P_T) =
// deriv_{p+1}(r_{p+1}) / (N_{p+1} + x_p P_T); fixing x_1 propagates all
// remaining rates and splits forward, and the defect of the last coupling is
// a sign function of x_1 with a single zero, found by scan plus bisection.
// utilities are indexed by ORIGINAL user. Throws root_search_error when no
// sign change exists at the fallback resolution.
bc_allocation utility_allocate(const bc_channel& ch,
                               std::span<const utility> utilities,
                               const root_options& options = {});

// Proportional fairness: log utilities. Rates strictly decrease and powers
// strictly increase along the decoding order.
bc_allocation pf_allocate(const bc_channel& ch, const root_options& options = {});

// Nash bargaining with disagreement rates d >= 0 (original user order):
// shifted-log utilities. Throws infeasible_disagreement_error when no
// boundary point dominates d.
bc_allocation nbs_allocate(const bc_channel& ch, std::span<const double> d,
                           const root_options& options = {});

// Sum capacity: everything to the least-noise user, shannon(P_T / min noise).
double bc_sum_capacity(const bc_channel& ch);

// Exploratory comparison of the proportionally fair sum rate across noise
// vectors ordered by majorization. Reporting only: a counterexample is data,
// not a failure.
struct schur_case {
  std::vector<double> noise_even;    // majorized by noise_spread
  std::vector<double> noise_spread;
  double total_power = 1.0;
};
struct schur_record {
  schur_case input;
  double pf_sum_even = 0.0;
  double pf_sum_spread = 0.0;
  bool consistent = false;  // pf_sum_spread >= pf_sum_even - 1e-12
};
struct schur_report {
  std::vector<schur_record> records;
  int consistent_count = 0;
};
schur_report schur_explore_pf(std::span<const schur_case> cases);

}  // namespace fairalloc::bc
