#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "fairalloc/setfn.hpp"

namespace fairalloc::maxmin {

enum class criterion { symmetric, maxmin_pf, nbs };

enum class solve_mode { exhaustive, ordered };

struct solve_options {
  double tol = default_tol;        // verification / debug comparison tolerance
  double tie_window = tie_tol;     // near-tie collapse window for argmin picks
  bool verify = true;              // exhaustive mode: check submodularity first
  int verify_limit = 10;           // ... but only when the ground set is this small
  bool debug = false;              // ordered mode: re-check sortedness and prefix minima
};

// A fair operating point on the dominant face r(universe) = f(universe).
struct allocation_result {
  std::vector<double> rates;
  // Frozen sets after each recursion level, strictly nested and cumulative;
  // the last entry is the full ground set. Every entry is tight for rates
  // (and, for bargaining, tight for the untranslated function as well).
  std::vector<mask_t> bottleneck_chain;
  double sum_rate = 0.0;
  criterion objective = criterion::maxmin_pf;
  std::optional<std::vector<double>> disagreement;  // bargaining only
};

struct symmetric_result {
  double per_user = 0.0;
  double total = 0.0;
  mask_t tight_set = 0;  // a set achieving min f(S)/|S|
};

// Lexicographically max-min fair point of {r >= 0 : r(S) <= f(S)}. Repeats:
// pick a minimizer of the contracted ratio, freeze its members at that ratio,
// contract, recurse. Correct for any submodular f. Ordered mode evaluates
// prefixes only (the caller guarantees singleton-sorted labels and the order
// property); exhaustive mode scans all subsets of the unfrozen elements and,
// when verify is on and the ground set small, rejects non-submodular input
// with the violating pair. For submodular f this point also maximizes the
// sum of logs over the region (proportional fairness).
allocation_result maxmin_allocate(const setfn::subset_function& f,
                                  solve_mode mode,
                                  const solve_options& options = {});

// Largest common rate: per_user = min over nonempty S of f(S)/|S|,
// total = k * per_user. Ordered mode scans prefixes of 0..k-1 only.
symmetric_result symmetric_capacity(const setfn::subset_function& f,
                                    solve_mode mode);

// Canonical disagreement point: d_i = f(universe) - f(universe \ {i}), the
// rate user i gets when everyone else is decoded against it.
std::vector<double> canonical_disagreement(const setfn::subset_function& f);

// Nash bargaining solution over the region of f with disagreement d:
// maximizes the sum of log(r_i - d_i). Computed as the max-min point of the
// translated function h(S) = f(S) - d(S) plus d. Throws
// infeasible_disagreement_error when some translated level is negative.
allocation_result nash_bargaining(const setfn::subset_function& f,
                                  std::span<const double> d,
                                  solve_mode mode = solve_mode::exhaustive,
                                  const solve_options& options = {});

// f(S) = phi(sum of loads over S) with phi increasing, concave, phi(0) = 0.
struct gensym_spec {
  std::function<double(double)> phi;
  std::vector<double> loads;  // one nonnegative load per user
};

// Nash bargaining at the canonical disagreement point for a generalized
// symmetric function, in O(k^2) evaluations of phi: after sorting by load,
// every recursion level needs only prefix ratios. Validates phi(0) = 0 and
// sampled monotonicity of phi within tol.
allocation_result nbs_canonical_gensym(const gensym_spec& spec,
                                       double tol = default_tol);

// Sum-rate efficiency sum_rate / f(universe). Throws std::domain_error when
// f(universe) <= 0.
double efficiency(const allocation_result& result,
                  const setfn::subset_function& f);

}  // namespace fairalloc::maxmin
