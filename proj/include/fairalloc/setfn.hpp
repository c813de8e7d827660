#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "fairalloc/common.hpp"

namespace fairalloc::setfn {

// Real-valued function on the subsets of {0, ..., k-1}, evaluated lazily and
// memoized. Copies share the cache; instances are safe to share across
// threads (reads take a shared lock, first evaluations an exclusive one).
class subset_function {
 public:
  using eval_fn = std::function<double(mask_t)>;

  subset_function(int k, eval_fn eval);

  int size() const noexcept;
  mask_t universe() const noexcept;

  // Memoized evaluation. Throws std::invalid_argument if subset has bits
  // outside the universe.
  double operator()(mask_t subset) const;

 private:
  struct state;
  std::shared_ptr<state> state_;
};

// Outcome of a property scan. When holds is false the witness fields pin a
// concrete violation that re-evaluating the function reproduces. Which of
// sets/element is meaningful depends on the check that produced the witness.
struct property_witness {
  bool holds = true;
  std::vector<mask_t> sets;  // violating subsets, in the order the check names them
  int element = -1;          // violating element, when the check is element-indexed
  explicit operator bool() const noexcept { return holds; }
};

// Minimizer of f(S)/|S| over nonempty S together with its ratio.
struct min_ratio_result {
  mask_t set = 0;
  double value = 0.0;
};

// Prefix-restricted variant: the chosen prefix length and its ratio.
struct prefix_ratio_result {
  int length = 0;
  double value = 0.0;
};

// f(S) + f(T) >= f(S u T) + f(S n T) - tol for all S, T. Full pair scan
// (~4^k / 2 evaluations); witness = {S, T}, the first violating pair in
// mask-lexicographic order. Throws exhaustive_limit_error for k > 24.
property_witness is_submodular(const subset_function& f, double tol = default_tol);

// f(S u {i}) >= f(S) - tol for all S and i not in S (2^k * k checks);
// witness = {S}, element = i, first violation with S ascending then i.
property_witness is_monotone(const subset_function& f, double tol = default_tol);

// Order property: for all C and all equal-size A, B disjoint from C,
// f(A) <= f(B) implies f(A u C) <= f(B u C) + tol. Triple scan grouped by C
// and |A| (~3^k * k after sorting); witness = {A, B, C}. Throws
// exhaustive_limit_error for k > 16.
property_witness has_order_property(const subset_function& f, double tol = default_tol);

// Contraction on the complement of s0: the returned function lives on the
// ground set {0, ..., k-|s0|-1}, whose element j stands for the j-th lowest
// original element outside s0, and evaluates to f(S u s0) - f(s0).
subset_function contract(const subset_function& f, mask_t s0);

// Minimize f(S)/|S| over nonempty S. Near-ties (within tie_window) collapse
// to the largest cardinality, then the lowest mask. Throws
// exhaustive_limit_error for k > 24.
min_ratio_result min_ratio_exhaustive(const subset_function& f,
                                      double tie_window = tie_tol);

// Minimize f({order[0], ..., order[m-1]})/m over prefix lengths m = 1..k of
// the given permutation; near-ties collapse to the longest prefix. The caller
// owns the precondition that order sorts singleton values nondecreasing and
// that prefix minimality applies (order property); debug re-verifies both and
// cross-checks against the exhaustive scan when k <= 16.
prefix_ratio_result min_ratio_ordered(const subset_function& f,
                                      std::span<const int> order,
                                      bool debug = false,
                                      double tie_window = tie_tol);

// |r(S) - f(S)| <= tol, with r(S) the coordinate sum of r over S.
bool is_bottleneck(const subset_function& f, std::span<const double> r,
                   mask_t s, double tol = default_tol);

// Max-min optimality certificate for a feasible r: every element must belong
// to some bottleneck on which its coordinate is largest (within tol).
// witness: element = first user with no such bottleneck. Throws
// std::invalid_argument if r violates a constraint by more than tol, and
// exhaustive_limit_error for k > 24.
property_witness maxmin_certificate(const subset_function& f,
                                    std::span<const double> r,
                                    double tol = default_tol);

}  // namespace fairalloc::setfn
