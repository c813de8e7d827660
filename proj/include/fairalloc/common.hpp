#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace fairalloc {

// Subsets of a ground set {0, ..., k-1} are bit masks: bit i set <=> element i present.
using mask_t = std::uint32_t;

// Hard caps for the exhaustive routines (2^k subset scans, triple scans).
inline constexpr int max_exhaustive_users = 24;
inline constexpr int max_triple_scan_users = 16;

// Default numeric tolerances. Property checks use default_tol unless a caller
// overrides it; near-tie collapsing in argmin selection uses tie_tol.
inline constexpr double default_tol = 1e-9;
inline constexpr double tie_tol = 1e-12;

inline int popcount(mask_t m) noexcept { return std::popcount(m); }

inline mask_t full_mask(int k) noexcept {
  return k >= 32 ? ~mask_t{0} : ((mask_t{1} << k) - 1);
}

inline bool contains(mask_t set, int element) noexcept {
  return (set >> element) & 1u;
}

// Ground set too large for an exhaustive scan. Input-shaped: callers chose an
// instance size the exhaustive routines refuse.
struct exhaustive_limit_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A bargaining disagreement point no feasible allocation dominates.
struct infeasible_disagreement_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A brute-force grid had no feasible point at the requested resolution.
struct resolution_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A 1-D root search found no sign change over its scan of the domain.
struct root_search_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace fairalloc
