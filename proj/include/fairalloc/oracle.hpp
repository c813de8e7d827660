#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "fairalloc/bc.hpp"
#include "fairalloc/setfn.hpp"

namespace fairalloc::oracle {

struct oracle_config {
  // Grid points per free dimension; 0 picks 200 for up to 3 users, 60 for 4.
  int grid_resolution = 0;
  // Equal-speed march increment between freeze events. Each event is located
  // by exact tight-set algebra (the per-phase bound is constant while the
  // frozen set is unchanged), so this affects neither results nor cost.
  double fill_step = 1e-5;
  std::uint64_t seed = 0x5eed5eed5eedULL;
};

// Max-min fair point by progressive filling, mechanism-independent from the
// contraction recursion: raise all unfrozen rates at one common level; when a
// constraint r(S) <= f(S) becomes tight (checked over every subset), freeze
// every unfrozen member of every tight set at that level; repeat. Each
// freezing level is solved exactly. Requires submodular f, at most 12 users.
std::vector<double> progressive_fill_maxmin(const setfn::subset_function& f,
                                            const oracle_config& config = {});

// Best grid point for sum of log(r_i - d_i) over the dominant face
// r(universe) = f(universe), filtering every subset constraint. At most 4
// users (dense grids). Throws resolution_error when no grid point survives.
std::vector<double> grid_pf_polymatroid(const setfn::subset_function& f,
                                        std::span<const double> d,
                                        const oracle_config& config = {});

// Best boundary point for sum of log(r_i - d_i) over a dense grid of
// nondecreasing split vectors. d is in original user order; at most 4 users.
bc::bc_allocation grid_pf_bc(const bc::bc_channel& ch, std::span<const double> d,
                             const oracle_config& config = {});

// Random points of the dominant face: convex combinations of greedy vertices
// (one per random permutation: coordinate = marginal value along the
// permutation's prefixes), rejection-checked against every constraint.
// Requires submodular f, at most 12 users.
std::vector<std::vector<double>> sample_dominant_face(
    const setfn::subset_function& f, int count, const oracle_config& config = {});

// Uniform entries in [lo, hi]. Deterministic given the engine state.
std::vector<double> random_vector(std::mt19937_64& rng, int k, double lo, double hi);

// An equal-total pair (even, spread) with even majorized by spread: spread is
// random, even is reached from it by repeated pairwise averaging transfers.
std::pair<std::vector<double>, std::vector<double>> random_majorization_pair(
    std::mt19937_64& rng, int k, double lo, double hi);

}  // namespace fairalloc::oracle
