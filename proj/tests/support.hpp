#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <vector>

#include <doctest.h>

#include "fairalloc/bc.hpp"
#include "fairalloc/mac.hpp"
#include "fairalloc/majorization.hpp"
#include "fairalloc/maxmin.hpp"
#include "fairalloc/oracle.hpp"
#include "fairalloc/setfn.hpp"

namespace testsupport {

using namespace fairalloc;

// Three-user table function, submodular and monotone but without the order
// property; its fair points are hand-checkable: max-min (1, 1.5, 1.5),
// symmetric 1 per user, canonical disagreement (1, 0, 1).
inline setfn::subset_function three_user_table() {
  const std::array<double, 8> v = {0, 1, 2, 3, 3, 4, 3, 4};
  return setfn::subset_function(3, [v](mask_t s) { return v[s]; });
}

// Four-user scalar channel with known operating points for every criterion.
inline mac::scalar_mac four_user_channel() { return {{2, 8, 200, 300}, 1.0}; }

// Sum of weights over the mask: a modular function with the given weights.
inline setfn::subset_function modular(std::vector<double> w) {
  const int k = static_cast<int>(w.size());
  return setfn::subset_function(k, [w = std::move(w)](mask_t s) {
    double total = 0.0;
    for (mask_t bits = s; bits; bits &= bits - 1)
      total += w[std::countr_zero(bits)];
    return total;
  });
}

inline bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

inline bool near_all(std::span<const double> a, std::span<const double> b,
                     double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!near(a[i], b[i], tol)) return false;
  return true;
}

inline double sum(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0);
}

// Sum of log(r_i - d_i); -inf when a gain is not strictly positive. An empty
// d means d = 0.
inline double sum_log_gap(std::span<const double> r, std::span<const double> d) {
  double total = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double gain = r[i] - (d.empty() ? 0.0 : d[i]);
    if (!(gain > 0.0)) return -std::numeric_limits<double>::infinity();
    total += std::log(gain);
  }
  return total;
}

inline bool nondecreasing(std::span<const double> v, double slack) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] < v[i - 1] - slack) return false;
  return true;
}

inline bool nonincreasing(std::span<const double> v, double slack) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[i - 1] + slack) return false;
  return true;
}

inline std::vector<double> reorder(std::span<const double> per_user,
                                   const std::vector<int>& order) {
  std::vector<double> out(order.size());
  for (std::size_t p = 0; p < order.size(); ++p) out[p] = per_user[order[p]];
  return out;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = double(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return lo + int(rng() % std::uint64_t(hi - lo + 1));
}

inline mac::scalar_mac random_scalar(std::mt19937_64& rng, int k,
                                     bool sorted = false) {
  std::vector<double> p = oracle::random_vector(rng, k, 0.3, 12.0);
  if (sorted) std::sort(p.begin(), p.end());
  const double noise = uniform(rng, 0.5, 2.0);
  return {std::move(p), noise};
}

inline mac::vector_mac random_vector_channel(std::mt19937_64& rng, int k, int dim) {
  mac::vector_mac ch;
  ch.powers = oracle::random_vector(rng, k, 0.3, 8.0);
  ch.noise = uniform(rng, 0.5, 2.0);
  ch.signatures.resize(k);
  for (int i = 0; i < k; ++i) {
    double norm = 0.0;
    do {
      ch.signatures[i] = oracle::random_vector(rng, dim, -1.0, 1.0);
      norm = std::sqrt(std::inner_product(ch.signatures[i].begin(),
                                          ch.signatures[i].end(),
                                          ch.signatures[i].begin(), 0.0));
    } while (norm < 1e-3);
    for (double& v : ch.signatures[i]) v /= norm;
  }
  return ch;
}

inline bc::bc_channel random_bc(std::mt19937_64& rng, int k) {
  std::vector<double> noise = oracle::random_vector(rng, k, 0.5, 5.0);
  const double pt = uniform(rng, 0.5, 25.0);
  return bc::bc_channel(std::move(noise), pt);
}

}  // namespace testsupport
