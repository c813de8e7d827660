#include "fairalloc/maxmin.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace fairalloc::maxmin {

namespace {

struct level_pick {
  mask_t set = 0;
  double value = 0.0;
};

// Minimize (f(S u frozen) - offset)/|S| over nonempty S disjoint from frozen.
// Near-ties collapse to the largest cardinality, then the lowest mask; the
// comparator is evaluation-order independent up to the tie window.
level_pick pick_exhaustive(const setfn::subset_function& f, mask_t frozen,
                           double offset, double tie_window) {
  const mask_t comp = f.universe() & ~frozen;
  level_pick best;
  int best_card = 0;
  for (mask_t s = comp; s; s = (s - 1) & comp) {
    const int card = popcount(s);
    const double value = (f(s | frozen) - offset) / card;
    if (best.set == 0 || value < best.value - tie_window) {
      best = {s, value};
      best_card = card;
    } else if (value <= best.value + tie_window &&
               (card > best_card || (card == best_card && s < best.set))) {
      best = {s, value};
      best_card = card;
    }
  }
  return best;
}

// Same minimization restricted to prefixes of the unfrozen elements in label
// order. Valid when the function has the order property and singleton-sorted
// labels: some prefix always attains the global minimum, and contraction by a
// prefix preserves both facts, so labels are never re-sorted.
level_pick pick_ordered(const setfn::subset_function& f, mask_t frozen,
                        double offset, double tie_window) {
  level_pick best;
  mask_t prefix = 0;
  int length = 0;
  for (int i = 0; i < f.size(); ++i) {
    if (contains(frozen, i)) continue;
    prefix |= mask_t{1} << i;
    ++length;
    const double value = (f(prefix | frozen) - offset) / length;
    // Strictly better, or a near-tie: the longer prefix wins either way.
    if (best.set == 0 || value <= best.value + tie_window) best = {prefix, value};
  }
  return best;
}

std::string describe_set(mask_t s) {
  std::string out = "{";
  bool first = true;
  while (s) {
    if (!first) out += ",";
    out += std::to_string(std::countr_zero(s));
    first = false;
    s &= s - 1;
  }
  return out + "}";
}

}  // namespace

allocation_result maxmin_allocate(const setfn::subset_function& f,
                                  solve_mode mode, const solve_options& options) {
  const int k = f.size();
  if (k == 0) throw std::invalid_argument("maxmin_allocate: empty ground set");
  if (mode == solve_mode::exhaustive && k > max_exhaustive_users)
    throw exhaustive_limit_error("maxmin_allocate: ground set of " +
                                 std::to_string(k) +
                                 " exceeds the exhaustive limit of " +
                                 std::to_string(max_exhaustive_users));
  if (mode == solve_mode::exhaustive && options.verify && k <= options.verify_limit) {
    const setfn::property_witness w = setfn::is_submodular(f, options.tol);
    if (!w.holds)
      throw std::invalid_argument(
          "maxmin_allocate: function is not submodular; violating pair " +
          describe_set(w.sets[0]) + ", " + describe_set(w.sets[1]));
  }
  if (mode == solve_mode::ordered && options.debug) {
    for (int i = 0; i + 1 < k; ++i)
      if (f(mask_t{1} << i) > f(mask_t{1} << (i + 1)) + options.tol)
        throw std::logic_error(
            "maxmin_allocate: ordered mode requires singleton-sorted labels");
  }

  allocation_result result;
  result.rates.assign(k, 0.0);
  result.objective = criterion::maxmin_pf;
  const mask_t all = f.universe();
  mask_t frozen = 0;
  while (frozen != all) {
    // First level divides raw values; later levels divide the contraction
    // f(S u frozen) - f(frozen).
    const double offset = frozen ? f(frozen) : 0.0;
    const level_pick pick =
        mode == solve_mode::exhaustive
            ? pick_exhaustive(f, frozen, offset, options.tie_window)
            : pick_ordered(f, frozen, offset, options.tie_window);
    if (mode == solve_mode::ordered && options.debug && k <= max_triple_scan_users) {
      const level_pick full = pick_exhaustive(f, frozen, offset, options.tie_window);
      if (std::abs(full.value - pick.value) > options.tol)
        throw std::logic_error(
            "maxmin_allocate: prefix minimum disagrees with exhaustive scan; "
            "ordered-mode preconditions do not hold");
    }
    for (mask_t bits = pick.set; bits; bits &= bits - 1)
      result.rates[std::countr_zero(bits)] = pick.value;
    frozen |= pick.set;
    result.bottleneck_chain.push_back(frozen);
  }
  result.sum_rate = std::accumulate(result.rates.begin(), result.rates.end(), 0.0);
  return result;
}

symmetric_result symmetric_capacity(const setfn::subset_function& f,
                                    solve_mode mode) {
  const int k = f.size();
  if (k == 0) throw std::invalid_argument("symmetric_capacity: empty ground set");
  symmetric_result out;
  if (mode == solve_mode::exhaustive) {
    const setfn::min_ratio_result m = setfn::min_ratio_exhaustive(f);
    out.per_user = m.value;
    out.tight_set = m.set;
  } else {
    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), 0);
    const setfn::prefix_ratio_result m = setfn::min_ratio_ordered(f, order);
    out.per_user = m.value;
    out.tight_set = full_mask(m.length);
  }
  out.total = k * out.per_user;
  return out;
}

std::vector<double> canonical_disagreement(const setfn::subset_function& f) {
  const mask_t all = f.universe();
  const double top = f(all);
  std::vector<double> d(f.size());
  for (int i = 0; i < f.size(); ++i) d[i] = top - f(all & ~(mask_t{1} << i));
  return d;
}

allocation_result nash_bargaining(const setfn::subset_function& f,
                                  std::span<const double> d, solve_mode mode,
                                  const solve_options& options) {
  const int k = f.size();
  if (static_cast<int>(d.size()) != k)
    throw std::invalid_argument("nash_bargaining: disagreement length mismatch");
  const std::vector<double> dis(d.begin(), d.end());
  setfn::subset_function translated(k, [f, dis](mask_t s) {
    double value = f(s);
    for (mask_t bits = s; bits; bits &= bits - 1) value -= dis[std::countr_zero(bits)];
    return value;
  });
  allocation_result result = maxmin_allocate(translated, mode, options);
  for (double gain : result.rates)
    if (gain < -tie_tol)
      throw infeasible_disagreement_error(
          "nash_bargaining: disagreement point is infeasible (a translated "
          "level is negative)");
  for (int i = 0; i < k; ++i) result.rates[i] += dis[i];
  result.sum_rate = std::accumulate(result.rates.begin(), result.rates.end(), 0.0);
  result.objective = criterion::nbs;
  result.disagreement = dis;
  return result;
}

allocation_result nbs_canonical_gensym(const gensym_spec& spec, double tol) {
  if (!spec.phi) throw std::invalid_argument("nbs_canonical_gensym: empty phi");
  const int k = static_cast<int>(spec.loads.size());
  if (k == 0) throw std::invalid_argument("nbs_canonical_gensym: no users");
  for (double q : spec.loads)
    if (!(q >= 0.0))
      throw std::invalid_argument("nbs_canonical_gensym: loads must be nonnegative");

  // Sort users by load, nondecreasing and stable.
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(),
                   [&spec](int a, int b) { return spec.loads[a] < spec.loads[b]; });
  std::vector<double> q(k);
  for (int i = 0; i < k; ++i) q[i] = spec.loads[perm[i]];

  // Prefix load sums and the function's prefix values.
  std::vector<double> pre(k + 1, 0.0);
  for (int i = 0; i < k; ++i) pre[i + 1] = pre[i] + q[i];
  const double total = pre[k];
  std::vector<double> gpre(k + 1);
  for (int i = 0; i <= k; ++i) gpre[i] = spec.phi(pre[i]);

  const double scale = std::max(1.0, std::abs(gpre[k]));
  if (std::abs(spec.phi(0.0)) > tol * scale)
    throw std::invalid_argument("nbs_canonical_gensym: phi(0) must be 0");
  double prev = spec.phi(0.0);
  for (int j = 1; j <= 32; ++j) {
    const double cur = spec.phi(total * j / 32.0);
    if (cur < prev - tol * scale)
      throw std::invalid_argument("nbs_canonical_gensym: phi must be nondecreasing");
    prev = cur;
  }

  const double gtot = gpre[k];
  std::vector<double> dsorted(k);
  std::vector<double> dpre(k + 1, 0.0);
  for (int i = 0; i < k; ++i) {
    dsorted[i] = gtot - spec.phi(total - q[i]);
    dpre[i + 1] = dpre[i] + dsorted[i];
  }

  allocation_result result;
  result.rates.assign(k, 0.0);
  result.objective = criterion::nbs;
  std::vector<double> dis(k);
  for (int i = 0; i < k; ++i) dis[perm[i]] = dsorted[i];
  result.disagreement = dis;

  // Translated max-min over prefixes only: contracting a generalized
  // symmetric function by a prefix leaves it generalized symmetric with the
  // same sorted remainder, and the canonical disagreement restricts
  // unchanged, so every level's minimum is attained by a prefix of what is
  // left. O(k^2) overall.
  int start = 0;
  mask_t frozen = 0;
  while (start < k) {
    int best_len = 0;
    double best_value = 0.0;
    for (int len = 1; start + len <= k; ++len) {
      const double value =
          (gpre[start + len] - gpre[start] - (dpre[start + len] - dpre[start])) / len;
      if (best_len == 0 || value <= best_value + tie_tol) {
        best_len = len;
        best_value = value;
      }
    }
    if (best_value < -tie_tol)
      throw infeasible_disagreement_error(
          "nbs_canonical_gensym: negative translated level");
    for (int i = start; i < start + best_len; ++i) {
      result.rates[perm[i]] = best_value + dsorted[i];
      frozen |= mask_t{1} << perm[i];
    }
    result.bottleneck_chain.push_back(frozen);
    start += best_len;
  }
  result.sum_rate = std::accumulate(result.rates.begin(), result.rates.end(), 0.0);
  return result;
}

double efficiency(const allocation_result& result, const setfn::subset_function& f) {
  const double sum_capacity = f(f.universe());
  if (!(sum_capacity > 0.0))
    throw std::domain_error("efficiency: nonpositive sum capacity");
  return result.sum_rate / sum_capacity;
}

}  // namespace fairalloc::maxmin
